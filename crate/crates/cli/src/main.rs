use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ttw_cli::{exit, DumpError, Format, Level, RunConfig};
use ttw_core::coeff::CoeffRing;

#[derive(Parser)]
#[command(name = "ttw", version, about = "Exact verification of dihedral Dunkl operators and TTW Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Section2,
    Boson,
    Hamiltonians,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(clap::Args)]
struct Common {
    /// Dihedral parameter, odd and at least 3.
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Cap on the monomial count of any intermediate in the Y construction
    /// (default for k >= 5: 20000000).
    #[arg(long)]
    budget_terms: Option<usize>,
    /// Wall-time cap in seconds for the Y construction (default for k >= 5: 600).
    #[arg(long)]
    budget_seconds: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check suites up to the given level.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "full")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report here; a text summary still goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the sampled numeric crosschecks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the canonical text form of an operator.
    Dump {
        /// Dr, Dphi, A_i, A_i+, B_i, B_i+, H_i, Hext, Xext, Y, H_proj, X_proj or Y_proj.
        id: String,
        #[command(flatten)]
        common: Common,
        /// Substitute rational parameter values, e.g. `a=0,b=0` or `omega=1/2`.
        #[arg(long)]
        numeric: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge structured reports and total them by status.
    Report { paths: Vec<PathBuf> },
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(exit::USAGE as u8)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match cli.command {
        Command::Verify { common, level, format, out, seed } => {
            let k = match ttw_cli::validate_k(common.k) {
                Ok(k) => k,
                Err(e) => return usage(&e),
            };
            let budget = match ttw_cli::resolve_budget(k, common.budget_terms, common.budget_seconds) {
                Ok(b) => b,
                Err(e) => return usage(&e),
            };
            let cfg = RunConfig {
                k,
                level: match level {
                    LevelArg::Section2 => Level::Section2,
                    LevelArg::Boson => Level::Boson,
                    LevelArg::Hamiltonians => Level::Hamiltonians,
                    LevelArg::Full => Level::Full,
                },
                format: match format {
                    FormatArg::Text => Format::Text,
                    FormatArg::Structured => Format::Structured,
                },
                out,
                seed,
                budget,
            };
            let reports = ttw_cli::run_verify(&cfg);
            let rendered = ttw_cli::render(&reports, cfg.format);
            if let Err(e) = write_out(&cfg.out, &rendered) {
                return usage(&e);
            }
            if cfg.out.is_some() {
                println!("{}", ttw_cli::summary_line(&reports));
            }
            ExitCode::from(ttw_cli::exit_code(&reports) as u8)
        }
        Command::Dump { id, common, numeric, out } => {
            let k = match ttw_cli::validate_k(common.k) {
                Ok(k) => k,
                Err(e) => return usage(&e),
            };
            let budget = match ttw_cli::resolve_budget(k, common.budget_terms, common.budget_seconds) {
                Ok(b) => b,
                Err(e) => return usage(&e),
            };
            let ring = CoeffRing::get(k).expect("k validated");
            let mut op = match ttw_cli::build_operator(&ring, &id, &budget) {
                Ok(op) => op,
                Err(e @ DumpError::Budget(_)) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit::BUDGET_EXHAUSTED as u8);
                }
                Err(e) => return usage(&e.to_string()),
            };
            if let Some(n) = &numeric {
                let [a, b, w] = match ttw_cli::parse_numeric(n) {
                    Ok(v) => v,
                    Err(e) => return usage(&e),
                };
                op = match op.specialize(a.as_ref(), b.as_ref(), w.as_ref()) {
                    Ok(op) => op,
                    Err(e) => return usage(&e.to_string()),
                };
            }
            match write_out(&out, &ttw_cli::dump_text(k, &id, &op, numeric.as_deref())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage(&e),
            }
        }
        Command::Report { paths } => match ttw_cli::load_reports(&paths) {
            Ok(reports) => {
                print!("{}", ttw_cli::render_text(&reports));
                ExitCode::from(ttw_cli::exit_code(&reports) as u8)
            }
            Err(e) => usage(&e),
        },
    }
}
