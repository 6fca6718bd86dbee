//! Exact operator algebra for dihedral Dunkl operators and the TTW
//! Hamiltonians with odd k ≥ 3.

pub mod coeff;
pub mod cyclo;
pub mod dunkl;
pub mod opalg;
pub mod oracle;
pub mod ttw;
