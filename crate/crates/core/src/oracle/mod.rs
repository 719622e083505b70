//! Independent checks: a derivative-free brute-force maximizer and a
//! moment-matrix duality certificate.

mod brute_force;
mod certificate;
mod nelder_mead;

pub use brute_force::{
    brute_force_max, brute_force_with_restarts, OracleResult, DEFAULT_RESTARTS, ORACLE_MAX_DEGREE,
    ORACLE_MIN_BUDGET,
};
pub use certificate::{duality_certificate, CertificateReport, MomentMatrixSet};
