//! Maximizing the sum of squared leading coefficients of a polynomial family
//! under a sup-norm bound on the sum of squares, via canonical moments.

pub mod canonical;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod record;
pub mod solver;
pub mod supnorm;

pub use canonical::{CanonicalMomentSeq, DiscreteMeasure, ZetaSeq};
pub use error::{Error, Result};
pub use oracle::{brute_force_max, duality_certificate, CertificateReport, OracleResult};
pub use poly::Polynomial;
pub use record::{OracleRecord, SolutionRecord};
pub use solver::{
    solve, verify_solution, ExtremalSolution, Kind, ProblemSpec, Tolerances, VerificationReport,
};
pub use supnorm::{sup_sum_squares, SupNormReport};
