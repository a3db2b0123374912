use thiserror::Error;

/// Failures reported by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavenumber must be positive (got {0})")]
    InvalidWavenumber(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("{what} did not converge (residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },
    #[error("secular determinant has two identical order-0 columns; roots must be re-clustered")]
    Degenerate,
    #[error(
        "cosh(λ/2) vanishes for a characteristic root ({0:e}); use the unfactored determinant"
    )]
    NearPole(f64),
    #[error("no sign change of the secular function in [{lo}, {hi}]")]
    NoRootInRange { lo: f64, hi: f64 },
    #[error("elimination block is numerically singular (condition {0:e})")]
    SingularReduction(f64),
    #[error("no physical eigenvalue survived filtering")]
    NoPhysicalEigenvalue,
    #[error("Ra(a) has {minima} local minima on [{lo}, {hi}]; split the bracket")]
    NotUnimodal { lo: f64, hi: f64, minima: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
