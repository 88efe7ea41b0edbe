use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate domain: need b > a, got [{a}, {b}]")]
    DomainDegenerate { a: f64, b: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degree {requested} exceeds the supported maximum {max}")]
    DegreeCap { requested: usize, max: usize },

    #[error("rank error: {0}")]
    Rank(String),

    #[error("point {tau} lies outside the domain")]
    OutsideDomain { tau: f64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tol:e}")]
    NonConvergence { estimate: f64, tol: f64 },

    #[error("Gram matrix is singular (min eigenvalue {min_eigenvalue:e}): kernels are linearly dependent")]
    SingularGram { min_eigenvalue: f64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("transformation matrix is singular or too ill-conditioned (condition {condition:e})")]
    SingularTransform { condition: f64 },

    #[error("family at level {d} does not extend the previous level")]
    NonNestedFamily { d: usize },

    #[error("sweep aborted at d = {d}: {source}")]
    SweepLevel {
        d: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("consistency error: |Υy - ϑ| = {residual:e} exceeds {tol:e}")]
    Consistency { residual: f64, tol: f64 },

    #[error("signal on an unbounded domain needs a decay certificate")]
    MissingCertificate,
}
