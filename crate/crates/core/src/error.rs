use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("|q| = {qabs:.4} exceeds the evaluation cap {cap}")]
    PrecisionInfeasible { qabs: f64, cap: f64 },

    #[error("series with |q| = {0} >= 1 diverges")]
    Divergent(f64),

    #[error("series: {0}")]
    Series(#[from] crate::series::SeriesError),

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual})")]
    NoConvergence { iterations: usize, residual: String },

    #[error("no sign change of Im f on the bracket at x = {0}")]
    Curve(String),

    #[error("invalid cusp {a}/{c}: {reason}")]
    InvalidCusp {
        a: i64,
        c: i64,
        reason: &'static str,
    },

    #[error("cannot parse number: {0}")]
    Parse(String),
}
