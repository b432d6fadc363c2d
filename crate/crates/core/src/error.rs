use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("covariance matrix (vqq={vqq}, vpp={vpp}, vqp={vqp}) has non-positive determinant {det}")]
    NonPositiveDeterminant { vqq: f64, vpp: f64, vqp: f64, det: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (best value {best}, error estimate {estimate})"
    )]
    Quadrature {
        best: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("time grid step {step} is too coarse for delay {delay} (must be <= {limit})")]
    GridTooCoarse { step: f64, delay: f64, limit: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}
