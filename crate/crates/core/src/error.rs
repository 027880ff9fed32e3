use thiserror::Error;

pub type Result<T> = std::result::Result<T, GnsError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GnsError {
    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("exponents do not form a Young triple: 1/q + 1/r - 1 - 1/p = {residual:e}")]
    TripleMismatch { residual: f64 },

    #[error("invalid smoothing regime: {0}")]
    InvalidRegime(String),

    #[error("point is not in the feasible set: {0}")]
    Infeasible(String),

    #[error("no feasible point found after {attempts} attempts")]
    EmptyFeasible { attempts: usize },

    #[error("quadrature accuracy target missed: estimated error {estimate:e} > target {target:e}")]
    Accuracy { estimate: f64, target: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
