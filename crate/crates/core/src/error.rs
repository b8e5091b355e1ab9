use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric (asymmetry {0:e})")]
    NonSkewInput(f64),
    #[error("rotation angle too close to pi for the logarithm (trace {0})")]
    AngleAtPi(f64),
    #[error("inverse tangent map is singular at |psi| = {0}")]
    TangentSingular(f64),
    #[error("newton iteration failed after {iterations} iterations (residual {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("time step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },
    #[error("singular linear system")]
    SingularSystem,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
