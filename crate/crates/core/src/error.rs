use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus N={0}: expected 2 <= N")]
    InvalidModulus(u32),
    #[error("singular argument: 1 - x*omega^{0} vanishes")]
    SingularArgument(u32),
    #[error("point lies outside the branch region")]
    RegionViolation,
    #[error("singular point: z - x*omega^{0} vanishes")]
    SingularPoint(u32),
    #[error("argument undefined: zero coordinate")]
    UndefinedArgument,
    #[error("point is not on the Fermat curve (residual {0:e})")]
    OffCurve(f64),
    #[error("degenerate trihedron: {0}")]
    DegenerateTrihedron(String),
    #[error("degenerate angles: {0}")]
    DegenerateAngles(String),
    #[error("no nondegenerate sample after {0} attempts")]
    SamplingFailure(usize),
    #[error("contraction plan error: {0}")]
    Plan(String),
    #[error("tensor format error: {0}")]
    Format(String),
}
