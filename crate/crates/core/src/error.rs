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

    #[error("log2 radius {0} is not a finite value <= 0")]
    InvalidLogRadius(f64),

    #[error("radius {0} is outside [0, 1]")]
    RadiusOutOfRange(f64),

    /// The radius-0 sentinel was passed where a finite radius is required.
    #[error("radius 0 is not allowed here")]
    OriginNotAllowed,

    #[error("zoom scale must satisfy log2 t < 0 (got {0})")]
    ZeroScale(f64),

    #[error("map is not differentiable at log2 r = {log2_r} (branch endpoint)")]
    NotDifferentiable { log2_r: f64 },

    #[error("finite-difference step crosses a branch endpoint at log2 r = {log2_r}")]
    StepCrossesBreakpoint { log2_r: f64 },

    #[error("target {lambda} is not bracketed by the limit values [{low}, {high}]")]
    NoBracket { lambda: f64, low: f64, high: f64 },

    #[error("bisection did not reach the tolerance after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("limit function was built for K = {limit_k}, map has K = {map_k}")]
    SourceMismatch { map_k: f64, limit_k: f64 },

    #[error("need at least {need} distinct samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
}
