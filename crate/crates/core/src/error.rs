use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at s = {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("curvature sign invariant violated: epsilon must be -1, 0 or 1, got {0}")]
    InvalidEpsilon(i64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("fractional power {p} of negative base {base}")]
    NegativeBase { base: f64, p: f64 },

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("tau = {tau} outside the family's domain ({lo}, {hi})")]
    OutOfDomain { tau: f64, lo: f64, hi: f64 },

    #[error("speed vanishes inside the traversed interval near tau = {0}; the flow stalls")]
    Stall(f64),

    #[error("step size underflow at t = {t}, tau = {tau} (h = {h:e})")]
    StepUnderflow { t: f64, tau: f64, h: f64 },

    #[error("non-finite speed at tau = {0}")]
    NonFinite(f64),

    #[error("no finite horizon: flow does not collapse and t_max is unbounded")]
    UnboundedHorizon,

    #[error("t = {t} outside trajectory range [0, {end}]")]
    TimeOutOfRange { t: f64, end: f64 },

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
}
