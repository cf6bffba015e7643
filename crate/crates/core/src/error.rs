use thiserror::Error;

/// Errors raised by the billiard library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilliardError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("could not isolate zero #{index} of J_{order} (found {found} sign changes below x = {limit})")]
    ZeroBracket { order: u32, index: u32, found: u32, limit: f64 },

    #[error("boundary is not star-shaped at theta = {theta}, t = {t} (radius denominator {denominator})")]
    NotStarShaped { theta: f64, t: f64, denominator: f64 },

    #[error("dilation factor lambda({t}) = {lambda} is not positive")]
    CollapsedDomain { t: f64, lambda: f64 },

    #[error("closed-form pantographic solution requires uniform wall motion")]
    NonUniformMotion,

    #[error("grid too small: {what} = {got}, need at least {min}")]
    GridTooSmall { what: &'static str, got: usize, min: usize },

    #[error("linear solve did not converge at t = {t} (residual {residual:e} after {iterations} iterations)")]
    SolveFailed { t: f64, residual: f64, iterations: usize },

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("mode ({m}, {n}) not present in the truncation set")]
    UnknownMode { m: i32, n: u32 },
}

pub type Result<T> = std::result::Result<T, BilliardError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> BilliardError {
    BilliardError::InvalidParameter { name, reason: reason.into() }
}
