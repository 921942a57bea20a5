use crate::entropy::ThresholdInfo;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("entropy of order {alpha} diverges (threshold {threshold})", threshold = info.alpha_threshold)]
    DivergentEntropy { alpha: f64, info: ThresholdInfo },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {abs_error:e})")]
    NonConvergent {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at x = {at}")]
    PropagatedInvalid { at: f64 },

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("every Tsallis bracket is nonpositive, the distribution has empty support")]
    EmptySupport,
}

pub type Result<T> = std::result::Result<T, Error>;
