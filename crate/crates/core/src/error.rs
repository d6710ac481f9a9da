use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown mode, duplicate label, bad shape).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter outside the physical domain, e.g. ε ≥ 1 or |τ| > 1.
    #[error("unphysical parameter: {0}")]
    Unphysical(String),

    /// Parameters outside the regime the model supports (|g_b| ≥ |g_a|).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// Singular or non-positive covariance where a decomposition needs one.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Closed form evaluated at its pole.
    #[error("singular input: {0}")]
    Singular(String),

    /// A state produced mid-run failed the uncertainty bound.
    #[error("physicality violation: {0}")]
    PhysicalityViolation(String),
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Unphysical(format!(
            "epsilon must be in [0,1), got {epsilon}"
        )));
    }
    Ok(())
}
