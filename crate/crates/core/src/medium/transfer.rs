use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::EffectiveParams;
use crate::error::{Error, Result};
use crate::gaussian::ComplexTransmission;

/// Spatial profile of the two-photon detuning δ₁₂(z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetuningProfile {
    /// Exact two-photon resonance everywhere.
    #[default]
    None,
    /// `δ₁₂(z) = β (z − L/2)`, β in rad/s per metre.
    Linear { beta: f64 },
}

impl DetuningProfile {
    pub fn detuning(&self, z: f64, length: f64) -> f64 {
        match *self {
            DetuningProfile::None => 0.0,
            DetuningProfile::Linear { beta } => beta * (z - 0.5 * length),
        }
    }

    /// Position where δ₁₂ vanishes, if the profile has a single zero.
    pub fn resonance_point(&self, length: f64) -> Option<f64> {
        match *self {
            DetuningProfile::None => None,
            DetuningProfile::Linear { beta } if beta != 0.0 => Some(0.5 * length),
            DetuningProfile::Linear { .. } => None,
        }
    }
}

/// Bright-mode amplitude transmission over a length `z` of uniform medium:
///
/// ```text
/// τ(ω, z) = exp(−κ z γ₁₂ / (γ₁₂ − i(ω − δ₁₂)))
/// ```
///
/// At δ₁₂ = 0 this is `exp(−κz / (1 − iω/γ₁₂))`. Far from resonance the
/// phase tends to `κ γ₁₂ z / (δ₁₂ − ω)` and `|τ| → 1`.
pub fn transfer_function(
    eff: &EffectiveParams,
    omega: f64,
    z: f64,
    gamma12: f64,
    detuning: f64,
) -> Result<ComplexTransmission> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::InvalidInput(format!(
            "z must be finite and >= 0, got {z}"
        )));
    }
    if !(gamma12 > 0.0) || !gamma12.is_finite() {
        return Err(Error::InvalidInput(format!(
            "gamma12 must be > 0, got {gamma12}"
        )));
    }
    if !omega.is_finite() || !detuning.is_finite() {
        return Err(Error::InvalidInput(
            "omega and detuning must be finite".into(),
        ));
    }
    let denom = Complex64::new(gamma12, -(omega - detuning));
    let exponent = -eff.kappa * z * gamma12 / denom;
    ComplexTransmission::new(exponent.exp())
}
