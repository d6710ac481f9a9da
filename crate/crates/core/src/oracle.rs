//! Closed-form results for the Raman-coupled two-mode system.
//!
//! Nothing here touches [`crate::gaussian`] or [`crate::medium`]; these
//! functions are the reference the engine is measured against.
//!
//! Sign conventions: the squeezing parameter is taken non-negative,
//! `r = ½ ln((1+ε)/(1−ε))`, so that `ε = tanh r`. Variances use the
//! vacuum normalisation `Var(X) = 1/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};

/// `Var(X_a + X_b)` and `Var(X_a − X_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariancePair {
    pub sum_var: f64,
    pub diff_var: f64,
}

impl VariancePair {
    pub fn product(&self) -> f64 {
        self.sum_var * self.diff_var
    }
}

/// Variances of the dark two-mode squeezed vacuum: `(1±ε)/(1∓ε)`.
pub fn od_variances(epsilon: f64) -> Result<VariancePair> {
    check_epsilon(epsilon)?;
    Ok(VariancePair {
        sum_var: (1.0 + epsilon) / (1.0 - epsilon),
        diff_var: (1.0 - epsilon) / (1.0 + epsilon),
    })
}

/// Variances after one optically deep sample from vacuum input: `(1±ε)⁻²`.
pub fn post_sample_variances(epsilon: f64) -> Result<VariancePair> {
    check_epsilon(epsilon)?;
    Ok(VariancePair {
        sum_var: (1.0 + epsilon).powi(-2),
        diff_var: (1.0 - epsilon).powi(-2),
    })
}

/// The same pair written through the squeezing parameter:
/// `½ e^{∓2r} (1 + cosh 2r)`, upper signs with the sum.
pub fn post_sample_variances_from_squeezing(r: f64) -> VariancePair {
    let base = 0.5 * (1.0 + (2.0 * r).cosh());
    VariancePair {
        sum_var: base * (-2.0 * r).exp(),
        diff_var: base * (2.0 * r).exp(),
    }
}

/// Mean occupation of the thermal dark mode, `ε²/(1−ε²)`.
pub fn thermal_dark_mean(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(epsilon * epsilon / (1.0 - epsilon * epsilon))
}

/// Mean photon number of either mode of the dark TMSV, `ε²/α₀²`.
pub fn tmsv_mean_photons(epsilon: f64) -> Result<f64> {
    thermal_dark_mean(epsilon)
}

/// `log₂((1+ε)/(1−ε))`.
pub fn tmsv_log_negativity(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(((1.0 + epsilon) / (1.0 - epsilon)).log2())
}

/// Quadrature variance of the bright mode from physical-vacuum input:
/// `½ + ε²/(1−ε²) · exp(−2κZ / (1 + (ω/γ₁₂)²))`.
pub fn bright_variance(epsilon: f64, kappa_z: f64, omega_over_gamma: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(kappa_z >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "optical depth must be >= 0, got {kappa_z}"
        )));
    }
    let decay = (-2.0 * kappa_z / (1.0 + omega_over_gamma * omega_over_gamma)).exp();
    Ok(0.5 + epsilon * epsilon / (1.0 - epsilon * epsilon) * decay)
}

/// Resonant bright-mode transmission `exp(−κZ / (1 − iω/γ₁₂))`.
pub fn resonant_transmission(kappa_z: f64, omega_over_gamma: f64) -> Complex64 {
    (-kappa_z / Complex64::new(1.0, -omega_over_gamma)).exp()
}

/// `r = ½ ln((1+ε)/(1−ε))`.
pub fn squeezing_parameter(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(0.5 * ((1.0 + epsilon) / (1.0 - epsilon)).ln())
}

/// Inverse of [`squeezing_parameter`]: `ε = tanh r`.
pub fn epsilon_from_squeezing(r: f64) -> f64 {
    r.tanh()
}

/// Large-detuning phase of one slice, `κ γ₁₂ dZ / (δ₁₂ − ω)`.
pub fn gem_phase(kappa: f64, gamma12: f64, dz: f64, delta: f64, omega: f64) -> Result<f64> {
    let detuning = delta - omega;
    if detuning == 0.0 {
        return Err(Error::Singular(
            "gem phase diverges at two-photon resonance (delta == omega)".into(),
        ));
    }
    Ok(kappa * gamma12 * dz / detuning)
}

/// Signal photon number between the samples: `ε²/(1−ε²)²`.
///
/// With the bright mode in vacuum and the dark mode thermal,
/// `⟨a†a⟩ = α₀⁻² ε² (n̄_D + 1)`.
pub fn signal_photons_between_samples(epsilon: f64) -> Result<f64> {
    let n_dark = thermal_dark_mean(epsilon)?;
    Ok(epsilon * epsilon * (n_dark + 1.0) / (1.0 - epsilon * epsilon))
}

/// Idler photon number between the samples: `α₀⁻² (n̄_D + ε²)`.
pub fn idler_photons_between_samples(epsilon: f64) -> Result<f64> {
    let n_dark = thermal_dark_mean(epsilon)?;
    Ok((n_dark + epsilon * epsilon) / (1.0 - epsilon * epsilon))
}

/// Upper bound on the signal photon number when only the bright-mode
/// phase of the vacuum-derived correlations is changed:
/// `α₀⁻² (sinh²r + ε² cosh²r + 2ε sinh r cosh r)`.
pub fn gem_peak_bound(epsilon: f64) -> Result<f64> {
    let r = squeezing_parameter(epsilon)?;
    let (s, c) = (r.sinh(), r.cosh());
    Ok((s * s + epsilon * epsilon * c * c + 2.0 * epsilon * s * c) / (1.0 - epsilon * epsilon))
}
