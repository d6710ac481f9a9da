use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};

/// Raw parameters of the three-level Λ medium. Rates in rad/s, lengths in m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawAtomParams {
    pub g31: f64,
    pub g32: f64,
    /// Control-field Rabi frequency Ω_a.
    pub omega_a_rabi: Complex64,
    /// Control-field Rabi frequency Ω_b.
    pub omega_b_rabi: Complex64,
    /// One-photon detuning Δ_a.
    pub delta_a: f64,
    /// One-photon detuning Δ_b.
    pub delta_b: f64,
    pub gamma3: f64,
    pub gamma12: f64,
    /// Linear atomic density n₀ (1/m).
    pub n0: f64,
    pub length: f64,
    pub c: f64,
}

impl RawAtomParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gamma3", self.gamma3),
            ("gamma12", self.gamma12),
            ("length", self.length),
            ("n0", self.n0),
            ("c", self.c),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("delta_a", self.delta_a), ("delta_b", self.delta_b)] {
            if !(v.abs() > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} must be nonzero, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Effective Raman couplings and the derived propagation constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub g_a: f64,
    pub g_b: f64,
    /// `g_b / g_a`.
    pub epsilon: f64,
    /// `√(1 − ε²)`.
    pub alpha0: f64,
    /// Optical-depth rate `α₀² n₀ g_a² / (c γ₁₂)`, per metre.
    pub kappa: f64,
}

impl EffectiveParams {
    /// Builds parameters directly from `ε` and `κ`, with `g_a = 1` and
    /// `g_b = ε` as the coupling scale.
    pub fn from_epsilon_kappa(epsilon: f64, kappa: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidInput(format!(
                "kappa must be > 0, got {kappa}"
            )));
        }
        Ok(Self {
            g_a: 1.0,
            g_b: epsilon,
            epsilon,
            alpha0: (1.0 - epsilon * epsilon).sqrt(),
            kappa,
        })
    }

    /// Same medium with κ scaled; used to probe sensitivity of checks.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::from_epsilon_kappa(self.epsilon, kappa).map(|p| Self {
            g_a: self.g_a,
            g_b: self.g_b,
            ..p
        })
    }
}

/// Effective couplings `g_a = g₃₁Ω_a*/Δ_a`, `g_b = g₃₂Ω_b*/Δ_b` with their
/// phases absorbed into the mode operators, so both are taken as moduli.
pub fn derive_effective(raw: &RawAtomParams) -> Result<EffectiveParams> {
    raw.validate()?;
    let g_a = (raw.g31 * raw.omega_a_rabi.conj() / raw.delta_a).norm();
    let g_b = (raw.g32 * raw.omega_b_rabi.conj() / raw.delta_b).norm();
    if !(g_b < g_a) {
        return Err(Error::UnsupportedRegime(format!(
            "requires |g_b| < |g_a|, got g_a = {g_a:e}, g_b = {g_b:e}"
        )));
    }
    let epsilon = g_b / g_a;
    let alpha0_sq = 1.0 - epsilon * epsilon;
    let kappa = alpha0_sq * raw.n0 * g_a * g_a / (raw.c * raw.gamma12);
    Ok(EffectiveParams {
        g_a,
        g_b,
        epsilon,
        alpha0: alpha0_sq.sqrt(),
        kappa,
    })
}

/// Dimensionless ratios that must be small for level |3⟩ to be
/// adiabatically eliminated and for the ground population to stay in |1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticReport {
    pub gamma3_over_delta_a: f64,
    pub gamma3_over_delta_b: f64,
    pub rabi_a_over_delta_a: f64,
    pub rabi_b_over_delta_b: f64,
    /// `|Ω_b|² γ₃ t / Δ_b²`.
    pub pumping: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl AdiabaticReport {
    pub fn ratios(&self) -> [f64; 5] {
        [
            self.gamma3_over_delta_a,
            self.gamma3_over_delta_b,
            self.rabi_a_over_delta_a,
            self.rabi_b_over_delta_b,
            self.pumping,
        ]
    }
}

pub const DEFAULT_ADIABATIC_THRESHOLD: f64 = 0.1;

pub fn validate_adiabatic(raw: &RawAtomParams, t_interaction: f64) -> AdiabaticReport {
    validate_adiabatic_with(raw, t_interaction, DEFAULT_ADIABATIC_THRESHOLD)
}

/// Ratios pass when each is at most `threshold`.
pub fn validate_adiabatic_with(
    raw: &RawAtomParams,
    t_interaction: f64,
    threshold: f64,
) -> AdiabaticReport {
    let (da, db) = (raw.delta_a.abs(), raw.delta_b.abs());
    let rabi_b = raw.omega_b_rabi.norm();
    let mut report = AdiabaticReport {
        gamma3_over_delta_a: raw.gamma3 / da,
        gamma3_over_delta_b: raw.gamma3 / db,
        rabi_a_over_delta_a: raw.omega_a_rabi.norm() / da,
        rabi_b_over_delta_b: rabi_b / db,
        pumping: rabi_b * rabi_b * raw.gamma3 * t_interaction / (db * db),
        threshold,
        pass: false,
    };
    report.pass = report.ratios().iter().all(|r| *r <= threshold);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn raw() -> RawAtomParams {
        RawAtomParams {
            g31: 1e6,
            g32: 1e6,
            omega_a_rabi: Complex64::new(2e8, 0.0),
            omega_b_rabi: Complex64::new(1e8, 0.0),
            delta_a: 1e9,
            delta_b: 1e9,
            gamma3: 1e7,
            gamma12: 1e3,
            n0: 1e10,
            length: 0.1,
            c: 3e8,
        }
    }

    #[test]
    fn couplings_from_raw() {
        let eff = derive_effective(&raw()).unwrap();
        assert_abs_diff_eq!(eff.g_a, 2e5, epsilon = 1e-9);
        assert_abs_diff_eq!(eff.g_b, 1e5, epsilon = 1e-9);
        assert_abs_diff_eq!(eff.epsilon, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            eff.alpha0.powi(2) + eff.epsilon.powi(2),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn control_phase_is_absorbed() {
        let mut p = raw();
        p.omega_a_rabi = Complex64::from_polar(2e8, 1.1);
        p.omega_b_rabi = Complex64::from_polar(1e8, -0.4);
        let eff = derive_effective(&p).unwrap();
        assert_abs_diff_eq!(eff.epsilon, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn absent_idler_control_gives_zero_epsilon() {
        let mut p = raw();
        p.omega_b_rabi = Complex64::new(0.0, 0.0);
        assert_eq!(derive_effective(&p).unwrap().epsilon, 0.0);
    }

    #[test]
    fn kappa_definition() {
        // n₀ g_a² / (c γ₁₂) = 1 with ε = 0.5 gives κ = 0.75
        let mut p = raw();
        p.g31 = 1.0;
        p.g32 = 1.0;
        p.omega_a_rabi = Complex64::new(1.0, 0.0);
        p.omega_b_rabi = Complex64::new(0.5, 0.0);
        p.delta_a = 1.0;
        p.delta_b = 1.0;
        p.n0 = 1.0;
        p.c = 1.0;
        p.gamma12 = 1.0;
        let eff = derive_effective(&p).unwrap();
        assert_abs_diff_eq!(eff.kappa, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn strong_idler_is_unsupported() {
        let mut p = raw();
        p.omega_b_rabi = Complex64::new(2e8, 0.0);
        assert!(matches!(
            derive_effective(&p),
            Err(Error::UnsupportedRegime(_))
        ));
        p.length = 0.0;
        assert!(matches!(derive_effective(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn adiabatic_ratios() {
        let mut p = raw();
        p.omega_a_rabi = Complex64::new(1e8, 0.0);
        let rep = validate_adiabatic(&p, 1e-6);
        let expected = [0.01, 0.01, 0.1, 0.1, 0.1];
        for (got, want) in rep.ratios().iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert!(rep.pass);
    }

    #[test]
    fn adiabatic_edge_cases() {
        let mut p = raw();
        p.omega_b_rabi = Complex64::new(0.0, 0.0);
        let rep = validate_adiabatic(&p, 1.0);
        assert_eq!(rep.pumping, 0.0);

        let mut q = raw();
        q.delta_b = q.gamma3;
        let rep = validate_adiabatic(&q, 1e-6);
        assert_eq!(rep.gamma3_over_delta_b, 1.0);
        assert!(!rep.pass);
    }
}
