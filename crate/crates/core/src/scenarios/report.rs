use serde::{Deserialize, Serialize};

use super::config::{ScenarioConfig, IDLER, SIGNAL};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadTerm, PHYSICALITY_TOL, VACUUM_VARIANCE};
use crate::medium::{BRIGHT_LABEL, DARK_LABEL};

/// Spin-wave observables, present only for the memory-swap scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRow {
    pub n_s1: f64,
    pub n_s2: f64,
    pub log_neg_s1_s2: f64,
    pub log_neg_light_atoms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Sample index (1-based) or swap stage (0-based) for memory_swap.
    pub stage: u32,
    pub z_over_length: f64,
    pub kappa_z: f64,
    pub omega_over_gamma: f64,
    pub var_xa_plus_xb: f64,
    pub var_xa_minus_xb: f64,
    pub var_pa_minus_pb: f64,
    pub var_pa_plus_pb: f64,
    pub var_x_bright: f64,
    pub var_x_dark: f64,
    /// `|⟨B⟩|` and `|⟨D⟩|`.
    pub amp_bright: f64,
    pub amp_dark: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub purity: f64,
    pub log_neg_ab: f64,
    pub log_neg_bd: f64,
    pub atoms: Option<AtomRow>,
}

const LIGHT_COLUMNS: [&str; 17] = [
    "stage",
    "z_over_length",
    "kappa_z",
    "omega_over_gamma",
    "var_xa_plus_xb",
    "var_xa_minus_xb",
    "var_pa_minus_pb",
    "var_pa_plus_pb",
    "var_x_bright",
    "var_x_dark",
    "amp_bright",
    "amp_dark",
    "n_a",
    "n_b",
    "purity",
    "log_neg_ab",
    "log_neg_bd",
];

const ATOM_COLUMNS: [&str; 4] = ["n_s1", "n_s2", "log_neg_s1_s2", "log_neg_light_atoms"];

impl ReportRow {
    /// Observables of a signal/idler state and its Bogoliubov image.
    ///
    /// Fails with [`Error::PhysicalityViolation`] if the light state breaks
    /// the uncertainty bound.
    pub fn observe(
        stage: u32,
        z_over_length: f64,
        kappa_z: f64,
        omega_over_gamma: f64,
        physical: &GaussianState,
        bogoliubov: &GaussianState,
    ) -> Result<Self> {
        let nu_min = physical.min_symplectic_eigenvalue()?;
        if nu_min < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::PhysicalityViolation(format!(
                "symplectic eigenvalue {nu_min} < 1/2 at stage {stage}, z/L = {z_over_length}, \
                 omega/gamma = {omega_over_gamma}"
            )));
        }
        let var = |terms: &[QuadTerm]| physical.quad_combo_variance(terms);
        Ok(Self {
            stage,
            z_over_length,
            kappa_z,
            omega_over_gamma,
            var_xa_plus_xb: var(&[QuadTerm::x(SIGNAL, 1.0), QuadTerm::x(IDLER, 1.0)])?,
            var_xa_minus_xb: var(&[QuadTerm::x(SIGNAL, 1.0), QuadTerm::x(IDLER, -1.0)])?,
            var_pa_minus_pb: var(&[QuadTerm::p(SIGNAL, 1.0), QuadTerm::p(IDLER, -1.0)])?,
            var_pa_plus_pb: var(&[QuadTerm::p(SIGNAL, 1.0), QuadTerm::p(IDLER, 1.0)])?,
            var_x_bright: bogoliubov.quad_combo_variance(&[QuadTerm::x(BRIGHT_LABEL, 1.0)])?,
            var_x_dark: bogoliubov.quad_combo_variance(&[QuadTerm::x(DARK_LABEL, 1.0)])?,
            amp_bright: bogoliubov.amplitude(BRIGHT_LABEL)?.norm(),
            amp_dark: bogoliubov.amplitude(DARK_LABEL)?.norm(),
            n_a: physical.mean_photon_number(SIGNAL)?,
            n_b: physical.mean_photon_number(IDLER)?,
            purity: physical.purity()?,
            log_neg_ab: physical.log_negativity(&[SIGNAL], &[IDLER])?,
            log_neg_bd: bogoliubov.log_negativity(&[BRIGHT_LABEL], &[DARK_LABEL])?,
            atoms: None,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![
            f64::from(self.stage),
            self.z_over_length,
            self.kappa_z,
            self.omega_over_gamma,
            self.var_xa_plus_xb,
            self.var_xa_minus_xb,
            self.var_pa_minus_pb,
            self.var_pa_plus_pb,
            self.var_x_bright,
            self.var_x_dark,
            self.amp_bright,
            self.amp_dark,
            self.n_a,
            self.n_b,
            self.purity,
            self.log_neg_ab,
            self.log_neg_bd,
        ];
        if let Some(a) = &self.atoms {
            v.extend([a.n_s1, a.n_s2, a.log_neg_s1_s2, a.log_neg_light_atoms]);
        }
        v
    }
}

/// One comparison of an engine observable against its closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    /// Distance to the expected value, or the amount by which a bound is
    /// exceeded (zero when it holds).
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn close(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        let delta = (value - expected).abs();
        Self {
            name: name.into(),
            value,
            expected,
            delta,
            tolerance,
            pass: delta < tolerance,
        }
    }

    /// Passes when `value <= limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        let delta = (value - limit).max(0.0);
        Self {
            name: name.into(),
            value,
            expected: limit,
            delta,
            tolerance: 0.0,
            pass: value <= limit,
        }
    }

    /// Passes when `value >= limit`.
    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        let delta = (limit - value).max(0.0);
        Self {
            name: name.into(),
            value,
            expected: limit,
            delta,
            tolerance: 0.0,
            pass: value >= limit,
        }
    }
}

/// Trajectories of one scenario run plus its oracle comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub rows: Vec<ReportRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn columns(&self) -> Vec<&'static str> {
        let mut cols = LIGHT_COLUMNS.to_vec();
        if self.rows.first().is_some_and(|r| r.atoms.is_some()) {
            cols.extend(ATOM_COLUMNS);
        }
        cols
    }

    /// Last row for each probe frequency, in ω-list order.
    pub fn terminal_rows(&self) -> Vec<&ReportRow> {
        let mut out: Vec<&ReportRow> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let next_is_new = self
                .rows
                .get(i + 1)
                .is_none_or(|n| n.omega_over_gamma.to_bits() != row.omega_over_gamma.to_bits());
            if next_is_new {
                out.push(row);
            }
        }
        out
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_oracle_delta(&self) -> f64 {
        self.checks.iter().map(|c| c.delta).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_constructors() {
        assert!(Check::close("x", 1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(!Check::close("x", 1.0, 1.1, 1e-9).pass);
        let c = Check::at_most("slope", 3.0, 2.0);
        assert!(!c.pass);
        assert_eq!(c.delta, 1.0);
        assert!(Check::at_least("peak", 0.9, 0.5).pass);
    }

    #[test]
    fn observe_vacuum() {
        let v = GaussianState::vacuum(&[SIGNAL, IDLER]).unwrap();
        let bd = v.relabel(&[BRIGHT_LABEL, DARK_LABEL]).unwrap();
        let row = ReportRow::observe(1, 0.0, 0.0, 0.0, &v, &bd).unwrap();
        assert_eq!(row.values().len(), LIGHT_COLUMNS.len());
        assert!((row.var_xa_plus_xb - 1.0).abs() < 1e-15);
        assert!((row.purity - 1.0).abs() < 1e-14);
        assert_eq!(row.log_neg_ab, 0.0);
    }
}
