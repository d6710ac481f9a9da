use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::EffectiveParams;
use super::transfer::{transfer_function, DetuningProfile};
use crate::error::{Error, Result};
use crate::gaussian::{ComplexTransmission, GaussianState, SymplecticTransform};

/// Labels used for the Bogoliubov pair inside [`Snapshot::bogoliubov`].
pub const BRIGHT_LABEL: &str = "B";
pub const DARK_LABEL: &str = "D";

/// Which Bogoliubov mode couples to the sample's ground-state coherence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `g_b/g_a = ε`: mode B is absorbed, D is dark.
    #[default]
    Direct,
    /// Sample with the coupling ratio inverted: D is absorbed, B is dark.
    Inverted,
}

impl Coupling {
    pub fn absorbed_mode(self) -> &'static str {
        match self {
            Coupling::Direct => BRIGHT_LABEL,
            Coupling::Inverted => DARK_LABEL,
        }
    }
}

/// z-slicing of one sample and the probe sidebands tracked through it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationGrid {
    pub length: f64,
    pub z_steps: usize,
    pub omega_list: Vec<f64>,
}

impl PropagationGrid {
    pub fn new(length: f64, z_steps: usize, omega_list: Vec<f64>) -> Result<Self> {
        let grid = Self {
            length,
            z_steps,
            omega_list,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length >= 0.0) || !self.length.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sample length must be finite and >= 0, got {}",
                self.length
            )));
        }
        if self.z_steps == 0 {
            return Err(Error::InvalidInput("z_steps must be >= 1".into()));
        }
        if self.omega_list.is_empty() {
            return Err(Error::InvalidInput("omega list is empty".into()));
        }
        if let Some(w) = self.omega_list.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite probe frequency {w}"
            )));
        }
        Ok(())
    }

    pub fn slice_width(&self) -> f64 {
        self.length / self.z_steps as f64
    }

    pub fn z_at(&self, step: usize) -> f64 {
        self.length * step as f64 / self.z_steps as f64
    }
}

/// State of the two-mode field at one position and probe frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub z: f64,
    pub omega: f64,
    /// Signal/idler state, under the input's own labels.
    pub physical: GaussianState,
    /// Bright/dark state, labelled [`BRIGHT_LABEL`] and [`DARK_LABEL`].
    pub bogoliubov: GaussianState,
    /// Accumulated amplitude transmission of the absorbed mode.
    pub transmission: ComplexTransmission,
}

/// Marches a signal/idler state through one sample for every probe
/// frequency in the grid. Output is ω-major: all z for the first ω, then
/// the next ω. Each ω is independent, so the sweep runs in parallel and the
/// result is identical to a serial evaluation.
pub fn propagate(
    state: &GaussianState,
    eff: &EffectiveParams,
    gamma12: f64,
    grid: &PropagationGrid,
    profile: &DetuningProfile,
    coupling: Coupling,
) -> Result<Vec<Snapshot>> {
    grid.validate()?;
    let per_omega = grid
        .omega_list
        .par_iter()
        .map(|&omega| march(state, eff, gamma12, grid, omega, profile, coupling))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_omega.into_iter().flatten().collect())
}

/// Single-frequency propagation.
///
/// The state is rotated into the Bogoliubov basis once. Each slice then
/// applies the exact transfer function over its width to the absorbed mode,
/// with δ₁₂ frozen at the slice midpoint, while the other mode is left
/// untouched. The added vacuum noise of each slice carries the Langevin
/// force and the initial spin-wave fluctuations.
pub fn march(
    state: &GaussianState,
    eff: &EffectiveParams,
    gamma12: f64,
    grid: &PropagationGrid,
    omega: f64,
    profile: &DetuningProfile,
    coupling: Coupling,
) -> Result<Vec<Snapshot>> {
    if state.num_modes() != 2 {
        return Err(Error::InvalidInput(format!(
            "propagation needs exactly two modes (signal, idler), got {}",
            state.num_modes()
        )));
    }
    let labels = state.labels().to_vec();
    let to_bd = SymplecticTransform::bogoliubov(eff.epsilon, &labels[0], &labels[1])?;
    let from_bd = to_bd.inverse();
    let to_physical =
        |bd: &GaussianState| -> Result<GaussianState> { bd.relabel(&labels)?.apply(&from_bd) };

    let dz = grid.slice_width();
    let absorbed = coupling.absorbed_mode();
    let mut bd = state.apply(&to_bd)?.relabel(&[BRIGHT_LABEL, DARK_LABEL])?;
    let mut transmission = ComplexTransmission::unity();
    let mut out = Vec::with_capacity(grid.z_steps + 1);
    out.push(Snapshot {
        z: 0.0,
        omega,
        physical: state.clone(),
        bogoliubov: bd.clone(),
        transmission,
    });
    for step in 0..grid.z_steps {
        let z_mid = (step as f64 + 0.5) * dz;
        let delta = profile.detuning(z_mid, grid.length);
        let tau = transfer_function(eff, omega, dz, gamma12, delta)?;
        bd = bd.transmit(absorbed, tau)?;
        transmission = transmission.then(&tau);
        out.push(Snapshot {
            z: grid.z_at(step + 1),
            omega,
            physical: to_physical(&bd)?,
            bogoliubov: bd.clone(),
            transmission,
        });
    }
    Ok(out)
}
