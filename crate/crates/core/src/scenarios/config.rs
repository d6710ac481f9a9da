use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};
use crate::gaussian::{GaussianState, SymplecticTransform};

/// Signal and idler labels used by every scenario.
pub const SIGNAL: &str = "a";
pub const IDLER: &str = "b";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Preservation,
    SingleSample,
    Cascade,
    Gem,
    MemorySwap,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Preservation,
        ScenarioKind::SingleSample,
        ScenarioKind::Cascade,
        ScenarioKind::Gem,
        ScenarioKind::MemorySwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Preservation => "preservation",
            ScenarioKind::SingleSample => "single_sample",
            ScenarioKind::Cascade => "cascade",
            ScenarioKind::Gem => "gem",
            ScenarioKind::MemorySwap => "memory_swap",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioKind::Preservation => {
                "dark-state input crosses a lossy sample without loss or evolution"
            }
            ScenarioKind::SingleSample => {
                "vacuum input: bright mode absorbed, dark mode left thermal"
            }
            ScenarioKind::Cascade => {
                "two samples with inverted coupling ratio turn vacuum into TMSV"
            }
            ScenarioKind::Gem => {
                "signal photon number through a sample with a linear ground-state gradient"
            }
            ScenarioKind::MemorySwap => {
                "idealised light/spin-wave swaps leave the two samples TMSV-entangled"
            }
        }
    }

    /// The curve or claim the scenario reproduces.
    pub fn anchor(self) -> &'static str {
        match self {
            ScenarioKind::Preservation => "dark-state preservation",
            ScenarioKind::SingleSample => "variance trajectories, first sample",
            ScenarioKind::Cascade => "variance trajectories, both samples",
            ScenarioKind::Gem => "gradient-echo photon-number trajectory",
            ScenarioKind::MemorySwap => "entanglement exchange diagram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeBasis {
    /// Amplitudes refer to the signal and idler modes.
    Physical,
    /// Amplitudes refer to the bright and dark modes.
    Bogoliubov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputState {
    /// Physical vacuum `|0_a, 0_b⟩`.
    Vacuum,
    /// The dark two-mode squeezed vacuum at the configured ε.
    Tmsv,
    /// Coherent displacement of the vacuum of the chosen basis;
    /// `amplitudes[k] = [Re α_k, Im α_k]`.
    Coherent {
        basis: ModeBasis,
        amplitudes: [[f64; 2]; 2],
    },
}

impl InputState {
    /// Builds the input on modes (`a`, `b`).
    pub fn build(&self, epsilon: f64) -> Result<GaussianState> {
        match self {
            InputState::Vacuum => GaussianState::vacuum(&[SIGNAL, IDLER]),
            InputState::Tmsv => GaussianState::tmsv(epsilon, (SIGNAL, IDLER)),
            InputState::Coherent { basis, amplitudes } => {
                if amplitudes.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("non-finite coherent amplitude".into()));
                }
                let alpha = |k: usize| Complex64::new(amplitudes[k][0], amplitudes[k][1]);
                let displaced = GaussianState::vacuum(&[SIGNAL, IDLER])?
                    .displace(SIGNAL, alpha(0))?
                    .displace(IDLER, alpha(1))?;
                match basis {
                    ModeBasis::Physical => Ok(displaced),
                    ModeBasis::Bogoliubov => {
                        let to_bd = SymplecticTransform::bogoliubov(epsilon, SIGNAL, IDLER)?;
                        displaced.apply(&to_bd.inverse())
                    }
                }
            }
        }
    }
}

/// Parameters of one scenario run, in units where κ = γ₁₂ = 1: positions
/// are optical depths and probe frequencies are in units of γ₁₂.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub epsilon: f64,
    /// Optical depth κL of each sample.
    #[serde(rename = "kappa_L")]
    pub kappa_l: f64,
    pub omega_over_gamma_list: Vec<f64>,
    /// Slices per sample.
    pub z_steps: usize,
    /// κγ₁₂/β, gradient-echo scenario only.
    pub beta_norm: Option<f64>,
    pub input_state: InputState,
}

pub const MIN_Z_STEPS: usize = 10;

impl ScenarioConfig {
    pub fn defaults(kind: ScenarioKind) -> Self {
        let mut cfg = Self {
            scenario: kind,
            epsilon: 0.5,
            kappa_l: 20.0,
            omega_over_gamma_list: vec![0.0],
            z_steps: 200,
            beta_norm: None,
            input_state: InputState::Vacuum,
        };
        match kind {
            ScenarioKind::Preservation => {
                cfg.kappa_l = 10.0;
                cfg.input_state = InputState::Tmsv;
            }
            ScenarioKind::SingleSample | ScenarioKind::Cascade => {}
            ScenarioKind::Gem => {
                cfg.kappa_l = 100.0;
                cfg.z_steps = 2000;
                cfg.beta_norm = Some(5.0);
            }
            ScenarioKind::MemorySwap => cfg.kappa_l = 30.0,
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)
            .map_err(|_| Error::Unphysical("epsilon must be in [0,1)".into()))?;
        if !(self.kappa_l >= 0.0) || !self.kappa_l.is_finite() {
            return Err(Error::InvalidInput(format!(
                "kappa_L must be finite and >= 0, got {}",
                self.kappa_l
            )));
        }
        if self.z_steps < MIN_Z_STEPS {
            return Err(Error::InvalidInput(format!(
                "z_steps must be >= {MIN_Z_STEPS}, got {}",
                self.z_steps
            )));
        }
        if self.omega_over_gamma_list.is_empty() {
            return Err(Error::InvalidInput("omega_over_gamma_list is empty".into()));
        }
        if let Some(w) = self.omega_over_gamma_list.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite probe frequency {w}"
            )));
        }
        match (self.scenario, self.beta_norm) {
            (ScenarioKind::Gem, Some(b)) if b > 0.0 && b.is_finite() => {}
            (ScenarioKind::Gem, other) => {
                return Err(Error::InvalidInput(format!(
                    "gem needs beta_norm > 0, got {other:?}"
                )))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidInput(format!(
                    "beta_norm only applies to gem, not {}",
                    self.scenario.name()
                )))
            }
            (_, None) => {}
        }
        let needs_vacuum = matches!(
            self.scenario,
            ScenarioKind::SingleSample | ScenarioKind::Gem | ScenarioKind::MemorySwap
        );
        if needs_vacuum && self.input_state != InputState::Vacuum {
            return Err(Error::InvalidInput(format!(
                "{} runs from vacuum input only",
                self.scenario.name()
            )));
        }
        Ok(())
    }
}
