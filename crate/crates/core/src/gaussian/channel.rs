use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{GaussianState, VACUUM_VARIANCE};
use crate::error::{Error, Result};

/// Slack on `|τ| ≤ 1`.
pub const TRANSMISSION_TOL: f64 = 1e-12;

/// Complex amplitude transmission `τ` of a passive one-mode channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTransmission(Complex64);

impl ComplexTransmission {
    pub fn new(amplitude: Complex64) -> Result<Self> {
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite transmission {amplitude}"
            )));
        }
        if amplitude.norm() > 1.0 + TRANSMISSION_TOL {
            return Err(Error::Unphysical(format!(
                "|tau| = {} exceeds 1 (gain channels are not supported)",
                amplitude.norm()
            )));
        }
        Ok(Self(amplitude))
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(modulus, phase))
    }

    pub fn unity() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }

    pub fn amplitude(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    pub fn phase(&self) -> f64 {
        self.0.arg()
    }

    /// Transmission of two channels in series.
    pub fn then(&self, next: &ComplexTransmission) -> Self {
        Self(self.0 * next.0)
    }
}

impl GaussianState {
    /// One-mode channel `â → τ â + √(1−|τ|²) v̂` with `v̂` in vacuum.
    ///
    /// The mode's rows and columns are multiplied by `|τ| R(arg τ)` and the
    /// block gains `(1−|τ|²)/2` of vacuum noise; correlations to other modes
    /// therefore shrink by `|τ|`.
    pub fn transmit(&self, mode: &str, tau: ComplexTransmission) -> Result<Self> {
        let i = self.index_of(mode)?;
        let t = tau.amplitude();
        let dim = 2 * self.num_modes();
        let mut m = DMatrix::identity(dim, dim);
        m[(2 * i, 2 * i)] = t.re;
        m[(2 * i, 2 * i + 1)] = -t.im;
        m[(2 * i + 1, 2 * i)] = t.im;
        m[(2 * i + 1, 2 * i + 1)] = t.re;

        let mean = &m * self.mean();
        let mut cov = &m * self.cov() * m.transpose();
        let noise = (1.0 - t.norm_sqr()).max(0.0) * VACUUM_VARIANCE;
        cov[(2 * i, 2 * i)] += noise;
        cov[(2 * i + 1, 2 * i + 1)] += noise;
        Ok(GaussianState::from_parts(self.labels().to_vec(), mean, cov))
    }
}
