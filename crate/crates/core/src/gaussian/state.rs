use std::collections::HashSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_epsilon, Error, Result};

/// Vacuum quadrature variance.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Relative tolerance on the symmetry of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Slack allowed below 1/2 for symplectic eigenvalues of a physical state.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    pub(crate) fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

/// One weighted quadrature in a linear combination `Σ wᵢ Qᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadTerm {
    pub mode: String,
    pub quadrature: Quadrature,
    pub weight: f64,
}

impl QuadTerm {
    pub fn x(mode: &str, weight: f64) -> Self {
        Self {
            mode: mode.to_string(),
            quadrature: Quadrature::X,
            weight,
        }
    }

    pub fn p(mode: &str, weight: f64) -> Self {
        Self {
            mode: mode.to_string(),
            quadrature: Quadrature::P,
            weight,
        }
    }
}

/// Gaussian state over labelled bosonic modes.
///
/// Quadratures are ordered `(X₁, P₁, X₂, P₂, …)` and the vacuum has
/// `Var(X) = Var(P) = 1/2`. Every value of this type satisfies the
/// uncertainty relation `σ + iΩ/2 ≥ 0`: states built through [`GaussianState::new`]
/// are checked, and the transforms and channels in this crate preserve it.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    labels: Vec<String>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from its first and second moments, rejecting
    /// inconsistent shapes, asymmetric covariances and unphysical states.
    pub fn new<S: AsRef<str>>(labels: &[S], mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let labels = checked_labels(labels)?;
        let dim = 2 * labels.len();
        if mean.len() != dim || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "expected mean of length {dim} and {dim}x{dim} covariance, got {} and {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite moment".into()));
        }
        let scale = cov.amax().max(f64::MIN_POSITIVE);
        let asym = (&cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidInput(format!(
                "covariance is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let state = Self {
            labels,
            mean,
            cov: symmetrized(cov),
        };
        let nu_min = state
            .symplectic_eigenvalues()
            .map_err(|e| Error::Unphysical(format!("covariance violates uncertainty bound: {e}")))?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if nu_min < VACUUM_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {nu_min} is below 1/2"
            )));
        }
        Ok(state)
    }

    /// Moments produced by operations that preserve physicality.
    pub(crate) fn from_parts(labels: Vec<String>, mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            labels,
            mean,
            cov: symmetrized(cov),
        }
    }

    pub fn vacuum<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels = checked_labels(labels)?;
        let dim = 2 * labels.len();
        Ok(Self {
            labels,
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
        })
    }

    /// Single-mode thermal state with mean photon number `nbar`.
    pub fn thermal(label: &str, nbar: f64) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::Unphysical(format!(
                "thermal occupation must be finite and >= 0, got {nbar}"
            )));
        }
        Ok(Self {
            labels: vec![label.to_string()],
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (nbar + VACUUM_VARIANCE),
        })
    }

    /// Two-mode squeezed vacuum `√(1−ε²) Σ εⁿ |n, n⟩`.
    ///
    /// Built from the closed form `Var(X) = ½cosh 2r`, `Cov(X₁,X₂) = ½sinh 2r`,
    /// `Cov(P₁,P₂) = −½sinh 2r` with `tanh r = ε`, so that
    /// `Var(X₁+X₂) = (1+ε)/(1−ε)` and `Var(X₁−X₂) = (1−ε)/(1+ε)`.
    pub fn tmsv(epsilon: f64, labels: (&str, &str)) -> Result<Self> {
        check_epsilon(epsilon)?;
        let labels = checked_labels(&[labels.0, labels.1])?;
        let e2 = epsilon * epsilon;
        let diag = 0.5 * (1.0 + e2) / (1.0 - e2);
        let corr = epsilon / (1.0 - e2);
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            diag, 0.0,   corr, 0.0,
            0.0,  diag,  0.0,  -corr,
            corr, 0.0,   diag, 0.0,
            0.0,  -corr, 0.0,  diag,
        ]);
        Ok(Self {
            labels,
            mean: DVector::zeros(4),
            cov,
        })
    }

    /// Displaces `mode` by the coherent amplitude `alpha`
    /// (`⟨X⟩ += √2 Re α`, `⟨P⟩ += √2 Im α`).
    pub fn displace(&self, mode: &str, alpha: Complex64) -> Result<Self> {
        let i = self.index_of(mode)?;
        let mut out = self.clone();
        out.mean[2 * i] += std::f64::consts::SQRT_2 * alpha.re;
        out.mean[2 * i + 1] += std::f64::consts::SQRT_2 * alpha.im;
        Ok(out)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index_of(&self, mode: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == mode)
            .ok_or_else(|| Error::InvalidInput(format!("unknown mode '{mode}'")))
    }

    /// Same moments under new mode names.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let labels = checked_labels(labels)?;
        if labels.len() != self.labels.len() {
            return Err(Error::InvalidInput(format!(
                "relabel needs {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        Ok(Self {
            labels,
            mean: self.mean.clone(),
            cov: self.cov.clone(),
        })
    }

    /// Marginal state of the listed modes, in the listed order.
    pub fn reduced<S: AsRef<str>>(&self, modes: &[S]) -> Result<Self> {
        let labels = checked_labels(modes)?;
        let idx = labels
            .iter()
            .map(|m| self.index_of(m))
            .collect::<Result<Vec<_>>>()?;
        let quads: Vec<usize> = idx.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        let dim = quads.len();
        let mean = DVector::from_fn(dim, |r, _| self.mean[quads[r]]);
        let cov = DMatrix::from_fn(dim, dim, |r, c| self.cov[(quads[r], quads[c])]);
        Ok(Self { labels, mean, cov })
    }

    /// Product state `self ⊗ other`.
    pub fn tensor(&self, other: &GaussianState) -> Result<Self> {
        let labels: Vec<&str> = self
            .labels
            .iter()
            .chain(other.labels.iter())
            .map(String::as_str)
            .collect();
        let labels = checked_labels(&labels)?;
        let (n1, n2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(n1 + n2);
        mean.rows_mut(0, n1).copy_from(&self.mean);
        mean.rows_mut(n1, n2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(n1 + n2, n1 + n2);
        cov.view_mut((0, 0), (n1, n1)).copy_from(&self.cov);
        cov.view_mut((n1, n1), (n2, n2)).copy_from(&other.cov);
        Ok(Self { labels, mean, cov })
    }

    /// Exchanges the moments of two modes, including all their correlations.
    pub fn swap_modes(&self, first: &str, second: &str) -> Result<Self> {
        if first == second {
            return Err(Error::InvalidInput(format!(
                "cannot swap mode '{first}' with itself"
            )));
        }
        let (i, j) = (self.index_of(first)?, self.index_of(second)?);
        let mut perm: Vec<usize> = (0..self.mean.len()).collect();
        for q in 0..2 {
            perm.swap(2 * i + q, 2 * j + q);
        }
        let dim = perm.len();
        let mean = DVector::from_fn(dim, |r, _| self.mean[perm[r]]);
        let cov = DMatrix::from_fn(dim, dim, |r, c| self.cov[(perm[r], perm[c])]);
        Ok(Self {
            labels: self.labels.clone(),
            mean,
            cov,
        })
    }

    /// `(⟨X⟩, ⟨P⟩)` of one mode.
    pub fn quadrature_means(&self, mode: &str) -> Result<(f64, f64)> {
        let i = self.index_of(mode)?;
        Ok((self.mean[2 * i], self.mean[2 * i + 1]))
    }

    /// Coherent amplitude `⟨â⟩ = (⟨X⟩ + i⟨P⟩)/√2`.
    pub fn amplitude(&self, mode: &str) -> Result<Complex64> {
        let (x, p) = self.quadrature_means(mode)?;
        Ok(Complex64::new(x, p) / std::f64::consts::SQRT_2)
    }

    /// Variance of `Σ wᵢ Qᵢ`, i.e. `cᵀσc`.
    pub fn quad_combo_variance(&self, terms: &[QuadTerm]) -> Result<f64> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("empty quadrature combination".into()));
        }
        let mut c = DVector::zeros(self.mean.len());
        for t in terms {
            if !t.weight.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite weight on mode '{}'",
                    t.mode
                )));
            }
            let i = self.index_of(&t.mode)?;
            c[2 * i + t.quadrature.offset()] += t.weight;
        }
        Ok(c.dot(&(&self.cov * &c)).max(0.0))
    }

    /// `n̄ = ½(Var X + Var P) + ½(⟨X⟩² + ⟨P⟩²) − ½`.
    pub fn mean_photon_number(&self, mode: &str) -> Result<f64> {
        let i = self.index_of(mode)?;
        let (x, p) = (2 * i, 2 * i + 1);
        Ok(0.5 * (self.cov[(x, x)] + self.cov[(p, p)])
            + 0.5 * (self.mean[x].powi(2) + self.mean[p].powi(2))
            - VACUUM_VARIANCE)
    }
}

impl fmt::Display for GaussianState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modes: {}", self.labels.join(", "))?;
        write!(f, "mean: {}cov: {}", self.mean.transpose(), self.cov)
    }
}

pub(crate) fn symmetrized(cov: DMatrix<f64>) -> DMatrix<f64> {
    (&cov + cov.transpose()) * 0.5
}

pub(crate) fn checked_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<String>> {
    if labels.is_empty() {
        return Err(Error::InvalidInput(
            "at least one mode label is required".into(),
        ));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_ref()) {
            return Err(Error::InvalidInput(format!(
                "duplicate mode label '{}'",
                l.as_ref()
            )));
        }
    }
    Ok(labels.iter().map(|l| l.as_ref().to_string()).collect())
}
