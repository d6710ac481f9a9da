//! Purity, symplectic spectrum and logarithmic negativity.

use std::collections::HashSet;

use nalgebra::{DMatrix, SymmetricEigen};

use super::state::GaussianState;
use super::symplectic::omega;
use crate::error::{Error, Result};

/// Symplectic eigenvalues of a covariance matrix, ascending.
///
/// With `K = σ^{1/2} Ω σ^{1/2}` (antisymmetric, similar to `Ωσ`), the
/// symmetric matrix `KᵀK` has every `ν²` as a doubly degenerate eigenvalue.
pub fn symplectic_spectrum(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows() / 2;
    let eig = SymmetricEigen::new(cov.clone());
    let lambda_min = eig.eigenvalues.min();
    if !(lambda_min > 0.0) {
        return Err(Error::NumericalDegeneracy(format!(
            "covariance is not positive definite (smallest eigenvalue {lambda_min:e})"
        )));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let k = &root * omega(n) * &root;
    let mut squares: Vec<f64> = SymmetricEigen::new(k.transpose() * &k)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    squares.sort_by(f64::total_cmp);
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

impl GaussianState {
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(self.cov())
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .symplectic_eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    /// `Tr ρ² = 1 / (2^N √det σ)`.
    pub fn purity(&self) -> Result<f64> {
        let det = self.cov().clone().determinant();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::NumericalDegeneracy(format!(
                "covariance determinant {det:e} is not positive"
            )));
        }
        Ok(1.0 / (2f64.powi(self.num_modes() as i32) * det.sqrt()))
    }

    /// `E_N = Σ max(0, −log₂ 2ν̃)` over the partial-transpose spectrum of
    /// the `first ∪ second` marginal, transposing `second`.
    pub fn log_negativity<S: AsRef<str>>(&self, first: &[S], second: &[S]) -> Result<f64> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidInput(
                "both sides of the partition must be nonempty".into(),
            ));
        }
        let left: HashSet<&str> = first.iter().map(AsRef::as_ref).collect();
        if let Some(m) = second.iter().find(|m| left.contains(m.as_ref())) {
            return Err(Error::InvalidInput(format!(
                "mode '{}' appears on both sides of the partition",
                m.as_ref()
            )));
        }
        let modes: Vec<&str> = first
            .iter()
            .chain(second.iter())
            .map(AsRef::as_ref)
            .collect();
        let marginal = self.reduced(&modes)?;
        let mut cov = marginal.cov().clone();
        for k in first.len()..modes.len() {
            let p = 2 * k + 1;
            cov.row_mut(p).neg_mut();
            cov.column_mut(p).neg_mut();
        }
        Ok(symplectic_spectrum(&cov)?
            .into_iter()
            .map(|nu| (-(2.0 * nu).log2()).max(0.0))
            .sum())
    }
}
