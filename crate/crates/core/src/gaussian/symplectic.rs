use nalgebra::DMatrix;

use super::state::{checked_labels, GaussianState};
use crate::error::{check_epsilon, Error, Result};

/// Tolerance on `‖SΩSᵀ − Ω‖∞` for a matrix to count as symplectic.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Standard symplectic form `⊕ [[0, 1], [−1, 0]]` for `modes` modes.
pub fn omega(modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Largest entry of `SΩSᵀ − Ω`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let w = omega(s.nrows() / 2);
    (s * &w * s.transpose() - w).amax()
}

/// Linear quadrature map acting on an ordered list of target modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    targets: Vec<String>,
}

impl SymplecticTransform {
    pub fn new<S: AsRef<str>>(matrix: DMatrix<f64>, targets: &[S]) -> Result<Self> {
        let targets = checked_labels(targets)?;
        let dim = 2 * targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "{} target modes need a {dim}x{dim} matrix, got {}x{}",
                targets.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let residual = symplectic_residual(&matrix);
        if !(residual < SYMPLECTIC_TOL) {
            return Err(Error::InvalidInput(format!(
                "matrix is not symplectic (residual {residual:e})"
            )));
        }
        Ok(Self { matrix, targets })
    }

    pub fn identity<S: AsRef<str>>(targets: &[S]) -> Result<Self> {
        let targets = checked_labels(targets)?;
        let dim = 2 * targets.len();
        Ok(Self {
            matrix: DMatrix::identity(dim, dim),
            targets,
        })
    }

    /// Bogoliubov map from `(signal, idler)` to the bright/dark pair `(B, D)`:
    ///
    /// ```text
    /// B = (a − ε b†)/α₀,   D = (b − ε a†)/α₀,   α₀ = √(1 − ε²)
    /// ```
    ///
    /// The idler phase reference is the one in which the dark vacuum
    /// `|0_B, 0_D⟩` equals [`GaussianState::tmsv`]`(ε)` on `(signal, idler)`.
    pub fn bogoliubov(epsilon: f64, signal: &str, idler: &str) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            matrix: bogoliubov_matrix(epsilon),
            targets: checked_labels(&[signal, idler])?,
        })
    }

    /// Two-mode squeezer `exp[r(a†b† − ab)]`; maps vacuum to `tmsv(tanh r)`.
    pub fn two_mode_squeezer(r: f64, first: &str, second: &str) -> Result<Self> {
        let (c, s) = (r.cosh(), r.sinh());
        #[rustfmt::skip]
        let matrix = DMatrix::from_row_slice(4, 4, &[
            c,   0.0, s,   0.0,
            0.0, c,   0.0, -s,
            s,   0.0, c,   0.0,
            0.0, -s,  0.0, c,
        ]);
        Ok(Self {
            matrix,
            targets: checked_labels(&[first, second])?,
        })
    }

    /// `X → e^{−r} X`, `P → e^{r} P`.
    pub fn single_mode_squeezer(r: f64, mode: &str) -> Result<Self> {
        let matrix = DMatrix::from_row_slice(2, 2, &[(-r).exp(), 0.0, 0.0, r.exp()]);
        Ok(Self {
            matrix,
            targets: checked_labels(&[mode])?,
        })
    }

    /// Phase rotation `â → e^{iθ} â`.
    pub fn rotation(theta: f64, mode: &str) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        Ok(Self {
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            targets: checked_labels(&[mode])?,
        })
    }

    /// Real beam splitter with transmissivity `cos²θ`.
    pub fn beam_splitter(theta: f64, first: &str, second: &str) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        #[rustfmt::skip]
        let matrix = DMatrix::from_row_slice(4, 4, &[
            c,   0.0, s,   0.0,
            0.0, c,   0.0, s,
            -s,  0.0, c,   0.0,
            0.0, -s,  0.0, c,
        ]);
        Ok(Self {
            matrix,
            targets: checked_labels(&[first, second])?,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.matrix)
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let w = omega(self.targets.len());
        Self {
            matrix: -(&w * self.matrix.transpose() * &w),
            targets: self.targets.clone(),
        }
    }

    /// `self` after `first`, i.e. the matrix product `self · first`.
    pub fn after(&self, first: &SymplecticTransform) -> Result<Self> {
        if self.targets != first.targets {
            return Err(Error::InvalidInput(
                "composed transforms must address the same modes in the same order".into(),
            ));
        }
        Ok(Self {
            matrix: &self.matrix * &first.matrix,
            targets: self.targets.clone(),
        })
    }

    /// The map as a matrix on the full quadrature space of `labels`,
    /// identity on modes it does not target.
    pub fn embed<S: AsRef<str>>(&self, labels: &[S]) -> Result<DMatrix<f64>> {
        let idx = self
            .targets
            .iter()
            .map(|m| {
                labels
                    .iter()
                    .position(|l| l.as_ref() == m)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown mode '{m}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = 2 * labels.len();
        let mut full = DMatrix::identity(dim, dim);
        for (i, &pi) in idx.iter().enumerate() {
            for (j, &pj) in idx.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        full[(2 * pi + a, 2 * pj + b)] = self.matrix[(2 * i + a, 2 * j + b)];
                    }
                }
            }
        }
        Ok(full)
    }
}

pub(crate) fn bogoliubov_matrix(epsilon: f64) -> DMatrix<f64> {
    let inv_alpha0 = 1.0 / (1.0 - epsilon * epsilon).sqrt();
    let e = epsilon;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        1.0, 0.0, -e,  0.0,
        0.0, 1.0, 0.0, e,
        -e,  0.0, 1.0, 0.0,
        0.0, e,   0.0, 1.0,
    ]);
    m * inv_alpha0
}

impl GaussianState {
    /// `mean → S·mean`, `cov → S·cov·Sᵀ` on the transform's target modes.
    pub fn apply(&self, t: &SymplecticTransform) -> Result<Self> {
        let s = t.embed(self.labels())?;
        let mean = &s * self.mean();
        let cov = &s * self.cov() * s.transpose();
        Ok(GaussianState::from_parts(self.labels().to_vec(), mean, cov))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{QuadTerm, Quadrature};
    use approx::assert_abs_diff_eq;

    #[test]
    fn bogoliubov_zero_is_identity() {
        let t = SymplecticTransform::bogoliubov(0.0, "a", "b").unwrap();
        assert_eq!(t.matrix(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn bogoliubov_half_signal_row() {
        // X_B = (X_a − ε X_b)/α₀ with α₀⁻¹ = 1/√0.75.
        let t = SymplecticTransform::bogoliubov(0.5, "a", "b").unwrap();
        let row: Vec<f64> = t.matrix().row(0).iter().copied().collect();
        let expected = [1.0 / 0.75f64.sqrt(), 0.0, -0.5 / 0.75f64.sqrt(), 0.0];
        for (got, want) in row.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(row[0], 1.1547, epsilon = 1e-4);
        assert_abs_diff_eq!(row[2], -0.5774, epsilon = 1e-4);
    }

    #[test]
    fn bogoliubov_is_symplectic_and_rejects_unit_epsilon() {
        let t = SymplecticTransform::bogoliubov(0.9, "a", "b").unwrap();
        assert!(t.residual() < SYMPLECTIC_TOL);
        assert!(matches!(
            SymplecticTransform::bogoliubov(1.0, "a", "b"),
            Err(Error::Unphysical(_))
        ));
    }

    #[test]
    fn bogoliubov_on_vacuum_gives_bright_variance() {
        let v = GaussianState::vacuum(&["a", "b"]).unwrap();
        let t = SymplecticTransform::bogoliubov(0.5, "a", "b").unwrap();
        let out = v.apply(&t).unwrap();
        let var = out.quad_combo_variance(&[QuadTerm::x("a", 1.0)]).unwrap();
        // (1 + ε²) / (2 (1 − ε²))
        assert_abs_diff_eq!(var, 1.25 / 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(var, 0.8333, epsilon = 1e-4);
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = GaussianState::tmsv(0.6, ("a", "b")).unwrap();
        let out = s
            .apply(&SymplecticTransform::identity(&["b"]).unwrap())
            .unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn inverse_round_trip() {
        let s = GaussianState::tmsv(0.6, ("a", "b"))
            .unwrap()
            .tensor(&GaussianState::thermal("c", 0.3).unwrap())
            .unwrap();
        let t = SymplecticTransform::bogoliubov(0.7, "c", "a").unwrap();
        let back = s.apply(&t).unwrap().apply(&t.inverse()).unwrap();
        assert!((back.cov() - s.cov()).amax() < 1e-12);
    }

    #[test]
    fn unknown_target_rejected() {
        let s = GaussianState::vacuum(&["a", "b"]).unwrap();
        let t = SymplecticTransform::rotation(0.3, "z").unwrap();
        assert!(matches!(s.apply(&t), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn non_symplectic_matrix_rejected() {
        let m = DMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(SymplecticTransform::new(m, &["a"]).is_err());
    }

    #[test]
    fn squeezer_on_vacuum_matches_closed_form_tmsv() {
        let eps: f64 = 0.35;
        let t = SymplecticTransform::two_mode_squeezer(eps.atanh(), "a", "b").unwrap();
        let out = GaussianState::vacuum(&["a", "b"])
            .unwrap()
            .apply(&t)
            .unwrap();
        let direct = GaussianState::tmsv(eps, ("a", "b")).unwrap();
        assert!((out.cov() - direct.cov()).amax() < 1e-12);
    }

    #[test]
    fn single_mode_squeezer_variance() {
        let v = GaussianState::vacuum(&["a"]).unwrap();
        let out = v
            .apply(&SymplecticTransform::single_mode_squeezer(0.5, "a").unwrap())
            .unwrap();
        let var = out
            .quad_combo_variance(&[QuadTerm {
                mode: "a".into(),
                quadrature: Quadrature::X,
                weight: 1.0,
            }])
            .unwrap();
        assert_abs_diff_eq!(var, 0.5 * (-1.0f64).exp(), epsilon = 1e-14);
    }
}
