//! Two-mode Gaussian states and the symplectic/loss maps acting on them.
//!
//! Quadratures are ordered `(X_a, P_a, X_b, P_b)` with `X = (a + a†)/√2` and
//! `P = (a - a†)/(√2 i)`, so the vacuum covariance is `I/2`. The symplectic
//! form is `Ω = diag(J, J)` with `J = [[0, 1], [-1, 0]]`.
//!
//! Moments returned by [`GaussianState::symmetric_moment`] are
//! symmetric-ordered. They coincide with operator moments only when the
//! quadratures involved commute pairwise, which is the case for every
//! observable built in [`crate::measurements`] (`P_a`, `X_a²`, `X_a X_b`,
//! `X_θa + X_θb`).

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance on `cov - covᵀ` and on `M Ω Mᵀ - Ω`.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Tolerance on the smallest eigenvalue of `cov + iΩ/2`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    Xa,
    Pa,
    Xb,
    Pb,
}

impl Quadrature {
    pub const ALL: [Quadrature; 4] = [Quadrature::Xa, Quadrature::Pa, Quadrature::Xb, Quadrature::Pb];

    pub fn index(self) -> usize {
        match self {
            Quadrature::Xa => 0,
            Quadrature::Pa => 1,
            Quadrature::Xb => 2,
            Quadrature::Pb => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

/// `Ω = diag(J, J)`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

fn symmetrize(m: &Matrix4<f64>) -> Matrix4<f64> {
    (m + m.transpose()) * 0.5
}

/// A 4×4 real matrix satisfying `M Ω Mᵀ = Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticTransform(Matrix4<f64>);

impl SymplecticTransform {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let defect = symplectic_defect(&m);
        if !(defect <= STRUCTURE_TOL) {
            return Err(invalid(format!("matrix is not symplectic (|MΩMᵀ - Ω| = {defect:e})")));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Beam splitter mixing modes a and b with angle `theta`.
    ///
    /// `theta = π/4` is the first 50:50 splitter of the interferometer and
    /// `theta = -π/4` the second.
    pub fn beam_splitter(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        #[rustfmt::skip]
        let m = Matrix4::new(
             c, 0.0,   s, 0.0,
            0.0,   c, 0.0,   s,
            -s, 0.0,   c, 0.0,
            0.0,  -s, 0.0,   c,
        );
        Self(m)
    }

    /// Phase shift `exp(-iφ a†a)` on mode a: `X_a → cos φ X_a + sin φ P_a`.
    pub fn phase_shifter(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        #[rustfmt::skip]
        let m = Matrix4::new(
              c,   s, 0.0, 0.0,
             -s,   c, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        );
        Self(m)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SymplecticTransform) -> Self {
        Self(next.0 * self.0)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }
}

/// Max-norm of `M Ω Mᵀ - Ω`.
pub fn symplectic_defect(m: &Matrix4<f64>) -> f64 {
    let omega = symplectic_form();
    (m * omega * m.transpose() - omega).amax()
}

pub fn beam_splitter(theta: f64) -> SymplecticTransform {
    SymplecticTransform::beam_splitter(theta)
}

pub fn phase_shifter(phi: f64) -> SymplecticTransform {
    SymplecticTransform::phase_shifter(phi)
}

fn check_transmissivity(name: &str, eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid(format!("{name} = {eta} is outside [0, 1]")));
    }
    Ok(())
}

/// Two-mode Gaussian state: covariance matrix and first moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: Matrix4<f64>,
    mean: Vector4<f64>,
}

impl GaussianState {
    /// Validating constructor: `cov` must be symmetric and `cov + iΩ/2 ⪰ 0`.
    pub fn new(cov: Matrix4<f64>, mean: Vector4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).amax();
        if !(asym <= STRUCTURE_TOL) {
            return Err(invalid(format!("covariance matrix is not symmetric (defect {asym:e})")));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(invalid("first moments must be finite"));
        }
        let state = Self::from_parts(cov, mean);
        let min_eig = state.physicality_margin();
        if !(min_eig >= -PHYSICALITY_TOL) {
            return Err(invalid(format!(
                "covariance violates the uncertainty principle (min eig of cov + iΩ/2 = {min_eig:e})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_parts(cov: Matrix4<f64>, mean: Vector4<f64>) -> Self {
        Self { cov: symmetrize(&cov), mean }
    }

    pub fn vacuum() -> Self {
        Self { cov: Matrix4::identity() * 0.5, mean: Vector4::zeros() }
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + iΩ/2`.
    pub fn physicality_margin(&self) -> f64 {
        let omega = symplectic_form();
        let h = Matrix4::from_fn(|i, j| Complex64::new(self.cov[(i, j)], 0.5 * omega[(i, j)]));
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin() >= -PHYSICALITY_TOL
    }

    /// A two-mode Gaussian state is pure iff `det cov = 1/16`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (16.0 * self.cov.determinant() - 1.0).abs() <= tol
    }

    /// `(tr cov + |mean|²)/2 - 1`.
    pub fn mean_photon_number(&self) -> f64 {
        0.5 * (self.cov.trace() + self.mean.norm_squared()) - 1.0
    }

    /// `cov → M cov Mᵀ`, `mean → M mean`.
    pub fn apply_symplectic(&self, m: &SymplecticTransform) -> Result<Self> {
        let defect = symplectic_defect(&m.0);
        if !(defect <= STRUCTURE_TOL) {
            return Err(invalid(format!("matrix is not symplectic (defect {defect:e})")));
        }
        Ok(self.transform_unchecked(&m.0))
    }

    pub(crate) fn transform_unchecked(&self, m: &Matrix4<f64>) -> Self {
        Self::from_parts(m * self.cov * m.transpose(), m * self.mean)
    }

    /// Pure-loss channel with per-mode transmissivities.
    pub fn apply_loss(&self, eta_a: f64, eta_b: f64) -> Result<Self> {
        check_transmissivity("eta_a", eta_a)?;
        check_transmissivity("eta_b", eta_b)?;
        let (ta, tb) = (eta_a.sqrt(), eta_b.sqrt());
        let d1 = Vector4::new(ta, ta, tb, tb);
        let noise = Vector4::new(1.0 - eta_a, 1.0 - eta_a, 1.0 - eta_b, 1.0 - eta_b);
        let cov = Matrix4::from_fn(|i, j| {
            let scaled = d1[i] * self.cov[(i, j)] * d1[j];
            if i == j {
                scaled + 0.5 * noise[i]
            } else {
                scaled
            }
        });
        Ok(Self::from_parts(cov, self.mean.component_mul(&d1)))
    }

    /// Partial trace: the diagonal block of the selected mode.
    pub fn reduce_to_mode(&self, mode: Mode) -> SingleModeState {
        let o = match mode {
            Mode::A => 0,
            Mode::B => 2,
        };
        let cov = Matrix2::new(self.cov[(o, o)], self.cov[(o, o + 1)], self.cov[(o + 1, o)], self.cov[(o + 1, o + 1)]);
        SingleModeState { cov, mean: Vector2::new(self.mean[o], self.mean[o + 1]) }
    }

    /// Symmetric-ordered moment `⟨R_i R_j ...⟩` for one, two or four
    /// quadratures, expanded by Isserlis' theorem with nonzero means.
    pub fn symmetric_moment(&self, indices: &[Quadrature]) -> Result<f64> {
        match indices.len() {
            1 | 2 | 4 => {
                let idx: Vec<usize> = indices.iter().map(|q| q.index()).collect();
                Ok(gaussian_moment(&self.cov, &self.mean, &idx))
            }
            n => Err(invalid(format!("moments of order {n} are not supported (use 1, 2 or 4)"))),
        }
    }
}

/// `E[x_{i1} ... x_{in}]` for a Gaussian vector via Stein's recursion
/// `E[x_i Y] = d_i E[Y] + Σ_k γ_{i,k} E[Y without x_k]`.
pub(crate) fn gaussian_moment<const N: usize>(
    cov: &nalgebra::SMatrix<f64, N, N>,
    mean: &nalgebra::SVector<f64, N>,
    idx: &[usize],
) -> f64 {
    let Some((&first, rest)) = idx.split_first() else {
        return 1.0;
    };
    let mut total = mean[first] * gaussian_moment(cov, mean, rest);
    for k in 0..rest.len() {
        let g = cov[(first, rest[k])];
        if g != 0.0 {
            let reduced: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            total += g * gaussian_moment(cov, mean, &reduced);
        }
    }
    total
}

/// Single-mode Gaussian state, e.g. one output port of the interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeState {
    cov: Matrix2<f64>,
    mean: Vector2<f64>,
}

impl SingleModeState {
    pub fn new(cov: Matrix2<f64>, mean: Vector2<f64>) -> Result<Self> {
        if !((cov[(0, 1)] - cov[(1, 0)]).abs() <= STRUCTURE_TOL) {
            return Err(invalid("covariance matrix is not symmetric"));
        }
        // cov + iJ/2 ⪰ 0  ⇔  cov ≻ 0 and det cov ≥ 1/4
        if !(cov[(0, 0)] > 0.0 && cov.determinant() >= 0.25 - PHYSICALITY_TOL) {
            return Err(invalid("single-mode covariance violates det γ ≥ 1/4"));
        }
        Ok(Self { cov, mean })
    }

    pub fn vacuum() -> Self {
        Self { cov: Matrix2::identity() * 0.5, mean: Vector2::zeros() }
    }

    /// Thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Self {
        Self { cov: Matrix2::identity() * (nbar + 0.5), mean: Vector2::zeros() }
    }

    pub fn cov(&self) -> &Matrix2<f64> {
        &self.cov
    }

    pub fn mean(&self) -> &Vector2<f64> {
        &self.mean
    }

    pub fn mean_photon_number(&self) -> f64 {
        0.5 * (self.cov.trace() + self.mean.norm_squared() - 1.0)
    }
}

impl TryFrom<(Matrix4<f64>, Vector4<f64>)> for GaussianState {
    type Error = Error;

    fn try_from((cov, mean): (Matrix4<f64>, Vector4<f64>)) -> Result<Self> {
        Self::new(cov, mean)
    }
}
