//! Quantum Fisher information of the phase, from Gaussian fidelities and from
//! closed forms.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{symplectic_form, GaussianState};
use crate::interferometer::{Interferometer, LossKind, LossModel};
use crate::resource::{ResourceKind, ResourceSpec};

/// Default phase step of the fidelity second difference.
pub const DEFAULT_DPHI: f64 = 1e-3;

/// Both states are treated as pure when `|16 det γ - 1|` is below this.
const PURITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QfiMethod {
    NumericFidelity,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfiResult {
    pub qfi: f64,
    /// Single-shot quantum Cramér-Rao bound `1/F_Q`.
    pub qcrb: f64,
    pub method: QfiMethod,
}

impl QfiResult {
    fn new(qfi: f64, method: QfiMethod) -> Self {
        Self { qfi, qcrb: 1.0 / qfi, method }
    }
}

fn complex_det(m: &Matrix4<f64>, imag: &Matrix4<f64>) -> Complex64 {
    Matrix4::from_fn(|i, j| Complex64::new(m[(i, j)], imag[(i, j)])).determinant()
}

/// Root fidelity `Tr √(√ρ₁ ρ₂ √ρ₁)` between two-mode Gaussian states.
///
/// `F = F₀ exp[-¼ δᵀ (γ₁+γ₂)⁻¹ δ]` with
/// `F₀ = [√Γ + √Λ - √((√Γ+√Λ)² - Δ)]^{-1/2}`, `Δ = det(γ₁+γ₂)`,
/// `Γ = 16 det(Ωγ₁Ωγ₂ - I/4)` and `Λ = 16 det(γ₁+iΩ/2) det(γ₂+iΩ/2)`.
///
/// When both states are pure, `Λ = 0` and `Γ = Δ` hold identically and the
/// expression reduces to `F₀ = Δ^{-1/4}`; that form is evaluated directly
/// because `√(Γ - Δ)` would otherwise amplify rounding error to `O(√ε)`.
pub fn bures_fidelity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    let sum = s1.cov() + s2.cov();
    let delta_det = sum.determinant();
    let inv = sum
        .try_inverse()
        .filter(|_| delta_det.abs() > f64::MIN_POSITIVE)
        .ok_or_else(|| Error::NumericFailure("γ₁ + γ₂ is singular".into()))?;
    let dd = s2.mean() - s1.mean();
    let displacement = (-0.25 * dd.dot(&(inv * dd))).exp();

    let f0 = if s1.is_pure(PURITY_TOL) && s2.is_pure(PURITY_TOL) {
        delta_det.powf(-0.25)
    } else {
        let omega = symplectic_form();
        let gamma = 16.0 * (omega * s1.cov() * omega * s2.cov() - Matrix4::identity() * 0.25).determinant();
        let half_omega = omega * 0.5;
        let lambda = 16.0 * (complex_det(s1.cov(), &half_omega) * complex_det(s2.cov(), &half_omega)).re;
        let root = gamma.max(0.0).sqrt() + lambda.max(0.0).sqrt();
        let denom = root - (root * root - delta_det).max(0.0).sqrt();
        if !(denom > 0.0) {
            return Err(Error::NumericFailure(format!("fidelity denominator {denom:e} is not positive")));
        }
        denom.powf(-0.5)
    };
    let f = f0 * displacement;
    if !f.is_finite() {
        return Err(Error::NumericFailure("fidelity is not finite".into()));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Second-difference QFI estimate `8 [1 - F(ρ_φ, ρ_{φ+h})] / h²`.
fn fidelity_difference(ifm: &Interferometer, phi: f64, h: f64) -> Result<f64> {
    let f = bures_fidelity(&ifm.output(phi), &ifm.output(phi + h))?;
    Ok(8.0 * (1.0 - f) / (h * h))
}

/// QFI from Gaussian fidelities, Richardson-extrapolated over steps `dphi`
/// and `dphi/2`.
pub fn qfi_numeric(resource: &ResourceSpec, phi: f64, loss: &LossModel, dphi: f64) -> Result<QfiResult> {
    if !(dphi > 0.0 && dphi.is_finite()) {
        return Err(invalid(format!("dphi = {dphi} must be positive")));
    }
    let ifm = Interferometer::new(*resource, *loss)?;
    let coarse = fidelity_difference(&ifm, phi, dphi)?;
    let fine = fidelity_difference(&ifm, phi, 0.5 * dphi)?;
    let qfi = ((4.0 * fine - coarse) / 3.0).max(0.0);
    Ok(QfiResult::new(qfi, QfiMethod::NumericFidelity))
}

fn csv_symmetric(alpha: f64, r: f64, eta: f64) -> f64 {
    let sh2 = r.sinh().powi(2);
    let squeezed =
        eta * sh2 * (1.0 + 2.0 * eta + (4.0 * eta - 2.0 * eta * eta) * sh2) / (1.0 + 2.0 * eta * (1.0 - eta) * sh2);
    let er = r.exp();
    let coherent = 2.0 * alpha * alpha * eta * (er - eta * r.sinh()) / (er - 2.0 * eta * r.sinh());
    squeezed + coherent
}

fn csv_one_arm(alpha: f64, r: f64, eta: f64) -> f64 {
    let (sh, ch) = (r.sinh(), r.cosh());
    2.0 * eta
        * (sh * sh / (1.0 + eta)
            + alpha * alpha * ch / (ch - eta * sh)
            + eta * (2.0 * r).sinh().powi(2) / (3.0 + eta * eta + (1.0 - eta * eta) * (2.0 * r).cosh()))
}

fn tmsv_lossy(s: f64, eta: f64) -> f64 {
    2.0 * eta * eta * (2.0 * s).sinh().powi(2) / (1.0 + 2.0 * eta * (1.0 - eta) * s.sinh().powi(2))
}

/// Closed-form QFI.
///
/// CSV is supported lossless, under symmetric loss and under loss in the
/// phase arm only. The TMSV and coherent QFIs depend on `η_a` alone (loss in
/// the empty arm does not change them), so any loss model is accepted.
pub fn qfi_closed(resource: &ResourceSpec, loss: &LossModel) -> Result<QfiResult> {
    let ResourceSpec { kind, alpha, r, s } = *resource;
    let qfi = match kind {
        ResourceKind::Coherent => 2.0 * loss.eta_a * alpha * alpha,
        ResourceKind::Tmsv => tmsv_lossy(s, loss.eta_a),
        ResourceKind::Csv => match loss.kind() {
            Some(LossKind::Symmetric) => csv_symmetric(alpha, r, loss.eta_a),
            Some(LossKind::OneArm) => csv_one_arm(alpha, r, loss.eta_a),
            None => {
                return Err(Error::UnsupportedConfiguration(format!(
                    "no closed-form CSV QFI for eta_a = {}, eta_b = {}",
                    loss.eta_a, loss.eta_b
                )))
            }
        },
    };
    Ok(QfiResult::new(qfi, QfiMethod::ClosedForm))
}

/// Closed form where available, numeric fidelity QFI otherwise.
pub fn qfi(resource: &ResourceSpec, loss: &LossModel) -> Result<QfiResult> {
    match qfi_closed(resource, loss) {
        Err(Error::UnsupportedConfiguration(_)) => qfi_numeric(resource, 0.0, loss, DEFAULT_DPHI),
        other => other,
    }
}

/// Shot-noise limit `1/(2 n̄)`.
pub fn snl(nbar: f64) -> Result<f64> {
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(invalid(format!("nbar = {nbar} must be positive")));
    }
    Ok(1.0 / (2.0 * nbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{output_state, InterferometerConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Vector4;

    fn coherent_state(x: f64, p: f64) -> GaussianState {
        GaussianState::new(Matrix4::identity() * 0.5, Vector4::new(x, p, 0.0, 0.0)).unwrap()
    }

    #[test]
    fn self_fidelity_is_one() {
        let loss = LossModel::symmetric(0.7).unwrap();
        for spec in [ResourceSpec::csv(1.0, 0.8).unwrap(), ResourceSpec::tmsv(1.1).unwrap()] {
            for l in [LossModel::lossless(), loss] {
                let st = output_state(&InterferometerConfig::new(spec, 0.4, l)).unwrap();
                assert_abs_diff_eq!(bures_fidelity(&st, &st).unwrap(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coherent_overlap() {
        let a = coherent_state(0.3, -0.2);
        let b = coherent_state(1.1, 0.5);
        let d2 = 0.8f64.powi(2) + 0.7f64.powi(2);
        assert_abs_diff_eq!(bures_fidelity(&a, &b).unwrap(), (-d2 / 4.0).exp(), epsilon = 1e-14);
    }

    #[test]
    fn fidelity_is_symmetric() {
        let ifm = Interferometer::new(ResourceSpec::csv(0.9, 0.7).unwrap(), LossModel::new(0.8, 0.6).unwrap()).unwrap();
        let (a, b) = (ifm.output(0.2), ifm.output(0.9));
        let f_ab = bures_fidelity(&a, &b).unwrap();
        let f_ba = bures_fidelity(&b, &a).unwrap();
        assert!(f_ab < 1.0);
        assert_abs_diff_eq!(f_ab, f_ba, epsilon = 1e-12);
    }

    #[test]
    fn mixed_thermal_fidelity() {
        // Two single-mode thermal states (⊗ vacuum): F = 1/(√((1+n₁)(1+n₂)) - √(n₁n₂)).
        let th = |n: f64| {
            let mut cov = Matrix4::identity() * 0.5;
            cov[(0, 0)] = n + 0.5;
            cov[(1, 1)] = n + 0.5;
            GaussianState::new(cov, Vector4::zeros()).unwrap()
        };
        let (n1, n2) = (0.4f64, 1.3f64);
        let expected = 1.0 / (((1.0 + n1) * (1.0 + n2)).sqrt() - (n1 * n2).sqrt());
        assert_abs_diff_eq!(bures_fidelity(&th(n1), &th(n2)).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn lossless_closed_forms() {
        let s = ResourceSpec::tmsv(0.8).unwrap();
        let q = qfi_closed(&s, &LossModel::lossless()).unwrap();
        assert_relative_eq!(q.qfi, 2.0 * (1.6f64).sinh().powi(2), max_relative = 1e-14);
        assert_relative_eq!(q.qfi * q.qcrb, 1.0, max_relative = 1e-14);
        let c = ResourceSpec::csv(1.3, 0.4).unwrap();
        let (a, r) = (1.3f64, 0.4f64);
        let eq9 = a * a * (2.0 * r).exp() + r.sinh().powi(2) + a * a + (2.0 * r).sinh().powi(2) / 2.0;
        let sym = qfi_closed(&c, &LossModel::symmetric(1.0).unwrap()).unwrap().qfi;
        let one = qfi_closed(&c, &LossModel::one_arm(1.0).unwrap()).unwrap().qfi;
        assert_relative_eq!(sym, eq9, max_relative = 1e-13);
        assert_relative_eq!(one, eq9, max_relative = 1e-13);
    }

    #[test]
    fn tmsv_symmetric_formula() {
        let (s, eta) = (1.2f64, 0.75f64);
        let q = qfi_closed(&ResourceSpec::tmsv(s).unwrap(), &LossModel::symmetric(eta).unwrap()).unwrap();
        let expected = 2.0 * eta * eta * (2.0 * s).sinh().powi(2) / (1.0 + 2.0 * eta * (1.0 - eta) * s.sinh().powi(2));
        assert_relative_eq!(q.qfi, expected, max_relative = 1e-14);
    }

    #[test]
    fn unsupported_csv_pattern() {
        let err = qfi_closed(&ResourceSpec::csv(1.0, 1.0).unwrap(), &LossModel::new(0.8, 0.9).unwrap());
        assert!(matches!(err, Err(Error::UnsupportedConfiguration(_))));
        // falls back to the numeric route
        let q = qfi(&ResourceSpec::csv(1.0, 1.0).unwrap(), &LossModel::new(0.8, 0.9).unwrap()).unwrap();
        assert_eq!(q.method, QfiMethod::NumericFidelity);
        assert!(q.qfi > 0.0);
    }

    #[test]
    fn snl_values() {
        assert_abs_diff_eq!(snl(10.0).unwrap(), 0.05);
        assert_abs_diff_eq!(snl(7.0).unwrap(), 1.0 / 14.0);
        assert_abs_diff_eq!(snl(0.5).unwrap(), 1.0);
        assert!(snl(0.0).is_err());
        assert!(snl(-2.0).is_err());
    }

    #[test]
    fn bad_step_rejected() {
        let s = ResourceSpec::tmsv(0.5).unwrap();
        assert!(qfi_numeric(&s, 0.0, &LossModel::lossless(), 0.0).is_err());
        assert!(qfi_numeric(&s, 0.0, &LossModel::lossless(), -1e-3).is_err());
    }
}
