//! Estimator-level phase sensitivity by error propagation,
//! `Δ²φ = Var(O) / |∂⟨O⟩/∂φ|²`, for parity and homodyne observables.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{GaussianState, Mode, Quadrature, SingleModeState};
use crate::interferometer::{Interferometer, InterferometerConfig};

/// Central-difference step for signal slopes.
pub const SLOPE_STEP: f64 = 1e-5;

/// Slopes below this magnitude are reported as degenerate working points.
pub const MIN_SLOPE: f64 = 1e-10;

/// Observable measured at the interferometer output. Angles are local
/// oscillator phases, `X_θ = cos θ X + sin θ P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Observable {
    /// Photon-number parity `(-1)^{a†a}` of output mode a.
    ParityA,
    QuadratureA {
        angle: f64,
    },
    QuadratureSquaredA {
        angle: f64,
    },
    /// `X_θa X_θb`.
    ProductQuadAB {
        angle_a: f64,
        angle_b: f64,
    },
    /// `X_θa + X_θb`.
    SumQuadAB {
        angle_a: f64,
        angle_b: f64,
    },
}

fn wrap_angle(a: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(invalid(format!("angle {a} is not finite")));
    }
    Ok(a.rem_euclid(TAU))
}

impl Observable {
    pub fn quadrature_a(angle: f64) -> Result<Self> {
        Ok(Observable::QuadratureA { angle: wrap_angle(angle)? })
    }

    pub fn quadrature_squared_a(angle: f64) -> Result<Self> {
        Ok(Observable::QuadratureSquaredA { angle: wrap_angle(angle)? })
    }

    pub fn product_ab(angle_a: f64, angle_b: f64) -> Result<Self> {
        Ok(Observable::ProductQuadAB { angle_a: wrap_angle(angle_a)?, angle_b: wrap_angle(angle_b)? })
    }

    pub fn sum_ab(angle_a: f64, angle_b: f64) -> Result<Self> {
        Ok(Observable::SumQuadAB { angle_a: wrap_angle(angle_a)?, angle_b: wrap_angle(angle_b)? })
    }

    /// `P_a`.
    pub fn p_a() -> Self {
        Observable::QuadratureA { angle: std::f64::consts::FRAC_PI_2 }
    }

    /// `X_a²`.
    pub fn x_a_squared() -> Self {
        Observable::QuadratureSquaredA { angle: 0.0 }
    }

    /// `X_a X_b`.
    pub fn x_a_x_b() -> Self {
        Observable::ProductQuadAB { angle_a: 0.0, angle_b: 0.0 }
    }

    /// `⟨O⟩` and `⟨O²⟩ - ⟨O⟩²` on a two-mode Gaussian state.
    pub fn moments(&self, state: &GaussianState) -> Result<(f64, f64)> {
        use Quadrature::{Xa, Xb};
        match *self {
            Observable::ParityA => {
                let p = parity_expectation(&state.reduce_to_mode(Mode::A))?;
                Ok((p, 1.0 - p * p))
            }
            Observable::QuadratureA { angle } => {
                let rot = local_rotation(angle, 0.0, state);
                let m1 = rot.symmetric_moment(&[Xa])?;
                let m2 = rot.symmetric_moment(&[Xa, Xa])?;
                Ok((m1, m2 - m1 * m1))
            }
            Observable::QuadratureSquaredA { angle } => {
                let rot = local_rotation(angle, 0.0, state);
                let m2 = rot.symmetric_moment(&[Xa, Xa])?;
                let m4 = rot.symmetric_moment(&[Xa, Xa, Xa, Xa])?;
                Ok((m2, m4 - m2 * m2))
            }
            Observable::ProductQuadAB { angle_a, angle_b } => {
                let rot = local_rotation(angle_a, angle_b, state);
                let m = rot.symmetric_moment(&[Xa, Xb])?;
                let m4 = rot.symmetric_moment(&[Xa, Xa, Xb, Xb])?;
                Ok((m, m4 - m * m))
            }
            Observable::SumQuadAB { angle_a, angle_b } => {
                let rot = local_rotation(angle_a, angle_b, state);
                let signal = rot.symmetric_moment(&[Xa])? + rot.symmetric_moment(&[Xb])?;
                let var = rot.cov()[(0, 0)] + rot.cov()[(2, 2)] + 2.0 * rot.cov()[(0, 2)];
                Ok((signal, var))
            }
        }
    }

    /// Signal only; cheaper than [`Observable::moments`] for slopes.
    pub fn signal(&self, state: &GaussianState) -> Result<f64> {
        match *self {
            Observable::ParityA => parity_expectation(&state.reduce_to_mode(Mode::A)),
            Observable::QuadratureA { angle } => {
                let (s, c) = angle.sin_cos();
                Ok(c * state.mean()[0] + s * state.mean()[1])
            }
            _ => Ok(self.moments(state)?.0),
        }
    }
}

/// Rotate each mode so that the requested quadrature becomes `X`.
fn local_rotation(angle_a: f64, angle_b: f64, state: &GaussianState) -> GaussianState {
    let (sa, ca) = angle_a.sin_cos();
    let (sb, cb) = angle_b.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
         ca,  sa, 0.0, 0.0,
        -sa,  ca, 0.0, 0.0,
        0.0, 0.0,  cb,  sb,
        0.0, 0.0, -sb,  cb,
    );
    state.transform_unchecked(&m)
}

/// Outcome of error propagation at one working point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityResult {
    /// `Δ²φ = variance / slope²`.
    pub error: f64,
    pub signal: f64,
    pub variance: f64,
    pub slope: f64,
    pub phi: f64,
}

/// `⟨Π_a⟩ = π W(0,0) = exp(-½ dᵀγ⁻¹d) / (2 √det γ)`.
pub fn parity_expectation(mode_a: &SingleModeState) -> Result<f64> {
    let det = mode_a.cov().determinant();
    let inv: Matrix2<f64> = mode_a
        .cov()
        .try_inverse()
        .filter(|_| det > 0.0)
        .ok_or_else(|| Error::NumericFailure("single-mode covariance is singular".into()))?;
    let d: &Vector2<f64> = mode_a.mean();
    Ok((-0.5 * d.dot(&(inv * d))).exp() / (2.0 * det.sqrt()))
}

/// Richardson-refined central difference `(4 D(h/2) - D(h)) / 3`.
pub(crate) fn richardson_slope(mut f: impl FnMut(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let d = |f: &mut dyn FnMut(f64) -> Result<f64>, h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let coarse = d(&mut f, h)?;
    let fine = d(&mut f, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Error propagation for `obs` at working point `phi` on a prepared pipeline.
pub fn sensitivity_at(ifm: &Interferometer, obs: &Observable, phi: f64) -> Result<SensitivityResult> {
    let (signal, variance) = obs.moments(&ifm.output(phi))?;
    let slope = richardson_slope(|p| obs.signal(&ifm.output(p)), phi, SLOPE_STEP)?;
    finish(signal, variance, slope, phi)
}

fn finish(signal: f64, variance: f64, slope: f64, phi: f64) -> Result<SensitivityResult> {
    if !(slope.abs() >= MIN_SLOPE) {
        return Err(Error::DegenerateWorkingPoint { phi, slope });
    }
    Ok(SensitivityResult { error: variance / (slope * slope), signal, variance, slope, phi })
}

pub fn parity_sensitivity(cfg: &InterferometerConfig) -> Result<SensitivityResult> {
    let ifm = Interferometer::new(cfg.resource, cfg.loss)?;
    sensitivity_at(&ifm, &Observable::ParityA, cfg.phi)
}

/// Homodyne observables only; parity is rejected.
pub fn homodyne_sensitivity(cfg: &InterferometerConfig, obs: &Observable) -> Result<SensitivityResult> {
    if matches!(obs, Observable::ParityA) {
        return Err(invalid("parity is not a homodyne observable; use parity_sensitivity"));
    }
    let ifm = Interferometer::new(cfg.resource, cfg.loss)?;
    sensitivity_at(&ifm, obs, cfg.phi)
}

/// `X_θa + X_θb` measured by two homodyne detectors.
pub fn double_hd_csv_sensitivity(cfg: &InterferometerConfig, angle_a: f64, angle_b: f64) -> Result<SensitivityResult> {
    homodyne_sensitivity(cfg, &Observable::sum_ab(angle_a, angle_b)?)
}

/// Covariance, mean and mean-slope at a working point. Every linear
/// observable `uᵀR` has signal `uᵀd`, variance `uᵀγu` and slope `uᵀ∂d`.
#[derive(Debug, Clone)]
pub struct LinearResponse {
    pub cov: Matrix4<f64>,
    pub mean: Vector4<f64>,
    pub mean_slope: Vector4<f64>,
    pub phi: f64,
}

impl LinearResponse {
    pub fn at(ifm: &Interferometer, phi: f64) -> Self {
        let state = ifm.output(phi);
        let h = SLOPE_STEP;
        let diff = |h: f64| (ifm.output(phi + h).mean() - ifm.output(phi - h).mean()) / (2.0 * h);
        let mean_slope = (diff(0.5 * h) * 4.0 - diff(h)) / 3.0;
        Self { cov: *state.cov(), mean: *state.mean(), mean_slope, phi }
    }

    /// Error propagation for `X_θa + X_θb`.
    pub fn sum_quadrature(&self, angle_a: f64, angle_b: f64) -> Result<SensitivityResult> {
        let (sa, ca) = angle_a.sin_cos();
        let (sb, cb) = angle_b.sin_cos();
        let u = Vector4::new(ca, sa, cb, sb);
        finish(u.dot(&self.mean), u.dot(&(self.cov * u)), u.dot(&self.mean_slope), self.phi)
    }
}
