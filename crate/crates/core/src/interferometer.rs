//! Lossy Mach-Zehnder pipeline: splitter, per-arm loss, phase shift, splitter.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{beam_splitter, phase_shifter, GaussianState, Mode, SingleModeState};
use crate::resource::ResourceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    /// `η_a = η_b = η`.
    Symmetric,
    /// `η_a = η`, `η_b = 1`: loss only in the arm carrying the phase shift.
    OneArm,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Symmetric => "symmetric",
            LossKind::OneArm => "one-arm",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" | "sym" => Ok(LossKind::Symmetric),
            "one-arm" | "one_arm" | "onearm" => Ok(LossKind::OneArm),
            other => Err(invalid(format!("unknown loss kind '{other}'"))),
        }
    }
}

/// Transmissivities of the two interferometer arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    pub eta_a: f64,
    pub eta_b: f64,
}

fn transmissivity(name: &str, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid(format!("{name} = {eta} is outside [0, 1]")));
    }
    Ok(eta)
}

impl LossModel {
    pub fn new(eta_a: f64, eta_b: f64) -> Result<Self> {
        Ok(Self { eta_a: transmissivity("eta_a", eta_a)?, eta_b: transmissivity("eta_b", eta_b)? })
    }

    pub fn lossless() -> Self {
        Self { eta_a: 1.0, eta_b: 1.0 }
    }

    pub fn symmetric(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }

    pub fn one_arm(eta: f64) -> Result<Self> {
        Self::new(eta, 1.0)
    }

    /// Preset of the given kind at loss rate `1 - η`.
    pub fn from_rate(kind: LossKind, rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(invalid(format!("loss rate {rate} is outside [0, 1]")));
        }
        match kind {
            LossKind::Symmetric => Self::symmetric(1.0 - rate),
            LossKind::OneArm => Self::one_arm(1.0 - rate),
        }
    }

    /// Collapse a multi-stage loss budget into the two effective arm losses.
    ///
    /// Preparation and detection loss are shared by both arms; `arm_a` and
    /// `arm_b` list the in-arm stages. Loss commutes with the phase shift and
    /// with the balanced splitters, so the product of transmissivities is
    /// exact.
    pub fn from_stages(preparation: f64, arm_a: &[f64], arm_b: &[f64], detection: f64) -> Result<Self> {
        let shared = transmissivity("preparation", preparation)? * transmissivity("detection", detection)?;
        let mut eta_a = shared;
        for &t in arm_a {
            eta_a *= transmissivity("arm_a stage", t)?;
        }
        let mut eta_b = shared;
        for &t in arm_b {
            eta_b *= transmissivity("arm_b stage", t)?;
        }
        Self::new(eta_a, eta_b)
    }

    pub fn is_lossless(&self) -> bool {
        self.eta_a == 1.0 && self.eta_b == 1.0
    }

    /// Which preset (if any) this model matches. Lossless counts as both;
    /// it is reported as symmetric.
    pub fn kind(&self) -> Option<LossKind> {
        if self.eta_a == self.eta_b {
            Some(LossKind::Symmetric)
        } else if self.eta_b == 1.0 {
            Some(LossKind::OneArm)
        } else {
            None
        }
    }

    /// `1 - η_a`, the loss rate of the phase-carrying arm.
    pub fn rate(&self) -> f64 {
        1.0 - self.eta_a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub resource: ResourceSpec,
    pub phi: f64,
    pub loss: LossModel,
}

impl InterferometerConfig {
    pub fn new(resource: ResourceSpec, phi: f64, loss: LossModel) -> Self {
        Self { resource, phi, loss }
    }

    pub fn with_phi(&self, phi: f64) -> Self {
        Self { phi, ..*self }
    }
}

/// The φ-independent part of the pipeline, evaluated once.
///
/// [`Interferometer::output`] then only applies the phase shift and the
/// second splitter, which keeps working-point scans cheap.
#[derive(Debug, Clone)]
pub struct Interferometer {
    resource: ResourceSpec,
    loss: LossModel,
    inside: GaussianState,
}

impl Interferometer {
    pub fn new(resource: ResourceSpec, loss: LossModel) -> Result<Self> {
        let input = resource.input_state()?;
        let inside = input.apply_symplectic(&beam_splitter(FRAC_PI_4))?.apply_loss(loss.eta_a, loss.eta_b)?;
        Ok(Self { resource, loss, inside })
    }

    pub fn resource(&self) -> &ResourceSpec {
        &self.resource
    }

    pub fn loss(&self) -> &LossModel {
        &self.loss
    }

    /// State inside the arms, after the first splitter and the loss.
    pub fn internal_state(&self) -> &GaussianState {
        &self.inside
    }

    pub fn output(&self, phi: f64) -> GaussianState {
        let m = phase_shifter(phi).then(&beam_splitter(-FRAC_PI_4));
        self.inside.transform_unchecked(m.matrix())
    }
}

/// `B(-π/4) · P(φ) · N_loss · B(π/4)` applied to the input resource.
pub fn output_state(cfg: &InterferometerConfig) -> Result<GaussianState> {
    Ok(Interferometer::new(cfg.resource, cfg.loss)?.output(cfg.phi))
}

pub fn output_mode_a(cfg: &InterferometerConfig) -> Result<SingleModeState> {
    Ok(output_state(cfg)?.reduce_to_mode(Mode::A))
}
