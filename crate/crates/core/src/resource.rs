//! Input resources injected into the interferometer.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceKind {
    /// Coherent state in mode a, squeezed vacuum in mode b.
    Csv,
    /// Two-mode squeezed vacuum.
    Tmsv,
    /// Coherent state in mode a, vacuum in mode b.
    Coherent,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 3] = [ResourceKind::Csv, ResourceKind::Tmsv, ResourceKind::Coherent];

    pub fn name(self) -> &'static str {
        match self {
            ResourceKind::Csv => "csv",
            ResourceKind::Tmsv => "tmsv",
            ResourceKind::Coherent => "coherent",
        }
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResourceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ResourceKind::Csv),
            "tmsv" => Ok(ResourceKind::Tmsv),
            "coherent" | "coh" => Ok(ResourceKind::Coherent),
            other => Err(invalid(format!("unknown resource '{other}'"))),
        }
    }
}

/// Real, nonnegative resource parameters. All phases are fixed to zero.
///
/// `alpha` is the coherent amplitude, `r` the single-mode squeezing of mode
/// b and `s` the two-mode squeezing. Fields not used by `kind` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceSpec {
    pub kind: ResourceKind,
    pub alpha: f64,
    pub r: f64,
    pub s: f64,
}

fn nonneg(name: &str, v: f64) -> Result<f64> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(invalid(format!("{name} = {v} must be finite and nonnegative")));
    }
    Ok(v)
}

impl ResourceSpec {
    pub fn csv(alpha: f64, r: f64) -> Result<Self> {
        Ok(Self { kind: ResourceKind::Csv, alpha: nonneg("alpha", alpha)?, r: nonneg("r", r)?, s: 0.0 })
    }

    pub fn tmsv(s: f64) -> Result<Self> {
        Ok(Self { kind: ResourceKind::Tmsv, alpha: 0.0, r: 0.0, s: nonneg("s", s)? })
    }

    pub fn coherent(alpha: f64) -> Result<Self> {
        Ok(Self { kind: ResourceKind::Coherent, alpha: nonneg("alpha", alpha)?, r: 0.0, s: 0.0 })
    }

    /// CSV state with total energy `nbar` of which a fraction `mu` sits in the
    /// squeezed vacuum: `α² = (1-μ) n̄`, `sinh² r = μ n̄`.
    pub fn csv_with_ratio(nbar: f64, mu: f64) -> Result<Self> {
        nonneg("nbar", nbar)?;
        if !(0.0..=1.0).contains(&mu) {
            return Err(invalid(format!("squeezed fraction mu = {mu} is outside [0, 1]")));
        }
        Self::csv(((1.0 - mu) * nbar).sqrt(), (mu * nbar).sqrt().asinh())
    }

    /// TMSV with `2 sinh² s = nbar`.
    pub fn tmsv_with_nbar(nbar: f64) -> Result<Self> {
        Self::tmsv((nonneg("nbar", nbar)? / 2.0).sqrt().asinh())
    }

    pub fn coherent_with_nbar(nbar: f64) -> Result<Self> {
        Self::coherent(nonneg("nbar", nbar)?.sqrt())
    }

    /// Resource of the given kind carrying `nbar` photons. `mu` is only
    /// consulted for CSV states.
    pub fn with_nbar(kind: ResourceKind, nbar: f64, mu: f64) -> Result<Self> {
        match kind {
            ResourceKind::Csv => Self::csv_with_ratio(nbar, mu),
            ResourceKind::Tmsv => Self::tmsv_with_nbar(nbar),
            ResourceKind::Coherent => Self::coherent_with_nbar(nbar),
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        match self.kind {
            ResourceKind::Csv => self.alpha.powi(2) + self.r.sinh().powi(2),
            ResourceKind::Tmsv => 2.0 * self.s.sinh().powi(2),
            ResourceKind::Coherent => self.alpha.powi(2),
        }
    }

    /// Fraction of the energy carried by the squeezed vacuum (CSV only).
    pub fn squeezed_fraction(&self) -> Option<f64> {
        if self.kind != ResourceKind::Csv {
            return None;
        }
        let n = self.mean_photon_number();
        Some(if n > 0.0 { self.r.sinh().powi(2) / n } else { 0.0 })
    }

    fn validate(&self) -> Result<()> {
        nonneg("alpha", self.alpha)?;
        nonneg("r", self.r)?;
        nonneg("s", self.s)?;
        Ok(())
    }

    /// Two-mode Gaussian state injected into the interferometer.
    pub fn input_state(&self) -> Result<GaussianState> {
        self.validate()?;
        let coherent_mean = Vector4::new(std::f64::consts::SQRT_2 * self.alpha, 0.0, 0.0, 0.0);
        let state = match self.kind {
            ResourceKind::Coherent => GaussianState::from_parts(Matrix4::identity() * 0.5, coherent_mean),
            ResourceKind::Csv => {
                // mode b: P squeezed, X anti-squeezed
                let e = (2.0 * self.r).exp();
                let cov = Matrix4::from_diagonal(&Vector4::new(0.5, 0.5, 0.5 * e, 0.5 / e));
                GaussianState::from_parts(cov, coherent_mean)
            }
            ResourceKind::Tmsv => {
                let c = 0.5 * (2.0 * self.s).cosh();
                let sh = 0.5 * (2.0 * self.s).sinh();
                #[rustfmt::skip]
                let cov = Matrix4::new(
                     c, 0.0,  sh, 0.0,
                    0.0,   c, 0.0, -sh,
                     sh, 0.0,   c, 0.0,
                    0.0, -sh, 0.0,   c,
                );
                GaussianState::from_parts(cov, Vector4::zeros())
            }
        };
        Ok(state)
    }
}

pub fn make_input(spec: &ResourceSpec) -> Result<GaussianState> {
    spec.input_state()
}
