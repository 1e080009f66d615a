//! Library side of the `mzi-lab` command line: presets, record formatting and
//! the command bodies, kept here so tests can drive them without a process.

pub mod output;
pub mod presets;
pub mod validate;

use mzi_core::interferometer::{LossKind, LossModel};
use mzi_core::optimize::{evaluate_point, run_sweep, snl_threshold, MuMode, Scheme, SweepSpec, ThresholdOptions};
use mzi_core::qfi::snl;
use mzi_core::resource::ResourceKind;
use mzi_core::{Error, Result};

use output::{OutputRecord, ThresholdRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "MZI_LAB_THREADS";

/// Bad input maps to a usage error, everything else to a numeric failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::UnsupportedConfiguration(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

pub fn point(
    scheme: Scheme,
    resource: ResourceKind,
    nbar: f64,
    loss_kind: LossKind,
    rate: f64,
    mu: MuMode,
) -> Result<OutputRecord> {
    let loss = LossModel::from_rate(loss_kind, rate)?;
    let limit = snl(nbar)?;
    let est = evaluate_point(scheme, resource, nbar, &loss, mu)?;
    Ok(OutputRecord::new(scheme, resource, nbar, loss_kind, rate, limit, Ok(&est)))
}

/// Rows of every sweep in order. Cells that fail keep their message in `status`.
pub fn sweep(specs: &[SweepSpec]) -> Result<Vec<OutputRecord>> {
    let mut out = Vec::new();
    for spec in specs {
        out.extend(run_sweep(spec)?.iter().map(OutputRecord::from));
    }
    Ok(out)
}

pub fn threshold(
    scheme: Scheme,
    resource: ResourceKind,
    nbar: f64,
    loss_kind: LossKind,
    mu: MuMode,
) -> Result<ThresholdRecord> {
    let opts = ThresholdOptions { mu, ..ThresholdOptions::default() };
    let outcome = snl_threshold(scheme, resource, nbar, loss_kind, &opts)?;
    Ok(ThresholdRecord { scheme, resource, nbar, loss_kind, outcome })
}

/// `None` selects per-point optimization, `Some(None)` the lossless optimum
/// held fixed and `Some(Some(μ))` a fixed ratio.
pub fn mu_mode(fixed: Option<Option<f64>>) -> Result<MuMode> {
    match fixed {
        None => Ok(MuMode::Optimized),
        Some(None) => Ok(MuMode::LosslessOptimum),
        Some(Some(mu)) if (0.0..=1.0).contains(&mu) => Ok(MuMode::Fixed(mu)),
        Some(Some(mu)) => Err(Error::InvalidArgument(format!("--fixed-mu {mu} is outside [0, 1]"))),
    }
}

/// Thread count requested through [`THREADS_ENV`], if any.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV}={v} is not a positive integer"))),
        },
    }
}
