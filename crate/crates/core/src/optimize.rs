//! Working-point, energy-split and angle optimization, SNL thresholds and
//! parameter sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::interferometer::{Interferometer, LossKind, LossModel};
use crate::measurements::{sensitivity_at, LinearResponse, Observable, SensitivityResult};
use crate::qfi::{qfi, snl};
use crate::resource::{ResourceKind, ResourceSpec};

/// Coarse grid used by [`optimal_phi`].
pub const PHI_GRID: usize = 720;
pub const PHI_TOL: f64 = 1e-8;
pub const MU_TOL: f64 = 1e-6;
/// Bracket width at which [`snl_threshold`] stops bisecting.
pub const THRESHOLD_TOL: f64 = 1e-3;
/// Relative band around the SNL counted as not beating it, so that a
/// coherent state does not cross by rounding.
pub const SNL_MARGIN: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub x: f64,
    pub value: f64,
}

/// Minimize a unimodal `f` on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Optimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        Optimum { x: c, value: fc }
    } else {
        Optimum { x: d, value: fd }
    }
}

/// Degenerate working points count as +∞; anything else is a real failure.
fn skip_degenerate(v: Result<f64>) -> Result<f64> {
    match v {
        Ok(x) if x.is_nan() => Ok(f64::INFINITY),
        Ok(x) => Ok(x),
        Err(Error::DegenerateWorkingPoint { .. }) | Err(Error::NoOptimum) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Global minimum of a periodic `f` on `[lo, lo + period)`: a `grid`-point
/// scan followed by golden refinement of the most promising local minima.
pub fn minimize_periodic(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    period: f64,
    grid: usize,
    tol: f64,
    candidates: usize,
) -> Result<Optimum> {
    if grid < 3 || !(period > 0.0) {
        return Err(invalid("periodic search needs at least 3 grid points and a positive period"));
    }
    let step = period / grid as f64;
    let mut values = Vec::with_capacity(grid);
    for k in 0..grid {
        values.push(skip_degenerate(f(lo + k as f64 * step))?);
    }
    let mut minima: Vec<usize> = (0..grid)
        .filter(|&k| {
            let v = values[k];
            v.is_finite() && v <= values[(k + grid - 1) % grid] && v <= values[(k + 1) % grid]
        })
        .collect();
    if minima.is_empty() {
        // plateaus of +∞ around every finite point; fall back to the best one
        match (0..grid).filter(|&k| values[k].is_finite()).min_by(|&i, &j| values[i].total_cmp(&values[j])) {
            Some(k) => minima.push(k),
            None => return Err(Error::NoOptimum),
        }
    }
    minima.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    minima.truncate(candidates.max(1));

    let mut best = Optimum { x: lo + minima[0] as f64 * step, value: values[minima[0]] };
    let mut failure = None;
    for &k in &minima {
        let x0 = lo + k as f64 * step;
        let opt = golden_section(
            |x| match skip_degenerate(f(x)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            x0 - step,
            x0 + step,
            tol,
        );
        if opt.value < best.value {
            best = opt;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    best = polish(&mut f, best)?;
    best.x = lo + (best.x - lo).rem_euclid(period);
    Ok(best)
}

/// Offset of the symmetric samples used by [`polish`].
const POLISH_STEP: f64 = 5e-4;

/// Re-estimate a minimum value from symmetric samples `x ± δ, ±2δ, ±4δ`.
///
/// Several optima are removable 0/0 limits at a working point where both
/// the variance and the slope vanish; right at such a point the ratio is
/// dominated by rounding. The even part `g(δ) = (f(x+δ) + f(x-δ))/2 =
/// f₀ + c₂δ² + c₄δ⁴ + …` is smooth there, and two Richardson steps
/// recover `f₀` to `O(δ⁶)`.
fn polish(f: &mut impl FnMut(f64) -> Result<f64>, best: Optimum) -> Result<Optimum> {
    let mut sample = |x: f64, h: f64| -> Result<Option<(f64, f64)>> {
        let (p, m) = (skip_degenerate(f(x + h))?, skip_degenerate(f(x - h))?);
        Ok((p.is_finite() && m.is_finite()).then_some((0.5 * (p + m), 0.5 * (p - m) / h)))
    };
    let mut x = best.x;
    let mut levels = [(0.0, 0.0); 3];
    for pass in 0..2 {
        for (k, level) in levels.iter_mut().enumerate() {
            match sample(x, POLISH_STEP * (1 << k) as f64)? {
                Some(v) => *level = v,
                None => return Ok(best),
            }
        }
        if pass == 1 {
            break;
        }
        // move to the vertex of the local parabola before extrapolating
        let (g1, d1) = levels[0];
        let (g2, _) = levels[1];
        let curvature = 2.0 * (g2 - g1) / (3.0 * POLISH_STEP * POLISH_STEP);
        if !(curvature > 0.0) {
            return Ok(best);
        }
        let shift = -d1 / curvature;
        if shift.abs() >= POLISH_STEP {
            return Ok(best);
        }
        x += shift;
    }
    let [g1, g2, g4] = levels.map(|l| l.0);
    let r1 = (4.0 * g1 - g2) / 3.0;
    let r2 = (4.0 * g2 - g4) / 3.0;
    let value = (16.0 * r1 - r2) / 15.0;
    if !(value.is_finite() && value > 0.0 && value <= g1) || value < 0.5 * best.value {
        return Ok(best);
    }
    Ok(Optimum { x, value })
}

/// Optimal working point `φ*` on `[lo, lo + 2π)`.
pub fn optimal_phi(f: impl FnMut(f64) -> Result<f64>, lo: f64) -> Result<Optimum> {
    optimal_phi_with_grid(f, lo, PHI_GRID)
}

pub fn optimal_phi_with_grid(f: impl FnMut(f64) -> Result<f64>, lo: f64, grid: usize) -> Result<Optimum> {
    minimize_periodic(f, lo, TAU, grid, PHI_TOL, 4)
}

/// Coarse φ grid for the CSV double-homodyne sum. Its profile is already
/// minimized over both angles and has no features narrower than ~π/10.
pub const PHI_GRID_SUM_QUADRATURE: usize = 90;

/// Bounded minimization on `[lo, hi]`: grid of `grid` points, then golden
/// refinement around the best one.
pub fn minimize_bounded(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Result<Optimum> {
    if !(lo < hi) || grid < 2 {
        return Err(invalid(format!("bad bounded search [{lo}, {hi}] with {grid} points")));
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best: Option<Optimum> = None;
    for k in 0..grid {
        let x = lo + k as f64 * step;
        let v = skip_degenerate(f(x))?;
        if v.is_finite() && best.is_none_or(|b| v < b.value) {
            best = Some(Optimum { x, value: v });
        }
    }
    let coarse = best.ok_or(Error::NoOptimum)?;
    let mut failure = None;
    let fine = golden_section(
        |x| match skip_degenerate(f(x)) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        (coarse.x - step).max(lo),
        (coarse.x + step).min(hi),
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // the golden probes never touch the bracket ends, so keep an endpoint optimum
    Ok(if fine.value < coarse.value { fine } else { coarse })
}

/// Squeezed fraction `μ*` maximizing the CSV QFI at fixed `nbar`.
pub fn optimal_csv_ratio(nbar: f64, loss: &LossModel) -> Result<(f64, f64)> {
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(invalid(format!("nbar = {nbar} must be positive")));
    }
    let opt =
        minimize_bounded(|mu| Ok(-qfi(&ResourceSpec::csv_with_ratio(nbar, mu)?, loss)?.qfi), 0.0, 1.0, 101, MU_TOL)?;
    Ok((opt.x, -opt.value))
}

/// `X_θa + X_θb` with both local-oscillator angles optimized. Returns the
/// angles and the resulting sensitivity.
pub fn optimal_sum_angles(lin: &LinearResponse) -> Result<(f64, f64, SensitivityResult)> {
    // u → -u leaves the ratio unchanged, so θa ∈ [0, π) suffices
    const NA: usize = 8;
    const NB: usize = 16;
    let eval = |a: f64, b: f64| skip_degenerate(lin.sum_quadrature(a, b).map(|r| r.error)).unwrap_or(f64::INFINITY);
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(NA * NB);
    for i in 0..NA {
        for j in 0..NB {
            let (a, b) = (i as f64 * PI / NA as f64, j as f64 * TAU / NB as f64);
            grid.push((eval(a, b), a, b));
        }
    }
    grid.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &(v0, a0, b0) in grid.iter().take(2) {
        if !v0.is_finite() {
            continue;
        }
        let (v, a, b) = newton_2d(eval, (a0, b0), v0);
        if v < best.0 {
            best = (v, a, b);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::DegenerateWorkingPoint { phi: lin.phi, slope: 0.0 });
    }
    let (a, b) = (best.1.rem_euclid(TAU), best.2.rem_euclid(TAU));
    Ok((a, b, lin.sum_quadrature(a, b)?))
}

/// Damped Newton descent in two variables with finite-difference
/// derivatives. Falls back to gradient steps where the Hessian is not
/// positive definite. Returns `(value, x, y)`.
fn newton_2d(f: impl Fn(f64, f64) -> f64, start: (f64, f64), f0: f64) -> (f64, f64, f64) {
    const H: f64 = 1e-4;
    let (mut x, mut y, mut v) = (start.0, start.1, f0);
    for _ in 0..60 {
        let (fxp, fxm) = (f(x + H, y), f(x - H, y));
        let (fyp, fym) = (f(x, y + H), f(x, y - H));
        let (fpp, fpm, fmp, fmm) = (f(x + H, y + H), f(x + H, y - H), f(x - H, y + H), f(x - H, y - H));
        let g = [(fxp - fxm) / (2.0 * H), (fyp - fym) / (2.0 * H)];
        let hxx = (fxp - 2.0 * v + fxm) / (H * H);
        let hyy = (fyp - 2.0 * v + fym) / (H * H);
        let hxy = (fpp - fpm - fmp + fmm) / (4.0 * H * H);
        if !(g[0].is_finite() && g[1].is_finite() && hxx.is_finite() && hyy.is_finite() && hxy.is_finite()) {
            break;
        }
        let det = hxx * hyy - hxy * hxy;
        let mut step = if hxx > 0.0 && det > 0.0 {
            [-(hyy * g[0] - hxy * g[1]) / det, -(hxx * g[1] - hxy * g[0]) / det]
        } else {
            let scale = 1e-2 / g[0].hypot(g[1]).max(f64::MIN_POSITIVE);
            [-g[0] * scale, -g[1] * scale]
        };
        let mut accepted = false;
        for _ in 0..30 {
            let trial = f(x + step[0], y + step[1]);
            if trial <= v {
                x += step[0];
                y += step[1];
                v = trial;
                accepted = true;
                break;
            }
            step = [0.5 * step[0], 0.5 * step[1]];
        }
        if !accepted || step[0].hypot(step[1]) < 1e-11 {
            break;
        }
    }
    (v, x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Quantum Cramér-Rao bound.
    Qfi,
    /// Parity of output mode a.
    Parity,
    SingleHd,
    DoubleHd,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Qfi, Scheme::Parity, Scheme::SingleHd, Scheme::DoubleHd];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Qfi => "qfi",
            Scheme::Parity => "parity",
            Scheme::SingleHd => "single-hd",
            Scheme::DoubleHd => "double-hd",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "qfi" | "qcrb" => Ok(Scheme::Qfi),
            "parity" => Ok(Scheme::Parity),
            "single-hd" | "shd" => Ok(Scheme::SingleHd),
            "double-hd" | "dhd" => Ok(Scheme::DoubleHd),
            other => Err(invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

/// How the CSV energy split is chosen at each point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MuMode {
    /// Re-optimized for every loss rate and photon number.
    Optimized,
    /// Optimized once without loss, then held fixed.
    LosslessOptimum,
    Fixed(f64),
}

/// Observable a measurement scheme uses for a resource. `None` for the QFI
/// and for the CSV double-homodyne sum, whose angles are optimized per point.
pub fn scheme_observable(scheme: Scheme, kind: ResourceKind) -> Option<Observable> {
    match (scheme, kind) {
        (Scheme::Qfi, _) => None,
        (_, ResourceKind::Coherent) => Some(Observable::p_a()),
        (Scheme::Parity, _) => Some(Observable::ParityA),
        (Scheme::SingleHd, ResourceKind::Csv) => Some(Observable::p_a()),
        (Scheme::SingleHd, ResourceKind::Tmsv) => Some(Observable::x_a_squared()),
        (Scheme::DoubleHd, ResourceKind::Csv) => None,
        (Scheme::DoubleHd, ResourceKind::Tmsv) => Some(Observable::x_a_x_b()),
    }
}

/// Best sensitivity of a scheme for one fully specified resource.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub delta2phi: f64,
    /// `None` for the phase-independent QFI.
    pub phi_star: Option<f64>,
    /// Squeezed fraction, CSV only.
    pub mu: Option<f64>,
    /// Local-oscillator angles of the CSV double-homodyne sum.
    pub angles: Option<(f64, f64)>,
}

/// φ-optimized sensitivity of `scheme` for a fixed resource.
pub fn scheme_estimate(scheme: Scheme, resource: &ResourceSpec, loss: &LossModel) -> Result<PointEstimate> {
    let mu = resource.squeezed_fraction();
    if scheme == Scheme::Qfi {
        let q = qfi(resource, loss)?;
        if !(q.qfi > 0.0) {
            return Err(Error::NoOptimum);
        }
        return Ok(PointEstimate { delta2phi: q.qcrb, phi_star: None, mu, angles: None });
    }
    let ifm = Interferometer::new(*resource, *loss)?;
    match scheme_observable(scheme, resource.kind) {
        Some(obs) => {
            let opt = optimal_phi(|phi| sensitivity_at(&ifm, &obs, phi).map(|r| r.error), 0.0)?;
            Ok(PointEstimate { delta2phi: opt.value, phi_star: Some(opt.x), mu, angles: None })
        }
        None => {
            let opt = optimal_phi_with_grid(
                |phi| Ok(optimal_sum_angles(&LinearResponse::at(&ifm, phi))?.2.error),
                0.0,
                PHI_GRID_SUM_QUADRATURE,
            )?;
            let (a, b, r) = optimal_sum_angles(&LinearResponse::at(&ifm, opt.x))?;
            Ok(PointEstimate { delta2phi: r.error, phi_star: Some(opt.x), mu, angles: Some((a, b)) })
        }
    }
}

/// Grid size and tolerance of the μ search inside measurement schemes.
const MU_GRID_MEASUREMENT: usize = 21;
const MU_TOL_MEASUREMENT: f64 = 1e-4;

/// μ minimizing a scheme's error at fixed `nbar` and loss (CSV only).
pub fn optimal_scheme_ratio(scheme: Scheme, nbar: f64, loss: &LossModel) -> Result<PointEstimate> {
    if scheme == Scheme::Qfi {
        let (mu, q) = optimal_csv_ratio(nbar, loss)?;
        return Ok(PointEstimate { delta2phi: 1.0 / q, phi_star: None, mu: Some(mu), angles: None });
    }
    let opt = minimize_bounded(
        |mu| Ok(scheme_estimate(scheme, &ResourceSpec::csv_with_ratio(nbar, mu)?, loss)?.delta2phi),
        0.0,
        1.0,
        MU_GRID_MEASUREMENT,
        MU_TOL_MEASUREMENT,
    )?;
    scheme_estimate(scheme, &ResourceSpec::csv_with_ratio(nbar, opt.x)?, loss)
}

/// Sensitivity of `scheme` with a `kind` resource of `nbar` photons.
pub fn evaluate_point(
    scheme: Scheme,
    kind: ResourceKind,
    nbar: f64,
    loss: &LossModel,
    mu: MuMode,
) -> Result<PointEstimate> {
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(invalid(format!("nbar = {nbar} must be positive")));
    }
    if kind != ResourceKind::Csv {
        return scheme_estimate(scheme, &ResourceSpec::with_nbar(kind, nbar, 0.0)?, loss);
    }
    match mu {
        MuMode::Optimized => optimal_scheme_ratio(scheme, nbar, loss),
        MuMode::LosslessOptimum => {
            let mu0 = optimal_scheme_ratio(scheme, nbar, &LossModel::lossless())?.mu.unwrap_or(1.0);
            scheme_estimate(scheme, &ResourceSpec::csv_with_ratio(nbar, mu0)?, loss)
        }
        MuMode::Fixed(m) => scheme_estimate(scheme, &ResourceSpec::csv_with_ratio(nbar, m)?, loss),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Loss rate `1 - η` at which the sensitivity crosses the SNL.
    pub loss_rate: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdOutcome {
    Crossing(ThresholdResult),
    /// Already at or above the SNL without loss.
    AboveAtZeroLoss,
    /// Below the SNL on every scanned loss rate.
    NeverAbove,
}

impl ThresholdOutcome {
    pub fn loss_rate(&self) -> Option<f64> {
        match self {
            ThresholdOutcome::Crossing(t) => Some(t.loss_rate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    pub mu: MuMode,
    /// Scan step over the loss rate before bisection.
    pub scan_step: f64,
    pub tol: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self { mu: MuMode::Optimized, scan_step: 0.05, tol: THRESHOLD_TOL }
    }
}

/// Smallest loss rate at which `scheme` stops beating the SNL.
///
/// The loss rate is scanned upward from zero; the first interval in which
/// the error rises above `1/(2 n̄)` is then bisected.
pub fn snl_threshold(
    scheme: Scheme,
    kind: ResourceKind,
    nbar: f64,
    loss_kind: LossKind,
    opts: &ThresholdOptions,
) -> Result<ThresholdOutcome> {
    if !(opts.scan_step > 0.0 && opts.tol > 0.0) {
        return Err(invalid("scan step and tolerance must be positive"));
    }
    let limit = snl(nbar)?;
    let mu = match (kind, opts.mu) {
        (ResourceKind::Csv, MuMode::LosslessOptimum) => {
            MuMode::Fixed(optimal_scheme_ratio(scheme, nbar, &LossModel::lossless())?.mu.unwrap_or(1.0))
        }
        (_, m) => m,
    };
    let above = |rate: f64| -> Result<bool> {
        if rate >= 1.0 {
            return Ok(true);
        }
        let loss = LossModel::from_rate(loss_kind, rate)?;
        let v = skip_degenerate(evaluate_point(scheme, kind, nbar, &loss, mu).map(|p| p.delta2phi))?;
        Ok(v >= limit * (1.0 - SNL_MARGIN))
    };
    if above(0.0)? {
        return Ok(ThresholdOutcome::AboveAtZeroLoss);
    }
    let mut lo = 0.0;
    let mut hi = None;
    let mut iterations = 1;
    while lo < 1.0 {
        let next = (lo + opts.scan_step).min(1.0);
        iterations += 1;
        if above(next)? {
            hi = Some(next);
            break;
        }
        lo = next;
    }
    let Some(mut hi) = hi else {
        return Ok(ThresholdOutcome::NeverAbove);
    };
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdOutcome::Crossing(ThresholdResult { loss_rate: 0.5 * (lo + hi), bracket: (lo, hi), iterations }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    LossRate,
    MeanPhotonNumber,
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "loss" | "loss-rate" | "rate" => Ok(SweepVariable::LossRate),
            "nbar" | "n" | "mean-photon-number" => Ok(SweepVariable::MeanPhotonNumber),
            other => Err(invalid(format!("unknown sweep variable '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Photon number when sweeping the loss rate.
    pub nbar: f64,
    /// Loss rate when sweeping the photon number.
    pub loss_rate: f64,
    pub loss_kind: LossKind,
    pub schemes: Vec<Scheme>,
    pub resources: Vec<ResourceKind>,
    pub mu: MuMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(invalid(format!("sweep range [{}, {}] is empty", self.lo, self.hi)));
        }
        if self.points < 2 {
            return Err(invalid("a sweep needs at least 2 points"));
        }
        if self.schemes.is_empty() || self.resources.is_empty() {
            return Err(invalid("a sweep needs at least one scheme and one resource"));
        }
        match self.variable {
            SweepVariable::LossRate if self.lo < 0.0 || self.hi > 1.0 => {
                Err(invalid("loss-rate sweeps must stay inside [0, 1]"))
            }
            SweepVariable::MeanPhotonNumber if self.lo <= 0.0 => Err(invalid("photon-number sweeps need nbar > 0")),
            _ => Ok(()),
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|k| if k == n { self.hi } else { self.lo + (self.hi - self.lo) * k as f64 / n as f64 })
            .collect()
    }
}

/// One sweep cell. Failures are kept per row as `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub scheme: Scheme,
    pub resource: ResourceKind,
    pub nbar: f64,
    pub loss_kind: LossKind,
    pub loss_rate: f64,
    pub snl: f64,
    pub estimate: std::result::Result<PointEstimate, String>,
}

/// Evaluate every (grid point, scheme, resource) cell. Rows come back in
/// grid order, then scheme order, then resource order, whatever the thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut cells = Vec::new();
    for (index, x) in spec.grid().into_iter().enumerate() {
        for &scheme in &spec.schemes {
            for &resource in &spec.resources {
                cells.push((index, x, scheme, resource));
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(index, x, scheme, resource)| {
            let (nbar, loss_rate) = match spec.variable {
                SweepVariable::LossRate => (spec.nbar, x),
                SweepVariable::MeanPhotonNumber => (x, spec.loss_rate),
            };
            let loss = LossModel::from_rate(spec.loss_kind, loss_rate)?;
            let estimate = evaluate_point(scheme, resource, nbar, &loss, spec.mu).map_err(|e| e.to_string());
            Ok(SweepRow {
                index,
                scheme,
                resource,
                nbar,
                loss_kind: spec.loss_kind,
                loss_rate,
                snl: snl(nbar)?,
                estimate,
            })
        })
        .collect()
}
