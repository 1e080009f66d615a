//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Items marked "known gap" are reproducible disagreements with reference
//! numbers. They print FAIL with the measured value; the process exits
//! nonzero only if a regular item fails or a known gap drifts from its
//! analysed value.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use mzi_core::interferometer::{LossKind, LossModel};
use mzi_core::optimize::{
    evaluate_point, optimal_csv_ratio, scheme_estimate, snl_threshold, MuMode, Scheme, ThresholdOptions,
};
use mzi_core::qfi::{qfi, qfi_numeric, snl, DEFAULT_DPHI};
use mzi_core::resource::{ResourceKind, ResourceSpec};
use mzi_lab::presets::FIGURES;
use mzi_lab::validate;

const QFI_REL_TOL: f64 = 1e-6;
const CLOSED_FORM_REL_TOL: f64 = 1e-6;
const ASYMPTOTE_REL_TOL: f64 = 0.01;
const THRESHOLD_TOL: f64 = 0.01;
const KNOWN_GAP_TOL: f64 = 0.003;
const MU_TOL: f64 = 1e-4;
const MU_ONE_ARM_FLOOR: f64 = 0.99;
const CRB_SLACK: f64 = 1e-9;
const ORACLE_CUTOFF: usize = 40;
/// Loss rates from which CSV must beat TMSV under homodyne detection.
const ROBUST_FROM: f64 = 0.25;

const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(10);
const C3_LIMIT: Duration = Duration::from_secs(120);
const C8_LIMIT: Duration = Duration::from_secs(300);

#[derive(Default)]
struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, what: &str, pass: bool, detail: String) {
        println!("{} {id:<4} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.unexpected.push(format!("{id} {what}"));
        }
    }

    /// A published number the model does not reproduce. `analysed` asserts the value we do get.
    fn known_gap(&mut self, id: &str, what: &str, pass: bool, analysed: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {id:<4} {what}: {detail} [known gap, analysed value {}]",
            if analysed { "holds" } else { "DRIFTED" }
        );
        if !analysed {
            self.unexpected.push(format!("{id} {what} (analysed value drifted)"));
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1(rep: &mut Report) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [1.0, 7.0, 10.0] {
        let csv =
            qfi_numeric(&ResourceSpec::csv_with_ratio(n, 1.0).unwrap(), 0.0, &LossModel::lossless(), DEFAULT_DPHI)
                .unwrap();
        let tmsv =
            qfi_numeric(&ResourceSpec::tmsv_with_nbar(n).unwrap(), 0.0, &LossModel::lossless(), DEFAULT_DPHI).unwrap();
        worst = worst.max(rel(csv.qfi, n * (2.0 * n + 3.0))).max(rel(tmsv.qfi, 2.0 * n * (n + 2.0)));
    }
    let t = start.elapsed();
    rep.check(
        "C1",
        "lossless QFI closed forms",
        worst <= QFI_REL_TOL && t < C1_LIMIT,
        format!("worst rel err {worst:.1e} (tol {QFI_REL_TOL:.0e}), {} (limit {})", secs(t), secs(C1_LIMIT)),
    );
}

fn csv_symmetric_squeezed_printed(eta: f64, sh: f64) -> f64 {
    eta * sh * (4.0 * eta - 1.0 + 2.0 * eta * eta * (3.0 - 2.0 * eta) * sh) / (1.0 + 2.0 * eta * (1.0 - eta) * sh)
}

fn csv_symmetric(eta: f64, alpha: f64, r: f64, printed: bool) -> f64 {
    let sh = r.sinh().powi(2);
    let squeezed = if printed {
        csv_symmetric_squeezed_printed(eta, sh)
    } else {
        eta * sh * (1.0 + 2.0 * eta + (4.0 * eta - 2.0 * eta * eta) * sh) / (1.0 + 2.0 * eta * (1.0 - eta) * sh)
    };
    squeezed + 2.0 * alpha * alpha * eta * (r.exp() - eta * r.sinh()) / (r.exp() - 2.0 * eta * r.sinh())
}

fn csv_one_arm(eta: f64, alpha: f64, r: f64) -> f64 {
    2.0 * eta
        * (r.sinh().powi(2) / (1.0 + eta)
            + alpha * alpha * r.cosh() / (r.cosh() - eta * r.sinh())
            + eta * (2.0 * r).sinh().powi(2) / (3.0 + eta * eta + (1.0 - eta * eta) * (2.0 * r).cosh()))
}

fn tmsv_lossy(eta: f64, s: f64) -> f64 {
    2.0 * eta * eta * (2.0 * s).sinh().powi(2) / (1.0 + 2.0 * eta * (1.0 - eta) * s.sinh().powi(2))
}

fn criterion_2(rep: &mut Report) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut printed_worst: f64 = 0.0;
    let mut gap_is_analysed = true;
    for eta in [0.5, 0.7, 0.9] {
        for n in [1.0, 10.0] {
            let sym = LossModel::symmetric(eta).unwrap();
            let one = LossModel::one_arm(eta).unwrap();
            for mu in [0.25, 0.5, 0.75, 1.0] {
                let spec = ResourceSpec::csv_with_ratio(n, mu).unwrap();
                let (a, r) = (spec.alpha, spec.r);
                let q_sym = qfi_numeric(&spec, 0.0, &sym, DEFAULT_DPHI).unwrap().qfi;
                let q_one = qfi_numeric(&spec, 0.0, &one, DEFAULT_DPHI).unwrap().qfi;
                worst = worst.max(rel(q_sym, csv_symmetric(eta, a, r, false))).max(rel(q_one, csv_one_arm(eta, a, r)));
                let printed = csv_symmetric(eta, a, r, true);
                printed_worst = printed_worst.max(rel(q_sym, printed));
                let sh = r.sinh().powi(2);
                gap_is_analysed &=
                    rel(q_sym - printed, 2.0 * eta * (1.0 - eta) * sh).min((q_sym - printed).abs()) < 1e-5;
            }
            let spec = ResourceSpec::tmsv_with_nbar(n).unwrap();
            let want = tmsv_lossy(eta, spec.s);
            for loss in [sym, one] {
                worst = worst.max(rel(qfi_numeric(&spec, 0.0, &loss, DEFAULT_DPHI).unwrap().qfi, want));
            }
        }
    }
    let t = start.elapsed();
    rep.check(
        "C2",
        "lossy QFI closed forms (CSV symmetric with corrected squeezed term, CSV one-arm, TMSV)",
        worst <= QFI_REL_TOL && t < C2_LIMIT,
        format!("worst rel err {worst:.1e} (tol {QFI_REL_TOL:.0e}), {} (limit {})", secs(t), secs(C2_LIMIT)),
    );
    rep.known_gap(
        "C2",
        "CSV symmetric-loss QFI, squeezed term as printed",
        printed_worst <= QFI_REL_TOL,
        gap_is_analysed,
        format!("worst rel err {printed_worst:.2e}; numeric minus printed equals 2η(1−η)sinh²r on every grid point"),
    );
}

struct ThresholdCase {
    scheme: Scheme,
    kind: ResourceKind,
    loss: LossKind,
    expected: f64,
    /// Value reproduced instead of `expected`, for known gaps.
    analysed: Option<f64>,
}

fn criterion_3(rep: &mut Report) -> Vec<(Scheme, ResourceKind, LossKind, f64)> {
    use LossKind::{OneArm, Symmetric};
    use ResourceKind::{Csv, Tmsv};
    use Scheme::{DoubleHd, Qfi, SingleHd};
    let case = |scheme, kind, loss, expected, analysed| ThresholdCase { scheme, kind, loss, expected, analysed };
    let cases = [
        case(Qfi, Tmsv, Symmetric, 0.46, None),
        case(Qfi, Csv, Symmetric, 0.35, Some(0.395)),
        case(Qfi, Tmsv, OneArm, 0.46, None),
        case(Qfi, Csv, OneArm, 0.46, Some(0.475)),
        case(SingleHd, Csv, Symmetric, 0.23, None),
        case(SingleHd, Tmsv, Symmetric, 0.18, None),
        case(SingleHd, Csv, OneArm, 0.34, None),
        case(SingleHd, Tmsv, OneArm, 0.30, None),
        case(DoubleHd, Csv, Symmetric, 0.32, None),
        case(DoubleHd, Tmsv, Symmetric, 0.28, None),
        case(DoubleHd, Csv, OneArm, 0.39, None),
        case(DoubleHd, Tmsv, OneArm, 0.33, None),
    ];
    let start = Instant::now();
    let mut found = Vec::new();
    for c in &cases {
        let out = snl_threshold(c.scheme, c.kind, 10.0, c.loss, &ThresholdOptions::default()).unwrap();
        let what = format!("SNL threshold {} {} {} n̄=10", c.scheme, c.kind, c.loss);
        let Some(rate) = out.loss_rate() else {
            rep.check("C3", &what, false, format!("no crossing: {out:?}"));
            continue;
        };
        found.push((c.scheme, c.kind, c.loss, rate));
        let pass = (rate - c.expected).abs() <= THRESHOLD_TOL;
        let detail = format!("1−η = {rate:.4} (expected {:.2} ± {THRESHOLD_TOL})", c.expected);
        match c.analysed {
            None => rep.check("C3", &what, pass, detail),
            Some(a) => rep.known_gap(
                "C3",
                &what,
                pass,
                (rate - a).abs() <= KNOWN_GAP_TOL,
                format!("{detail}, analysed {a} ± {KNOWN_GAP_TOL}"),
            ),
        }
    }
    let t = start.elapsed();
    rep.check("C3", "threshold runtime", t < C3_LIMIT, format!("{} (limit {})", secs(t), secs(C3_LIMIT)));
    found
}

fn criterion_4(rep: &mut Report) {
    let lossless = LossModel::lossless();
    let est = |scheme, spec: ResourceSpec| scheme_estimate(scheme, &spec, &lossless).unwrap().delta2phi;
    let csv_params: [(f64, f64); 4] = [(1.0, 0.5), (2.0, 1.0), (3.0, 0.3), (0.5, 1.5)];
    let tmsv_params: [f64; 4] = [0.3, 0.8, 1.2, 1.6];
    let mut worst = |name: &str, pairs: Vec<(f64, f64)>| {
        let w = pairs.iter().map(|&(got, want)| rel(got, want)).fold(0.0, f64::max);
        rep.check(
            "C4",
            name,
            w <= CLOSED_FORM_REL_TOL,
            format!("worst rel err {w:.1e} over {} points (tol {CLOSED_FORM_REL_TOL:.0e})", pairs.len()),
        );
    };
    worst(
        "parity CSV, 1/(α²e^{2r}+sinh²r)",
        csv_params
            .iter()
            .map(|&(a, r)| {
                (
                    est(Scheme::Parity, ResourceSpec::csv(a, r).unwrap()),
                    1.0 / (a * a * (2.0 * r).exp() + r.sinh().powi(2)),
                )
            })
            .collect(),
    );
    worst(
        "parity TMSV, 1/(n̄(n̄+2))",
        [1.0, 7.0, 10.0]
            .iter()
            .map(|&n| (est(Scheme::Parity, ResourceSpec::tmsv_with_nbar(n).unwrap()), 1.0 / (n * (n + 2.0))))
            .collect(),
    );
    worst(
        "single HD CSV P_a, 1/(α²e^{2r})",
        csv_params
            .iter()
            .map(|&(a, r)| (est(Scheme::SingleHd, ResourceSpec::csv(a, r).unwrap()), 1.0 / (a * a * (2.0 * r).exp())))
            .collect(),
    );
    worst(
        "single HD TMSV X_a², (1/sinh²s+1/cosh²s)/(2e^{2s})",
        tmsv_params
            .iter()
            .map(|&s| {
                let want = (1.0 / s.sinh().powi(2) + 1.0 / s.cosh().powi(2)) / (2.0 * (2.0 * s).exp());
                (est(Scheme::SingleHd, ResourceSpec::tmsv(s).unwrap()), want)
            })
            .collect(),
    );
    worst(
        "double HD TMSV X_aX_b, 1/(√(2+2e^{8s})−e^{4s}−1)",
        tmsv_params
            .iter()
            .map(|&s| {
                let want = 1.0 / ((2.0 + 2.0 * (8.0 * s).exp()).sqrt() - (4.0 * s).exp() - 1.0);
                (est(Scheme::DoubleHd, ResourceSpec::tmsv(s).unwrap()), want)
            })
            .collect(),
    );
    worst(
        "double HD CSV X_θa+X_θb, 1/(α²(e^{2r}+1))",
        csv_params
            .iter()
            .map(|&(a, r)| {
                (est(Scheme::DoubleHd, ResourceSpec::csv(a, r).unwrap()), 1.0 / (a * a * ((2.0 * r).exp() + 1.0)))
            })
            .collect(),
    );
    let spec = ResourceSpec::tmsv(3.0).unwrap();
    let n = spec.mean_photon_number();
    let v = est(Scheme::DoubleHd, spec);
    let asym = (2f64.sqrt() + 1.0) / (4.0 * n * n);
    rep.check(
        "C4",
        "double HD TMSV asymptote (√2+1)/(4n̄²) at s=3",
        rel(v, asym) <= ASYMPTOTE_REL_TOL,
        format!("rel err {:.2e} (tol {ASYMPTOTE_REL_TOL})", rel(v, asym)),
    );
}

fn criterion_5(rep: &mut Report) {
    let limit = snl(10.0).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for kind in [ResourceKind::Csv, ResourceKind::Tmsv] {
        for rate in [0.12, 0.15, 0.2] {
            let loss = LossModel::from_rate(LossKind::Symmetric, rate).unwrap();
            let v = evaluate_point(Scheme::Parity, kind, 10.0, &loss, MuMode::Optimized).unwrap().delta2phi;
            pass &= v > limit;
            lines.push(format!("{kind}@{rate}: {v:.4}"));
        }
    }
    rep.check("C5", "parity above SNL (0.05) at n̄=10, symmetric loss", pass, lines.join(", "));
}

fn criterion_6(rep: &mut Report) {
    let lossless: Vec<f64> =
        [1.0, 10.0, 100.0].iter().map(|&n| optimal_csv_ratio(n, &LossModel::lossless()).unwrap().0).collect();
    let dev = lossless.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    rep.check(
        "C6",
        "μ* = 1 without loss (n̄ = 1, 10, 100)",
        dev <= MU_TOL,
        format!("max |μ*−1| = {dev:.1e} (tol {MU_TOL:.0e})"),
    );

    let rates: Vec<f64> = (0..=18).map(|k| 0.05 * k as f64).collect();
    let mus: Vec<f64> = rates
        .iter()
        .map(|&x| optimal_csv_ratio(10.0, &LossModel::from_rate(LossKind::Symmetric, x).unwrap()).unwrap().0)
        .collect();
    let strictly = mus.windows(2).all(|w| w[1] < w[0]);
    let non_increasing = mus.windows(2).all(|w| w[1] <= w[0] + MU_TOL);
    let strict_below_one = mus.windows(2).filter(|w| w[0] < 1.0 - MU_TOL).all(|w| w[1] < w[0]);
    let saturated =
        rates.iter().zip(&mus).filter(|(_, m)| (**m - 1.0).abs() <= MU_TOL).map(|(x, _)| *x).fold(0.0, f64::max);
    let shown: Vec<String> = rates.iter().zip(&mus).step_by(2).map(|(x, m)| format!("{x:.1}:{m:.3}")).collect();
    rep.known_gap(
        "C6",
        "μ* strictly decreasing in loss rate, symmetric, n̄=10",
        strictly,
        non_increasing && strict_below_one && (0.6..0.7).contains(&saturated),
        format!("μ* = 1 up to 1−η = {saturated:.2}, then strictly decreasing [{}]", shown.join(" ")),
    );

    let mut low: f64 = 1.0;
    for n in [10.0, 100.0] {
        for k in 0..=8 {
            let loss = LossModel::from_rate(LossKind::OneArm, 0.05 * k as f64).unwrap();
            low = low.min(optimal_csv_ratio(n, &loss).unwrap().0);
        }
    }
    rep.check(
        "C6",
        "μ* > 0.99 under one-arm loss 0–0.4, n̄ = 10 and 100",
        low > MU_ONE_ARM_FLOOR,
        format!("min μ* = {low:.6}"),
    );
}

fn criterion_7(rep: &mut Report, thresholds: &[(Scheme, ResourceKind, LossKind, f64)]) {
    let mut rates = vec![0.0, 0.05, 0.1, 0.12, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45];
    rates.extend(thresholds.iter().map(|t| t.3));
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    for scheme in [Scheme::Parity, Scheme::SingleHd, Scheme::DoubleHd] {
        for kind in ResourceKind::ALL {
            for loss_kind in [LossKind::Symmetric, LossKind::OneArm] {
                for &rate in &rates {
                    let loss = LossModel::from_rate(loss_kind, rate).unwrap();
                    let est = evaluate_point(scheme, kind, 10.0, &loss, MuMode::Optimized).unwrap();
                    let spec = ResourceSpec::with_nbar(kind, 10.0, est.mu.unwrap_or(0.0)).unwrap();
                    let bound = qfi(&spec, &loss).unwrap().qcrb;
                    let ratio = est.delta2phi / bound;
                    worst = worst.min(ratio);
                    checked += 1;
                    if ratio < 1.0 - CRB_SLACK {
                        violations.push(format!("{scheme} {kind} {loss_kind} {rate}: {ratio}"));
                    }
                }
            }
        }
    }
    rep.check(
        "C7",
        "measurement Δ²φ ≥ QCRB of the same state",
        violations.is_empty(),
        format!(
            "{checked} points, min Δ²φ/QCRB = {worst:.6}{}",
            if violations.is_empty() { String::new() } else { format!("; {violations:?}") }
        ),
    );
}

fn criterion_8(rep: &mut Report) {
    let start = Instant::now();
    let rows = validate::run_suite(ORACLE_CUTOFF).unwrap();
    let t = start.elapsed();
    let worst = rows.iter().map(|r| r.error()).fold(0.0, f64::max);
    let failed: Vec<String> =
        rows.iter().filter(|r| !r.pass()).map(|r| format!("{} {} η={}", r.quantity, r.resource, r.eta)).collect();
    rep.check(
        "C8",
        "Gaussian pipeline vs Fock oracle (cutoff 40, n̄ ≤ 2, η ∈ {1, 0.9, 0.7})",
        failed.is_empty() && t < C8_LIMIT,
        format!(
            "{} checks, worst err {worst:.1e} (tol {:.0e}), {} (limit {}){}",
            rows.len(),
            validate::TOLERANCE,
            secs(t),
            secs(C8_LIMIT),
            if failed.is_empty() { String::new() } else { format!("; failed {failed:?}") }
        ),
    );
}

type Curves = HashMap<(String, String, String, String), Vec<(f64, f64)>>;

/// (figure, scheme, resource, loss kind) → [(loss rate, Δ²φ)].
fn curves(figure: &str, csv: &str) -> Curves {
    let mut out: Curves = HashMap::new();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let (s, r, k, x, y) = (col("scheme"), col("resource"), col("loss_kind"), col("loss_rate"), col("delta2phi"));
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let key = (figure.to_string(), rec[s].to_string(), rec[r].to_string(), rec[k].to_string());
        out.entry(key).or_default().push((rec[x].parse().unwrap(), rec[y].parse().unwrap()));
    }
    out
}

fn dominates(c: &Curves, fig: &str, scheme: &str, kind: &str, better: &str, worse: &str, from: f64) -> Option<bool> {
    let a = c.get(&(fig.into(), scheme.into(), better.into(), kind.into()))?;
    let b = c.get(&(fig.into(), scheme.into(), worse.into(), kind.into()))?;
    Some(
        a.len() == b.len()
            && a.iter().zip(b).filter(|(p, _)| p.0 >= from - 1e-12).all(|(p, q)| p.0 == q.0 && p.1 < q.1),
    )
}

fn criterion_9(rep: &mut Report, outputs: &HashMap<String, String>) {
    let mut all: Curves = HashMap::new();
    for (fig, text) in outputs {
        all.extend(curves(fig, text));
    }
    let mut checks = Vec::new();
    // (panel at n̄=10, panel at n̄=7, scheme, loss kind, better, worse, from)
    let pairs = [
        ("2a", "a1", "qfi", "symmetric", "tmsv", "csv", 0.0),
        ("2a", "a1", "qfi", "symmetric", "tmsv", "coherent", 0.0),
        ("4a", "a1", "single-hd", "symmetric", "csv", "tmsv", ROBUST_FROM),
        ("4a", "a1", "single-hd", "symmetric", "csv", "coherent", 0.0),
        ("4c", "a2", "single-hd", "one-arm", "csv", "tmsv", ROBUST_FROM),
        ("4c", "a2", "single-hd", "one-arm", "csv", "coherent", 0.0),
        ("5a", "a1", "double-hd", "symmetric", "csv", "tmsv", ROBUST_FROM),
        ("5a", "a1", "double-hd", "symmetric", "csv", "coherent", 0.0),
        ("5c", "a2", "double-hd", "one-arm", "csv", "tmsv", ROBUST_FROM),
        ("5c", "a2", "double-hd", "one-arm", "csv", "coherent", 0.0),
    ];
    let mut pass = true;
    for (main, appendix, scheme, kind, better, worse, from) in pairs {
        let a = dominates(&all, main, scheme, kind, better, worse, from);
        let b = dominates(&all, appendix, scheme, kind, better, worse, from);
        pass &= a == Some(true) && b == Some(true);
        let word = |d: Option<bool>| match d {
            Some(true) => "holds",
            Some(false) => "broken",
            None => "missing",
        };
        checks.push(format!("{scheme}/{kind} {better}<{worse} for 1−η≥{from}: n̄=10 {}, n̄=7 {}", word(a), word(b)));
    }
    rep.check("C9", "n̄=7 curve ordering matches n̄=10", pass, checks.join("; "));
}

fn run_suite(dir: &std::path::Path) -> HashMap<String, String> {
    let mut out = HashMap::new();
    for fig in FIGURES {
        let path = dir.join(format!("{fig}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_mzi-lab"))
            .args(["sweep", "--figure", fig, "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success(), "preset {fig} exited with {status}");
        out.insert(fig.to_string(), std::fs::read_to_string(path).unwrap());
    }
    out
}

struct SuiteRuns {
    first: HashMap<String, String>,
    second: HashMap<String, String>,
    elapsed: Duration,
}

fn run_suite_twice() -> SuiteRuns {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let first = run_suite(&subdir(dir.path(), "one"));
    let second = run_suite(&subdir(dir.path(), "two"));
    SuiteRuns { first, second, elapsed: start.elapsed() }
}

fn criterion_10(rep: &mut Report, runs: &SuiteRuns) {
    let differing: Vec<&str> = FIGURES.iter().copied().filter(|f| runs.first[*f] != runs.second[*f]).collect();
    let bytes: usize = runs.first.values().map(String::len).sum();
    rep.check(
        "C10",
        "figure-preset suite is byte-identical across two runs",
        differing.is_empty(),
        format!(
            "{} presets, {bytes} bytes per run, {} for both runs{}",
            FIGURES.len(),
            secs(runs.elapsed),
            if differing.is_empty() { String::new() } else { format!("; differing {differing:?}") }
        ),
    );
}

fn subdir(root: &std::path::Path, name: &str) -> std::path::PathBuf {
    let dir = root.join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn main() {
    let mut rep = Report::default();
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    let thresholds = criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep, &thresholds);
    criterion_8(&mut rep);
    let runs = run_suite_twice();
    criterion_9(&mut rep, &runs.first);
    criterion_10(&mut rep, &runs);
    if rep.unexpected.is_empty() {
        println!("acceptance: all regular items pass; known gaps reproduce their analysed values");
    } else {
        println!("acceptance: unexpected failures: {:?}", rep.unexpected);
        std::process::exit(1);
    }
}
