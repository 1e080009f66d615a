//! Figure presets. Each preset is a list of sweeps whose rows are emitted in order.
//!
//! | preset | schemes | resources | x axis | fixed |
//! |---|---|---|---|---|
//! | 2a, 2d | qfi | csv, tmsv, coherent | loss rate | n̄ = 10 |
//! | 2b, 2e | qfi | csv, tmsv, coherent | n̄ | 1−η = 0.2 |
//! | 2c, 2f | qfi | csv (μ* column) | loss rate, one block per n̄ ∈ {1, 10, 100} | |
//! | 3a–d, 4a–d, 5a–d | parity / single-hd / double-hd | csv, tmsv, coherent | a,c: loss rate; b,d: n̄ | as above |
//! | 6a–d | all four | csv or tmsv, plus coherent qfi | loss rate | n̄ = 10 |
//! | a1, a2 | all four | csv, tmsv, coherent | loss rate | n̄ = 7 |
//!
//! 2a–2c, 3a, 3b, 4a, 4b, 5a, 5b, 6a, 6c and a1 use symmetric loss; the
//! others use loss in one arm. Loss-rate axes run over [0, 0.5] in steps of
//! 0.01 (the μ* panels over [0, 0.9] in steps of 0.02), n̄ axes over 1..=50 in
//! steps of 1.

use mzi_core::interferometer::LossKind;
use mzi_core::optimize::{MuMode, Scheme, SweepSpec, SweepVariable};
use mzi_core::resource::ResourceKind;

pub const FIGURES: [&str; 24] = [
    "2a", "2b", "2c", "2d", "2e", "2f", "3a", "3b", "3c", "3d", "4a", "4b", "4c", "4d", "5a", "5b", "5c", "5d", "6a",
    "6b", "6c", "6d", "a1", "a2",
];

pub const LOSS_AXIS: (f64, f64, usize) = (0.0, 0.5, 51);
pub const RATIO_LOSS_AXIS: (f64, f64, usize) = (0.0, 0.9, 46);
pub const NBAR_AXIS: (f64, f64, usize) = (1.0, 50.0, 50);
pub const MAIN_NBAR: f64 = 10.0;
pub const APPENDIX_NBAR: f64 = 7.0;
pub const NBAR_SWEEP_RATE: f64 = 0.2;
pub const RATIO_NBARS: [f64; 3] = [1.0, 10.0, 100.0];

const ALL_RESOURCES: [ResourceKind; 3] = ResourceKind::ALL;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub sweeps: Vec<SweepSpec>,
}

fn loss_sweep(nbar: f64, kind: LossKind, schemes: &[Scheme], resources: &[ResourceKind], mu: MuMode) -> SweepSpec {
    let (lo, hi, points) = LOSS_AXIS;
    SweepSpec {
        variable: SweepVariable::LossRate,
        lo,
        hi,
        points,
        nbar,
        loss_rate: 0.0,
        loss_kind: kind,
        schemes: schemes.to_vec(),
        resources: resources.to_vec(),
        mu,
    }
}

fn nbar_sweep(kind: LossKind, scheme: Scheme, mu: MuMode) -> SweepSpec {
    let (lo, hi, points) = NBAR_AXIS;
    SweepSpec {
        variable: SweepVariable::MeanPhotonNumber,
        lo,
        hi,
        points,
        nbar: 0.0,
        loss_rate: NBAR_SWEEP_RATE,
        loss_kind: kind,
        schemes: vec![scheme],
        resources: ALL_RESOURCES.to_vec(),
        mu,
    }
}

fn ratio_sweeps(kind: LossKind) -> Vec<SweepSpec> {
    let (lo, hi, points) = RATIO_LOSS_AXIS;
    RATIO_NBARS
        .iter()
        .map(|&nbar| SweepSpec {
            variable: SweepVariable::LossRate,
            lo,
            hi,
            points,
            nbar,
            loss_rate: 0.0,
            loss_kind: kind,
            schemes: vec![Scheme::Qfi],
            resources: vec![ResourceKind::Csv],
            mu: MuMode::Optimized,
        })
        .collect()
}

/// Look up a preset. `mu` applies to every CSV cell except the μ* panels.
pub fn preset(name: &str, mu: MuMode) -> Option<Preset> {
    use LossKind::{OneArm, Symmetric};
    let name = name.to_ascii_lowercase();
    let single = |scheme: Scheme, panel: char| -> Option<Vec<SweepSpec>> {
        let s = [scheme];
        Some(match panel {
            'a' => vec![loss_sweep(MAIN_NBAR, Symmetric, &s, &ALL_RESOURCES, mu)],
            'b' => vec![nbar_sweep(Symmetric, scheme, mu)],
            'c' => vec![loss_sweep(MAIN_NBAR, OneArm, &s, &ALL_RESOURCES, mu)],
            'd' => vec![nbar_sweep(OneArm, scheme, mu)],
            _ => return None,
        })
    };
    let comparison = |resource: ResourceKind, kind: LossKind| {
        vec![
            loss_sweep(MAIN_NBAR, kind, &Scheme::ALL, &[resource], mu),
            loss_sweep(MAIN_NBAR, kind, &[Scheme::Qfi], &[ResourceKind::Coherent], mu),
        ]
    };
    let sweeps = match name.as_str() {
        "2a" => vec![loss_sweep(MAIN_NBAR, Symmetric, &[Scheme::Qfi], &ALL_RESOURCES, mu)],
        "2b" => vec![nbar_sweep(Symmetric, Scheme::Qfi, mu)],
        "2c" => ratio_sweeps(Symmetric),
        "2d" => vec![loss_sweep(MAIN_NBAR, OneArm, &[Scheme::Qfi], &ALL_RESOURCES, mu)],
        "2e" => vec![nbar_sweep(OneArm, Scheme::Qfi, mu)],
        "2f" => ratio_sweeps(OneArm),
        "6a" => comparison(ResourceKind::Csv, Symmetric),
        "6b" => comparison(ResourceKind::Csv, OneArm),
        "6c" => comparison(ResourceKind::Tmsv, Symmetric),
        "6d" => comparison(ResourceKind::Tmsv, OneArm),
        "a1" => vec![loss_sweep(APPENDIX_NBAR, Symmetric, &Scheme::ALL, &ALL_RESOURCES, mu)],
        "a2" => vec![loss_sweep(APPENDIX_NBAR, OneArm, &Scheme::ALL, &ALL_RESOURCES, mu)],
        other => {
            let mut chars = other.chars();
            let scheme = match chars.next()? {
                '3' => Scheme::Parity,
                '4' => Scheme::SingleHd,
                '5' => Scheme::DoubleHd,
                _ => return None,
            };
            let panel = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            single(scheme, panel)?
        }
    };
    Some(Preset { name, sweeps })
}

/// Every preset, in the order of [`FIGURES`].
pub fn all_presets(mu: MuMode) -> Vec<Preset> {
    FIGURES.iter().filter_map(|f| preset(f, mu)).collect()
}
