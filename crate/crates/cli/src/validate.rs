//! Cross-check of the Gaussian pipeline against the truncated Fock oracle.

use mzi_core::fock::{self, FockOperator, FockState};
use mzi_core::gaussian::{GaussianState, Quadrature};
use mzi_core::interferometer::{Interferometer, LossModel};
use mzi_core::measurements::{parity_expectation, Observable};
use mzi_core::qfi::{bures_fidelity, qfi_numeric, DEFAULT_DPHI};
use mzi_core::resource::ResourceSpec;
use mzi_core::{gaussian::Mode, Result};

use crate::output::{Cell, Record};

/// Agreement required between the two pipelines, relative to `max(1, |oracle|)`.
pub const TOLERANCE: f64 = 1e-6;
/// Working point of the expectation checks. Generic on purpose: no symmetry zeroes anything.
pub const PHI: f64 = 0.7;
/// Phase offset of the second state in the fidelity check.
pub const FIDELITY_OFFSET: f64 = 0.3;
pub const ETAS: [f64; 3] = [1.0, 0.9, 0.7];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub quantity: &'static str,
    pub resource: String,
    pub eta: f64,
    pub gaussian: f64,
    pub oracle: f64,
}

impl CheckRow {
    pub fn error(&self) -> f64 {
        (self.gaussian - self.oracle).abs() / self.oracle.abs().max(1.0)
    }

    pub fn pass(&self) -> bool {
        self.error() <= TOLERANCE
    }
}

impl Record for CheckRow {
    fn columns() -> &'static [&'static str] {
        &["quantity", "resource", "eta", "gaussian", "oracle", "error", "tolerance", "pass"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.quantity.into()),
            Cell::Text(self.resource.clone()),
            Cell::Num(Some(self.eta)),
            Cell::Num(Some(self.gaussian)),
            Cell::Num(Some(self.oracle)),
            Cell::Num(Some(self.error())),
            Cell::Num(Some(TOLERANCE)),
            Cell::Bool(self.pass()),
        ]
    }
}

/// Oracle-tractable resources (n̄ ≤ 2, truncation leakage below 1e-8 at cutoff 40).
pub fn resources() -> Result<Vec<(String, ResourceSpec)>> {
    Ok(vec![
        ("csv nbar=1 mu=0.5".into(), ResourceSpec::csv_with_ratio(1.0, 0.5)?),
        ("csv nbar=2 mu=0.25".into(), ResourceSpec::csv_with_ratio(2.0, 0.25)?),
        ("tmsv nbar=1".into(), ResourceSpec::tmsv_with_nbar(1.0)?),
        ("coherent nbar=2".into(), ResourceSpec::coherent_with_nbar(2.0)?),
    ])
}

fn moment_checks(g: &GaussianState, f: &FockState) -> Result<Vec<(&'static str, f64, f64)>> {
    use Quadrature::{Pa, Xa, Xb};
    let mut out = vec![(
        "parity",
        parity_expectation(&g.reduce_to_mode(Mode::A))?,
        fock::oracle_expectation(f, &FockOperator::ParityA)?,
    )];
    let cases: [(&'static str, &[Quadrature], FockOperator); 6] = [
        ("<X_a>", &[Xa], FockOperator::x_a()),
        ("<P_a>", &[Pa], FockOperator::p_a()),
        ("<X_a^2>", &[Xa, Xa], FockOperator::x2_a()),
        ("<X_a X_b>", &[Xa, Xb], FockOperator::xx_ab()),
        ("<X_a^4>", &[Xa, Xa, Xa, Xa], FockOperator::x4_a()),
        ("<X_a^2 X_b^2>", &[Xa, Xa, Xb, Xb], FockOperator::x2x2_ab()),
    ];
    for (name, q, op) in cases {
        out.push((name, g.symmetric_moment(q)?, fock::oracle_expectation(f, &op)?));
    }
    let p2 = Observable::quadrature_squared_a(std::f64::consts::FRAC_PI_2)?;
    out.push((
        "<P_a^2>",
        p2.signal(g)?,
        fock::oracle_expectation(f, &FockOperator::quad_a(std::f64::consts::FRAC_PI_2, 2))?,
    ));
    Ok(out)
}

/// Run the full suite at the given Fock cutoff. Rows come in a fixed order.
pub fn run_suite(cutoff: usize) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (label, spec) in resources()? {
        for eta in ETAS {
            let loss = LossModel::symmetric(eta)?;
            let ifm = Interferometer::new(spec, loss)?;
            let g = ifm.output(PHI);
            let f = fock::oracle_output(&spec, PHI, &loss, cutoff)?;
            let mut push = |quantity, gaussian, oracle| {
                rows.push(CheckRow { quantity, resource: label.clone(), eta, gaussian, oracle })
            };
            for (name, gv, fv) in moment_checks(&g, &f)? {
                push(name, gv, fv);
            }
            let g2 = ifm.output(PHI + FIDELITY_OFFSET);
            let f2 = fock::oracle_output(&spec, PHI + FIDELITY_OFFSET, &loss, cutoff)?;
            push("fidelity", bures_fidelity(&g, &g2)?, fock::oracle_fidelity(&f, &f2)?);
            push(
                "qfi",
                qfi_numeric(&spec, PHI, &loss, DEFAULT_DPHI)?.qfi,
                fock::oracle_qfi(&spec, PHI, &loss, cutoff)?,
            );
        }
    }
    Ok(rows)
}
