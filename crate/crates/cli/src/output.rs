//! Record types and the two text formats (CSV and JSON lines).

use std::io::Write;
use std::str::FromStr;

use mzi_core::interferometer::LossKind;
use mzi_core::optimize::{PointEstimate, Scheme, SweepRow, ThresholdOutcome};
use mzi_core::resource::ResourceKind;
use serde_json::Value;

/// Significant digits of every printed number.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json" => Ok(Format::Jsonl),
            other => Err(format!("unknown format '{other}' (expected csv or jsonl)")),
        }
    }
}

/// Round to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(Option<f64>),
    Int(usize),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(Some(x)) => serde_json::Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
            Cell::Num(None) => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }

    // CSV shares the JSON number text so both formats print the same digits.
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            other => match other.json() {
                Value::Null => String::new(),
                v => v.to_string(),
            },
        }
    }
}

/// A flat record with a fixed column order.
pub trait Record {
    fn columns() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

pub fn write_records<R: Record, W: Write>(out: W, records: &[R], format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(R::columns())?;
            for r in records {
                w.write_record(r.cells().iter().map(Cell::csv))?;
            }
            w.flush()
        }
        Format::Jsonl => {
            let mut out = out;
            for r in records {
                let fields: Vec<String> = R::columns()
                    .iter()
                    .zip(r.cells())
                    .map(|(k, c)| format!("{}:{}", Value::from(*k), c.json()))
                    .collect();
                writeln!(out, "{{{}}}", fields.join(","))?;
            }
            out.flush()
        }
    }
}

pub fn render<R: Record>(records: &[R], format: Format) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records, format).expect("writing to memory");
    String::from_utf8(buf).expect("records are UTF-8")
}

/// One optimized evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub scheme: Scheme,
    pub resource: ResourceKind,
    pub nbar: f64,
    pub loss_kind: LossKind,
    pub loss_rate: f64,
    pub phi_star: Option<f64>,
    pub mu: Option<f64>,
    pub delta2phi: Option<f64>,
    pub snl: f64,
    pub beats_snl: bool,
    /// `ok`, or the error that stopped this cell.
    pub status: String,
}

impl OutputRecord {
    pub fn new(
        scheme: Scheme,
        resource: ResourceKind,
        nbar: f64,
        loss_kind: LossKind,
        loss_rate: f64,
        snl: f64,
        estimate: Result<&PointEstimate, &str>,
    ) -> Self {
        let (phi_star, mu, delta2phi, status) = match estimate {
            Ok(e) => (e.phi_star, e.mu, Some(e.delta2phi), "ok".to_string()),
            Err(msg) => (None, None, None, msg.to_string()),
        };
        // on printed values, so the column agrees with what a reader compares
        let beats_snl = delta2phi.is_some_and(|d| round_sig(d) < round_sig(snl));
        Self { scheme, resource, nbar, loss_kind, loss_rate, phi_star, mu, delta2phi, snl, beats_snl, status }
    }

    pub fn is_ok(&self) -> bool {
        self.delta2phi.is_some()
    }
}

impl From<&SweepRow> for OutputRecord {
    fn from(row: &SweepRow) -> Self {
        OutputRecord::new(
            row.scheme,
            row.resource,
            row.nbar,
            row.loss_kind,
            row.loss_rate,
            row.snl,
            row.estimate.as_ref().map_err(String::as_str),
        )
    }
}

impl Record for OutputRecord {
    fn columns() -> &'static [&'static str] {
        &[
            "scheme",
            "resource",
            "nbar",
            "loss_kind",
            "loss_rate",
            "phi_star",
            "mu",
            "delta2phi",
            "snl",
            "beats_snl",
            "status",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.scheme.to_string()),
            Cell::Text(self.resource.to_string()),
            Cell::Num(Some(self.nbar)),
            Cell::Text(self.loss_kind.to_string()),
            Cell::Num(Some(self.loss_rate)),
            Cell::Num(self.phi_star),
            Cell::Num(self.mu),
            Cell::Num(self.delta2phi),
            Cell::Num(Some(self.snl)),
            Cell::Bool(self.beats_snl),
            Cell::Text(self.status.clone()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRecord {
    pub scheme: Scheme,
    pub resource: ResourceKind,
    pub nbar: f64,
    pub loss_kind: LossKind,
    pub outcome: ThresholdOutcome,
}

impl Record for ThresholdRecord {
    fn columns() -> &'static [&'static str] {
        &["scheme", "resource", "nbar", "loss_kind", "outcome", "loss_rate", "bracket_lo", "bracket_hi", "iterations"]
    }

    fn cells(&self) -> Vec<Cell> {
        let (outcome, rate, lo, hi, iterations) = match self.outcome {
            ThresholdOutcome::Crossing(t) => {
                ("crossing", Some(t.loss_rate), Some(t.bracket.0), Some(t.bracket.1), Cell::Int(t.iterations))
            }
            ThresholdOutcome::AboveAtZeroLoss => ("above-at-zero-loss", None, None, None, Cell::Num(None)),
            ThresholdOutcome::NeverAbove => ("never-above", None, None, None, Cell::Num(None)),
        };
        vec![
            Cell::Text(self.scheme.to_string()),
            Cell::Text(self.resource.to_string()),
            Cell::Num(Some(self.nbar)),
            Cell::Text(self.loss_kind.to_string()),
            Cell::Text(outcome.into()),
            Cell::Num(rate),
            Cell::Num(lo),
            Cell::Num(hi),
            iterations,
        ]
    }
}
