//! CSV and JSON rendering of result records.
//!
//! CSV floats carry 17 significant digits, enough to round-trip any f64;
//! missing values are empty fields. JSON floats use the shortest exact
//! representation. Non-finite numbers are rejected in both formats.

use clap::ValueEnum;
use serde::Serialize;

use super::Failure;
use crate::rates::{RateKind, RateParams};
use crate::stellar::ProfilePoint;
use crate::verify::CheckReport;
use crate::DualResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// A record that can be laid out as one CSV row.
pub(super) trait Row: Serialize {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

pub(super) enum Cell {
    Float(Option<f64>),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v)
    }
}

fn float(v: f64) -> Result<String, Failure> {
    if !v.is_finite() {
        return Err(Failure::invalid(format!("refusing to write non-finite value {v}")));
    }
    Ok(format!("{v:.16e}"))
}

#[derive(Serialize)]
struct Meta {
    version: &'static str,
    command: &'static str,
    config: serde_json::Value,
}

#[derive(Serialize)]
pub(super) struct Document<R> {
    meta: Meta,
    records: Vec<R>,
}

impl<R: Row> Document<R> {
    pub(super) fn new(command: &'static str, config: serde_json::Value, records: Vec<R>) -> Self {
        Self { meta: Meta { version: env!("CARGO_PKG_VERSION"), command, config }, records }
    }

    pub(super) fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> Result<String, Failure> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let csv_err = |e: csv::Error| Failure::invalid(format!("csv: {e}"));
        w.write_record(R::header()).map_err(csv_err)?;
        for r in &self.records {
            let mut row = Vec::new();
            for c in r.cells() {
                row.push(match c {
                    Cell::Float(Some(v)) => float(v)?,
                    Cell::Float(None) => String::new(),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => s,
                });
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::invalid(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Failure::invalid(format!("csv: {e}")))
    }

    fn json(&self) -> Result<String, Failure> {
        // serde_json silently maps NaN to null; catch non-finite values first
        for r in &self.records {
            for c in r.cells() {
                if let Cell::Float(Some(v)) = c {
                    float(v)?;
                }
            }
        }
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Failure::invalid(format!("json: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// One profile row, or the trailing luminosity summary.
#[derive(Debug, Clone, Serialize)]
pub(super) struct StellarRecord {
    record: &'static str,
    x: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "M")]
    mass: Option<f64>,
    #[serde(rename = "P")]
    pressure: Option<f64>,
    #[serde(rename = "T")]
    temperature: Option<f64>,
    eps: Option<f64>,
    #[serde(rename = "L_closed_form")]
    l_closed_form: Option<f64>,
    #[serde(rename = "L_oracle")]
    l_oracle: Option<f64>,
    #[serde(rename = "L_agreement")]
    l_agreement: Option<f64>,
    method: Option<&'static str>,
    notes: String,
}

impl StellarRecord {
    pub(super) fn point(p: &ProfilePoint) -> Self {
        Self {
            record: "profile",
            x: Some(p.x),
            rho: Some(p.rho),
            mass: Some(p.mass),
            pressure: Some(p.pressure),
            temperature: Some(p.temperature),
            eps: Some(p.eps),
            l_closed_form: None,
            l_oracle: None,
            l_agreement: None,
            method: None,
            notes: String::new(),
        }
    }

    pub(super) fn luminosity(l: &DualResult) -> Self {
        let closed = l.agreement.map(|_| l.closed_form.value);
        Self {
            record: "luminosity",
            x: None,
            rho: None,
            mass: None,
            pressure: None,
            temperature: None,
            eps: None,
            l_closed_form: closed,
            l_oracle: Some(l.oracle.value),
            l_agreement: l.agreement,
            method: Some(l.method().as_str()),
            notes: l.closed_form.notes.join("; "),
        }
    }
}

impl Row for StellarRecord {
    fn header() -> &'static [&'static str] {
        &["record", "x", "rho", "M", "P", "T", "eps", "L_closed_form", "L_oracle", "L_agreement", "method", "notes"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.record.into()),
            self.x.into(),
            self.rho.into(),
            self.mass.into(),
            self.pressure.into(),
            self.temperature.into(),
            self.eps.into(),
            self.l_closed_form.into(),
            self.l_oracle.into(),
            self.l_agreement.into(),
            Cell::Text(self.method.unwrap_or("").into()),
            Cell::Text(self.notes.clone()),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub(super) struct RateRecord {
    kind: &'static str,
    p: f64,
    a: f64,
    z: f64,
    n: u32,
    m: u32,
    r: f64,
    v: u32,
    t: f64,
    d: f64,
    b: f64,
    g: f64,
    max_k: usize,
    value: Option<f64>,
    closed_form: Option<f64>,
    oracle: Option<f64>,
    agreement: Option<f64>,
    method: Option<&'static str>,
    error_estimate: Option<f64>,
    oracle_error: Option<f64>,
    terms_used: Option<usize>,
    truncation_estimate: Option<f64>,
    degenerate_shift: Option<f64>,
    notes: String,
    error: Option<String>,
}

impl RateRecord {
    pub(super) fn new(kind: RateKind, p: &RateParams, max_k: usize, result: Result<&DualResult, &crate::Error>) -> Self {
        let mut rec = Self {
            kind: kind.as_str(),
            p: p.p,
            a: p.a,
            z: p.z,
            n: p.n,
            m: p.m,
            r: p.r,
            v: p.v,
            t: p.t,
            d: p.d,
            b: p.b,
            g: p.g,
            max_k,
            value: None,
            closed_form: None,
            oracle: None,
            agreement: None,
            method: None,
            error_estimate: None,
            oracle_error: None,
            terms_used: None,
            truncation_estimate: None,
            degenerate_shift: None,
            notes: String::new(),
            error: None,
        };
        match result {
            Ok(r) => {
                let c = &r.closed_form;
                rec.value = Some(r.value());
                rec.closed_form = r.agreement.map(|_| c.value);
                rec.oracle = Some(r.oracle.value);
                rec.agreement = r.agreement;
                rec.method = Some(r.method().as_str());
                rec.error_estimate = Some(c.error_estimate);
                rec.oracle_error = Some(r.oracle.error_estimate);
                rec.terms_used = Some(c.diagnostics.terms_used);
                rec.truncation_estimate = Some(c.diagnostics.truncation_estimate);
                rec.degenerate_shift = Some(c.diagnostics.degenerate_shift);
                rec.notes = c.notes.join("; ");
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }
}

impl Row for RateRecord {
    fn header() -> &'static [&'static str] {
        &[
            "kind", "p", "a", "z", "n", "m", "r", "v", "t", "d", "b", "g", "max_k", "value", "closed_form", "oracle",
            "agreement", "method", "error_estimate", "oracle_error", "terms_used", "truncation_estimate",
            "degenerate_shift", "notes", "error",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.kind.into()),
            self.p.into(),
            self.a.into(),
            self.z.into(),
            Cell::Int(self.n.into()),
            Cell::Int(self.m.into()),
            self.r.into(),
            Cell::Int(self.v.into()),
            self.t.into(),
            self.d.into(),
            self.b.into(),
            self.g.into(),
            Cell::Int(self.max_k as u64),
            self.value.into(),
            self.closed_form.into(),
            self.oracle.into(),
            self.agreement.into(),
            Cell::Text(self.method.unwrap_or("").into()),
            self.error_estimate.into(),
            self.oracle_error.into(),
            self.terms_used.map_or(Cell::Text(String::new()), |t| Cell::Int(t as u64)),
            self.truncation_estimate.into(),
            self.degenerate_shift.into(),
            Cell::Text(self.notes.clone()),
            Cell::Text(self.error.clone().unwrap_or_default()),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub(super) struct VerifyRecord {
    id: String,
    status: &'static str,
    worst: f64,
    tolerance: f64,
    samples: usize,
    description: String,
    notes: String,
}

impl From<&CheckReport> for VerifyRecord {
    fn from(r: &CheckReport) -> Self {
        Self {
            id: r.id.clone(),
            status: if r.passed { "PASS" } else { "FAIL" },
            // an abandoned check reports an infinite discrepancy; keep the output finite
            worst: if r.worst.is_finite() { r.worst } else { f64::MAX },
            tolerance: r.tolerance,
            samples: r.samples,
            description: r.description.clone(),
            notes: r.notes.join("; "),
        }
    }
}

impl Row for VerifyRecord {
    fn header() -> &'static [&'static str] {
        &["id", "status", "worst", "tolerance", "samples", "description", "notes"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.id.clone()),
            Cell::Text(self.status.into()),
            self.worst.into(),
            self.tolerance.into(),
            Cell::Int(self.samples as u64),
            Cell::Text(self.description.clone()),
            Cell::Text(self.notes.clone()),
        ]
    }
}
