//! Structured verification outcomes and their text/JSON/CSV renderings.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// One-sided check: only a violation of the bound is refutable, and none was found.
    Consistent,
    Error,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Consistent => "consistent",
            Status::Error => "error",
        }
    }
}

/// Where a reference value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A value or closed form stated in the literature.
    Published,
    /// Elementary, checkable by hand.
    Elementary,
    /// Produced by an independent computation (brute force, quadrature, series).
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex([z.re, z.im])
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Real(n as f64)
    }
}

impl Value {
    pub fn format(&self) -> String {
        match self {
            Value::Real(x) => fmt_sig(*x),
            Value::Complex([re, im]) => format!("({}, {})", fmt_sig(*re), fmt_sig(*im)),
        }
    }
}

/// 15 significant digits.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.14e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Labeled {
    pub label: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub label: String,
    pub value: Value,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub status: Status,
    pub computed: Vec<Labeled>,
    pub reference: Vec<ReferenceValue>,
    pub tolerance: f64,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check_id: check_id.into(),
            status: Status::Pass,
            computed: Vec::new(),
            reference: Vec::new(),
            tolerance,
            elapsed_ms: 0.0,
            message: None,
        }
    }

    pub fn computed(mut self, label: impl Into<String>, value: impl Into<Value>) -> Self {
        self.push_computed(label, value);
        self
    }

    pub fn reference(
        mut self,
        label: impl Into<String>,
        value: impl Into<Value>,
        provenance: Provenance,
    ) -> Self {
        self.push_reference(label, value, provenance);
        self
    }

    pub fn push_computed(&mut self, label: impl Into<String>, value: impl Into<Value>) {
        self.computed.push(Labeled { label: label.into(), value: value.into() });
    }

    pub fn push_reference(
        &mut self,
        label: impl Into<String>,
        value: impl Into<Value>,
        provenance: Provenance,
    ) {
        self.reference.push(ReferenceValue { label: label.into(), value: value.into(), provenance });
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// `Pass` when `ok`, `Fail` otherwise.
    pub fn passed_if(self, ok: bool) -> Self {
        self.with_status(if ok { Status::Pass } else { Status::Fail })
    }

    /// `Consistent` when `ok`, `Fail` otherwise.
    pub fn consistent_if(self, ok: bool) -> Self {
        self.with_status(if ok { Status::Consistent } else { Status::Fail })
    }

    pub fn with_message(mut self, msg: impl Into<String>) -> Self {
        self.message = Some(msg.into());
        self
    }

    pub fn error(check_id: impl Into<String>, tolerance: f64, err: &crate::Error) -> Self {
        Self::new(check_id, tolerance).with_status(Status::Error).with_message(err.to_string())
    }

    pub fn computed_value(&self, label: &str) -> Option<Value> {
        self.computed.iter().find(|l| l.label == label).map(|l| l.value)
    }

    pub fn computed_real(&self, label: &str) -> Option<f64> {
        match self.computed_value(label)? {
            Value::Real(x) => Some(x),
            Value::Complex(_) => None,
        }
    }
}

/// Runs `check` and stamps the wall-clock time on whatever report it yields;
/// an `Err` becomes a report with status `error`.
pub fn timed(
    check_id: &str,
    tolerance: f64,
    check: impl FnOnce() -> Result<VerificationReport>,
) -> VerificationReport {
    let start = Instant::now();
    let mut report = match check() {
        Ok(r) => r,
        Err(e) => VerificationReport::error(check_id, tolerance, &e),
    };
    report.check_id = check_id.to_string();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(crate::Error::Parse(format!("unknown output format `{other}`"))),
        }
    }
}

pub fn emit_reports<W: Write>(reports: &[VerificationReport], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => emit_json(reports, out),
        OutputFormat::Csv => emit_csv(reports, out),
        OutputFormat::Text => emit_text(reports, out),
    }
}

fn emit_json<W: Write>(reports: &[VerificationReport], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    Ok(())
}

fn flatten<'a>(items: impl Iterator<Item = (&'a str, &'a Value)>) -> String {
    items.map(|(l, v)| format!("{l}={}", v.format())).collect::<Vec<_>>().join("; ")
}

fn emit_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check_id", "status", "tolerance", "elapsed_ms", "computed", "reference", "message"])?;
    for r in reports {
        w.write_record([
            r.check_id.clone(),
            r.status.as_str().to_string(),
            fmt_sig(r.tolerance),
            format!("{:.3}", r.elapsed_ms),
            flatten(r.computed.iter().map(|l| (l.label.as_str(), &l.value))),
            flatten(r.reference.iter().map(|l| (l.label.as_str(), &l.value))),
            r.message.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn emit_text<W: Write>(reports: &[VerificationReport], mut out: W) -> Result<()> {
    let width = reports.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
    writeln!(out, "{:<width$}  {:<10}  {:>10}  values", "check", "status", "ms")?;
    for r in reports {
        let first = r
            .computed
            .first()
            .map(|l| format!("{}={}", l.label, l.value.format()))
            .unwrap_or_default();
        writeln!(out, "{:<width$}  {:<10}  {:>10.1}  {first}", r.check_id, r.status.as_str(), r.elapsed_ms)?;
        for l in r.computed.iter().skip(1) {
            writeln!(out, "{:<width$}  {:<10}  {:>10}  {}={}", "", "", "", l.label, l.value.format())?;
        }
        for l in &r.reference {
            writeln!(out, "{:<width$}  {:<10}  {:>10}  ref {}={}", "", "", "", l.label, l.value.format())?;
        }
        if let Some(m) = &r.message {
            writeln!(out, "{:<width$}  {:<10}  {:>10}  note: {m}", "", "", "")?;
        }
    }
    let failed = reports.iter().filter(|r| r.status.is_failure()).count();
    writeln!(out, "{} checks, {} failed", reports.len(), failed)?;
    Ok(())
}
