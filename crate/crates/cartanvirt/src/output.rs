//! Report rendering. JSON keys keep declaration order and every real number
//! is written with 17 significant digits, so equal runs give equal bytes.

use cartanvirt_core::{CheckRecord, FDConfig, VerificationReport};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A real written as `{:.16e}`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Real {
    pub fn text(&self) -> String {
        if self.0.is_finite() {
            // adding 0.0 turns -0.0 into 0.0
            format!("{:.16e}", self.0 + 0.0)
        } else {
            format!("{}", self.0)
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigJson {
    pub h: Real,
    pub richardson: bool,
    pub samples: usize,
    pub seed: u64,
    pub tol_algebraic: Real,
    pub tol_fd: Real,
}

impl From<&FDConfig> for ConfigJson {
    fn from(c: &FDConfig) -> Self {
        Self {
            h: Real(c.h),
            richardson: c.richardson,
            samples: c.samples,
            seed: c.seed,
            tol_algebraic: Real(c.tol_algebraic),
            tol_fd: Real(c.tol_fd),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckJson<'a> {
    pub name: &'a str,
    pub anchor: &'a str,
    pub space: &'a str,
    pub samples: usize,
    pub max_residual: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl<'a> From<&'a CheckRecord> for CheckJson<'a> {
    fn from(r: &'a CheckRecord) -> Self {
        Self {
            name: &r.name,
            anchor: &r.anchor,
            space: &r.space,
            samples: r.samples,
            max_residual: Real(r.max_residual),
            tolerance: Real(r.tolerance),
            pass: r.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson<'a> {
    pub space: &'a str,
    pub config: ConfigJson,
    pub checks: Vec<CheckJson<'a>>,
    pub pass: bool,
}

impl<'a> From<&'a VerificationReport> for ReportJson<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        Self {
            space: r.space(),
            config: r.config().into(),
            checks: r.records().iter().map(CheckJson::from).collect(),
            pass: r.pass(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn config_line(c: &FDConfig) -> String {
    format!(
        "config: h={} richardson={} samples={} seed={} tol_algebraic={} tol_fd={}",
        Real(c.h).text(),
        c.richardson,
        c.samples,
        c.seed,
        Real(c.tol_algebraic).text(),
        Real(c.tol_fd).text()
    )
}

/// One line per record, then the overall verdict.
pub fn report_text(r: &VerificationReport) -> String {
    let mut out = format!("space: {}\n{}\n", r.space(), config_line(r.config()));
    let width = r.records().iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut current = "";
    for c in r.records() {
        if c.space != current {
            out.push_str(&format!("[{}]\n", c.space));
            current = &c.space;
        }
        out.push_str(&format!(
            "  {}  {:<width$}  samples={:<4} residual={:<24} tol={}  {}\n",
            pass_word(c.pass),
            c.name,
            c.samples,
            Real(c.max_residual).text(),
            Real(c.tolerance).text(),
            c.anchor,
        ));
    }
    out.push_str(&format!("overall: {}\n", pass_word(r.pass())));
    out
}
