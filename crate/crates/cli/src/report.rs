//! Analysis reports and their byte-deterministic text and JSON renderings.
//!
//! Map keys are always sorted. Reals are written with 17 significant digits in
//! JSON; exact values are strings (`"3"`, `"-1/4"`).

use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Bool(bool),
    Int(i64),
    Real(f64),
    Exact(String),
    Text(String),
    List(Vec<Field>),
    Map(BTreeMap<String, Field>),
}

impl Field {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Field)>) -> Field {
        Field::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn reals(xs: impl IntoIterator<Item = f64>) -> Field {
        Field::List(xs.into_iter().map(Field::Real).collect())
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Field::List(_) | Field::Map(_))
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Real(x)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}

impl From<i64> for Field {
    fn from(x: i64) -> Self {
        Field::Int(x)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational result with nothing to pass or fail.
    Value,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Value => "value",
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub input_sha256: String,
    pub engine_version: String,
}

impl Provenance {
    pub fn of(input: &[u8]) -> Self {
        Provenance {
            input_sha256: hex::encode(Sha256::digest(input)),
            engine_version: netchain_core::VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub command: String,
    pub verdict: Verdict,
    pub numbers: BTreeMap<String, Field>,
    pub residuals: BTreeMap<String, Field>,
    /// Sub-reports of a combined run.
    pub analyses: Vec<AnalysisReport>,
    /// Analyses left out of a combined run, with the attribute they lacked.
    pub skipped: BTreeMap<String, String>,
    pub provenance: Option<Provenance>,
}

impl AnalysisReport {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        AnalysisReport {
            command: command.to_string(),
            verdict,
            numbers: BTreeMap::new(),
            residuals: BTreeMap::new(),
            analyses: Vec::new(),
            skipped: BTreeMap::new(),
            provenance: None,
        }
    }

    pub fn number(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.numbers.insert(key.to_string(), value.into());
        self
    }

    pub fn residual(mut self, key: &str, value: Field) -> Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    /// Names of the failed analyses, this one included.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.analyses.iter().flat_map(|a| a.failures()).collect();
        if out.is_empty() && self.verdict == Verdict::Fail {
            out.push(self.command.clone());
        }
        out
    }

    pub fn to_field(&self) -> Field {
        let mut m = BTreeMap::new();
        m.insert("command".to_string(), Field::Text(self.command.clone()));
        m.insert("verdict".to_string(), Field::Text(self.verdict.name().to_string()));
        m.insert("numbers".to_string(), Field::Map(self.numbers.clone()));
        m.insert("residuals".to_string(), Field::Map(self.residuals.clone()));
        if !self.analyses.is_empty() {
            m.insert("analyses".to_string(), Field::List(self.analyses.iter().map(|a| a.to_field()).collect()));
        }
        if !self.skipped.is_empty() {
            let skipped = self.skipped.iter().map(|(k, v)| (k.clone(), Field::Text(v.clone())));
            m.insert("skipped".to_string(), Field::map(skipped));
        }
        if let Some(p) = &self.provenance {
            m.insert(
                "provenance".to_string(),
                Field::map([
                    ("engine_version", Field::Text(p.engine_version.clone())),
                    ("input_sha256", Field::Text(p.input_sha256.clone())),
                ]),
            );
        }
        Field::Map(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&report.to_field()),
        Format::Text => to_text(report),
    }
}

/// Several documents' reports keyed by file name. Errors are reported in place.
pub fn emit_batch(entries: &[(String, Result<AnalysisReport, String>)], format: Format) -> String {
    match format {
        Format::Json => {
            let m = entries.iter().map(|(name, r)| {
                let v = match r {
                    Ok(r) => r.to_field(),
                    Err(e) => Field::map([("error", Field::Text(e.clone()))]),
                };
                (name.clone(), v)
            });
            to_json(&Field::map(m))
        }
        Format::Text => {
            let mut out = String::new();
            for (name, r) in entries {
                let _ = writeln!(out, "=== {name} ===");
                match r {
                    Ok(r) => out.push_str(&to_text(r)),
                    Err(e) => {
                        let _ = writeln!(out, "error: {e}");
                    }
                }
            }
            out
        }
    }
}

pub fn to_json(f: &Field) -> String {
    let mut out = String::new();
    write_json(f, 0, &mut out);
    out.push('\n');
    out
}

fn real_json(x: f64) -> String {
    if x.is_finite() {
        // `+ 0.0` folds negative zero.
        format!("{:.16e}", x + 0.0)
    } else {
        json_string(&x.to_string())
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn write_json(f: &Field, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match f {
        Field::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Field::Int(i) => out.push_str(&i.to_string()),
        Field::Real(x) => out.push_str(&real_json(*x)),
        Field::Exact(s) | Field::Text(s) => out.push_str(&json_string(s)),
        Field::List(xs) if xs.is_empty() => out.push_str("[]"),
        Field::List(xs) if xs.iter().all(Field::is_scalar) => {
            out.push('[');
            for (k, x) in xs.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_json(x, indent, out);
            }
            out.push(']');
        }
        Field::List(xs) => {
            out.push_str("[\n");
            for (k, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(x, indent + 1, out);
                out.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Field::Map(m) if m.is_empty() => out.push_str("{}"),
        Field::Map(m) => {
            out.push_str("{\n");
            for (k, (key, v)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&json_string(key));
                out.push_str(": ");
                write_json(v, indent + 1, out);
                out.push_str(if k + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

fn scalar_text(f: &Field) -> String {
    match f {
        Field::Bool(b) => b.to_string(),
        Field::Int(i) => i.to_string(),
        Field::Real(x) => format!("{:.6e}", x + 0.0),
        Field::Exact(s) | Field::Text(s) => s.clone(),
        Field::List(xs) => format!("[{}]", xs.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        Field::Map(_) => String::new(),
    }
}

/// Flattens nested values into `(dotted key, value)` rows.
fn rows(prefix: &str, f: &Field, out: &mut Vec<(String, String)>) {
    match f {
        Field::Map(m) if !m.is_empty() => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                rows(&key, v, out);
            }
        }
        Field::List(xs) if !xs.iter().all(Field::is_scalar) => {
            for (k, v) in xs.iter().enumerate() {
                rows(&format!("{prefix}[{k}]"), v, out);
            }
        }
        Field::Map(_) => out.push((prefix.to_string(), "{}".to_string())),
        _ => out.push((prefix.to_string(), scalar_text(f))),
    }
}

fn table(title: &str, m: &BTreeMap<String, Field>, out: &mut String) {
    if m.is_empty() {
        return;
    }
    let mut r = Vec::new();
    rows("", &Field::Map(m.clone()), &mut r);
    let width = r.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let _ = writeln!(out, "  {title}:");
    for (k, v) in r {
        let _ = writeln!(out, "    {k:<width$}  {v}");
    }
}

fn to_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    write_text(report, &mut out);
    if let Some(p) = &report.provenance {
        let _ = writeln!(out, "input sha256 {}, engine {}", p.input_sha256, p.engine_version);
    }
    out
}

fn write_text(report: &AnalysisReport, out: &mut String) {
    let _ = writeln!(out, "{}: {}", report.command, report.verdict.name());
    table("numbers", &report.numbers, out);
    table("residuals", &report.residuals, out);
    for a in &report.analyses {
        write_text(a, out);
    }
    for (command, missing) in &report.skipped {
        let _ = writeln!(out, "{command}: skipped, missing {missing}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn betti() -> AnalysisReport {
        AnalysisReport::new("homology", Verdict::Value)
            .number("betti", Field::List(vec![Field::Int(1), Field::Int(1)]))
            .number("euler", 0i64)
            .residual("gap", Field::Real(-0.0))
    }

    #[test]
    fn json_sorts_keys_and_fixes_digits() {
        let s = emit(&betti(), Format::Json);
        assert!(s.contains("\"betti\": [1, 1]"), "{s}");
        assert!(s.contains("\"euler\": 0"));
        assert!(s.contains("\"gap\": 0.0000000000000000e0"));
        assert!(s.find("\"command\"").unwrap() < s.find("\"numbers\"").unwrap());
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["numbers"]["betti"], serde_json::json!([1, 1]));
    }

    #[test]
    fn emission_is_repeatable() {
        for format in [Format::Text, Format::Json] {
            assert_eq!(emit(&betti(), format), emit(&betti(), format));
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(real_json(0.1), "1.0000000000000001e-1");
        assert_eq!(real_json(f64::NAN), "\"NaN\"");
        let x = 1.0 / 3.0;
        assert_eq!(real_json(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn failures_are_collected() {
        let mut all = AnalysisReport::new("report-all", Verdict::Fail);
        all.analyses.push(AnalysisReport::new("kcl", Verdict::Pass));
        all.analyses.push(AnalysisReport::new("kvl", Verdict::Fail));
        assert_eq!(all.failures(), vec!["kvl".to_string()]);
    }

    #[test]
    fn provenance_digest() {
        let p = Provenance::of(b"abc");
        assert_eq!(p.input_sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
