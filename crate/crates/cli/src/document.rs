//! The JSON network document.
//!
//! Branches are oriented `tail → head`, so `∂(branch) = head - tail`, and face
//! edges are signed branch ids such as `"-AC"`. Numbers are exact when written
//! as JSON integers or as strings (`"3/4"`, `"-0.25"`); any other JSON number
//! is a real.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use netchain_core::scalar::parse_rational;
use netchain_core::{Complex, Error as CoreError, Rational, Scalar};
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Exact(Rational),
    Real(f64),
}

impl Num {
    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => Scalar::to_f64(r),
            Num::Real(x) => *x,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Num::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Num::Exact(r) => match r.is_integer().then(|| r.numer().to_i64()).flatten() {
                Some(i) => Value::from(i),
                None => Value::String(exact_string(r)),
            },
        }
    }
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn exact_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A value that is either constant in time or sampled at every signal step.
#[derive(Debug, Clone, PartialEq)]
pub enum Series<T> {
    Constant(T),
    Samples(Vec<T>),
}

impl<T: Clone> Series<T> {
    /// Value at sample `t`; constants ignore `t`.
    pub fn at(&self, t: usize) -> &T {
        match self {
            Series::Constant(x) => x,
            Series::Samples(s) => &s[t.min(s.len() - 1)],
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, Series::Samples(_))
    }

    pub fn expand(&self, len: usize) -> Vec<T> {
        match self {
            Series::Constant(x) => vec![x.clone(); len],
            Series::Samples(s) => s.clone(),
        }
    }

    fn values(&self) -> Box<dyn Iterator<Item = &T> + '_> {
        match self {
            Series::Constant(x) => Box::new(std::iter::once(x)),
            Series::Samples(s) => Box::new(s.iter()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub dt: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub pos: Option<Series<Vec<Num>>>,
    pub mass: Option<Series<Num>>,
    pub charge: Option<Series<Num>>,
    pub voltage: Option<Series<Num>>,
    pub force: Option<Series<Vec<Num>>>,
    /// Applied couple, upper-triangle bivector components.
    pub moment: Option<Vec<Num>>,
    pub momentum: Option<Series<Vec<Num>>>,
    /// Part of the surroundings; identified with the point at infinity when closing the system.
    pub external: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InternalForce {
    /// Axial force `f`: the branch acts on its head with `f s/|s|` and on its
    /// tail with the opposite, where `s = x(head) - x(tail)`.
    Axial(Num),
    Vector(Series<Vec<Num>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub current: Option<Series<Num>>,
    pub internal_force: Option<InternalForce>,
    pub mass_flow: Option<Series<Num>>,
    pub voltage_drop: Option<Series<Num>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceDoc {
    pub id: String,
    pub edges: Vec<(String, i8)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Homology,
    Kcl,
    Kvl,
    Statics,
    Moments,
    Rigidity,
    Mass,
    Momentum,
    Angular,
    Energy,
    VirtualWork,
    Dalembert,
    ReportAll,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Homology,
        Command::Kcl,
        Command::Kvl,
        Command::Statics,
        Command::Moments,
        Command::Rigidity,
        Command::Mass,
        Command::Momentum,
        Command::Angular,
        Command::Energy,
        Command::VirtualWork,
        Command::Dalembert,
        Command::ReportAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Homology => "homology",
            Command::Kcl => "kcl",
            Command::Kvl => "kvl",
            Command::Statics => "statics",
            Command::Moments => "moments",
            Command::Rigidity => "rigidity",
            Command::Mass => "mass",
            Command::Momentum => "momentum",
            Command::Angular => "angular",
            Command::Energy => "energy",
            Command::VirtualWork => "virtual-work",
            Command::Dalembert => "dalembert",
            Command::ReportAll => "report-all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

/// Per-analysis options. Unset fields fall back to the command line, then to defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub origin: Option<String>,
    pub tolerance: Option<f64>,
    pub t0: Option<usize>,
    pub t1: Option<usize>,
}

impl Options {
    /// `self` where set, `fallback` elsewhere.
    pub fn or(&self, fallback: &Options) -> Options {
        Options {
            origin: self.origin.clone().or_else(|| fallback.origin.clone()),
            tolerance: self.tolerance.or(fallback.tolerance),
            t0: self.t0.or(fallback.t0),
            t1: self.t1.or(fallback.t1),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(netchain_core::DEFAULT_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub command: Command,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDocument {
    pub dimension: usize,
    pub signal: Option<SignalSpec>,
    pub nodes: Vec<Node>,
    pub branches: Vec<Branch>,
    pub faces: Vec<FaceDoc>,
    pub analyses: Vec<Analysis>,
    complex: Complex,
}

impl NetworkDocument {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Every number the document holds is exact.
    pub fn is_exact(&self) -> bool {
        let vectors = |s: &Option<Series<Vec<Num>>>| s.iter().flat_map(|s| s.values()).flatten().all(Num::is_exact);
        let scalars = |s: &Option<Series<Num>>| s.iter().flat_map(|s| s.values()).all(Num::is_exact);
        self.nodes.iter().all(|n| {
            vectors(&n.pos)
                && vectors(&n.force)
                && vectors(&n.momentum)
                && scalars(&n.mass)
                && scalars(&n.charge)
                && scalars(&n.voltage)
                && n.moment.iter().flatten().all(Num::is_exact)
        }) && self.branches.iter().all(|b| {
            scalars(&b.current)
                && scalars(&b.mass_flow)
                && scalars(&b.voltage_drop)
                && match &b.internal_force {
                    None => true,
                    Some(InternalForce::Axial(x)) => x.is_exact(),
                    Some(InternalForce::Vector(v)) => v.values().flatten().all(Num::is_exact),
                }
        })
    }

    /// Canonical JSON form: sorted keys, absent attributes omitted.
    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("dimension".into(), Value::from(self.dimension));
        if let Some(s) = &self.signal {
            let mut m = Map::new();
            m.insert("dt".into(), Num::Real(s.dt).to_json());
            m.insert("samples".into(), Value::from(s.samples));
            top.insert("signal".into(), Value::Object(m));
        }
        top.insert("nodes".into(), Value::Array(self.nodes.iter().map(node_json).collect()));
        top.insert("branches".into(), Value::Array(self.branches.iter().map(branch_json).collect()));
        if !self.faces.is_empty() {
            let faces = self.faces.iter().map(|f| {
                let mut m = Map::new();
                m.insert("id".into(), Value::from(f.id.clone()));
                let edges = f.edges.iter().map(|(e, s)| Value::from(if *s < 0 { format!("-{e}") } else { e.clone() }));
                m.insert("edges".into(), Value::Array(edges.collect()));
                Value::Object(m)
            });
            top.insert("faces".into(), Value::Array(faces.collect()));
        }
        if !self.analyses.is_empty() {
            let analyses = self.analyses.iter().map(|a| {
                let mut m = Map::new();
                m.insert("command".into(), Value::from(a.command.name()));
                if let Some(o) = &a.options.origin {
                    m.insert("origin".into(), Value::from(o.clone()));
                }
                if let Some(t) = a.options.tolerance {
                    m.insert("tolerance".into(), Num::Real(t).to_json());
                }
                if let Some(t) = a.options.t0 {
                    m.insert("t0".into(), Value::from(t));
                }
                if let Some(t) = a.options.t1 {
                    m.insert("t1".into(), Value::from(t));
                }
                Value::Object(m)
            });
            top.insert("analyses".into(), Value::Array(analyses.collect()));
        }
        Value::Object(top)
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("document serializes");
        s.push('\n');
        s
    }
}

fn vector_json(v: &[Num]) -> Value {
    Value::Array(v.iter().map(Num::to_json).collect())
}

fn scalar_series_json(s: &Series<Num>) -> Value {
    match s {
        Series::Constant(x) => x.to_json(),
        Series::Samples(xs) => vector_json(xs),
    }
}

fn vector_series_json(s: &Series<Vec<Num>>) -> Value {
    match s {
        Series::Constant(x) => vector_json(x),
        Series::Samples(xs) => Value::Array(xs.iter().map(|x| vector_json(x)).collect()),
    }
}

fn node_json(n: &Node) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::from(n.id.clone()));
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    put("pos", n.pos.as_ref().map(vector_series_json));
    put("mass", n.mass.as_ref().map(scalar_series_json));
    put("charge", n.charge.as_ref().map(scalar_series_json));
    put("voltage", n.voltage.as_ref().map(scalar_series_json));
    put("force", n.force.as_ref().map(vector_series_json));
    put("moment", n.moment.as_ref().map(|v| vector_json(v)));
    put("momentum", n.momentum.as_ref().map(vector_series_json));
    put("external", n.external.then_some(Value::Bool(true)));
    Value::Object(m)
}

fn branch_json(b: &Branch) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::from(b.id.clone()));
    m.insert("tail".into(), Value::from(b.tail.clone()));
    m.insert("head".into(), Value::from(b.head.clone()));
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    put("current", b.current.as_ref().map(scalar_series_json));
    put("mass_flow", b.mass_flow.as_ref().map(scalar_series_json));
    put("voltage_drop", b.voltage_drop.as_ref().map(scalar_series_json));
    put(
        "internal_force",
        b.internal_force.as_ref().map(|f| match f {
            InternalForce::Axial(x) => x.to_json(),
            InternalForce::Vector(v) => vector_series_json(v),
        }),
    );
    Value::Object(m)
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<NetworkDocument> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Syntax { line: e.line(), message: e.to_string() })?;
    let top = fields(&value, "document", &["dimension", "signal", "nodes", "branches", "faces", "analyses"])?;

    let dimension = match top.get("dimension") {
        Some(v) => v.as_u64().filter(|&n| n >= 1).ok_or_else(|| invalid("dimension", "expected a positive integer"))?
            as usize,
        None => return Err(invalid("dimension", "required")),
    };
    let signal = match top.get("signal") {
        None => None,
        Some(v) => {
            let m = fields(v, "signal", &["dt", "samples"])?;
            let dt = m
                .get("dt")
                .and_then(Value::as_f64)
                .filter(|dt| dt.is_finite() && *dt > 0.0)
                .ok_or_else(|| invalid("signal.dt", "expected a positive number"))?;
            let samples = m
                .get("samples")
                .and_then(Value::as_u64)
                .filter(|&s| s >= 1)
                .ok_or_else(|| invalid("signal.samples", "expected a positive integer"))?;
            Some(SignalSpec { dt, samples: samples as usize })
        }
    };
    let p = Parser { n: dimension, samples: signal.as_ref().map(|s| s.samples) };

    let nodes = list(top, "nodes")?.iter().enumerate().map(|(i, v)| p.node(v, &format!("nodes[{i}]"))).collect::<Result<Vec<_>>>()?;
    unique(nodes.iter().map(|n| n.id.as_str()), "nodes")?;
    let node_ids: BTreeSet<&str> = nodes.iter().map(|n| n.id.as_str()).collect();

    let branches = list(top, "branches")?
        .iter()
        .enumerate()
        .map(|(i, v)| p.branch(v, &format!("branches[{i}]"), &node_ids))
        .collect::<Result<Vec<_>>>()?;
    unique(branches.iter().map(|b| b.id.as_str()), "branches")?;
    let branch_ids: BTreeSet<&str> = branches.iter().map(|b| b.id.as_str()).collect();

    let faces = match top.get("faces") {
        None => Vec::new(),
        Some(_) => list(top, "faces")?
            .iter()
            .enumerate()
            .map(|(i, v)| face(v, &format!("faces[{i}]"), &branch_ids))
            .collect::<Result<Vec<_>>>()?,
    };
    unique(faces.iter().map(|f| f.id.as_str()), "faces")?;

    let analyses = match top.get("analyses") {
        None => Vec::new(),
        Some(_) => list(top, "analyses")?
            .iter()
            .enumerate()
            .map(|(i, v)| analysis(v, &format!("analyses[{i}]"), &node_ids))
            .collect::<Result<Vec<_>>>()?,
    };

    let complex = build_complex(&nodes, &branches, &faces)?;
    Ok(NetworkDocument { dimension, signal, nodes, branches, faces, analyses, complex })
}

fn build_complex(nodes: &[Node], branches: &[Branch], faces: &[FaceDoc]) -> Result<Complex> {
    let mut b = Complex::builder().nodes(nodes.iter().map(|n| n.id.clone()));
    for br in branches {
        b = b.branch(br.id.clone(), br.tail.clone(), br.head.clone());
    }
    for f in faces {
        let e = |k: usize| (f.edges[k].0.as_str(), f.edges[k].1);
        b = b.face(f.id.clone(), [e(0), e(1), e(2)]);
    }
    b.build().map_err(|e| match e {
        CoreError::NonClosingFace(label) => {
            let i = faces.iter().position(|f| f.id == label).unwrap_or(0);
            invalid(&format!("faces[{i}].edges"), "edges do not close into a triangle")
        }
        other => invalid("document", &other.to_string()),
    })
}

fn invalid(path: &str, message: &str) -> CliError {
    CliError::validation(path, message)
}

fn fields<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| invalid(path, "expected an object"))?;
    if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        let at = if path == "document" { k.clone() } else { format!("{path}.{k}") };
        return Err(invalid(&at, "unknown field"));
    }
    Ok(m)
}

fn list<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    m.get(key).ok_or_else(|| invalid(key, "required"))?.as_array().ok_or_else(|| invalid(key, "expected a list"))
}

fn string(m: &Map<String, Value>, key: &str, path: &str) -> Result<String> {
    let at = format!("{path}.{key}");
    let s = m.get(key).ok_or_else(|| invalid(&at, "required"))?.as_str().ok_or_else(|| invalid(&at, "expected a string"))?;
    if s.is_empty() {
        return Err(invalid(&at, "empty id"));
    }
    Ok(s.to_string())
}

fn unique<'a>(ids: impl Iterator<Item = &'a str>, section: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (i, id) in ids.enumerate() {
        if !seen.insert(id) {
            return Err(invalid(&format!("{section}[{i}].id"), &format!("duplicate id `{id}`")));
        }
    }
    Ok(())
}

fn face(v: &Value, path: &str, branch_ids: &BTreeSet<&str>) -> Result<FaceDoc> {
    let m = fields(v, path, &["id", "edges"])?;
    let id = string(m, "id", path)?;
    let at = format!("{path}.edges");
    let raw = m.get("edges").and_then(Value::as_array).ok_or_else(|| invalid(&at, "expected a list of 3 signed branch ids"))?;
    if raw.len() != 3 {
        return Err(invalid(&at, &format!("expected 3 edges, found {}", raw.len())));
    }
    let mut edges = Vec::with_capacity(3);
    for (k, e) in raw.iter().enumerate() {
        let at = format!("{path}.edges[{k}]");
        let s = e.as_str().ok_or_else(|| invalid(&at, "expected a signed branch id"))?;
        let (label, sign) = match (s.strip_prefix('-'), s.strip_prefix('+')) {
            (Some(rest), _) => (rest, -1),
            (_, Some(rest)) => (rest, 1),
            _ => (s, 1),
        };
        if !branch_ids.contains(label) {
            return Err(invalid(&at, &format!("unknown branch `{label}`")));
        }
        edges.push((label.to_string(), sign));
    }
    Ok(FaceDoc { id, edges })
}

fn analysis(v: &Value, path: &str, node_ids: &BTreeSet<&str>) -> Result<Analysis> {
    if let Some(name) = v.as_str() {
        let command = name.parse().map_err(|_| invalid(path, &format!("unknown command `{name}`")))?;
        return Ok(Analysis { command, options: Options::default() });
    }
    let m = fields(v, path, &["command", "origin", "tolerance", "t0", "t1"])?;
    let name = string(m, "command", path)?;
    let command = name.parse().map_err(|_| invalid(&format!("{path}.command"), &format!("unknown command `{name}`")))?;
    let origin = match m.get("origin") {
        None => None,
        Some(_) => {
            let o = string(m, "origin", path)?;
            if !node_ids.contains(o.as_str()) {
                return Err(invalid(&format!("{path}.origin"), &format!("unknown node `{o}`")));
            }
            Some(o)
        }
    };
    let tolerance = match m.get("tolerance") {
        None => None,
        Some(t) => Some(
            t.as_f64()
                .filter(|t| t.is_finite() && *t >= 0.0)
                .ok_or_else(|| invalid(&format!("{path}.tolerance"), "expected a non-negative number"))?,
        ),
    };
    let index = |key: &str| -> Result<Option<usize>> {
        match m.get(key) {
            None => Ok(None),
            Some(t) => t
                .as_u64()
                .map(|t| Some(t as usize))
                .ok_or_else(|| invalid(&format!("{path}.{key}"), "expected a sample index")),
        }
    };
    Ok(Analysis { command, options: Options { origin, tolerance, t0: index("t0")?, t1: index("t1")? } })
}

struct Parser {
    n: usize,
    samples: Option<usize>,
}

impl Parser {
    fn num(&self, v: &Value, path: &str) -> Result<Num> {
        match v {
            Value::Number(x) => {
                if let Some(i) = x.as_i64() {
                    Ok(Num::Exact(Rational::from_integer(i.into())))
                } else if let Some(u) = x.as_u64() {
                    Ok(Num::Exact(Rational::from_integer(u.into())))
                } else {
                    x.as_f64().map(Num::Real).ok_or_else(|| invalid(path, "number out of range"))
                }
            }
            Value::String(s) => {
                parse_rational(s).map(Num::Exact).ok_or_else(|| invalid(path, &format!("`{s}` is not a rational number")))
            }
            _ => Err(invalid(path, "expected a number or a rational string")),
        }
    }

    fn vector_of(&self, v: &Value, path: &str, len: usize) -> Result<Vec<Num>> {
        let a = v.as_array().ok_or_else(|| invalid(path, &format!("expected a list of {len} numbers")))?;
        if a.len() != len {
            return Err(invalid(path, &format!("expected {len} components, found {}", a.len())));
        }
        a.iter().enumerate().map(|(k, x)| self.num(x, &format!("{path}[{k}]"))).collect()
    }

    fn check_samples(&self, found: usize, path: &str) -> Result<()> {
        match self.samples {
            None => Err(invalid(path, "sample list given but the document declares no signal")),
            Some(expected) if expected != found => {
                Err(invalid(path, &format!("expected {expected} samples (signal.samples), found {found}")))
            }
            Some(_) => Ok(()),
        }
    }

    fn scalar_series(&self, v: &Value, path: &str) -> Result<Series<Num>> {
        match v.as_array() {
            None => Ok(Series::Constant(self.num(v, path)?)),
            Some(a) => {
                self.check_samples(a.len(), path)?;
                let s = a.iter().enumerate().map(|(k, x)| self.num(x, &format!("{path}[{k}]"))).collect::<Result<_>>()?;
                Ok(Series::Samples(s))
            }
        }
    }

    /// `[n numbers]` is constant, a list of such lists is sampled.
    fn vector_series(&self, v: &Value, path: &str) -> Result<Series<Vec<Num>>> {
        let a = v.as_array().ok_or_else(|| invalid(path, "expected a list"))?;
        if a.first().is_some_and(Value::is_array) {
            self.check_samples(a.len(), path)?;
            let s = a
                .iter()
                .enumerate()
                .map(|(k, x)| self.vector_of(x, &format!("{path}[{k}]"), self.n))
                .collect::<Result<_>>()?;
            Ok(Series::Samples(s))
        } else {
            Ok(Series::Constant(self.vector_of(v, path, self.n)?))
        }
    }

    fn optional<T>(
        &self,
        m: &Map<String, Value>,
        key: &str,
        path: &str,
        f: impl Fn(&Self, &Value, &str) -> Result<T>,
    ) -> Result<Option<T>> {
        m.get(key).map(|v| f(self, v, &format!("{path}.{key}"))).transpose()
    }

    fn node(&self, v: &Value, path: &str) -> Result<Node> {
        let m = fields(v, path, &["id", "pos", "mass", "charge", "voltage", "force", "moment", "momentum", "external"])?;
        let bivector_len = self.n * (self.n - 1) / 2;
        Ok(Node {
            id: string(m, "id", path)?,
            pos: self.optional(m, "pos", path, Self::vector_series)?,
            mass: self.optional(m, "mass", path, Self::scalar_series)?,
            charge: self.optional(m, "charge", path, Self::scalar_series)?,
            voltage: self.optional(m, "voltage", path, Self::scalar_series)?,
            force: self.optional(m, "force", path, Self::vector_series)?,
            moment: self.optional(m, "moment", path, |p, v, at| p.vector_of(v, at, bivector_len))?,
            momentum: self.optional(m, "momentum", path, Self::vector_series)?,
            external: match m.get("external") {
                None => false,
                Some(e) => e.as_bool().ok_or_else(|| invalid(&format!("{path}.external"), "expected a boolean"))?,
            },
        })
    }

    fn branch(&self, v: &Value, path: &str, node_ids: &BTreeSet<&str>) -> Result<Branch> {
        let m = fields(v, path, &["id", "tail", "head", "current", "internal_force", "mass_flow", "voltage_drop"])?;
        let id = string(m, "id", path)?;
        let tail = string(m, "tail", path)?;
        let head = string(m, "head", path)?;
        for (key, node) in [("tail", &tail), ("head", &head)] {
            if !node_ids.contains(node.as_str()) {
                return Err(invalid(&format!("{path}.{key}"), &format!("unknown node `{node}`")));
            }
        }
        if tail == head {
            return Err(invalid(&format!("{path}.head"), "same node as the tail"));
        }
        let internal_force = self.optional(m, "internal_force", path, |p, v, at| {
            Ok(if v.is_array() { InternalForce::Vector(p.vector_series(v, at)?) } else { InternalForce::Axial(p.num(v, at)?) })
        })?;
        Ok(Branch {
            id,
            tail,
            head,
            current: self.optional(m, "current", path, Self::scalar_series)?,
            internal_force,
            mass_flow: self.optional(m, "mass_flow", path, Self::scalar_series)?,
            voltage_drop: self.optional(m, "voltage_drop", path, Self::scalar_series)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"{
        "dimension": 2,
        "nodes": [{"id": "A"}, {"id": "B"}, {"id": "C"}],
        "branches": [
            {"id": "AB", "tail": "A", "head": "B"},
            {"id": "AC", "tail": "A", "head": "C"},
            {"id": "BC", "tail": "B", "head": "C"}
        ]
    }"#;

    fn path_of(e: CliError) -> String {
        match e {
            CliError::Validation { path, .. } => path,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn circle_parses() {
        let doc = parse(CIRCLE).unwrap();
        assert_eq!(doc.nodes.len(), 3);
        assert_eq!(doc.branches.len(), 3);
        assert_eq!(doc.complex().counts(), [3, 3, 0]);
    }

    #[test]
    fn unknown_head_is_located() {
        let text = CIRCLE.replace(r#""head": "B""#, r#""head": "Z""#);
        assert_eq!(path_of(parse(&text).unwrap_err()), "branches[0].head");
    }

    #[test]
    fn sample_length_mismatch_names_both_lengths() {
        let text = r#"{"dimension": 1, "signal": {"dt": 0.5, "samples": 4},
            "nodes": [{"id": "A", "mass": [1, 1, 1]}], "branches": []}"#;
        match parse(text).unwrap_err() {
            CliError::Validation { path, message } => {
                assert_eq!(path, "nodes[0].mass");
                assert!(message.contains('4') && message.contains('3'), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        match parse("{\n\"dimension\": 2,\n\"nodes\": [,]\n}").unwrap_err() {
            CliError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_and_unknown_fields_are_rejected() {
        let dup = CIRCLE.replace(r#"{"id": "C"}"#, r#"{"id": "A"}"#);
        assert_eq!(path_of(parse(&dup).unwrap_err()), "nodes[2].id");
        let extra = CIRCLE.replace(r#"{"id": "C"}"#, r#"{"id": "C", "colour": 1}"#);
        assert_eq!(path_of(parse(&extra).unwrap_err()), "nodes[2].colour");
    }

    #[test]
    fn exact_and_real_numbers() {
        let p = Parser { n: 2, samples: None };
        assert_eq!(p.num(&Value::from("3/4"), "x").unwrap(), Num::Exact(Rational::new(3.into(), 4.into())));
        assert_eq!(p.num(&Value::from(2), "x").unwrap(), Num::Exact(Rational::from_integer(2.into())));
        assert_eq!(p.num(&serde_json::json!(0.5), "x").unwrap(), Num::Real(0.5));
        assert!(p.num(&Value::from("1/0"), "x").is_err());
    }

    #[test]
    fn open_face_is_rejected() {
        let text = CIRCLE.replace("]\n    }", r#"], "faces": [{"id": "F", "edges": ["AB", "BC", "AC"]}]}"#);
        assert_eq!(path_of(parse(&text).unwrap_err()), "faces[0].edges");
    }

    #[test]
    fn canonical_form_is_a_fixpoint() {
        let text = r#"{"dimension": 2, "nodes": [{"id": "A", "pos": ["1/2", 0.25]}, {"id": "B", "pos": [1, 0]}],
            "branches": [{"id": "AB", "tail": "A", "head": "B", "internal_force": "-3/2", "current": 2.0}],
            "analyses": ["statics", {"command": "moments", "origin": "A"}]}"#;
        let once = parse(text).unwrap().to_canonical_string();
        let doc = parse(&once).unwrap();
        assert_eq!(doc.to_canonical_string(), once);
        assert_eq!(doc.branches[0].current, Some(Series::Constant(Num::Real(2.0))));
    }
}
