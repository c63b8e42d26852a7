//! Dispatch of analyses over a parsed document.
//!
//! Static analyses run over the rationals when every value they read is exact
//! and fall back to `f64` otherwise. Time-dependent analyses always use `f64`.

use netchain_core::chain::Graded;
use netchain_core::electrical::{kvl_check, CircuitState, KvlResult, Signal};
use netchain_core::geometry::{is_rigid_motion, GeometricComplex, RigidityMode};
use netchain_core::homology::homology_summary;
use netchain_core::mechanics::{
    angular_momentum_balance, close_open_system, dalembert_max_residual, equilibrium_check,
    equilibrium_matrix, equilibrium_via_virtual_work, impulse, impulse_momentum_gap, internal_forces, kinetic_energy,
    mass_balance_check, moment_impulse_gap, moment_residual, momentum_balance_check, nodal_loads, solve_statics,
    work_energy_check, Determinacy, DynamicsState, ForceComplex, ForceHistory,
};
use netchain_core::scalar::{FieldScalar, ScalarKind};
use netchain_core::{
    Bivector, Chain, Cochain, Coefficient, Covector, Error as CoreError, Integer, ModuleKind, Rational, Sampled,
    Scalar, TimeSeries, Vector,
};
use num_traits::Signed;

use crate::document::{exact_string, Command, InternalForce, NetworkDocument, Num, Options, Series};
use crate::error::{CliError, Result};
use crate::report::{AnalysisReport, Field, Provenance, Verdict};

/// Runs one analysis. Engine errors become failed reports; missing data does not.
pub fn run(doc: &NetworkDocument, command: Command, opts: &Options) -> Result<AnalysisReport> {
    let result = match command {
        Command::Homology => homology(doc),
        Command::Kcl => kcl(doc, opts),
        Command::Kvl => kvl(doc, opts),
        Command::Statics => exact_first(|| statics::<Rational>(doc, opts), || statics::<f64>(doc, opts)),
        Command::Moments => exact_first(|| moments::<Rational>(doc, opts), || moments::<f64>(doc, opts)),
        Command::Rigidity => exact_first(|| rigidity::<Rational>(doc, opts), || rigidity::<f64>(doc, opts)),
        Command::VirtualWork => {
            exact_first(|| virtual_work::<Rational>(doc, opts), || virtual_work::<f64>(doc, opts))
        }
        Command::Mass => mass(doc, opts),
        Command::Momentum => momentum(doc, opts),
        Command::Angular => angular(doc, opts),
        Command::Energy => energy(doc, opts),
        Command::Dalembert => dalembert(doc, opts),
        Command::ReportAll => return report_all(doc, opts),
    };
    match result {
        Err(CliError::Core(e)) => Ok(AnalysisReport::new(command.name(), Verdict::Fail).number("error", e.to_string().as_str())),
        other => other,
    }
}

/// Every analysis the document has data for; the rest are listed as skipped.
pub fn report_all(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let mut out = AnalysisReport::new(Command::ReportAll.name(), Verdict::Pass);
    for command in Command::ALL.into_iter().filter(|&c| c != Command::ReportAll) {
        match run(doc, command, opts) {
            Ok(r) => out.analyses.push(r),
            Err(CliError::MissingData(attribute)) => {
                out.skipped.insert(command.name().to_string(), attribute);
            }
            Err(e) => return Err(e),
        }
    }
    out.verdict = Verdict::from_check(out.analyses.iter().all(|a| a.verdict != Verdict::Fail));
    Ok(out)
}

/// Runs `command` if given, else the analyses the document lists, else everything.
/// Options set on the command line override the document's.
pub fn run_document(doc: &NetworkDocument, command: Option<Command>, cli: &Options, input: &[u8]) -> Result<AnalysisReport> {
    let mut report = match command {
        Some(c) => run(doc, c, cli)?,
        None if doc.analyses.is_empty() => report_all(doc, cli)?,
        None => {
            let mut out = AnalysisReport::new("analyses", Verdict::Pass);
            for a in &doc.analyses {
                out.analyses.push(run(doc, a.command, &cli.or(&a.options))?);
            }
            out.verdict = Verdict::from_check(out.analyses.iter().all(|a| a.verdict != Verdict::Fail));
            out
        }
    };
    report.provenance = Some(Provenance::of(input));
    Ok(report)
}

fn exact_first(
    exact: impl FnOnce() -> Result<Option<AnalysisReport>>,
    real: impl FnOnce() -> Result<Option<AnalysisReport>>,
) -> Result<AnalysisReport> {
    match exact()? {
        Some(r) => Ok(r),
        None => Ok(real()?.expect("every number converts to f64")),
    }
}

// ---------------------------------------------------------------------------
// Values

trait Emit {
    fn field(&self) -> Field;
}

impl Emit for Integer {
    fn field(&self) -> Field {
        Field::Exact(self.to_string())
    }
}

impl Emit for Rational {
    fn field(&self) -> Field {
        Field::Exact(exact_string(self))
    }
}

impl Emit for f64 {
    fn field(&self) -> Field {
        Field::Real(*self)
    }
}

impl Emit for TimeSeries {
    fn field(&self) -> Field {
        Field::reals(self.samples.iter().copied())
    }
}

impl<S: Emit> Emit for Vector<S> {
    fn field(&self) -> Field {
        Field::List(self.0.iter().map(Emit::field).collect())
    }
}

impl<S: Emit> Emit for Covector<S> {
    fn field(&self) -> Field {
        Field::List(self.0.iter().map(Emit::field).collect())
    }
}

impl<S: Emit + Scalar> Emit for Bivector<S> {
    fn field(&self) -> Field {
        Field::List(self.components().iter().map(Emit::field).collect())
    }
}

/// Nonzero terms keyed by simplex label.
fn sparse<C: Coefficient + Emit, const D: bool>(c: &Graded<C, D>, labels: &[String]) -> Field {
    Field::map(c.terms().map(|(i, x)| (labels[i].clone(), x.field())))
}

/// One entry per simplex.
fn dense<T: Emit>(values: &[T], labels: &[String]) -> Field {
    Field::map(values.iter().zip(labels).map(|(x, l)| (l.clone(), x.field())))
}

fn norms<C: Coefficient>(values: &[C], labels: &[String]) -> Field {
    Field::map(values.iter().zip(labels).map(|(x, l)| (l.clone(), Field::Real(x.max_norm()))))
}

/// Coefficients read from constant or sampled document values.
trait SignalValue: Signal + Emit {
    fn module(doc: &NetworkDocument) -> ModuleKind;
    fn from_series(s: &Series<Num>, doc: &NetworkDocument) -> Option<Self>;
}

/// Scalars for static analyses.
trait DocScalar: FieldScalar + SignalValue {
    const ARITHMETIC: &'static str;
    fn from_num(x: &Num) -> Option<Self>;
    fn sqrt(&self) -> Option<Self>;
}

impl SignalValue for Rational {
    fn module(_: &NetworkDocument) -> ModuleKind {
        ModuleKind::of_scalar(ScalarKind::Rational)
    }
    fn from_series(s: &Series<Num>, _: &NetworkDocument) -> Option<Self> {
        match s {
            Series::Constant(x) => Self::from_num(x),
            Series::Samples(_) => None,
        }
    }
}

impl DocScalar for Rational {
    const ARITHMETIC: &'static str = "exact";
    fn from_num(x: &Num) -> Option<Self> {
        match x {
            Num::Exact(r) => Some(r.clone()),
            Num::Real(_) => None,
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (p, q) = (self.numer().sqrt(), self.denom().sqrt());
        (&p * &p == *self.numer() && &q * &q == *self.denom()).then(|| Rational::new(p, q))
    }
}

impl SignalValue for f64 {
    fn module(_: &NetworkDocument) -> ModuleKind {
        ModuleKind::of_scalar(ScalarKind::Real64)
    }
    fn from_series(s: &Series<Num>, _: &NetworkDocument) -> Option<Self> {
        match s {
            Series::Constant(x) => Some(x.to_f64()),
            Series::Samples(_) => None,
        }
    }
}

impl DocScalar for f64 {
    const ARITHMETIC: &'static str = "real";
    fn from_num(x: &Num) -> Option<Self> {
        Some(x.to_f64())
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

impl SignalValue for TimeSeries {
    fn module(doc: &NetworkDocument) -> ModuleKind {
        let s = doc.signal.as_ref().expect("sampled values imply a signal");
        ModuleKind::TimeSeries { dt: s.dt, len: s.samples }
    }
    fn from_series(s: &Series<Num>, doc: &NetworkDocument) -> Option<Self> {
        let sig = doc.signal.as_ref()?;
        Some(TimeSeries::new(sig.dt, s.expand(sig.samples).iter().map(Num::to_f64).collect()))
    }
}

fn convert<S: DocScalar>(xs: &[Num]) -> Option<Vec<S>> {
    xs.iter().map(S::from_num).collect()
}

// ---------------------------------------------------------------------------
// Topology and circuits

fn homology(doc: &NetworkDocument) -> Result<AnalysisReport> {
    let c = doc.complex();
    let s = homology_summary(c)?;
    let generators = s.generators.iter().enumerate().map(|(k, gens)| {
        (format!("H{k}"), Field::List(gens.iter().map(|z| sparse(z, c.labels(k))).collect()))
    });
    let torsion = s.torsion.iter().map(|t| Field::List(t.iter().map(Emit::field).collect()));
    Ok(AnalysisReport::new("homology", Verdict::Value)
        .number("betti", Field::List(s.betti.iter().map(|&b| Field::from(b)).collect()))
        .number("euler", s.euler)
        .number("torsion", Field::List(torsion.collect()))
        .number("simplex_counts", Field::List(c.counts().iter().map(|&r| Field::from(r)).collect()))
        .residual("generators", Field::map(generators)))
}

fn kcl(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    if doc.branches.iter().any(|b| b.current.is_none()) {
        return Err(CliError::missing("branches[*].current"));
    }
    let sampled = doc.branches.iter().any(|b| b.current.as_ref().is_some_and(Series::is_sampled))
        || doc.nodes.iter().any(|n| n.charge.as_ref().is_some_and(Series::is_sampled));
    if sampled {
        return Ok(kcl_with::<TimeSeries>(doc, opts, "sampled")?.expect("samples convert"));
    }
    exact_first(|| kcl_with::<Rational>(doc, opts, "exact"), || kcl_with::<f64>(doc, opts, "real"))
}

fn kcl_with<C: SignalValue>(doc: &NetworkDocument, opts: &Options, arithmetic: &str) -> Result<Option<AnalysisReport>> {
    let tol = opts.tolerance();
    let module = C::module(doc);
    let mut current = Chain::zero(1, module);
    for (a, b) in doc.branches.iter().enumerate() {
        let Some(x) = b.current.as_ref().and_then(|s| C::from_series(s, doc)) else { return Ok(None) };
        current.add_term(a, x)?;
    }
    let mut state = CircuitState::new(doc.complex().clone(), current);
    if doc.nodes.iter().any(|n| n.charge.is_some()) {
        let mut q = Chain::zero(0, module);
        for (i, n) in doc.nodes.iter().enumerate() {
            if let Some(s) = &n.charge {
                let Some(x) = C::from_series(s, doc) else { return Ok(None) };
                q.add_term(i, x)?;
            }
        }
        state = state.with_charge(q);
    }
    let r = state.kcl_check(tol)?;
    Ok(Some(
        AnalysisReport::new("kcl", Verdict::from_check(r.residual.is_zero_within(tol)))
            .number("arithmetic", arithmetic)
            .number("conserved", r.conserved)
            .number("extended_cycle", r.extended_cycle)
            .number("max_norm", r.max_norm)
            .residual("node_residual", sparse(&r.residual, doc.complex().labels(0))),
    ))
}

fn kvl(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let from_drops = doc.branches.iter().all(|b| b.voltage_drop.is_some());
    if !from_drops && doc.nodes.iter().any(|n| n.voltage.is_none()) {
        return Err(CliError::missing("branches[*].voltage_drop"));
    }
    let sampled = if from_drops {
        doc.branches.iter().any(|b| b.voltage_drop.as_ref().is_some_and(Series::is_sampled))
    } else {
        doc.nodes.iter().any(|n| n.voltage.as_ref().is_some_and(Series::is_sampled))
    };
    if sampled {
        return Ok(kvl_with::<TimeSeries>(doc, opts, from_drops, "sampled")?.expect("samples convert"));
    }
    exact_first(
        || kvl_with::<Rational>(doc, opts, from_drops, "exact"),
        || kvl_with::<f64>(doc, opts, from_drops, "real"),
    )
}

fn kvl_with<C: SignalValue>(
    doc: &NetworkDocument,
    opts: &Options,
    from_drops: bool,
    arithmetic: &str,
) -> Result<Option<AnalysisReport>> {
    let complex = doc.complex();
    let module = C::module(doc);
    let dv = if from_drops {
        let mut dv = Cochain::zero(1, module);
        for (a, b) in doc.branches.iter().enumerate() {
            let Some(x) = b.voltage_drop.as_ref().and_then(|s| C::from_series(s, doc)) else { return Ok(None) };
            dv.add_term(a, x)?;
        }
        dv
    } else {
        let mut v = Cochain::zero(0, module);
        for (i, n) in doc.nodes.iter().enumerate() {
            let Some(x) = n.voltage.as_ref().and_then(|s| C::from_series(s, doc)) else { return Ok(None) };
            v.add_term(i, x)?;
        }
        CircuitState::new(complex.clone(), Chain::zero(1, module)).with_voltage(v).voltage_drop()?
    };
    let base = |verdict| {
        AnalysisReport::new("kvl", verdict)
            .number("arithmetic", arithmetic)
            .number("source", if from_drops { "voltage_drop" } else { "voltage" })
    };
    Ok(Some(match kvl_check(&dv, complex, opts.tolerance())? {
        KvlResult::Pass(potential) => {
            let values: Vec<C> = (0..complex.r(0)).map(|i| potential.get(i)).collect();
            base(Verdict::Pass).residual("potential", dense(&values, complex.labels(0)))
        }
        KvlResult::Fail { cycle, sum } => base(Verdict::Fail)
            .number("cycle_sum", sum.field())
            .residual("witness_cycle", sparse(&cycle, complex.labels(1))),
    }))
}

// ---------------------------------------------------------------------------
// Statics

fn static_time(opts: &Options) -> usize {
    opts.t0.unwrap_or(0)
}

fn positions<S: DocScalar>(doc: &NetworkDocument, t: usize) -> Result<Option<Vec<Vector<S>>>> {
    let mut out = Vec::with_capacity(doc.nodes.len());
    for n in &doc.nodes {
        let p = n.pos.as_ref().ok_or_else(|| CliError::missing("nodes[*].pos"))?;
        let Some(x) = convert::<S>(p.at(t)) else { return Ok(None) };
        out.push(Vector(x));
    }
    Ok(Some(out))
}

fn geometric<S: DocScalar>(doc: &NetworkDocument, t: usize) -> Result<Option<GeometricComplex<S>>> {
    let Some(x) = positions::<S>(doc, t)? else { return Ok(None) };
    Ok(Some(GeometricComplex::realize(doc.complex().clone(), doc.dimension, x)?))
}

fn loads<S: DocScalar>(doc: &NetworkDocument, g: &GeometricComplex<S>, t: usize) -> Result<Option<Chain<Covector<S>>>> {
    let mut terms = Vec::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if let Some(f) = &n.force {
            let Some(f) = convert::<S>(f.at(t)) else { return Ok(None) };
            terms.push((i, Covector(f)));
        }
    }
    Ok(Some(nodal_loads(g, &terms)?))
}

/// Loads, branch forces and couples at sample `t`, closed over the external nodes.
fn force_complex<S: DocScalar>(doc: &NetworkDocument, t: usize) -> Result<Option<ForceComplex<S>>> {
    let Some(g) = geometric::<S>(doc, t)? else { return Ok(None) };
    let Some(f_ext) = loads(doc, &g, t)? else { return Ok(None) };
    let axial = doc.branches.iter().all(|b| !matches!(b.internal_force, Some(InternalForce::Vector(_))));
    let mut fc = if axial {
        let mut q = Vec::with_capacity(doc.branches.len());
        for (a, b) in doc.branches.iter().enumerate() {
            q.push(match &b.internal_force {
                Some(InternalForce::Axial(f)) => {
                    let Some(f) = S::from_num(f) else { return Ok(None) };
                    let Some(len) = g.branch_length_squared(a).sqrt() else { return Ok(None) };
                    if Scalar::is_zero(&len) {
                        return Err(CoreError::DegenerateBranch(a).into());
                    }
                    f.div(&len)
                }
                _ => <S as Scalar>::zero(),
            });
        }
        ForceComplex::from_densities(g, f_ext, q)?
    } else {
        let mut f_int = Chain::zero(1, g.covector_kind());
        for (a, b) in doc.branches.iter().enumerate() {
            if let Some(InternalForce::Vector(v)) = &b.internal_force {
                let Some(v) = convert::<S>(v.at(t)) else { return Ok(None) };
                f_int.add_term(a, Covector(v))?;
            }
        }
        ForceComplex::new(g, f_ext, f_int)?
    };
    for (i, n) in doc.nodes.iter().enumerate() {
        if let Some(m) = &n.moment {
            let Some(m) = convert::<S>(m) else { return Ok(None) };
            fc = fc.with_moment(i, Bivector::from_components(doc.dimension, m)?)?;
        }
    }
    let external: Vec<bool> = doc.nodes.iter().map(|n| n.external).collect();
    Ok(Some(close_open_system(&fc, &external)?))
}

fn origin_node(doc: &NetworkDocument, opts: &Options) -> Result<Option<usize>> {
    match &opts.origin {
        None => Ok(None),
        Some(id) => {
            doc.node_index(id).map(Some).ok_or_else(|| CliError::validation("origin", format!("unknown node `{id}`")))
        }
    }
}

fn statics<S: DocScalar>(doc: &NetworkDocument, opts: &Options) -> Result<Option<AnalysisReport>> {
    let (tol, t) = (opts.tolerance(), static_time(opts));
    let Some(g) = geometric::<S>(doc, t)? else { return Ok(None) };
    let Some(f_ext) = loads(doc, &g, t)? else { return Ok(None) };
    let sol = solve_statics(&g, &f_ext, tol)?;
    let labels = doc.complex().labels(1);
    let (class, verdict) = match &sol.classification {
        Determinacy::Determinate => ("determinate", Verdict::Pass),
        Determinacy::Indeterminate(_) => ("indeterminate", Verdict::Pass),
        Determinacy::Infeasible { .. } => ("infeasible", Verdict::Fail),
    };
    let mut r = AnalysisReport::new("statics", verdict)
        .number("arithmetic", S::ARITHMETIC)
        .number("classification", class)
        .number("rank", sol.rank)
        .number("self_stress_dimension", sol.self_stress_basis.len())
        .residual("self_stress_basis", Field::List(sol.self_stress_basis.iter().map(|q| dense(q, labels)).collect()));
    if let Ok(dof) = g.maxwell_dof() {
        r = r.number("maxwell_dof", dof);
    }
    if let Some(q) = &sol.densities {
        let rebuilt = f_ext.add(&internal_forces(&g, q)?.boundary(doc.complex())?)?;
        r = r.number("reconstruction_residual", rebuilt.max_norm()).residual("force_densities", dense(q, labels));
    }
    if let Some(f) = &sol.axial_forces {
        r = r.residual("axial_forces", dense(f, labels));
    }
    if let Determinacy::Infeasible { force_obstruction, moment_obstruction } = &sol.classification {
        r = r
            .residual("force_obstruction", force_obstruction.field())
            .residual("moment_obstruction", moment_obstruction.field());
    }
    Ok(Some(r))
}

fn moments<S: DocScalar>(doc: &NetworkDocument, opts: &Options) -> Result<Option<AnalysisReport>> {
    let (tol, t) = (opts.tolerance(), static_time(opts));
    let origin = origin_node(doc, opts)?;
    let point = match origin {
        Some(i) => match positions::<S>(doc, t)? {
            Some(x) => x[i].clone(),
            None => return Ok(None),
        },
        None => Vector::zeros(doc.dimension),
    };
    let Some(fc) = force_complex::<S>(doc, t)? else { return Ok(None) };
    let m = moment_residual(&fc, &point)?;
    let eq = equilibrium_check(&fc, tol)?;
    let about = origin.map_or("coordinate origin".to_string(), |i| doc.nodes[i].id.clone());
    Ok(Some(
        AnalysisReport::new("moments", Verdict::from_check(m.is_negligible(tol)))
            .number("arithmetic", S::ARITHMETIC)
            .number("about", about.as_str())
            .number("force_balanced", eq.resultant.is_negligible(tol))
            .residual("moment_residual", m.field())
            .residual("force_resultant", eq.resultant.field()),
    ))
}

fn virtual_work<S: DocScalar>(doc: &NetworkDocument, opts: &Options) -> Result<Option<AnalysisReport>> {
    let (tol, t) = (opts.tolerance(), static_time(opts));
    let Some(fc) = force_complex::<S>(doc, t)? else { return Ok(None) };
    let eq = equilibrium_check(&fc, tol)?;
    let vanishes = equilibrium_via_virtual_work(&fc, tol)?;
    Ok(Some(
        AnalysisReport::new("virtual-work", Verdict::from_check(eq.in_equilibrium && vanishes))
            .number("arithmetic", S::ARITHMETIC)
            .number("in_equilibrium", eq.in_equilibrium)
            .number("virtual_work_vanishes", vanishes)
            .number("verdicts_agree", eq.in_equilibrium == vanishes)
            .residual("nodal_residual", sparse(&eq.nodal_residual, fc.complex().labels(0)))
            .residual("resultant", eq.resultant.field()),
    ))
}

fn rigidity<S: DocScalar>(doc: &NetworkDocument, opts: &Options) -> Result<Option<AnalysisReport>> {
    let (tol, t0) = (opts.tolerance(), static_time(opts));
    let Some(g) = geometric::<S>(doc, t0)? else { return Ok(None) };
    let n = doc.dimension;
    let dof = g.maxwell_dof()?;
    let rank = S::rank(&equilibrium_matrix(&g)?, tol);
    let (r0, r1) = (doc.complex().r(0), doc.complex().r(1));
    let mut r = AnalysisReport::new("rigidity", Verdict::Value)
        .number("arithmetic", S::ARITHMETIC)
        .number("maxwell_dof", dof)
        .number("rank", rank)
        .number("self_stress_dimension", r1 - rank)
        .number("internal_mechanisms", (n * r0) as i64 - rank as i64 - (n * (n + 1) / 2) as i64);
    let sampled = doc.nodes.iter().any(|x| x.pos.as_ref().is_some_and(Series::is_sampled));
    if let (true, Some(sig)) = (sampled, &doc.signal) {
        let t1 = opts.t1.unwrap_or(sig.samples - 1);
        if t1 >= sig.samples {
            return Err(CoreError::RangeError { t0, t1, len: sig.samples }.into());
        }
        let Some(g1) = geometric::<S>(doc, t1)? else { return Ok(None) };
        r = r
            .number("window", Field::List(vec![Field::from(t0), Field::from(t1)]))
            .number("rigid_motion", is_rigid_motion(&g, &g1, tol, RigidityMode::AllPairs)?)
            .number("link_lengths_preserved", is_rigid_motion(&g, &g1, tol, RigidityMode::LinkLengthsOnly)?);
    }
    Ok(Some(r))
}

// ---------------------------------------------------------------------------
// Dynamics

fn dynamics(doc: &NetworkDocument, need_positions: bool) -> Result<DynamicsState> {
    let sig = doc.signal.as_ref().ok_or_else(|| CliError::missing("signal"))?;
    let (dt, len) = (sig.dt, sig.samples);
    let real = |s: &Series<Num>| TimeSeries::new(dt, s.expand(len).iter().map(Num::to_f64).collect());
    let masses = doc
        .nodes
        .iter()
        .map(|n| n.mass.as_ref().map(real).ok_or_else(|| CliError::missing("nodes[*].mass")))
        .collect::<Result<Vec<_>>>()?;
    let has_positions = doc.nodes.iter().all(|n| n.pos.is_some());
    if need_positions && !has_positions {
        return Err(CliError::missing("nodes[*].pos"));
    }
    let positions = doc
        .nodes
        .iter()
        .map(|n| match &n.pos {
            Some(p) if has_positions => {
                Sampled::new(dt, p.expand(len).iter().map(|x| Vector(x.iter().map(Num::to_f64).collect())).collect())
            }
            _ => Sampled::new(dt, vec![Vector::zeros(doc.dimension); len]),
        })
        .collect();
    let mut d = DynamicsState::new(doc.complex().clone(), masses, positions)?;
    if doc.branches.iter().any(|b| b.mass_flow.is_some()) {
        let zero = Series::Constant(Num::Real(0.0));
        d = d.with_mass_flow(doc.branches.iter().map(|b| real(b.mass_flow.as_ref().unwrap_or(&zero))).collect())?;
    }
    if doc.nodes.iter().any(|n| n.momentum.is_some()) {
        let p = doc
            .nodes
            .iter()
            .map(|n| {
                let p = n.momentum.as_ref().ok_or_else(|| CliError::missing("nodes[*].momentum"))?;
                Ok(covector_history(p, dt, len))
            })
            .collect::<Result<Vec<_>>>()?;
        d = d.with_momentum(p)?;
    }
    Ok(d)
}

fn covector_history(s: &Series<Vec<Num>>, dt: f64, len: usize) -> Sampled<Covector<f64>> {
    Sampled::new(dt, s.expand(len).iter().map(|x| Covector(x.iter().map(Num::to_f64).collect())).collect())
}

/// Nodal loads and branch forces over the whole signal. Axial forces follow the
/// branch direction at every sample.
fn force_history(doc: &NetworkDocument, d: &DynamicsState) -> Result<ForceHistory> {
    let (dt, len, n) = (d.dt(), d.len(), doc.dimension);
    let zeros = || Sampled::new(dt, vec![Covector::zeros(n); len]);
    let f_ext = doc.nodes.iter().map(|x| x.force.as_ref().map_or_else(zeros, |f| covector_history(f, dt, len))).collect();
    let mut f_int = Vec::new();
    if doc.branches.iter().any(|b| b.internal_force.is_some()) {
        let complex = doc.complex();
        for (a, b) in doc.branches.iter().enumerate() {
            f_int.push(match &b.internal_force {
                None => zeros(),
                Some(InternalForce::Vector(v)) => covector_history(v, dt, len),
                Some(InternalForce::Axial(f)) => {
                    let f = f.to_f64();
                    let (tail, head) = (complex.tail(a), complex.head(a));
                    let mut samples = Vec::with_capacity(len);
                    for t in 0..len {
                        let s = d.positions()[head].samples[t].minus(&d.positions()[tail].samples[t]);
                        let length = s.0.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if length == 0.0 {
                            return Err(CoreError::DegenerateBranch(a).into());
                        }
                        samples.push(Covector(s.0.iter().map(|x| f * x / length).collect()));
                    }
                    Sampled::new(dt, samples)
                }
            });
        }
    }
    Ok(ForceHistory::new(d, f_ext, f_int)?)
}

fn window(opts: &Options, len: usize) -> Result<(usize, usize)> {
    let (t0, t1) = (opts.t0.unwrap_or(0), opts.t1.unwrap_or(len.saturating_sub(1)));
    if t0 >= t1 || t1 >= len {
        return Err(CoreError::RangeError { t0, t1, len }.into());
    }
    Ok((t0, t1))
}

fn mass(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let tol = opts.tolerance();
    let d = dynamics(doc, false)?;
    let m = mass_balance_check(&d, tol)?;
    let residual: Vec<TimeSeries> = (0..doc.nodes.len()).map(|i| m.residual.get(i)).collect();
    Ok(AnalysisReport::new("mass", Verdict::from_check(m.max_norm <= tol))
        .number("max_norm", m.max_norm)
        .number("total_mass_constant", m.total_mass_constant)
        .number("flow_is_cycle", m.flow_is_cycle)
        .residual("node_residual_max", norms(&residual, doc.complex().labels(0))))
}

fn momentum(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let tol = opts.tolerance();
    let d = dynamics(doc, true)?;
    let h = force_history(doc, &d)?;
    let b = momentum_balance_check(&d, &h, tol)?;
    let (t0, t1) = window(opts, d.len())?;
    let gap = impulse_momentum_gap(&d, &h, t0, t1)?;
    let labels = doc.complex().labels(0);
    let j = impulse(&h.resultant(doc.complex()), t0, t1)?;
    Ok(AnalysisReport::new("momentum", Verdict::from_check(b.balanced))
        .number("max_norm", b.max_norm)
        .number("collective_gap", b.collective_gap)
        .number("impulse_gap", gap)
        .number("window", Field::List(vec![Field::from(t0), Field::from(t1)]))
        .residual("node_residual_max", norms(&b.residual.iter().map(max_series).collect::<Vec<_>>(), labels))
        .residual("impulse", sparse(&j, labels)))
}

/// Largest max-norm over the samples.
fn max_series<T: Coefficient>(s: &Sampled<T>) -> f64 {
    s.samples.iter().map(Coefficient::max_norm).fold(0.0, f64::max)
}

fn origin_position(doc: &NetworkDocument, d: &DynamicsState, opts: &Options, t: usize) -> Result<Vector<f64>> {
    Ok(match origin_node(doc, opts)? {
        Some(i) => d.positions()[i].samples[t].clone(),
        None => Vector::zeros(doc.dimension),
    })
}

fn angular(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let tol = opts.tolerance();
    let d = dynamics(doc, true)?;
    let h = force_history(doc, &d)?;
    let (t0, t1) = window(opts, d.len())?;
    let o = origin_position(doc, &d, opts, t0)?;
    let b = angular_momentum_balance(&d, &h, &o, tol)?;
    let gap = moment_impulse_gap(&d, &h, &o, t0, t1)?;
    let total = |t: usize| {
        b.angular_momentum.iter().fold(Bivector::zeros(doc.dimension), |acc: Bivector<f64>, l| acc.plus(&l.samples[t]))
    };
    let start = total(t0);
    let drift = (t0..=t1).map(|t| total(t).minus(&start).max_norm()).fold(0.0, f64::max);
    Ok(AnalysisReport::new("angular", Verdict::from_check(b.balanced))
        .number("max_norm", b.max_norm)
        .number("moment_impulse_gap", gap)
        .number("angular_momentum_change", drift)
        .number("window", Field::List(vec![Field::from(t0), Field::from(t1)]))
        .residual("node_residual_max", norms(&b.residual.iter().map(max_series).collect::<Vec<_>>(), doc.complex().labels(0))))
}

fn energy(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let tol = opts.tolerance();
    let d = dynamics(doc, true)?;
    let h = force_history(doc, &d)?;
    let w = work_energy_check(&d, &h.resultant(doc.complex()), tol)?;
    let labels = doc.complex().labels(0);
    let (_, ke0) = kinetic_energy(&d, 0)?;
    let (_, ke1) = kinetic_energy(&d, d.len() - 1)?;
    Ok(AnalysisReport::new("energy", Verdict::from_check(w.pass))
        .number("max_relative_gap", w.max_relative_gap)
        .number("energy_drift", w.energy_drift)
        .number("total_work", w.work.iter().sum::<f64>())
        .number("kinetic_energy_start", ke0)
        .number("kinetic_energy_end", ke1)
        .residual("work", dense(&w.work, labels))
        .residual("delta_kinetic_energy", dense(&w.delta_ke, labels)))
}

fn dalembert(doc: &NetworkDocument, opts: &Options) -> Result<AnalysisReport> {
    let tol = opts.tolerance();
    let d = dynamics(doc, true)?;
    let h = force_history(doc, &d)?;
    let (t0, t1) = window(opts, d.len())?;
    let mut worst = (0.0, t0);
    for t in t0..=t1 {
        let r = dalembert_max_residual(&d, &h, t)?;
        if r > worst.0 {
            worst = (r, t);
        }
    }
    Ok(AnalysisReport::new("dalembert", Verdict::from_check(worst.0 <= tol))
        .number("max_residual", worst.0)
        .number("worst_sample", worst.1)
        .number("window", Field::List(vec![Field::from(t0), Field::from(t1)])))
}
