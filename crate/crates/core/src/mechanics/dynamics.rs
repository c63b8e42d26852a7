//! Sampled dynamics: mass, momentum and angular-momentum balances, impulses,
//! kinetic energy and the d'Alembert residual.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{Chain, Cochain};
use crate::coeff::{Bivector, Coefficient, Covector, Linear, ModuleKind, Sampled, TimeSeries, Vector};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::{FieldScalar, Scalar, ScalarKind};

/// Masses, flows, trajectories and (optionally) momenta of a network, all on
/// one uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsState {
    complex: Complex,
    n: usize,
    dt: f64,
    len: usize,
    masses: Vec<TimeSeries>,
    mass_flow: Option<Vec<TimeSeries>>,
    positions: Vec<Sampled<Vector<f64>>>,
    momentum: Option<Vec<Sampled<Covector<f64>>>>,
}

impl DynamicsState {
    pub fn new(complex: Complex, masses: Vec<TimeSeries>, positions: Vec<Sampled<Vector<f64>>>) -> Result<Self> {
        let r0 = complex.r(0);
        for found in [masses.len(), positions.len()] {
            if found != r0 {
                return Err(Error::DimensionMismatch { expected: r0, found });
            }
        }
        let (dt, len) = match positions.first() {
            Some(p) => (p.dt, p.len()),
            None => (masses.first().map_or(1.0, |m| m.dt), masses.first().map_or(0, |m| m.len())),
        };
        if len < 3 && r0 > 0 {
            return Err(Error::TooFewSamples { needed: 3, found: len });
        }
        let n = positions.first().and_then(|p| p.samples.first()).map_or(0, |x| x.n());
        for p in &positions {
            if p.dt != dt || p.len() != len {
                return Err(Error::KindMismatch);
            }
            if let Some(x) = p.samples.iter().find(|x| x.n() != n) {
                return Err(Error::DimensionMismatch { expected: n, found: x.n() });
            }
        }
        check_series(&masses, dt, len)?;
        Ok(DynamicsState { complex, n, dt, len, masses, mass_flow: None, positions, momentum: None })
    }

    pub fn with_constant_masses(complex: Complex, masses: &[f64], positions: Vec<Sampled<Vector<f64>>>) -> Result<Self> {
        let (dt, len) = positions.first().map_or((1.0, 0), |p| (p.dt, p.len()));
        let m = masses.iter().map(|&m| TimeSeries::new(dt, vec![m; len])).collect();
        Self::new(complex, m, positions)
    }

    /// Per-branch mass flow rates, kg/s.
    pub fn with_mass_flow(mut self, flow: Vec<TimeSeries>) -> Result<Self> {
        if flow.len() != self.complex.r(1) {
            return Err(Error::DimensionMismatch { expected: self.complex.r(1), found: flow.len() });
        }
        check_series(&flow, self.dt, self.len)?;
        self.mass_flow = Some(flow);
        Ok(self)
    }

    /// Declared momenta. Without them the convective `m v` is used.
    pub fn with_momentum(mut self, p: Vec<Sampled<Covector<f64>>>) -> Result<Self> {
        if p.len() != self.complex.r(0) {
            return Err(Error::DimensionMismatch { expected: self.complex.r(0), found: p.len() });
        }
        for s in &p {
            if s.dt != self.dt || s.len() != self.len {
                return Err(Error::KindMismatch);
            }
            if let Some(x) = s.samples.iter().find(|x| x.n() != self.n) {
                return Err(Error::DimensionMismatch { expected: self.n, found: x.n() });
            }
        }
        self.momentum = Some(p);
        Ok(self)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn masses(&self) -> &[TimeSeries] {
        &self.masses
    }

    pub fn positions(&self) -> &[Sampled<Vector<f64>>] {
        &self.positions
    }

    pub fn mass_flow(&self) -> Option<&[TimeSeries]> {
        self.mass_flow.as_deref()
    }

    /// The total mass 0-chain.
    pub fn mass_chain(&self) -> Chain<TimeSeries> {
        let kind = ModuleKind::TimeSeries { dt: self.dt, len: self.len };
        Chain::from_terms(0, kind, self.masses.iter().cloned().enumerate()).expect("masses share one grid")
    }

    pub fn velocities(&self) -> Result<Vec<Sampled<Vector<f64>>>> {
        self.positions.iter().map(|x| x.derivative()).collect()
    }

    pub fn momentum(&self) -> Result<Vec<Sampled<Covector<f64>>>> {
        if let Some(p) = &self.momentum {
            return Ok(p.clone());
        }
        let v = self.velocities()?;
        Ok(v.iter().zip(&self.masses).map(|(v, m)| convective(m, v)).collect())
    }

    pub fn masses_constant(&self, tol: f64) -> bool {
        self.masses.iter().all(|m| m.samples.iter().all(|x| (x - m.samples[0]).abs() <= tol))
    }

    /// First node whose declared momentum differs from `m v`. Finite differences
    /// of the positions are accurate to `O(dt²)`, so the comparison is relative
    /// with tolerance `100 dt²`.
    pub fn non_convective_node(&self) -> Result<Option<usize>> {
        let Some(p) = &self.momentum else { return Ok(None) };
        let rtol = 100.0 * self.dt * self.dt;
        let v = self.velocities()?;
        for (i, ((p, v), m)) in p.iter().zip(&v).zip(&self.masses).enumerate() {
            let mv = convective(m, v);
            let scale = p.samples.iter().map(|x| x.max_norm()).fold(1.0, f64::max);
            let off = p.samples.iter().zip(&mv.samples).map(|(a, b)| a.minus(b).max_norm()).fold(0.0, f64::max);
            if off > rtol * scale {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn check_range(&self, t: usize) -> Result<()> {
        if t >= self.len {
            return Err(Error::RangeError { t0: t, t1: t, len: self.len });
        }
        Ok(())
    }

    pub fn center_of_mass(&self, t: usize) -> Result<Vector<f64>> {
        self.check_range(t)?;
        let m: Vec<f64> = self.masses.iter().map(|m| m.samples[t]).collect();
        let x: Vec<Vector<f64>> = self.positions.iter().map(|x| x.samples[t].clone()).collect();
        center_of_mass(&m, &x)
    }
}

fn check_series(s: &[TimeSeries], dt: f64, len: usize) -> Result<()> {
    if s.iter().any(|m| m.dt != dt || m.len() != len) {
        return Err(Error::KindMismatch);
    }
    Ok(())
}

fn convective(m: &TimeSeries, v: &Sampled<Vector<f64>>) -> Sampled<Covector<f64>> {
    Sampled::new(v.dt, v.samples.iter().zip(&m.samples).map(|(v, m)| v.to_covector().scaled(*m)).collect())
}

/// `x_cm = Σ m(i) x(i) / M`.
pub fn center_of_mass<S: FieldScalar>(masses: &[S], positions: &[Vector<S>]) -> Result<Vector<S>> {
    if masses.len() != positions.len() {
        return Err(Error::DimensionMismatch { expected: masses.len(), found: positions.len() });
    }
    let total = masses.iter().fold(S::zero(), |a, m| a.plus(m));
    if total.is_zero() {
        return Err(Error::ZeroTotalMass);
    }
    let n = positions.first().map_or(0, |x| x.n());
    let origin = Vector::zeros(n);
    Ok(mass_moment(masses, positions, &origin).scale(&S::one().div(&total)))
}

/// Total mass moment about `o`, `Σ m(i) (x(i) - o)`. It vanishes about the center of mass.
pub fn mass_moment<S: Scalar>(masses: &[S], positions: &[Vector<S>], o: &Vector<S>) -> Vector<S> {
    masses.iter().zip(positions).fold(Vector::zeros(o.n()), |acc, (m, x)| acc.plus(&x.minus(o).scale(m)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassBalance {
    /// `dm/dt - ∂J`, per node and sample.
    pub residual: Chain<TimeSeries>,
    pub max_norm: f64,
    pub total_mass_constant: bool,
    pub flow_is_cycle: bool,
}

pub fn mass_balance_check(d: &DynamicsState, tol: f64) -> Result<MassBalance> {
    let kind = ModuleKind::TimeSeries { dt: d.dt, len: d.len };
    let mut mdot = Chain::zero(0, kind);
    for (i, m) in d.masses.iter().enumerate() {
        mdot.add_term(i, m.derivative()?)?;
    }
    let flow = match &d.mass_flow {
        Some(j) => Chain::from_terms(1, kind, j.iter().cloned().enumerate())?,
        None => Chain::zero(1, kind),
    };
    let dj = flow.boundary(&d.complex)?;
    let residual = mdot.sub(&dj)?;
    let total = d.mass_chain().augmented_boundary()?;
    Ok(MassBalance {
        max_norm: residual.max_norm(),
        total_mass_constant: total.samples.iter().all(|x| (x - total.samples[0]).abs() <= tol),
        flow_is_cycle: dj.is_zero_within(tol),
        residual,
    })
}

/// Time histories of external nodal loads and internal branch forces.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceHistory {
    pub f_ext: Vec<Sampled<Covector<f64>>>,
    /// Empty means no internal forces.
    pub f_int: Vec<Sampled<Covector<f64>>>,
}

impl ForceHistory {
    pub fn new(d: &DynamicsState, f_ext: Vec<Sampled<Covector<f64>>>, f_int: Vec<Sampled<Covector<f64>>>) -> Result<Self> {
        if f_ext.len() != d.complex.r(0) {
            return Err(Error::DimensionMismatch { expected: d.complex.r(0), found: f_ext.len() });
        }
        if !f_int.is_empty() && f_int.len() != d.complex.r(1) {
            return Err(Error::DimensionMismatch { expected: d.complex.r(1), found: f_int.len() });
        }
        for s in f_ext.iter().chain(&f_int) {
            if s.dt != d.dt || s.len() != d.len {
                return Err(Error::KindMismatch);
            }
            if let Some(x) = s.samples.iter().find(|x| x.n() != d.n) {
                return Err(Error::DimensionMismatch { expected: d.n, found: x.n() });
            }
        }
        Ok(ForceHistory { f_ext, f_int })
    }

    /// Constant external loads and no internal forces.
    pub fn constant_loads(d: &DynamicsState, loads: &[Covector<f64>]) -> Result<Self> {
        let f_ext = loads.iter().map(|f| Sampled::new(d.dt, vec![f.clone(); d.len])).collect();
        Self::new(d, f_ext, Vec::new())
    }

    /// `F_ext(i) + ∂F_int(i)` at sample `t`.
    pub fn resultant_at(&self, complex: &Complex, t: usize) -> Vec<Covector<f64>> {
        let mut out: Vec<Covector<f64>> = self.f_ext.iter().map(|f| f.samples[t].clone()).collect();
        for (a, f) in self.f_int.iter().enumerate() {
            let (tail, head) = complex.branches()[a];
            let f = &f.samples[t];
            out[head] = out[head].plus(f);
            out[tail] = out[tail].minus(f);
        }
        out
    }

    /// Per-node resultant histories.
    pub fn resultant(&self, complex: &Complex) -> Vec<Sampled<Covector<f64>>> {
        let len = self.f_ext.first().map_or(0, |f| f.len());
        let dt = self.f_ext.first().map_or(1.0, |f| f.dt);
        let per_t: Vec<Vec<Covector<f64>>> = (0..len).map(|t| self.resultant_at(complex, t)).collect();
        (0..self.f_ext.len()).map(|i| Sampled::new(dt, per_t.iter().map(|r| r[i].clone()).collect())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumBalance {
    /// `dp/dt - F_ext - ∂F_int`.
    pub residual: Vec<Sampled<Covector<f64>>>,
    pub max_norm: f64,
    /// Largest `|∂^#(dp/dt) - ∂^# F_ext|` over the samples.
    pub collective_gap: f64,
    pub balanced: bool,
}

pub fn momentum_balance_check(d: &DynamicsState, h: &ForceHistory, tol: f64) -> Result<MomentumBalance> {
    let pdot: Vec<Sampled<Covector<f64>>> = d.momentum()?.iter().map(|p| p.derivative()).collect::<Result<_>>()?;
    let res = h.resultant(&d.complex);
    let residual: Vec<Sampled<Covector<f64>>> = pdot
        .iter()
        .zip(&res)
        .map(|(p, f)| Sampled::new(d.dt, p.samples.iter().zip(&f.samples).map(|(a, b)| a.minus(b)).collect()))
        .collect();
    let max_norm = max_over(&residual);
    let mut collective_gap: f64 = 0.0;
    for t in 0..d.len {
        let mut sum = Covector::zeros(d.n);
        for i in 0..pdot.len() {
            sum = sum.plus(&pdot[i].samples[t]).minus(&h.f_ext[i].samples[t]);
        }
        collective_gap = collective_gap.max(sum.max_norm());
    }
    Ok(MomentumBalance { residual, max_norm, collective_gap, balanced: max_norm <= tol })
}

fn max_over<T: Coefficient>(s: &[Sampled<T>]) -> f64 {
    s.iter().flat_map(|x| x.samples.iter()).map(|x| x.max_norm()).fold(0.0, f64::max)
}

/// `I(i) = ∫ F(i) dt` over samples `t0..=t1`, by the trapezoid rule.
pub fn impulse(forces: &[Sampled<Covector<f64>>], t0: usize, t1: usize) -> Result<Chain<Covector<f64>>> {
    let n = forces.first().and_then(|f| f.samples.first()).map_or(0, |x| x.n());
    let kind = ModuleKind::Covector { n, scalar: ScalarKind::Real64 };
    let terms = forces.iter().map(|f| f.integrate(t0, t1)).collect::<Result<Vec<_>>>()?;
    Chain::from_terms(0, kind, terms.into_iter().enumerate())
}

/// Largest `|I(i) - Δp(i)|` with `I` the impulse of the nodal resultant.
pub fn impulse_momentum_gap(d: &DynamicsState, h: &ForceHistory, t0: usize, t1: usize) -> Result<f64> {
    let imp = impulse(&h.resultant(&d.complex), t0, t1)?;
    let p = d.momentum()?;
    Ok((0..p.len())
        .map(|i| imp.get(i).minus(&p[i].samples[t1].minus(&p[i].samples[t0])).max_norm())
        .fold(0.0, f64::max))
}

/// `L(i) = (x(i) - O) ∧ p(i)`.
pub fn angular_momentum(d: &DynamicsState, o: &Vector<f64>) -> Result<Vec<Sampled<Bivector<f64>>>> {
    let p = d.momentum()?;
    d.positions
        .iter()
        .zip(&p)
        .map(|(x, p)| {
            let l = x.samples.iter().zip(&p.samples).map(|(x, p)| Bivector::wedge(&x.minus(o).0, &p.0)).collect::<Result<_>>()?;
            Ok(Sampled::new(d.dt, l))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularBalance {
    pub angular_momentum: Vec<Sampled<Bivector<f64>>>,
    /// `dL/dt - (x - O) ∧ F`.
    pub residual: Vec<Sampled<Bivector<f64>>>,
    pub max_norm: f64,
    pub balanced: bool,
}

/// Requires constant masses and convective momenta.
pub fn angular_momentum_balance(d: &DynamicsState, h: &ForceHistory, o: &Vector<f64>, tol: f64) -> Result<AngularBalance> {
    if !d.masses_constant(0.0) {
        return Err(Error::HypothesesUnmet("masses vary in time".into()));
    }
    if let Some(i) = d.non_convective_node()? {
        return Err(Error::NonConvectiveMomentum(i));
    }
    let l = angular_momentum(d, o)?;
    let torque = torques(d, h, o)?;
    let mut residual = Vec::with_capacity(l.len());
    for (l, m) in l.iter().zip(&torque) {
        let ldot = l.derivative()?;
        residual.push(Sampled::new(d.dt, ldot.samples.iter().zip(&m.samples).map(|(a, b)| a.minus(b)).collect()));
    }
    let max_norm = max_over(&residual);
    Ok(AngularBalance { angular_momentum: l, residual, max_norm, balanced: max_norm <= tol })
}

fn torques(d: &DynamicsState, h: &ForceHistory, o: &Vector<f64>) -> Result<Vec<Sampled<Bivector<f64>>>> {
    let f = h.resultant(&d.complex);
    d.positions
        .iter()
        .zip(&f)
        .map(|(x, f)| {
            let m = x.samples.iter().zip(&f.samples).map(|(x, f)| Bivector::wedge(&x.minus(o).0, &f.0)).collect::<Result<_>>()?;
            Ok(Sampled::new(d.dt, m))
        })
        .collect()
}

/// Largest `|I_M(i) - ΔL(i)|`, the moment impulse against the change of angular momentum.
pub fn moment_impulse_gap(d: &DynamicsState, h: &ForceHistory, o: &Vector<f64>, t0: usize, t1: usize) -> Result<f64> {
    let l = angular_momentum(d, o)?;
    let m = torques(d, h, o)?;
    let mut gap: f64 = 0.0;
    for (l, m) in l.iter().zip(&m) {
        let im = m.integrate(t0, t1)?;
        gap = gap.max(im.minus(&l.samples[t1].minus(&l.samples[t0])).max_norm());
    }
    Ok(gap)
}

/// `KE(i) = ½ ⟨p(i), v(i)⟩` at sample `t`, with the total.
pub fn kinetic_energy(d: &DynamicsState, t: usize) -> Result<(Cochain<f64>, f64)> {
    d.check_range(t)?;
    let ke = kinetic_energy_history(d)?.swap_remove(t);
    let total = ke.iter().sum();
    Ok((Cochain::scalar(0, ke.into_iter().enumerate()), total))
}

/// `KE(i)` at every sample, indexed `[t][i]`.
pub fn kinetic_energy_history(d: &DynamicsState) -> Result<Vec<Vec<f64>>> {
    let v = d.velocities()?;
    let p = d.momentum()?;
    Ok((0..d.len)
        .map(|t| v.iter().zip(&p).map(|(v, p)| 0.5 * crate::coeff::dot(&p.samples[t].0, &v.samples[t].0)).collect())
        .collect())
}

/// Virtual work of force minus inertia at sample `t`: `⟨F̄ - dp̄/dt, Δ(δx)⟩` on
/// the cone, where both `F_ext` and `-dp/dt` ride on the spokes.
pub fn dalembert_residual(d: &DynamicsState, h: &ForceHistory, t: usize, delta_x: &Cochain<Vector<f64>>) -> Result<f64> {
    d.check_range(t)?;
    let kind = ModuleKind::Covector { n: d.n, scalar: ScalarKind::Real64 };
    if delta_x.module() != (ModuleKind::Vector { n: d.n, scalar: ScalarKind::Real64 }) {
        return Err(Error::KindMismatch);
    }
    let (cone, map) = d.complex.cone(&d.complex.fresh_node_label("∞"))?;
    let p = d.momentum()?;
    let mut g = Chain::zero(1, kind).with_prune(0.0);
    for (a, f) in h.f_int.iter().enumerate() {
        g.add_term(a, f.samples[t].clone())?;
    }
    for (i, p) in p.iter().enumerate() {
        let pdot = p.derivative()?.samples[t].clone();
        g.add_term(map.spokes[i], pdot.minus(&h.f_ext[i].samples[t]))?;
    }
    let ds = delta_x.coboundary(&cone)?;
    ds.evaluate(&g)
}

/// Largest `|dalembert_residual|` over the unit variations of every node.
pub fn dalembert_max_residual(d: &DynamicsState, h: &ForceHistory, t: usize) -> Result<f64> {
    let kind = ModuleKind::Vector { n: d.n, scalar: ScalarKind::Real64 };
    let mut worst: f64 = 0.0;
    for i in 0..d.complex.r(0) {
        for k in 0..d.n {
            let dx = Cochain::from_terms(0, kind, [(i, Vector::unit(d.n, k))])?;
            worst = worst.max(dalembert_residual(d, h, t, &dx)?.abs());
        }
    }
    Ok(worst)
}
