//! Work along motion links, potentials and the work-energy theorem.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{Chain, Cochain};
use crate::coeff::{Covector, Linear, Pairing, Sampled};
use crate::error::{Error, Result};
use crate::geometry::GeometricComplex;
use crate::homology::{is_coboundary, CoboundaryTest};
use crate::kinematics::{KinematicalComplex, SpatialTrace};
use crate::mechanics::dynamics::{kinetic_energy_history, DynamicsState};
use crate::scalar::{Integer, Scalar};

fn check_forces<S: Scalar>(k: &KinematicalComplex<S>, forces: &[Vec<Covector<S>>]) -> Result<()> {
    if forces.len() != k.steps() {
        return Err(Error::DimensionMismatch { expected: k.steps(), found: forces.len() });
    }
    let (r0, n) = (k.snapshots()[0].complex().r(0), k.snapshots()[0].n());
    for step in forces {
        if step.len() != r0 {
            return Err(Error::DimensionMismatch { expected: r0, found: step.len() });
        }
        if let Some(f) = step.iter().find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: f.n() });
        }
    }
    Ok(())
}

/// `W(link(i, A)) = ⟨F(i)(A), u(i)(A)⟩`; `forces[A][i]` acts along the link from step `A`.
pub fn work_cochain<S: Scalar>(k: &KinematicalComplex<S>, forces: &[Vec<Covector<S>>]) -> Result<Cochain<S>> {
    check_forces(k, forces)?;
    let mut w = Cochain::zero(1, crate::coeff::ModuleKind::of_scalar(S::KIND));
    for (step, fs) in forces.iter().enumerate() {
        for (i, f) in fs.iter().enumerate() {
            w.add_term(k.motion_link(i, step), f.pair(&k.u(i, step))?)?;
        }
    }
    Ok(w)
}

/// Work along the whole path of node `i`.
pub fn path_work<S: Scalar>(k: &KinematicalComplex<S>, w: &Cochain<S>, i: usize) -> S {
    (0..k.steps()).fold(S::zero(), |acc, step| acc.plus(&w.get(k.motion_link(i, step))))
}

/// The work cochain carried to the spatial trace.
pub fn trace_work<S: Scalar>(trace: &SpatialTrace<S>, k: &KinematicalComplex<S>, forces: &[Vec<Covector<S>>]) -> Result<Cochain<S>> {
    check_forces(k, forces)?;
    let terms = trace.link_of.iter().map(|&(i, step)| forces[step][i].pair(&k.u(i, step)));
    let terms = terms.collect::<Result<Vec<S>>>()?;
    Ok(Cochain::scalar(1, terms.into_iter().enumerate()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Conservativity<S> {
    /// `W = -ΔU` on the spatial trace.
    Conservative { trace: SpatialTrace<S>, potential: Cochain<S> },
    /// A trace cycle with nonzero work.
    NonConservative { cycle: Chain<Integer>, work: S },
}

pub fn conservative_check<S: Scalar>(k: &KinematicalComplex<S>, forces: &[Vec<Covector<S>>], tol: f64) -> Result<Conservativity<S>> {
    conservative_with(k, forces, tol, tol)
}

fn conservative_with<S: Scalar>(
    k: &KinematicalComplex<S>,
    forces: &[Vec<Covector<S>>],
    merge_tol: f64,
    tol: f64,
) -> Result<Conservativity<S>> {
    let trace = k.spatial_trace(merge_tol)?;
    let w = trace_work(&trace, k, forces)?;
    let phi = match is_coboundary(&w, &trace.complex, tol)? {
        CoboundaryTest::No { cycle, value } => return Ok(Conservativity::NonConservative { cycle, work: value }),
        CoboundaryTest::Yes(phi) => phi,
    };
    // U = c - φ per component, with c fixed by U(root) = -⟨F, x(root)⟩ for a force on a link at the root
    let mut u = vec![S::zero(); trace.complex.r(0)];
    for comp in trace.complex.path_components() {
        let root = comp[0];
        let link = (0..trace.complex.r(1)).find(|&b| {
            let (t, h) = trace.complex.branches()[b];
            t == root || h == root
        });
        let anchor = match link {
            Some(b) => {
                let (i, step) = trace.link_of[b];
                forces[step][i].pair(&trace.positions[root])?.negate()
            }
            None => S::zero(),
        };
        let c = anchor.plus(&phi.get(root));
        for &v in &comp {
            u[v] = c.minus(&phi.get(v));
        }
    }
    let potential = Cochain::scalar(0, u.into_iter().enumerate());
    Ok(Conservativity::Conservative { trace, potential })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkEnergyReport {
    /// Path work per node.
    pub work: Vec<f64>,
    /// `KE(i)(N) - KE(i)(0)` per node.
    pub delta_ke: Vec<f64>,
    /// Largest `|W - ΔKE| / |ΔKE|`, absolute where `ΔKE` is within tolerance of zero.
    pub max_relative_gap: f64,
    /// Largest change of `KE + U` along any node's path.
    pub energy_drift: f64,
    pub pass: bool,
}

/// Work-kinetic energy check over the whole sampled trajectory. Forces are taken
/// constant along each step, at the mean of its two end samples.
pub fn work_energy_check(d: &DynamicsState, forces: &[Sampled<Covector<f64>>], tol: f64) -> Result<WorkEnergyReport> {
    if !d.masses_constant(0.0) {
        return Err(Error::HypothesesUnmet("masses vary in time".into()));
    }
    if let Some(i) = d.non_convective_node()? {
        return Err(Error::HypothesesUnmet(alloc::format!("momentum is not m v at node {i}")));
    }
    let r0 = d.complex().r(0);
    if forces.len() != r0 {
        return Err(Error::DimensionMismatch { expected: r0, found: forces.len() });
    }
    if forces.iter().any(|f| f.len() != d.len()) {
        return Err(Error::KindMismatch);
    }
    let snapshots = (0..d.len())
        .map(|t| {
            let x = d.positions().iter().map(|p| p.samples[t].clone()).collect();
            GeometricComplex::realize_unchecked(d.complex().clone(), d.n(), x)
        })
        .collect();
    let k = KinematicalComplex::build(snapshots)?;
    let per_step: Vec<Vec<Covector<f64>>> = (0..k.steps())
        .map(|t| forces.iter().map(|f| f.samples[t].lin(0.5, &f.samples[t + 1], 0.5)).collect())
        .collect();
    let (trace, u) = match conservative_with(&k, &per_step, 1e-12, tol)? {
        Conservativity::Conservative { trace, potential } => (trace, potential),
        Conservativity::NonConservative { .. } => {
            return Err(Error::HypothesesUnmet("force is not conservative on the traced paths".into()))
        }
    };
    let w = work_cochain(&k, &per_step)?;
    let ke = kinetic_energy_history(d)?;
    let last = d.len() - 1;
    let mut work = Vec::with_capacity(r0);
    let mut delta_ke = Vec::with_capacity(r0);
    let mut max_relative_gap: f64 = 0.0;
    let mut energy_drift: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..r0 {
        let wi = path_work(&k, &w, i);
        let dke = ke[last][i] - ke[0][i];
        let floor = tol * ke[0][i].max(ke[last][i]).max(1.0);
        let denom = if dke.abs() > floor { dke.abs() } else { 1.0 };
        max_relative_gap = max_relative_gap.max((wi - dke).abs() / denom);
        work.push(wi);
        delta_ke.push(dke);
        let e0 = ke[0][i] + u.get(trace.node_of[k.node(i, 0)]);
        for (t, ke_t) in ke.iter().enumerate() {
            let e = ke_t[i] + u.get(trace.node_of[k.node(i, t)]);
            energy_drift = energy_drift.max((e - e0).abs());
            scale = scale.max(e.abs());
        }
    }
    let pass = max_relative_gap <= tol && energy_drift <= tol * scale;
    Ok(WorkEnergyReport { work, delta_ke, max_relative_gap, energy_drift, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rational_vector, Coefficient, Vector};
    use crate::complex::Complex;
    use crate::homology::cycle_basis;
    use crate::scalar::Rational;

    fn r(p: i64) -> Rational {
        Rational::from_integer(p.into())
    }

    fn walk(points: &[[i64; 2]]) -> KinematicalComplex<Rational> {
        let c = Complex::from_edges(&["P"], &[]).unwrap();
        let snaps = points.iter().map(|p| GeometricComplex::realize(c.clone(), 2, vec![rational_vector(p)]).unwrap()).collect();
        KinematicalComplex::build(snaps).unwrap()
    }

    #[test]
    fn gravity_drop_work() {
        // m = 2, g = 10, drop h = 3 in one step
        let k = walk(&[[0, 3], [0, 0]]);
        let f = vec![vec![rational_vector(&[0, -20]).to_covector()]];
        let w = work_cochain(&k, &f).unwrap();
        assert_eq!(path_work(&k, &w, 0), r(60));
        // sideways motion does no work against vertical gravity
        let k = walk(&[[0, 0], [5, 0]]);
        assert_eq!(path_work(&k, &work_cochain(&k, &f).unwrap(), 0), r(0));
    }

    #[test]
    fn constant_field_is_conservative() {
        let pts = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0], [2, 3]];
        let k = walk(&pts);
        let f = rational_vector(&[2, -1]).to_covector();
        let forces = vec![vec![f.clone()]; pts.len() - 1];
        let Conservativity::Conservative { trace, potential } = conservative_check(&k, &forces, 0.0).unwrap() else {
            panic!()
        };
        for (v, x) in trace.positions.iter().enumerate() {
            assert_eq!(potential.get(v), f.pair(x).unwrap().negate());
        }
        // the closed square is a cycle of the trace and carries no work
        let w = trace_work(&trace, &k, &forces).unwrap();
        for z in cycle_basis(&trace.complex) {
            let z = z.map(crate::coeff::ModuleKind::Rational, |c| Rational::from_integer(c.clone())).unwrap();
            assert_eq!(w.evaluate(&z).unwrap(), r(0));
        }
    }

    #[test]
    fn zero_force_has_constant_potential() {
        let k = walk(&[[0, 0], [1, 0], [0, 0]]);
        let forces = vec![vec![Covector::zeros(2)]; 2];
        let Conservativity::Conservative { potential, .. } = conservative_check(&k, &forces, 0.0).unwrap() else { panic!() };
        assert!(potential.is_empty());
    }

    #[test]
    fn friction_around_a_square() {
        let mu = r(3);
        let pts = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]];
        let k = walk(&pts);
        let forces: Vec<Vec<Covector<Rational>>> =
            (0..4).map(|s| vec![k.u(0, s).to_covector().scale(&mu).negate()]).collect();
        let Conservativity::NonConservative { cycle, work } = conservative_check(&k, &forces, 0.0).unwrap() else {
            panic!()
        };
        assert_eq!(work, r(-12));
        assert_eq!(cycle.support().len(), 4);
    }

    fn free_fall(dt: f64, len: usize, g: f64, m: f64) -> (DynamicsState, Vec<Sampled<Covector<f64>>>) {
        let c = Complex::from_edges(&["P"], &[]).unwrap();
        let x = Sampled::new(dt, (0..len).map(|k| {
            let t = k as f64 * dt;
            Vector(vec![0.0, 10.0 - 0.5 * g * t * t])
        }).collect());
        let d = DynamicsState::with_constant_masses(c, &[m], vec![x]).unwrap();
        let f = vec![Sampled::new(dt, vec![Covector(vec![0.0, -m * g]); len])];
        (d, f)
    }

    #[test]
    fn free_fall_work_energy() {
        let (d, f) = free_fall(0.01, 101, 9.81, 2.0);
        let rep = work_energy_check(&d, &f, 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
        // v² = 2 g h with h = g/2 after one second
        let h = 0.5 * 9.81;
        assert!((rep.delta_ke[0] - 2.0 * 9.81 * h).abs() < 1e-9);
    }

    #[test]
    fn static_network_does_no_work() {
        let c = Complex::from_edges(&["P", "Q"], &[("P", "Q")]).unwrap();
        let x = vec![
            Sampled::new(0.1, vec![Vector(vec![0.0, 0.0]); 5]),
            Sampled::new(0.1, vec![Vector(vec![1.0, 0.0]); 5]),
        ];
        let d = DynamicsState::with_constant_masses(c, &[1.0, 1.0], x).unwrap();
        let f = vec![Sampled::new(0.1, vec![Covector(vec![0.0, -1.0]); 5]); 2];
        let rep = work_energy_check(&d, &f, 1e-12).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.work, vec![0.0, 0.0]);
    }

    #[test]
    fn friction_is_refused() {
        let dt = 0.25;
        let c = Complex::from_edges(&["P"], &[]).unwrap();
        // circle traversed once, sampled so the last point returns to the first
        let len = 41;
        let w = core::f64::consts::TAU / ((len - 1) as f64 * dt);
        let x = Sampled::new(dt, (0..len).map(|k| {
            let a = w * k as f64 * dt;
            Vector(vec![libm::cos(a), libm::sin(a)])
        }).collect());
        let v = x.derivative().unwrap();
        let f = vec![v.map(|v| Covector(v.0.iter().map(|c| -c).collect()))];
        let d = DynamicsState::with_constant_masses(c, &[1.0], vec![x]).unwrap();
        assert!(matches!(work_energy_check(&d, &f, 1e-6), Err(Error::HypothesesUnmet(_))));
    }
}
