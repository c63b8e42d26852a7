//! Kinematical complexes joining successive snapshots of a network, their
//! spatial traces, and sampled kinematical states.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::chain::{Chain, Cochain};
use crate::coeff::{Coefficient, ModuleKind, Sampled, Vector};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::geometry::GeometricComplex;
use crate::scalar::{Integer, Scalar};

/// Snapshots `0..=N` stacked into one complex. Node `i` at step `A` has index
/// `A r_0 + i`; structural branch `a` at step `A` has index `A r_1 + a`; the
/// motion link of node `i` from step `A` to `A + 1` comes after all structural branches.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicalComplex<S> {
    snapshots: Vec<GeometricComplex<S>>,
    complex: Complex,
}

impl<S: Scalar> KinematicalComplex<S> {
    /// Requires at least two snapshots with identical combinatorics.
    pub fn build(snapshots: Vec<GeometricComplex<S>>) -> Result<Self> {
        if snapshots.len() < 2 {
            return Err(Error::TooFewSamples { needed: 2, found: snapshots.len() });
        }
        let first = snapshots[0].complex();
        for (k, g) in snapshots.iter().enumerate().skip(1) {
            if g.complex().branches() != first.branches() || g.complex().r(0) != first.r(0) || g.n() != snapshots[0].n() {
                return Err(Error::SnapshotMismatch(k));
            }
        }
        let (r0, steps) = (first.r(0), snapshots.len());
        let node_label = |i: usize, a: usize| format!("{}@{a}", first.labels(0)[i]);
        let mut b = Complex::builder();
        for a in 0..steps {
            for i in 0..r0 {
                b = b.node(node_label(i, a));
            }
        }
        for a in 0..steps {
            for (k, &(t, h)) in first.branches().iter().enumerate() {
                b = b.branch(format!("{}@{a}", first.labels(1)[k]), node_label(t, a), node_label(h, a));
            }
        }
        for a in 0..steps - 1 {
            for i in 0..r0 {
                b = b.branch(format!("~{}@{a}", first.labels(0)[i]), node_label(i, a), node_label(i, a + 1));
            }
        }
        Ok(KinematicalComplex { complex: b.build()?, snapshots })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn snapshots(&self) -> &[GeometricComplex<S>] {
        &self.snapshots
    }

    /// Number of motion steps `N`.
    pub fn steps(&self) -> usize {
        self.snapshots.len() - 1
    }

    fn r(&self, dim: usize) -> usize {
        self.snapshots[0].complex().r(dim)
    }

    pub fn node(&self, i: usize, step: usize) -> usize {
        step * self.r(0) + i
    }

    pub fn structural_branch(&self, a: usize, step: usize) -> usize {
        step * self.r(1) + a
    }

    /// Motion link `σ̄_1(i)(A)` with boundary `σ_0(i)(A+1) - σ_0(i)(A)`.
    pub fn motion_link(&self, i: usize, step: usize) -> usize {
        self.snapshots.len() * self.r(1) + step * self.r(0) + i
    }

    /// `u(i)(A) = x_{A+1}(i) - x_A(i)`.
    pub fn u(&self, i: usize, step: usize) -> Vector<S> {
        self.snapshots[step + 1].position(i).minus(self.snapshots[step].position(i))
    }

    /// The displacement cochain on motion links.
    pub fn motion_cochain(&self) -> Cochain<Vector<S>> {
        let kind = self.snapshots[0].vector_kind();
        let terms = (0..self.steps()).flat_map(|a| (0..self.r(0)).map(move |i| (a, i)));
        Cochain::from_terms(1, kind, terms.map(|(a, i)| (self.motion_link(i, a), self.u(i, a))))
            .expect("uniform vector dimension")
    }

    /// Checks `∂c̄_2 = z(A+1) - z(A)` for a structural 1-cycle `z`, with each motion
    /// quadrilateral cut along a diagonal into two faces. Returns the 2-chain.
    pub fn verify_motion_homology(&self, z: &Chain<Integer>, step: usize) -> Result<Chain<Integer>> {
        let base = self.snapshots[0].complex();
        if !z.is_cycle(base, 0.0)? {
            return Err(Error::NotACycle);
        }
        if step >= self.steps() {
            return Err(Error::RangeError { t0: step, t1: step + 1, len: self.snapshots.len() });
        }
        let (r0, r1) = (self.r(0), self.r(1));
        let label = |i: usize, a: usize| format!("{}@{a}", base.labels(0)[i]);
        let mut b = Complex::builder();
        for a in [step, step + 1] {
            for i in 0..r0 {
                b = b.node(label(i, a));
            }
        }
        for a in [step, step + 1] {
            for (k, &(t, h)) in base.branches().iter().enumerate() {
                b = b.branch(format!("b{k}@{a}"), label(t, a), label(h, a));
            }
        }
        for i in 0..r0 {
            b = b.branch(format!("m{i}"), label(i, step), label(i, step + 1));
        }
        for (k, &(t, h)) in base.branches().iter().enumerate() {
            b = b.branch(format!("d{k}"), label(t, step), label(h, step + 1));
        }
        let (s0, s1) = (format!("@{step}"), format!("@{}", step + 1));
        for (k, &(t, h)) in base.branches().iter().enumerate() {
            let (bk0, bk1) = (format!("b{k}{s0}"), format!("b{k}{s1}"));
            let (mh, mt, dk) = (format!("m{h}"), format!("m{t}"), format!("d{k}"));
            b = b.face(format!("L{k}"), [(bk0.as_str(), 1), (mh.as_str(), 1), (dk.as_str(), -1)]);
            b = b.face(format!("U{k}"), [(dk.as_str(), 1), (bk1.as_str(), -1), (mt.as_str(), -1)]);
        }
        let joined = b.build()?;
        let mut c2 = Chain::<Integer>::zero(2, ModuleKind::Integer);
        for (k, c) in z.terms() {
            c2.add_term(2 * k, -c.clone())?;
            c2.add_term(2 * k + 1, -c.clone())?;
        }
        let mut expected = Chain::<Integer>::zero(1, ModuleKind::Integer);
        for (k, c) in z.terms() {
            expected.add_term(r1 + k, c.clone())?;
            expected.add_term(k, -c.clone())?;
        }
        if c2.boundary(&joined)? != expected {
            return Err(Error::NotACycle);
        }
        Ok(c2)
    }
}

/// Projection of the motion links to space: coincident positions merge into one
/// node; links of zero length are dropped; parallel links are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialTrace<S> {
    pub complex: Complex,
    pub positions: Vec<Vector<S>>,
    /// Kinematical node index to trace node.
    pub node_of: Vec<usize>,
    /// Trace branch to motion link `(node, step)`.
    pub link_of: Vec<(usize, usize)>,
}

impl<S: Scalar> KinematicalComplex<S> {
    /// Positions are merged when equal (exact kinds) or within `tol` in max-norm.
    pub fn spatial_trace(&self, tol: f64) -> Result<SpatialTrace<S>> {
        let r0 = self.r(0);
        let mut positions: Vec<Vector<S>> = Vec::new();
        let mut node_of = Vec::with_capacity(self.snapshots.len() * r0);
        for g in &self.snapshots {
            for p in g.positions() {
                let close = |q: &Vector<S>| if S::is_exact() { q == p } else { q.minus(p).max_norm() <= tol };
                let idx = match positions.iter().position(close) {
                    Some(k) => k,
                    None => {
                        positions.push(p.clone());
                        positions.len() - 1
                    }
                };
                node_of.push(idx);
            }
        }
        let labels: Vec<String> = (0..positions.len()).map(|k| format!("p{k}")).collect();
        let mut b = Complex::builder().nodes(labels.iter().cloned());
        let mut link_of = Vec::new();
        for step in 0..self.steps() {
            for i in 0..r0 {
                let (t, h) = (node_of[self.node(i, step)], node_of[self.node(i, step + 1)]);
                if t == h {
                    continue;
                }
                b = b.branch(format!("t{}", link_of.len()), labels[t].clone(), labels[h].clone());
                link_of.push((i, step));
            }
        }
        Ok(SpatialTrace { complex: b.build()?, positions, node_of, link_of })
    }
}

/// Absolute and relative kinematical state at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicalState {
    pub t: f64,
    pub x: Cochain<Vector<f64>>,
    pub v: Cochain<Vector<f64>>,
    pub a: Cochain<Vector<f64>>,
    pub s: Cochain<Vector<f64>>,
    pub s_dot: Cochain<Vector<f64>>,
    pub s_ddot: Cochain<Vector<f64>>,
}

/// Differentiates per-node position samples and takes coboundaries at sample `t_index`.
pub fn kinematical_state(
    complex: &Complex,
    series: &[Sampled<Vector<f64>>],
    t_index: usize,
) -> Result<KinematicalState> {
    if series.len() != complex.r(0) {
        return Err(Error::DimensionMismatch { expected: complex.r(0), found: series.len() });
    }
    let len = series.first().map_or(0, |s| s.len());
    if series.iter().any(|s| s.len() != len) {
        return Err(Error::KindMismatch);
    }
    if len < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: len });
    }
    if t_index >= len {
        return Err(Error::RangeError { t0: t_index, t1: t_index, len });
    }
    let n = series[0].samples[0].n();
    let kind = ModuleKind::Vector { n, scalar: crate::scalar::ScalarKind::Real64 };
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    let mut as_ = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let v = s.derivative()?;
        let a = v.derivative()?;
        xs.push((i, s.samples[t_index].clone()));
        vs.push((i, v.samples[t_index].clone()));
        as_.push((i, a.samples[t_index].clone()));
    }
    let x = Cochain::from_terms(0, kind, xs)?;
    let v = Cochain::from_terms(0, kind, vs)?;
    let a = Cochain::from_terms(0, kind, as_)?;
    Ok(KinematicalState {
        t: t_index as f64 * series[0].dt,
        s: x.coboundary(complex)?,
        s_dot: v.coboundary(complex)?,
        s_ddot: a.coboundary(complex)?,
        x,
        v,
        a,
    })
}
