//! Affine realizations of complexes: positions, displacements, moments,
//! rigid motions and rotation generators.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::Cochain;
use crate::coeff::{Bivector, Coefficient, Covector, ModuleKind, Vector};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A complex with one point of `R^n` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricComplex<S> {
    complex: Complex,
    n: usize,
    positions: Vec<Vector<S>>,
    origin: Option<usize>,
}

impl<S: Scalar> GeometricComplex<S> {
    /// Checks one `n`-vector per node and pairwise distinct positions.
    pub fn realize(complex: Complex, n: usize, positions: Vec<Vector<S>>) -> Result<Self> {
        if positions.len() != complex.r(0) {
            return Err(Error::DimensionMismatch { expected: complex.r(0), found: positions.len() });
        }
        if let Some(p) = positions.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.n() });
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::CoincidentNodes(i, j));
                }
            }
        }
        Ok(GeometricComplex { complex, n, positions, origin: None })
    }

    /// Skips the distinctness check; used for points at infinity and deformed snapshots.
    pub(crate) fn realize_unchecked(complex: Complex, n: usize, positions: Vec<Vector<S>>) -> Self {
        GeometricComplex { complex, n, positions, origin: None }
    }

    pub fn with_origin(mut self, node: usize) -> Self {
        self.origin = Some(node);
        self
    }

    pub fn origin(&self) -> Option<usize> {
        self.origin
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[Vector<S>] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> &Vector<S> {
        &self.positions[i]
    }

    pub fn vector_kind(&self) -> ModuleKind {
        ModuleKind::Vector { n: self.n, scalar: S::KIND }
    }

    pub fn covector_kind(&self) -> ModuleKind {
        ModuleKind::Covector { n: self.n, scalar: S::KIND }
    }

    pub fn bivector_kind(&self) -> ModuleKind {
        ModuleKind::Bivector { n: self.n, scalar: S::KIND }
    }

    /// The position 0-cochain `x`.
    pub fn position_cochain(&self) -> Cochain<Vector<S>> {
        Cochain::from_terms(0, self.vector_kind(), self.positions.iter().cloned().enumerate())
            .expect("positions share one dimension")
    }

    /// `s = δx`, so `s(a) = x(head) - x(tail)`.
    pub fn displacement_cochain(&self) -> Cochain<Vector<S>> {
        self.position_cochain().coboundary(&self.complex).expect("0-cochain has a coboundary")
    }

    /// `s(a)` for a single branch.
    pub fn branch_vector(&self, a: usize) -> Vector<S> {
        let (t, h) = self.complex.branches()[a];
        self.positions[h].minus(&self.positions[t])
    }

    /// Squared Euclidean length of branch `a`.
    pub fn branch_length_squared(&self, a: usize) -> S {
        let s = self.branch_vector(a);
        s.dot(&s)
    }

    pub fn distance_squared(&self, i: usize, j: usize) -> S {
        let d = self.positions[i].minus(&self.positions[j]);
        d.dot(&d)
    }

    /// Moves the origin to `a`: every position becomes `x - a`.
    pub fn shift_origin(&self, a: &Vector<S>) -> Result<Self> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.n() });
        }
        let mut out = self.clone();
        for p in out.positions.iter_mut() {
            *p = p.minus(a);
        }
        Ok(out)
    }

    /// `n r_0 - r_1 - n(n+1)/2`.
    pub fn maxwell_dof(&self) -> Result<i64> {
        maxwell_dof(self.n, self.complex.r(0), self.complex.r(1))
    }
}

pub fn maxwell_dof(n: usize, r0: usize, r1: usize) -> Result<i64> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let n = n as i64;
    Ok(n * r0 as i64 - r1 as i64 - n * (n + 1) / 2)
}

/// `a ∧ b` for two vectors.
pub fn wedge<S: Scalar>(a: &Vector<S>, b: &Vector<S>) -> Result<Bivector<S>> {
    Bivector::wedge(&a.0, &b.0)
}

/// `a ∧ b` for two covectors (2-form).
pub fn wedge_covectors<S: Scalar>(a: &Covector<S>, b: &Covector<S>) -> Result<Bivector<S>> {
    Bivector::wedge(&a.0, &b.0)
}

/// Moment `r ∧ F` of a force applied at arm `r`.
pub fn moment<S: Scalar>(r: &Covector<S>, f: &Covector<S>) -> Result<Bivector<S>> {
    Bivector::wedge(&r.0, &f.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RigidityMode {
    /// Every pair of nodes keeps its distance.
    AllPairs,
    /// Only linked pairs keep their distance.
    LinkLengthsOnly,
}

/// Compares distances between corresponding nodes. Exact kinds compare squared
/// distances exactly; `f64` compares distances within `tol`.
pub fn is_rigid_motion<S: Scalar>(
    g0: &GeometricComplex<S>,
    g1: &GeometricComplex<S>,
    tol: f64,
    mode: RigidityMode,
) -> Result<bool> {
    let (n0, n1) = (g0.positions.len(), g1.positions.len());
    if n0 != n1 {
        return Err(Error::NodeCountMismatch(n0, n1));
    }
    let same = |i: usize, j: usize| {
        let (d0, d1) = (g0.distance_squared(i, j), g1.distance_squared(i, j));
        if S::is_exact() {
            d0 == d1
        } else {
            (libm::sqrt(d0.to_f64()) - libm::sqrt(d1.to_f64())).abs() <= tol
        }
    };
    Ok(match mode {
        RigidityMode::AllPairs => (0..n0).all(|i| (i + 1..n0).all(|j| same(i, j))),
        RigidityMode::LinkLengthsOnly => g0.complex.branches().iter().all(|&(t, h)| same(t, h)),
    })
}

fn check_antisymmetric(omega: &[Vec<f64>], tol: f64) -> Result<usize> {
    let n = omega.len();
    if omega.iter().any(|r| r.len() != n) {
        return Err(Error::NotAntisymmetric);
    }
    for i in 0..n {
        for j in 0..n {
            if (omega[i][j] + omega[j][i]).abs() > tol {
                return Err(Error::NotAntisymmetric);
            }
        }
    }
    Ok(n)
}

/// `v(i) = ω (x(i) - c)`.
pub fn rotation_velocity_field(
    omega: &[Vec<f64>],
    g: &GeometricComplex<f64>,
    center: &Vector<f64>,
) -> Result<Cochain<Vector<f64>>> {
    let n = check_antisymmetric(omega, 1e-12)?;
    if n != g.n || center.n() != n {
        return Err(Error::DimensionMismatch { expected: g.n, found: n });
    }
    let terms = g.positions.iter().enumerate().map(|(i, x)| {
        let r = x.minus(center);
        (i, Vector(mat_vec(omega, &r.0)))
    });
    Cochain::from_terms(0, g.vector_kind(), terms)
}

pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// `exp(ω t)` by scaling and squaring of the truncated power series.
pub fn rotation_exp(omega: &[Vec<f64>], t: f64) -> Result<Vec<Vec<f64>>> {
    let n = check_antisymmetric(omega, 1e-12)?;
    let a: Vec<Vec<f64>> = omega.iter().map(|r| r.iter().map(|x| x * t).collect()).collect();
    let norm = a.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect();
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..64 {
        term = mat_mul(&term, &a).into_iter().map(|r| r.into_iter().map(|x| x / k as f64).collect()).collect();
        let size = term.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (s, t) in srow.iter_mut().zip(trow) {
                *s += t;
            }
        }
        if size < 1e-14 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = mat_mul(&sum, &sum);
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Proper,
    Improper,
    Degenerate,
}

/// Sign of the determinant of the best-fit linear map carrying the centered
/// configuration of `g0` onto that of `g1` (its orthogonal polar factor has the same sign).
pub fn handedness(g0: &GeometricComplex<f64>, g1: &GeometricComplex<f64>, tol: f64) -> Result<Handedness> {
    let m = g0.positions.len();
    if m != g1.positions.len() {
        return Err(Error::NodeCountMismatch(m, g1.positions.len()));
    }
    let n = g0.n;
    let centroid = |g: &GeometricComplex<f64>| {
        let mut c = vec![0.0; n];
        for p in &g.positions {
            for (ck, pk) in c.iter_mut().zip(&p.0) {
                *ck += pk / m as f64;
            }
        }
        c
    };
    let (c0, c1) = (centroid(g0), centroid(g1));
    let mut h = vec![vec![0.0; n]; n];
    for (p0, p1) in g0.positions.iter().zip(&g1.positions) {
        for (i, hrow) in h.iter_mut().enumerate() {
            for (j, hij) in hrow.iter_mut().enumerate() {
                *hij += (p1.0[i] - c1[i]) * (p0.0[j] - c0[j]);
            }
        }
    }
    let det = det_f64(h);
    Ok(if det.abs() <= tol {
        Handedness::Degenerate
    } else if det > 0.0 {
        Handedness::Proper
    } else {
        Handedness::Improper
    })
}

fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).fold(k, |best, i| if a[i][k].abs() > a[best][k].abs() { i } else { best });
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// Exact zero test for exact kinds, max-norm within `tol` otherwise.
pub fn bivector_is_zero<S: Scalar>(b: &Bivector<S>, tol: f64) -> bool {
    b.is_negligible(if S::is_exact() { 0.0 } else { tol })
}

/// Helper for building exact positions in tests and fixtures.
pub fn point<S: Scalar>(coords: &[i64]) -> Vector<S> {
    Vector(coords.iter().map(|&c| S::from_i64(c)).collect())
}
