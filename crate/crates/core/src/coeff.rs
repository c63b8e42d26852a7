//! Coefficient modules: scalars, sampled signals, vectors, covectors and bivectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Integer, Rational, Scalar, ScalarKind};

/// Descriptor of the module a chain takes its coefficients from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModuleKind {
    Integer,
    Rational,
    Real64,
    TimeSeries { dt: f64, len: usize },
    Vector { n: usize, scalar: ScalarKind },
    Covector { n: usize, scalar: ScalarKind },
    Bivector { n: usize, scalar: ScalarKind },
}

impl ModuleKind {
    pub fn of_scalar(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Integer => ModuleKind::Integer,
            ScalarKind::Rational => ModuleKind::Rational,
            ScalarKind::Real64 => ModuleKind::Real64,
        }
    }

    /// True for kinds compared without tolerance.
    pub fn is_exact(&self) -> bool {
        match self {
            ModuleKind::Integer | ModuleKind::Rational => true,
            ModuleKind::Real64 | ModuleKind::TimeSeries { .. } => false,
            ModuleKind::Vector { scalar, .. }
            | ModuleKind::Covector { scalar, .. }
            | ModuleKind::Bivector { scalar, .. } => *scalar != ScalarKind::Real64,
        }
    }
}

/// An element of an abelian group with integer scaling (a Z-module).
pub trait Coefficient: Clone + PartialEq + core::fmt::Debug {
    fn kind(&self) -> ModuleKind;
    fn zero_of(kind: &ModuleKind) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale_int(&self, m: &Integer) -> Self;
    /// Exact zero for exact kinds, max-norm at most `tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool;
    fn max_norm(&self) -> f64;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
}

/// Real vector-space operations used by finite differences and quadrature.
pub trait Linear: Clone {
    /// `a * self + b * other`.
    fn lin(&self, a: f64, other: &Self, b: f64) -> Self;

    fn scaled(&self, a: f64) -> Self {
        self.lin(a, self, 0.0)
    }
}

impl Linear for f64 {
    fn lin(&self, a: f64, other: &Self, b: f64) -> Self {
        a * self + b * other
    }
}

macro_rules! component_module {
    ($name:ident, $variant:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<S>(pub Vec<S>);

        impl<S: Scalar> $name<S> {
            pub fn zeros(n: usize) -> Self {
                $name(vec![S::zero(); n])
            }

            pub fn n(&self) -> usize {
                self.0.len()
            }

            pub fn unit(n: usize, i: usize) -> Self {
                let mut v = Self::zeros(n);
                v.0[i] = S::one();
                v
            }

            pub fn scale(&self, s: &S) -> Self {
                $name(self.0.iter().map(|x| x.mul(s)).collect())
            }
        }

        impl<S: Scalar> Coefficient for $name<S> {
            fn kind(&self) -> ModuleKind {
                ModuleKind::$variant { n: self.0.len(), scalar: S::KIND }
            }
            fn zero_of(kind: &ModuleKind) -> Self {
                match kind {
                    ModuleKind::$variant { n, .. } => Self::zeros(*n),
                    _ => Self::zeros(0),
                }
            }
            fn plus(&self, other: &Self) -> Self {
                debug_assert_eq!(self.0.len(), other.0.len());
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a.plus(b)).collect())
            }
            fn negate(&self) -> Self {
                $name(self.0.iter().map(|a| a.negate()).collect())
            }
            fn scale_int(&self, m: &Integer) -> Self {
                $name(self.0.iter().map(|a| a.scale_int(m)).collect())
            }
            fn is_negligible(&self, tol: f64) -> bool {
                self.0.iter().all(|a| a.is_negligible(tol))
            }
            fn max_norm(&self) -> f64 {
                self.0.iter().map(|a| a.max_norm()).fold(0.0, f64::max)
            }
        }

        impl Linear for $name<f64> {
            fn lin(&self, a: f64, other: &Self, b: f64) -> Self {
                $name(self.0.iter().zip(&other.0).map(|(x, y)| a * x + b * y).collect())
            }
        }
    };
}

component_module!(Vector, Vector, "Element of R^n (displacements, velocities).");
component_module!(Covector, Covector, "Element of the dual of R^n (forces, momenta).");

impl<S: Scalar> Vector<S> {
    /// Euclidean index lowering.
    pub fn to_covector(&self) -> Covector<S> {
        Covector(self.0.clone())
    }

    pub fn dot(&self, other: &Vector<S>) -> S {
        dot(&self.0, &other.0)
    }
}

impl<S: Scalar> Covector<S> {
    /// Euclidean index raising.
    pub fn to_vector(&self) -> Vector<S> {
        Vector(self.0.clone())
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.plus(&x.mul(y)))
}

/// Antisymmetric 2-tensor on R^n, stored as the `n(n-1)/2` entries `B_ij`, `i < j`,
/// in row-major order of the upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Bivector<S> {
    n: usize,
    comps: Vec<S>,
}

impl<S: Scalar> Bivector<S> {
    pub fn zeros(n: usize) -> Self {
        Bivector { n, comps: vec![S::zero(); n * n.saturating_sub(1) / 2] }
    }

    pub fn from_components(n: usize, comps: Vec<S>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if comps.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: comps.len() });
        }
        Ok(Bivector { n, comps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    fn slot(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < n);
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// `B_ij` for any `i, j`, using antisymmetry.
    pub fn get(&self, i: usize, j: usize) -> S {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => self.comps[Self::slot(self.n, i, j)].clone(),
            core::cmp::Ordering::Greater => self.comps[Self::slot(self.n, j, i)].negate(),
            core::cmp::Ordering::Equal => S::zero(),
        }
    }

    /// `(a ∧ b)_ij = a_i b_j - a_j b_i`.
    pub fn wedge(a: &[S], b: &[S]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        let n = a.len();
        let mut comps = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                comps.push(a[i].mul(&b[j]).minus(&a[j].mul(&b[i])));
            }
        }
        Ok(Bivector { n, comps })
    }

    /// Full antisymmetric matrix.
    pub fn to_matrix(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl<S: Scalar> Coefficient for Bivector<S> {
    fn kind(&self) -> ModuleKind {
        ModuleKind::Bivector { n: self.n, scalar: S::KIND }
    }
    fn zero_of(kind: &ModuleKind) -> Self {
        match kind {
            ModuleKind::Bivector { n, .. } => Self::zeros(*n),
            _ => Self::zeros(0),
        }
    }
    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Bivector { n: self.n, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.plus(b)).collect() }
    }
    fn negate(&self) -> Self {
        Bivector { n: self.n, comps: self.comps.iter().map(|a| a.negate()).collect() }
    }
    fn scale_int(&self, m: &Integer) -> Self {
        Bivector { n: self.n, comps: self.comps.iter().map(|a| a.scale_int(m)).collect() }
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.comps.iter().all(|a| a.is_negligible(tol))
    }
    fn max_norm(&self) -> f64 {
        self.comps.iter().map(|a| a.max_norm()).fold(0.0, f64::max)
    }
}

impl Linear for Bivector<f64> {
    fn lin(&self, a: f64, other: &Self, b: f64) -> Self {
        Bivector { n: self.n, comps: self.comps.iter().zip(&other.comps).map(|(x, y)| a * x + b * y).collect() }
    }
}

/// Uniformly sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled<T> {
    pub dt: f64,
    pub samples: Vec<T>,
}

/// Real-valued signal, the `TimeSeries` coefficient module.
pub type TimeSeries = Sampled<f64>;

impl<T: Linear> Sampled<T> {
    pub fn new(dt: f64, samples: Vec<T>) -> Self {
        Sampled { dt, samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Sampled<U> {
        Sampled { dt: self.dt, samples: self.samples.iter().map(f).collect() }
    }

    /// Central differences inside, second-order one-sided differences at both ends.
    pub fn derivative(&self) -> Result<Self> {
        let n = self.samples.len();
        if n < 3 {
            return Err(Error::TooFewSamples { needed: 3, found: n });
        }
        let s = &self.samples;
        let h2 = 2.0 * self.dt;
        let mut out = Vec::with_capacity(n);
        out.push(s[0].lin(-3.0, &s[1], 4.0).lin(1.0, &s[2], -1.0).scaled(1.0 / h2));
        for i in 1..n - 1 {
            out.push(s[i + 1].lin(1.0, &s[i - 1], -1.0).scaled(1.0 / h2));
        }
        out.push(s[n - 1].lin(3.0, &s[n - 2], -4.0).lin(1.0, &s[n - 3], 1.0).scaled(1.0 / h2));
        Ok(Sampled { dt: self.dt, samples: out })
    }

    /// Trapezoid rule between sample indices `t0 < t1`.
    pub fn integrate(&self, t0: usize, t1: usize) -> Result<T> {
        let len = self.samples.len();
        if t0 >= t1 || t1 >= len {
            return Err(Error::RangeError { t0, t1, len });
        }
        let s = &self.samples;
        let mut acc = s[t0].lin(0.5 * self.dt, &s[t1], 0.5 * self.dt);
        for x in &s[t0 + 1..t1] {
            acc = acc.lin(1.0, x, self.dt);
        }
        Ok(acc)
    }
}

impl Coefficient for TimeSeries {
    fn kind(&self) -> ModuleKind {
        ModuleKind::TimeSeries { dt: self.dt, len: self.samples.len() }
    }
    fn zero_of(kind: &ModuleKind) -> Self {
        match kind {
            ModuleKind::TimeSeries { dt, len } => Sampled { dt: *dt, samples: vec![0.0; *len] },
            _ => Sampled { dt: 0.0, samples: Vec::new() },
        }
    }
    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.samples.len(), other.samples.len());
        Sampled { dt: self.dt, samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect() }
    }
    fn negate(&self) -> Self {
        self.map(|a| -a)
    }
    fn scale_int(&self, m: &Integer) -> Self {
        let m = Scalar::to_f64(m);
        self.map(|a| a * m)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.samples.iter().all(|a| a.abs() <= tol)
    }
    fn max_norm(&self) -> f64 {
        self.samples.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

/// Bilinear pairing between a cochain coefficient and a chain coefficient.
pub trait Pairing<Rhs> {
    type Output;
    fn pair(&self, rhs: &Rhs) -> Result<Self::Output>;
}

macro_rules! ring_pairing {
    ($($t:ty),*) => {$(
        impl Pairing<$t> for $t {
            type Output = $t;
            fn pair(&self, rhs: &$t) -> Result<$t> {
                Ok(Scalar::mul(self, rhs))
            }
        }
    )*};
}
ring_pairing!(Integer, Rational, f64);

impl Pairing<TimeSeries> for TimeSeries {
    type Output = TimeSeries;
    fn pair(&self, rhs: &TimeSeries) -> Result<TimeSeries> {
        if self.samples.len() != rhs.samples.len() {
            return Err(Error::KindMismatch);
        }
        Ok(Sampled { dt: self.dt, samples: self.samples.iter().zip(&rhs.samples).map(|(a, b)| a * b).collect() })
    }
}

impl<S: Scalar> Pairing<Vector<S>> for Covector<S> {
    type Output = S;
    fn pair(&self, rhs: &Vector<S>) -> Result<S> {
        if self.n() != rhs.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: rhs.n() });
        }
        Ok(dot(&self.0, &rhs.0))
    }
}

impl<S: Scalar> Pairing<Covector<S>> for Vector<S> {
    type Output = S;
    fn pair(&self, rhs: &Covector<S>) -> Result<S> {
        rhs.pair(self)
    }
}

/// Two vectors have no pairing without a metric.
impl<S: Scalar> Pairing<Vector<S>> for Vector<S> {
    type Output = S;
    fn pair(&self, _rhs: &Vector<S>) -> Result<S> {
        Err(Error::PairingUndefined)
    }
}

/// Integer-valued cochains act on any chain by integer scaling.
macro_rules! integer_action {
    ($($t:ty),*) => {$(
        impl Pairing<$t> for Integer {
            type Output = $t;
            fn pair(&self, rhs: &$t) -> Result<$t> {
                Ok(rhs.scale_int(self))
            }
        }
    )*};
}
integer_action!(Rational, f64, TimeSeries);

impl<S: Scalar> Pairing<Vector<S>> for Integer {
    type Output = Vector<S>;
    fn pair(&self, rhs: &Vector<S>) -> Result<Vector<S>> {
        Ok(rhs.scale_int(self))
    }
}

impl<S: Scalar> Pairing<Covector<S>> for Integer {
    type Output = Covector<S>;
    fn pair(&self, rhs: &Covector<S>) -> Result<Covector<S>> {
        Ok(rhs.scale_int(self))
    }
}

/// Exact rational vector from integers, handy in tests and fixtures.
pub fn rational_vector(v: &[i64]) -> Vector<Rational> {
    Vector(v.iter().map(|&x| Rational::from_i64(x)).collect())
}
