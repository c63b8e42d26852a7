//! Sparse chains and cochains with the boundary, coboundary and pairing operators.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::coeff::{Coefficient, ModuleKind, Pairing};
use crate::complex::{Complex, PathKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Magnitude below which inexact coefficients are dropped.
pub const DEFAULT_PRUNE: f64 = 1e-12;

/// Formal sum `Σ c_i σ_dim(i)`. With `DUAL = true` it is a cochain on the
/// reciprocal basis `σ^dim(i)`.
#[derive(Debug, Clone)]
pub struct Graded<C, const DUAL: bool> {
    dim: usize,
    module: ModuleKind,
    terms: BTreeMap<usize, C>,
    prune: f64,
}

pub type Chain<C> = Graded<C, false>;
pub type Cochain<C> = Graded<C, true>;

impl<C: PartialEq, const DUAL: bool> PartialEq for Graded<C, DUAL> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.module == other.module && self.terms == other.terms
    }
}

impl<C: Coefficient, const DUAL: bool> Graded<C, DUAL> {
    pub fn zero(dim: usize, module: ModuleKind) -> Self {
        Graded { dim, module, terms: BTreeMap::new(), prune: DEFAULT_PRUNE }
    }

    /// Builds from `(index, coefficient)` pairs; repeated indices are summed.
    pub fn from_terms<I: IntoIterator<Item = (usize, C)>>(dim: usize, module: ModuleKind, terms: I) -> Result<Self> {
        let mut out = Self::zero(dim, module);
        for (i, c) in terms {
            out.add_term(i, c)?;
        }
        Ok(out)
    }

    pub fn with_prune(mut self, prune: f64) -> Self {
        self.prune = prune;
        self.normalize();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn module(&self) -> ModuleKind {
        self.module
    }

    pub fn prune_tolerance(&self) -> f64 {
        self.prune
    }

    pub fn add_term(&mut self, index: usize, c: C) -> Result<()> {
        if c.kind() != self.module {
            return Err(Error::ModuleMismatch);
        }
        let sum = match self.terms.remove(&index) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !self.negligible(&sum) {
            self.terms.insert(index, sum);
        }
        Ok(())
    }

    fn negligible(&self, c: &C) -> bool {
        if self.module.is_exact() {
            c.is_negligible(0.0)
        } else {
            c.max_norm() < self.prune
        }
    }

    fn normalize(&mut self) {
        let terms = core::mem::take(&mut self.terms);
        self.terms = terms.into_iter().filter(|(_, c)| !self.negligible(c)).collect();
    }

    /// Coefficient of `σ(index)`, zero when absent.
    pub fn get(&self, index: usize) -> C {
        self.terms.get(&index).cloned().unwrap_or_else(|| C::zero_of(&self.module))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &C)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient norm.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.max_norm()).fold(0.0, f64::max)
    }

    /// Zero for exact kinds, max-norm at most `tol` otherwise.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(if self.module.is_exact() { 0.0 } else { tol }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|c| c.negate())
    }

    pub fn scale_int(&self, m: &BigInt) -> Self {
        let mut out = self.map_terms(|c| c.scale_int(m));
        out.normalize();
        out
    }

    fn map_terms(&self, f: impl Fn(&C) -> C) -> Self {
        Graded {
            dim: self.dim,
            module: self.module,
            terms: self.terms.iter().map(|(&i, c)| (i, f(c))).collect(),
            prune: self.prune,
        }
    }

    /// Applies `f` to every coefficient, producing a chain over another module.
    pub fn map<D: Coefficient>(&self, module: ModuleKind, f: impl Fn(&C) -> D) -> Result<Graded<D, DUAL>> {
        Graded::from_terms(self.dim, module, self.terms.iter().map(|(&i, c)| (i, f(c))))
            .map(|g| g.with_prune(self.prune))
    }

    fn check_indices(&self, complex: &Complex) -> Result<()> {
        if self.dim > 2 {
            if let Some(&index) = self.terms.keys().next() {
                return Err(Error::InvalidSimplex { dim: self.dim, index });
            }
            return Ok(());
        }
        let r = complex.r(self.dim);
        match self.terms.keys().next_back() {
            Some(&index) if index >= r => Err(Error::InvalidSimplex { dim: self.dim, index }),
            _ => Ok(()),
        }
    }
}

impl<S: Scalar, const DUAL: bool> Graded<S, DUAL> {
    /// Scalar coefficients; the module is fixed by the scalar type.
    pub fn scalar(dim: usize, terms: impl IntoIterator<Item = (usize, S)>) -> Self {
        Self::from_terms(dim, ModuleKind::of_scalar(S::KIND), terms).expect("scalar module is uniform")
    }

    pub fn from_i64(dim: usize, terms: &[(usize, i64)]) -> Self {
        Self::scalar(dim, terms.iter().map(|&(i, c)| (i, S::from_i64(c))))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.map_terms(|c| c.mul(s));
        out.normalize();
        out
    }

    /// Dense coefficient vector of length `r_dim`.
    pub fn to_dense(&self, len: usize) -> Vec<S> {
        (0..len).map(|i| self.get(i)).collect()
    }
}

impl<C: Coefficient> Chain<C> {
    /// `∂c` with coefficient of `σ_{k-1}(j)` equal to `Σ_i c(i) ∂_i^j`.
    pub fn boundary(&self, complex: &Complex) -> Result<Chain<C>> {
        if self.dim == 0 || self.dim > 2 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.dim });
        }
        self.check_indices(complex)?;
        let mut out = Chain::zero(self.dim - 1, self.module).with_prune(self.prune);
        for (&i, c) in &self.terms {
            for (j, s) in complex.boundary_of(self.dim, i) {
                let term = if s > 0 { c.clone() } else { c.negate() };
                out.add_term(j, term)?;
            }
        }
        Ok(out)
    }

    /// `∂^# c`, the sum of all coefficients of a 0-chain.
    pub fn augmented_boundary(&self) -> Result<C> {
        if self.dim != 0 {
            return Err(Error::DimensionMismatch { expected: 0, found: self.dim });
        }
        Ok(self.terms.values().fold(C::zero_of(&self.module), |acc, c| acc.plus(c)))
    }

    pub fn is_cycle(&self, complex: &Complex, tol: f64) -> Result<bool> {
        if self.dim == 0 {
            self.check_indices(complex)?;
            return Ok(true);
        }
        Ok(self.boundary(complex)?.is_zero_within(tol))
    }
}

impl Chain<BigInt> {
    pub fn classify_path(&self, complex: &Complex) -> Result<PathKind> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.dim });
        }
        let coeffs: Vec<(usize, i64)> = self
            .terms
            .iter()
            .map(|(&i, c)| (i, i64::try_from(c).unwrap_or(i64::MAX)))
            .collect();
        complex.classify_path(&coeffs)
    }
}

impl<C: Coefficient> Cochain<C> {
    /// `δc`, defined by `⟨δc, x⟩ = ⟨c, ∂x⟩`; matrix is the transposed incidence.
    pub fn coboundary(&self, complex: &Complex) -> Result<Cochain<C>> {
        if self.dim + 1 > 2 {
            return Err(Error::DimensionMismatch { expected: 1, found: self.dim });
        }
        self.check_indices(complex)?;
        let k = self.dim + 1;
        let mut out = Cochain::zero(k, self.module).with_prune(self.prune);
        for b in 0..complex.r(k) {
            for (a, s) in complex.boundary_of(k, b) {
                if let Some(c) = self.terms.get(&a) {
                    out.add_term(b, if s > 0 { c.clone() } else { c.negate() })?;
                }
            }
        }
        Ok(out)
    }

    /// `⟨c, x⟩ = Σ c(i) x(i)` under the coefficient pairing.
    pub fn evaluate<D>(&self, x: &Chain<D>) -> Result<<C as Pairing<D>>::Output>
    where
        D: Coefficient,
        C: Pairing<D>,
        <C as Pairing<D>>::Output: Coefficient,
    {
        if self.dim != x.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim });
        }
        let mut acc: Option<<C as Pairing<D>>::Output> = None;
        for (i, c) in &self.terms {
            if let Some(v) = x.terms.get(i) {
                let p = c.pair(v)?;
                acc = Some(match acc {
                    Some(a) => a.plus(&p),
                    None => p,
                });
            }
        }
        match acc {
            Some(a) => Ok(a),
            // No overlap: pair representative zeros so the result carries the right kind.
            None => {
                let c0 = C::zero_of(&self.module);
                let x0 = D::zero_of(&x.module);
                c0.pair(&x0)
            }
        }
    }

    /// Reinterprets the coefficients as a chain (Euclidean identification).
    pub fn to_chain(&self) -> Chain<C> {
        Graded { dim: self.dim, module: self.module, terms: self.terms.clone(), prune: self.prune }
    }
}

impl<C: Coefficient> Chain<C> {
    pub fn to_cochain(&self) -> Cochain<C> {
        Graded { dim: self.dim, module: self.module, terms: self.terms.clone(), prune: self.prune }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, disc};
    use crate::scalar::Integer;

    fn ichain(dim: usize, terms: &[(usize, i64)]) -> Chain<Integer> {
        Chain::from_i64(dim, terms)
    }

    #[test]
    fn circle_cycle_has_zero_boundary() {
        let c = circle();
        let z = ichain(1, &[(0, 1), (2, 1), (1, -1)]);
        assert!(z.boundary(&c).unwrap().is_empty());
        let not = ichain(1, &[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(not.boundary(&c).unwrap(), ichain(0, &[(0, -2), (2, 2)]));
    }

    #[test]
    fn disc_faces_sum_to_rim() {
        let d = disc();
        let faces = ichain(2, &[(0, 1), (1, 1), (2, 1)]);
        // AB + BC - AC; every internal link cancels
        assert_eq!(faces.boundary(&d).unwrap(), ichain(1, &[(0, 1), (3, 1), (1, -1)]));
    }

    #[test]
    fn augmented_boundary_sums() {
        assert_eq!(ichain(0, &[(0, 2), (1, 3)]).augmented_boundary(), Ok(Integer::from(5)));
        assert_eq!(ichain(0, &[(0, 1), (1, -1)]).augmented_boundary(), Ok(Integer::from(0)));
        assert!(ichain(1, &[(0, 1)]).augmented_boundary().is_err());
    }

    #[test]
    fn coboundary_of_node_cochain() {
        let c = circle();
        let v = Cochain::<Integer>::from_i64(0, &[(0, 1)]);
        assert_eq!(v.coboundary(&c).unwrap(), Cochain::from_i64(1, &[(0, -1), (1, -1)]));
        let constant = Cochain::<Integer>::from_i64(0, &[(0, 7), (1, 7), (2, 7)]);
        assert!(constant.coboundary(&c).unwrap().is_empty());
    }

    #[test]
    fn coboundary_into_faces_is_empty_without_faces() {
        let c = circle();
        let w = Cochain::<Integer>::from_i64(1, &[(0, 1)]);
        let dw = w.coboundary(&c).unwrap();
        assert_eq!(dw.dim(), 2);
        assert!(dw.is_empty());
        assert!(dw.coboundary(&c).is_err());
    }

    #[test]
    fn pairing_is_reciprocal() {
        for i in 0..3 {
            for j in 0..3 {
                let c = Cochain::<Integer>::from_i64(1, &[(i, 1)]);
                let x = ichain(1, &[(j, 1)]);
                assert_eq!(c.evaluate(&x).unwrap(), Integer::from((i == j) as i64));
            }
        }
        let c = Cochain::<Integer>::from_i64(1, &[(0, 2)]);
        assert_eq!(c.evaluate(&ichain(1, &[(0, 3)])), Ok(Integer::from(6)));
    }

    #[test]
    fn module_mismatch_is_rejected() {
        use crate::coeff::Vector;
        let kind2 = ModuleKind::Vector { n: 2, scalar: crate::scalar::ScalarKind::Real64 };
        let mut c = Chain::<Vector<f64>>::zero(0, kind2);
        assert_eq!(c.add_term(0, Vector(alloc::vec![1.0, 2.0, 3.0])), Err(Error::ModuleMismatch));
        let other = Chain::<Vector<f64>>::zero(0, ModuleKind::Vector { n: 3, scalar: crate::scalar::ScalarKind::Real64 });
        assert_eq!(c.add(&other), Err(Error::ModuleMismatch));
    }

    #[test]
    fn inexact_terms_are_pruned() {
        let c = Chain::<f64>::scalar(0, [(0, 1e-13), (1, 1.0)]);
        assert_eq!(c.support(), alloc::vec![1]);
    }
}
