//! Cycles, boundaries, Betti numbers, generators, torsion and cohomology tests.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::chain::{Chain, Cochain};
use crate::coeff::{Coefficient, ModuleKind};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{FieldScalar, Integer, Scalar};
use crate::snf::{smith_normal_form, SnfResult};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryTest<C> {
    No,
    Yes(Chain<C>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoboundaryTest<C> {
    /// Potential with value zero at the least node of each component.
    Yes(Cochain<C>),
    /// A cycle on which the cochain does not vanish, and that value.
    No { cycle: Chain<Integer>, value: C },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, per dimension.
    pub torsion: Vec<Vec<BigInt>>,
    pub euler: i64,
    pub generators: Vec<Vec<Chain<Integer>>>,
}

/// Matrix of `∂_k` acting on column vectors of `k`-chain coefficients.
pub fn boundary_matrix(complex: &Complex, k: usize) -> Matrix<BigInt> {
    complex.incidence(k).transpose().map(|&v| BigInt::from(v))
}

fn rank_of_boundary(complex: &Complex, k: usize) -> usize {
    if k == 0 || k > 2 {
        return 0;
    }
    linalg::rank_integer(&boundary_matrix(complex, k))
}

/// `b_k = r_k - rank ∂_k - rank ∂_{k+1}` for `k = 0..=dimension`.
pub fn betti_numbers(complex: &Complex) -> Vec<usize> {
    (0..=complex.dimension())
        .map(|k| complex.r(k) - rank_of_boundary(complex, k) - rank_of_boundary(complex, k + 1))
        .collect()
}

/// Checks that the simplex count and the Betti numbers give the same characteristic.
pub fn euler_characteristic(complex: &Complex) -> Result<i64> {
    let from_counts = (0..=2).map(|k| sign(k) * complex.r(k) as i64).sum();
    let from_betti = betti_numbers(complex).iter().enumerate().map(|(k, &b)| sign(k) * b as i64).sum();
    if from_counts != from_betti {
        return Err(Error::InternalMismatch { from_counts, from_betti });
    }
    Ok(from_counts)
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Integer basis of `Z_k`, normalized.
pub fn cycle_space_basis(complex: &Complex, k: usize) -> Vec<Vec<BigInt>> {
    if k == 0 {
        return (0..complex.r(0))
            .map(|i| (0..complex.r(0)).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
    }
    linalg::nullspace_integer(&boundary_matrix(complex, k))
}

/// Cycles whose classes form a basis of `H_k` over the rationals.
pub fn homology_generators(complex: &Complex, k: usize) -> Vec<Chain<Integer>> {
    if k == 0 {
        return complex
            .path_components()
            .into_iter()
            .map(|class| Chain::from_i64(0, &[(class[0], 1)]))
            .collect();
    }
    if k > 2 {
        return Vec::new();
    }
    let rk = complex.r(k);
    let mut stacked: Vec<Vec<BigInt>> = if k < 2 {
        // columns of ∂_{k+1} as row vectors
        boundary_matrix(complex, k + 1).transpose().to_rows()
    } else {
        Vec::new()
    };
    let mut rank = linalg::rank_integer(&Matrix::from_rows(stacked.clone(), rk));
    let mut out = Vec::new();
    for z in cycle_space_basis(complex, k) {
        stacked.push(z.clone());
        let r = linalg::rank_integer(&Matrix::from_rows(stacked.clone(), rk));
        if r > rank {
            rank = r;
            out.push(Chain::scalar(k, z.into_iter().enumerate()));
        } else {
            stacked.pop();
        }
    }
    out
}

pub fn smith_normal_form_of_boundary(complex: &Complex, k: usize) -> SnfResult {
    smith_normal_form(&boundary_matrix(complex, k))
}

pub fn homology_summary(complex: &Complex) -> Result<HomologySummary> {
    let betti = betti_numbers(complex);
    let euler = euler_characteristic(complex)?;
    let torsion = (0..=complex.dimension())
        .map(|k| if k < 2 { smith_normal_form_of_boundary(complex, k + 1).torsion() } else { Vec::new() })
        .collect();
    let generators = (0..=complex.dimension()).map(|k| homology_generators(complex, k)).collect();
    Ok(HomologySummary { betti, torsion, euler, generators })
}

/// Spanning forest: per node, the tree branch reaching it and its parent, in BFS order.
struct Forest {
    order: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    tree: Vec<bool>,
}

fn spanning_forest(complex: &Complex) -> Forest {
    let n = complex.r(0);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (a, &(t, h)) in complex.branches().iter().enumerate() {
        adj[t].push((a, h));
        adj[h].push((a, t));
    }
    let mut seen = vec![false; n];
    let mut parent = vec![None; n];
    let mut tree = vec![false; complex.r(1)];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(a, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((a, v));
                    tree[a] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Forest { order, parent, tree }
}

/// Tree path from the root to `v` as `(branch, ±1)` traversals.
fn root_path(complex: &Complex, forest: &Forest, mut v: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    while let Some((a, p)) = forest.parent[v] {
        // traversing p → v along branch a
        out.push((a, if complex.head(a) == v { 1 } else { -1 }));
        v = p;
    }
    out
}

/// Fundamental cycle of a non-tree branch: the branch followed by the tree path back.
fn fundamental_cycle(complex: &Complex, forest: &Forest, a: usize) -> Chain<Integer> {
    let (t, h) = complex.branches()[a];
    let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
    terms.insert(a, 1);
    for (b, s) in root_path(complex, forest, h) {
        *terms.entry(b).or_default() -= s;
    }
    for (b, s) in root_path(complex, forest, t) {
        *terms.entry(b).or_default() += s;
    }
    let terms: Vec<(usize, i64)> = terms.into_iter().filter(|&(_, c)| c != 0).collect();
    Chain::from_i64(1, &terms)
}

/// One fundamental cycle per non-tree branch of a BFS spanning forest.
pub fn cycle_basis(complex: &Complex) -> Vec<Chain<Integer>> {
    let forest = spanning_forest(complex);
    (0..complex.r(1)).filter(|&a| !forest.tree[a]).map(|a| fundamental_cycle(complex, &forest, a)).collect()
}

/// Decides whether a 1-cochain is `δφ`, by integrating along a spanning forest.
pub fn is_coboundary<C: Coefficient>(c: &Cochain<C>, complex: &Complex, tol: f64) -> Result<CoboundaryTest<C>> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: c.dim() });
    }
    if let Some(&a) = c.support().last() {
        if a >= complex.r(1) {
            return Err(Error::InvalidSimplex { dim: 1, index: a });
        }
    }
    let module = c.module();
    let forest = spanning_forest(complex);
    let mut phi: Vec<C> = vec![C::zero_of(&module); complex.r(0)];
    for &v in &forest.order {
        if let Some((a, p)) = forest.parent[v] {
            // δφ(a) = φ(head) - φ(tail)
            phi[v] = if complex.head(a) == v { phi[p].plus(&c.get(a)) } else { phi[p].minus(&c.get(a)) };
        }
    }
    let tol = if module.is_exact() { 0.0 } else { tol };
    for a in 0..complex.r(1) {
        if forest.tree[a] {
            continue;
        }
        let (t, h) = complex.branches()[a];
        let value = c.get(a).minus(&phi[h].minus(&phi[t]));
        if !value.is_negligible(tol) {
            return Ok(CoboundaryTest::No { cycle: fundamental_cycle(complex, &forest, a), value });
        }
    }
    let potential = Cochain::from_terms(0, module, phi.into_iter().enumerate())?.with_prune(c.prune_tolerance());
    Ok(CoboundaryTest::Yes(potential))
}

/// Whether a 0-chain over any module bounds: it must sum to zero on every component.
/// The witness is a 1-chain supported on a spanning forest.
pub fn is_boundary_0<C: Coefficient>(z: &Chain<C>, complex: &Complex, tol: f64) -> Result<BoundaryTest<C>> {
    if z.dim() != 0 {
        return Err(Error::DimensionMismatch { expected: 0, found: z.dim() });
    }
    if let Some(&i) = z.support().last() {
        if i >= complex.r(0) {
            return Err(Error::InvalidSimplex { dim: 0, index: i });
        }
    }
    let module = z.module();
    let tol = if module.is_exact() { 0.0 } else { tol };
    let forest = spanning_forest(complex);
    let mut excess: Vec<C> = (0..complex.r(0)).map(|i| z.get(i)).collect();
    let mut witness = Chain::zero(1, module).with_prune(z.prune_tolerance());
    for &v in forest.order.iter().rev() {
        match forest.parent[v] {
            Some((a, p)) => {
                // The tree branch must deliver excess[v] into v.
                let x = core::mem::replace(&mut excess[v], C::zero_of(&module));
                let flow = if complex.head(a) == v { x.clone() } else { x.negate() };
                witness.add_term(a, flow)?;
                excess[p] = excess[p].plus(&x);
            }
            None => {
                if !excess[v].is_negligible(tol) {
                    return Ok(BoundaryTest::No);
                }
            }
        }
    }
    Ok(BoundaryTest::Yes(witness))
}

fn field_module<S: Scalar>() -> ModuleKind {
    ModuleKind::of_scalar(<S::Field as Scalar>::KIND)
}

/// Whether a scalar cycle bounds, solving `∂_{k+1} x = z` over the field of fractions.
pub fn is_boundary<S: Scalar>(z: &Chain<S>, complex: &Complex, tol: f64) -> Result<BoundaryTest<S::Field>> {
    let k = z.dim();
    if !z.is_cycle(complex, tol)? {
        return Err(Error::NotACycle);
    }
    let zf: Chain<S::Field> = z.map(field_module::<S>(), |c| c.to_field())?;
    match k {
        0 => is_boundary_0(&zf, complex, tol),
        1 => {
            let a = boundary_matrix(complex, 2).map(|v| <S::Field as Scalar>::from_integer(v));
            let b = zf.to_dense(complex.r(1));
            Ok(match <S::Field as FieldScalar>::solve(&a, &b, tol) {
                Some(x) => BoundaryTest::Yes(Chain::scalar(2, x.into_iter().enumerate()).with_prune(z.prune_tolerance())),
                None => BoundaryTest::No,
            })
        }
        _ => Ok(if zf.is_zero_within(tol) {
            BoundaryTest::Yes(Chain::zero(k + 1, field_module::<S>()))
        } else {
            BoundaryTest::No
        }),
    }
}

/// True when the integer 1-chains are independent modulo boundaries.
pub fn independent_mod_boundaries(complex: &Complex, k: usize, chains: &[Chain<Integer>]) -> bool {
    let rk = complex.r(k);
    let mut rows: Vec<Vec<BigInt>> =
        if k < 2 { boundary_matrix(complex, k + 1).transpose().to_rows() } else { Vec::new() };
    let base = linalg::rank_integer(&Matrix::from_rows(rows.clone(), rk));
    rows.extend(chains.iter().map(|c| c.to_dense(rk)));
    linalg::rank_integer(&Matrix::from_rows(rows, rk)) == base + chains.len()
}

/// Exact rational rank of `∂_k`.
pub fn boundary_rank(complex: &Complex, k: usize) -> usize {
    rank_of_boundary(complex, k)
}
