//! Force complexes, static equilibrium, determinacy and moments.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{Chain, Cochain};
use crate::coeff::{Bivector, Coefficient, Covector, Vector};
use crate::complex::{Complex, ConeMap};
use crate::error::{Error, Result};
use crate::geometry::GeometricComplex;
use crate::linalg::Matrix;
use crate::scalar::{FieldScalar, Scalar};

/// External nodal loads and internal branch forces on a realized network.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceComplex<S> {
    pub g: GeometricComplex<S>,
    /// 0-chain of nodal loads.
    pub f_ext: Chain<Covector<S>>,
    /// 1-chain of branch forces.
    pub f_int: Chain<Covector<S>>,
    /// Force densities `q(a)` with `F(a) = q(a) s(a)` when the branch forces are axial.
    /// The axial force is `f(a) = q(a) |s(a)|`.
    pub densities: Option<Vec<S>>,
    /// Applied couples per node.
    pub moments: Vec<Option<Bivector<S>>>,
    /// Node standing for the point at infinity. Its position carries no meaning.
    pub infinity: Option<usize>,
}

/// `F(a) = q(a) s(a)` for every branch.
pub fn internal_forces<S: Scalar>(g: &GeometricComplex<S>, q: &[S]) -> Result<Chain<Covector<S>>> {
    let r1 = g.complex().r(1);
    if q.len() != r1 {
        return Err(Error::DimensionMismatch { expected: r1, found: q.len() });
    }
    let terms = q.iter().enumerate().map(|(a, q)| (a, g.branch_vector(a).to_covector().scale(q)));
    Chain::from_terms(1, g.covector_kind(), terms)
}

/// Nodal loads as a 0-chain.
pub fn nodal_loads<S: Scalar>(g: &GeometricComplex<S>, loads: &[(usize, Covector<S>)]) -> Result<Chain<Covector<S>>> {
    for (i, f) in loads {
        if *i >= g.complex().r(0) {
            return Err(Error::InvalidSimplex { dim: 0, index: *i });
        }
        if f.n() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), found: f.n() });
        }
    }
    Chain::from_terms(0, g.covector_kind(), loads.iter().cloned())
}

impl<S: Scalar> ForceComplex<S> {
    pub fn new(g: GeometricComplex<S>, f_ext: Chain<Covector<S>>, f_int: Chain<Covector<S>>) -> Result<Self> {
        check_chain(&g, &f_ext, 0)?;
        check_chain(&g, &f_int, 1)?;
        let r0 = g.complex().r(0);
        Ok(ForceComplex { g, f_ext, f_int, densities: None, moments: vec![None; r0], infinity: None })
    }

    pub fn from_densities(g: GeometricComplex<S>, f_ext: Chain<Covector<S>>, q: Vec<S>) -> Result<Self> {
        let f_int = internal_forces(&g, &q)?;
        let mut fc = Self::new(g, f_ext, f_int)?;
        fc.densities = Some(q);
        Ok(fc)
    }

    /// Unloaded network.
    pub fn unloaded(g: GeometricComplex<S>) -> Self {
        let f_ext = Chain::zero(0, g.covector_kind());
        let f_int = Chain::zero(1, g.covector_kind());
        Self::new(g, f_ext, f_int).expect("empty chains fit any network")
    }

    pub fn with_moment(mut self, node: usize, m: Bivector<S>) -> Result<Self> {
        if node >= self.moments.len() {
            return Err(Error::InvalidSimplex { dim: 0, index: node });
        }
        if m.n() != self.g.n() {
            return Err(Error::DimensionMismatch { expected: self.g.n(), found: m.n() });
        }
        self.moments[node] = Some(m);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn complex(&self) -> &Complex {
        self.g.complex()
    }

    /// Axial force `f(a) = q(a) |s(a)|`, when the densities are known.
    pub fn axial_forces(&self) -> Option<Vec<f64>> {
        self.densities.as_ref().map(|q| axial_from_densities(&self.g, q))
    }

    /// Every branch force is collinear with its branch.
    pub fn is_axial(&self, tol: f64) -> bool {
        (0..self.complex().r(1)).all(|a| {
            if self.touches_infinity(a) {
                return true;
            }
            let s = self.g.branch_vector(a);
            let f = self.f_int.get(a);
            // 2x2 minors of [s; F]
            (0..s.n()).all(|i| {
                (i + 1..s.n()).all(|j| s.0[i].mul(&f.0[j]).minus(&s.0[j].mul(&f.0[i])).is_negligible(tol))
            })
        })
    }

    pub(crate) fn touches_infinity(&self, a: usize) -> bool {
        let (t, h) = self.complex().branches()[a];
        self.infinity.is_some_and(|z| z == t || z == h)
    }

    /// Cone over the network with `-F_ext(i)` on each spoke `i → ∞`, so that
    /// `∂F̄ = (F_ext + ∂F_int) - (∂^# F_ext) σ_0(∞)`.
    pub fn extended_force_chain(&self) -> Result<(Complex, ConeMap, Chain<Covector<S>>)> {
        let (cone, map) = self.complex().cone(&self.complex().fresh_node_label("∞"))?;
        let mut out = self.f_int.clone();
        for (i, f) in self.f_ext.terms() {
            out.add_term(map.spokes[i], f.negate())?;
        }
        Ok((cone, map, out))
    }

    /// `F_ext(i)` plus the pull of links to the point at infinity, for finite nodes.
    pub(crate) fn effective_loads(&self) -> Result<Vec<Covector<S>>> {
        let r0 = self.complex().r(0);
        let mut out: Vec<Covector<S>> = (0..r0).map(|i| self.f_ext.get(i)).collect();
        if let Some(z) = self.infinity {
            for a in 0..self.complex().r(1) {
                if !self.touches_infinity(a) {
                    continue;
                }
                let (t, h) = self.complex().branches()[a];
                let f = self.f_int.get(a);
                if t != z {
                    out[t] = out[t].minus(&f);
                }
                if h != z {
                    out[h] = out[h].plus(&f);
                }
            }
        }
        Ok(out)
    }
}

fn check_chain<S: Scalar>(g: &GeometricComplex<S>, c: &Chain<Covector<S>>, dim: usize) -> Result<()> {
    if c.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
    }
    if let Some((_, f)) = c.terms().find(|(_, f)| f.n() != g.n()) {
        return Err(Error::DimensionMismatch { expected: g.n(), found: f.n() });
    }
    if c.module() != g.covector_kind() {
        return Err(Error::ModuleMismatch);
    }
    if let Some(&i) = c.support().last() {
        if i >= g.complex().r(dim) {
            return Err(Error::InvalidSimplex { dim, index: i });
        }
    }
    Ok(())
}

fn axial_from_densities<S: Scalar>(g: &GeometricComplex<S>, q: &[S]) -> Vec<f64> {
    q.iter().enumerate().map(|(a, q)| q.to_f64() * libm::sqrt(g.branch_length_squared(a).to_f64())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<S> {
    /// `∂^# F_ext`, the global resultant.
    pub resultant: Covector<S>,
    /// `F_ext + ∂F_int`, the per-node resultant.
    pub nodal_residual: Chain<Covector<S>>,
    pub in_equilibrium: bool,
    /// The extended force chain on the cone is a 1-cycle.
    pub extended_cycle: bool,
}

pub fn equilibrium_check<S: Scalar>(fc: &ForceComplex<S>, tol: f64) -> Result<EquilibriumReport<S>> {
    check_chain(&fc.g, &fc.f_ext, 0)?;
    check_chain(&fc.g, &fc.f_int, 1)?;
    let resultant = if fc.f_ext.is_empty() { Covector::zeros(fc.n()) } else { fc.f_ext.augmented_boundary()? };
    let nodal_residual = fc.f_ext.add(&fc.f_int.boundary(fc.complex())?)?;
    let (cone, _, fbar) = fc.extended_force_chain()?;
    let extended_cycle = fbar.is_cycle(&cone, tol)?;
    Ok(EquilibriumReport {
        in_equilibrium: resultant.is_negligible(tol) && nodal_residual.is_zero_within(tol),
        resultant,
        nodal_residual,
        extended_cycle,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Determinacy<S> {
    Determinate,
    /// Dimension of the self-stress space.
    Indeterminate(usize),
    /// No axial forces balance the loads. The obstructions are the resultant force
    /// and the resultant moment about the origin; both may vanish for a mechanism.
    Infeasible { force_obstruction: Covector<S>, moment_obstruction: Bivector<S> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticsSolution<S> {
    pub classification: Determinacy<S>,
    /// Particular force densities, free unknowns set to zero.
    pub densities: Option<Vec<S>>,
    /// `f(a) = q(a) |s(a)|`; positive values are reported as tension.
    pub axial_forces: Option<Vec<f64>>,
    /// Force-density vectors spanning the self-stresses.
    pub self_stress_basis: Vec<Vec<S>>,
    pub rank: usize,
}

/// Matrix of `q ↦ ∂(q s)`: row `n i + k`, column `a` holds `∂_a^i s_k(a)`.
pub fn equilibrium_matrix<S: Scalar>(g: &GeometricComplex<S>) -> Result<Matrix<S>> {
    let (n, r0, r1) = (g.n(), g.complex().r(0), g.complex().r(1));
    let mut m = Matrix::zeros(n * r0, r1);
    for a in 0..r1 {
        let s = g.branch_vector(a);
        if s.0.iter().all(|x| x.is_zero()) {
            return Err(Error::DegenerateBranch(a));
        }
        let (t, h) = g.complex().branches()[a];
        for k in 0..n {
            m.set(n * h + k, a, s.0[k].clone());
            m.set(n * t + k, a, s.0[k].negate());
        }
    }
    Ok(m)
}

/// Solves `F_ext = -∂F_int` for axial force densities.
pub fn solve_statics<S: FieldScalar>(g: &GeometricComplex<S>, f_ext: &Chain<Covector<S>>, tol: f64) -> Result<StaticsSolution<S>> {
    check_chain(g, f_ext, 0)?;
    let a = equilibrium_matrix(g)?;
    let n = g.n();
    let mut rhs = vec![S::zero(); a.rows()];
    for (i, f) in f_ext.terms() {
        for k in 0..n {
            rhs[n * i + k] = f.0[k].negate();
        }
    }
    let rank = S::rank(&a, tol);
    let self_stress_basis = S::nullspace(&a, tol);
    let densities = S::solve(&a, &rhs, tol);
    let classification = match &densities {
        None => {
            let force_obstruction = if f_ext.is_empty() { Covector::zeros(n) } else { f_ext.augmented_boundary()? };
            let mut moment_obstruction = Bivector::zeros(n);
            for (i, f) in f_ext.terms() {
                moment_obstruction = moment_obstruction.plus(&Bivector::wedge(&g.position(i).0, &f.0)?);
            }
            Determinacy::Infeasible { force_obstruction, moment_obstruction }
        }
        Some(_) if self_stress_basis.is_empty() => Determinacy::Determinate,
        Some(_) => Determinacy::Indeterminate(self_stress_basis.len()),
    };
    let axial_forces = densities.as_ref().map(|q| axial_from_densities(g, q));
    Ok(StaticsSolution { classification, densities, axial_forces, self_stress_basis, rank })
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentCheck<S> {
    Pass,
    Fail(Bivector<S>),
}

/// Cone with apex `O` carrying `(x(i) - O) ∧ F(i)` on each spoke `i → O`, where
/// `F(i)` is the effective nodal load. Its boundary at the apex is the resultant moment.
pub fn force_moment_chain<S: Scalar>(
    fc: &ForceComplex<S>,
    point: &Vector<S>,
) -> Result<(Complex, ConeMap, Chain<Bivector<S>>)> {
    if point.n() != fc.n() {
        return Err(Error::DimensionMismatch { expected: fc.n(), found: point.n() });
    }
    let (cone, map) = fc.complex().cone(&fc.complex().fresh_node_label("O"))?;
    let loads = fc.effective_loads()?;
    let mut m = Chain::zero(1, fc.g.bivector_kind());
    for (i, f) in loads.iter().enumerate() {
        if Some(i) == fc.infinity {
            continue;
        }
        let r = fc.g.position(i).minus(point);
        m.add_term(map.spokes[i], Bivector::wedge(&r.0, &f.0)?)?;
    }
    Ok((cone, map, m))
}

/// Resultant moment about `point` of the nodal loads plus the applied couples.
pub fn moment_residual<S: Scalar>(fc: &ForceComplex<S>, point: &Vector<S>) -> Result<Bivector<S>> {
    let (cone, map, m) = force_moment_chain(fc, point)?;
    let mut total = m.boundary(&cone)?.get(map.apex);
    for c in fc.moments.iter().flatten() {
        total = total.plus(c);
    }
    Ok(total)
}

pub fn moment_equilibrium_check<S: Scalar>(fc: &ForceComplex<S>, point: &Vector<S>, tol: f64) -> Result<MomentCheck<S>> {
    let r = moment_residual(fc, point)?;
    Ok(if r.is_negligible(tol) { MomentCheck::Pass } else { MomentCheck::Fail(r) })
}

/// Identifies every external node with one point at infinity. Loads on the
/// external nodes are summed onto it; branches keep their forces.
pub fn close_open_system<S: Scalar>(fc: &ForceComplex<S>, external: &[bool]) -> Result<ForceComplex<S>> {
    let c = fc.complex();
    if external.len() != c.r(0) {
        return Err(Error::DimensionMismatch { expected: c.r(0), found: external.len() });
    }
    if !external.iter().any(|&e| e) {
        return Ok(fc.clone());
    }
    if let Some(a) = (0..c.r(1)).find(|&a| external[c.tail(a)] && external[c.head(a)]) {
        return Err(Error::InvalidPartition(a));
    }
    let mut new_index = vec![0; c.r(0)];
    let mut labels: Vec<String> = Vec::new();
    let mut positions = Vec::new();
    for i in 0..c.r(0) {
        if !external[i] {
            new_index[i] = labels.len();
            labels.push(c.labels(0)[i].clone());
            positions.push(fc.g.position(i).clone());
        }
    }
    let z = labels.len();
    let inf_label = c.fresh_node_label("∞");
    for i in 0..c.r(0) {
        if external[i] {
            new_index[i] = z;
        }
    }
    labels.push(inf_label);
    positions.push(Vector::zeros(fc.n()));
    let mut b = Complex::builder().nodes(labels.iter().cloned());
    for a in 0..c.r(1) {
        let (t, h) = c.branches()[a];
        b = b.branch(c.labels(1)[a].clone(), labels[new_index[t]].clone(), labels[new_index[h]].clone());
    }
    let complex = b.build().map_err(|e| match e {
        Error::DuplicateLabel(l) => Error::HypothesesUnmet(format!("label clash while closing: {l}")),
        e => e,
    })?;
    let g = GeometricComplex::realize_unchecked(complex, fc.n(), positions);
    let mut f_ext = Chain::zero(0, fc.g.covector_kind());
    for (i, f) in fc.f_ext.terms() {
        f_ext.add_term(new_index[i], f.clone())?;
    }
    let mut moments: Vec<Option<Bivector<S>>> = vec![None; z + 1];
    for (i, m) in fc.moments.iter().enumerate() {
        if let Some(m) = m {
            let slot = &mut moments[new_index[i]];
            *slot = Some(match slot.take() {
                Some(prev) => prev.plus(m),
                None => m.clone(),
            });
        }
    }
    Ok(ForceComplex { g, f_ext, f_int: fc.f_int.clone(), densities: None, moments, infinity: Some(z) })
}

/// `⟨∂F̄, δx⟩`, computed as `⟨F̄, Δ(δx)⟩` on the cone with `δx(∞) = 0`.
pub fn virtual_work<S: Scalar>(fc: &ForceComplex<S>, delta_x: &Cochain<Vector<S>>) -> Result<S> {
    if delta_x.dim() != 0 {
        return Err(Error::DimensionMismatch { expected: 0, found: delta_x.dim() });
    }
    if delta_x.module() != fc.g.vector_kind() {
        return Err(Error::DimensionMismatch { expected: fc.n(), found: delta_x.terms().map(|(_, v)| v.n()).next().unwrap_or(0) });
    }
    let (cone, _, fbar) = fc.extended_force_chain()?;
    let ds = delta_x.coboundary(&cone)?;
    ds.evaluate(&fbar)
}

/// Equilibrium iff the virtual work vanishes on every unit variation of every node.
pub fn equilibrium_via_virtual_work<S: Scalar>(fc: &ForceComplex<S>, tol: f64) -> Result<bool> {
    let n = fc.n();
    for i in 0..fc.complex().r(0) {
        for k in 0..n {
            let dx = Cochain::from_terms(0, fc.g.vector_kind(), [(i, Vector::unit(n, k))])?;
            if !virtual_work(fc, &dx)?.is_negligible(tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rational_vector;
    use crate::scalar::Rational;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn cov(v: &[i64]) -> Covector<Rational> {
        rational_vector(v).to_covector()
    }

    fn bar() -> GeometricComplex<Rational> {
        let c = Complex::from_edges(&["A", "B"], &[("A", "B")]).unwrap();
        GeometricComplex::realize(c, 2, vec![rational_vector(&[0, 0]), rational_vector(&[3, 4])]).unwrap()
    }

    /// Triangle (0,0), (2,0), (1,2).
    pub(crate) fn triangle() -> GeometricComplex<Rational> {
        let c = Complex::from_edges(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("A", "C")]).unwrap();
        GeometricComplex::realize(c, 2, vec![rational_vector(&[0, 0]), rational_vector(&[2, 0]), rational_vector(&[1, 2])])
            .unwrap()
    }

    #[test]
    fn single_bar_balances() {
        let g = bar();
        // F = f ŝ with f = 5, ŝ = (3,4)/5
        let f = cov(&[3, 4]);
        let f_ext = nodal_loads(&g, &[(0, f.clone()), (1, f.negate())]).unwrap();
        let fc = ForceComplex::from_densities(g.clone(), f_ext, vec![rat(1, 1)]).unwrap();
        let r = equilibrium_check(&fc, 0.0).unwrap();
        assert!(r.in_equilibrium && r.extended_cycle);
        assert_eq!(fc.axial_forces().unwrap(), vec![5.0]);

        let half = nodal_loads(&g, &[(0, f.scale(&rat(1, 2))), (1, f.negate())]).unwrap();
        let fc = ForceComplex::from_densities(g, half, vec![rat(1, 1)]).unwrap();
        let r = equilibrium_check(&fc, 0.0).unwrap();
        assert!(!r.in_equilibrium && !r.extended_cycle);
        assert_eq!(r.nodal_residual.support(), vec![0]);
    }

    #[test]
    fn unloaded_is_trivially_balanced() {
        let r = equilibrium_check(&ForceComplex::unloaded(triangle()), 0.0).unwrap();
        assert!(r.in_equilibrium && r.extended_cycle);
    }

    #[test]
    fn loaded_triangle_is_determinate() {
        let g = triangle();
        // apex pushed down, base nodes carry the reactions
        let f_ext = nodal_loads(&g, &[(0, cov(&[0, 1])), (1, cov(&[0, 1])), (2, cov(&[0, -2]))]).unwrap();
        let sol = solve_statics(&g, &f_ext, 0.0).unwrap();
        assert_eq!(sol.classification, Determinacy::Determinate);
        let q = sol.densities.unwrap();
        // by hand: node A gives q_AC = 1/2, q_AB = -1/4; node B gives q_BC = 1/2
        assert_eq!(q, vec![rat(-1, 4), rat(1, 2), rat(1, 2)]);
        let fc = ForceComplex::from_densities(g.clone(), f_ext, q).unwrap();
        assert!(equilibrium_check(&fc, 0.0).unwrap().nodal_residual.is_empty());
        for i in 0..3 {
            assert_eq!(moment_equilibrium_check(&fc, g.position(i), 0.0).unwrap(), MomentCheck::Pass);
        }
    }

    #[test]
    fn unbalanced_load_is_infeasible() {
        let g = triangle();
        let f_ext = nodal_loads(&g, &[(2, cov(&[1, 0]))]).unwrap();
        let sol = solve_statics(&g, &f_ext, 0.0).unwrap();
        let Determinacy::Infeasible { force_obstruction, moment_obstruction } = sol.classification else { panic!() };
        assert_eq!(force_obstruction, cov(&[1, 0]));
        // x ∧ F at (1,2) with F = (1,0): 1*0 - 2*1
        assert_eq!(moment_obstruction.get(0, 1), rat(-2, 1));
        assert!(sol.densities.is_none());
    }

    #[test]
    fn zero_length_branch_is_rejected() {
        let c = Complex::from_edges(&["A", "B"], &[("A", "B")]).unwrap();
        let g = GeometricComplex::realize_unchecked(c, 2, vec![rational_vector(&[1, 1]), rational_vector(&[1, 1])]);
        assert_eq!(equilibrium_matrix(&g).unwrap_err(), Error::DegenerateBranch(0));
    }

    #[test]
    fn couple_fails_moment_check() {
        let c = Complex::from_edges(&["P", "Q"], &[]).unwrap();
        let g = GeometricComplex::realize(c, 2, vec![rational_vector(&[1, 0]), rational_vector(&[-1, 0])]).unwrap();
        let f = rat(3, 1);
        let f_ext = nodal_loads(&g, &[(0, cov(&[0, 3])), (1, cov(&[0, -3]))]).unwrap();
        let fc = ForceComplex::new(g, f_ext, Chain::zero(1, crate::coeff::ModuleKind::Covector { n: 2, scalar: crate::scalar::ScalarKind::Rational })).unwrap();
        let MomentCheck::Fail(m) = moment_equilibrium_check(&fc, &rational_vector(&[0, 0]), 0.0).unwrap() else { panic!() };
        assert_eq!(m.get(0, 1), rat(2, 1) * f);
        // an opposing applied couple restores balance
        let fc = fc.with_moment(0, m.negate()).unwrap();
        assert_eq!(moment_equilibrium_check(&fc, &rational_vector(&[5, -7]), 0.0).unwrap(), MomentCheck::Pass);
    }

    #[test]
    fn concurrent_forces_have_no_moment() {
        let c = Complex::from_edges(&["P", "Q"], &[]).unwrap();
        let g = GeometricComplex::realize(c, 2, vec![rational_vector(&[2, 0]), rational_vector(&[0, 3])]).unwrap();
        let f_ext = nodal_loads(&g, &[(0, cov(&[4, 0])), (1, cov(&[0, -1]))]).unwrap();
        let fc = ForceComplex::new(g.clone(), f_ext, Chain::zero(1, g.covector_kind())).unwrap();
        assert_eq!(moment_equilibrium_check(&fc, &rational_vector(&[0, 0]), 0.0).unwrap(), MomentCheck::Pass);
    }

    #[test]
    fn closing_reaction_links() {
        // triangle hung from three ground points by links
        let c = Complex::builder()
            .nodes(["A", "B", "C", "gA", "gB", "gC"])
            .edge("A", "B")
            .edge("B", "C")
            .edge("A", "C")
            .edge("gA", "A")
            .edge("gB", "B")
            .edge("gC", "C")
            .build()
            .unwrap();
        let pos = [[0, 0], [2, 0], [1, 2], [0, -1], [2, -1], [1, 3]];
        let g = GeometricComplex::realize(c, 2, pos.iter().map(|p| rational_vector(p)).collect()).unwrap();
        let mut loads = vec![(0, cov(&[0, -1])), (1, cov(&[0, -1])), (2, cov(&[1, 0]))];
        let f_ext0 = nodal_loads(&g, &loads).unwrap();
        let sol = solve_statics(&g, &f_ext0, 0.0);
        // without the ground reactions the loads have a nonzero resultant
        assert!(matches!(sol.unwrap().classification, Determinacy::Infeasible { .. }));

        // ground reactions balance the loads; then the closed system balances
        loads.extend([(3, cov(&[0, 1])), (4, cov(&[0, 1])), (5, cov(&[-1, 0]))]);
        let f_ext = nodal_loads(&g, &loads).unwrap();
        let ext = [false, false, false, true, true, true];
        let fc = ForceComplex::new(g.clone(), f_ext.clone(), Chain::zero(1, g.covector_kind())).unwrap();
        let closed = close_open_system(&fc, &ext).unwrap();
        assert_eq!(closed.complex().r(0), 4);
        let z = closed.infinity.unwrap();
        assert_eq!(closed.f_ext.get(z), cov(&[-1, 2]));
        assert_eq!(equilibrium_check(&closed, 0.0).unwrap().resultant, Covector::zeros(2));

        // with forces on the reaction links that hold the loaded nodes in place
        let mut f_int = Chain::zero(1, g.covector_kind());
        f_int.add_term(3, cov(&[0, 1])).unwrap();
        f_int.add_term(4, cov(&[0, 1])).unwrap();
        f_int.add_term(5, cov(&[-1, 0])).unwrap();
        let fc = ForceComplex::new(g, f_ext, f_int).unwrap();
        let closed = close_open_system(&fc, &ext).unwrap();
        let r = equilibrium_check(&closed, 0.0).unwrap();
        assert!(r.in_equilibrium, "{r:?}");
        assert!(equilibrium_via_virtual_work(&closed, 0.0).unwrap());

        assert_eq!(close_open_system(&fc, &[false; 6]).unwrap(), fc);
        let bad = [true, true, false, false, false, false];
        assert_eq!(close_open_system(&fc, &bad).unwrap_err(), Error::InvalidPartition(0));
    }

    #[test]
    fn virtual_work_reads_the_residual() {
        let g = bar();
        let f = cov(&[3, 4]);
        let f_ext = nodal_loads(&g, &[(0, f.clone()), (1, f.negate())]).unwrap();
        let fc = ForceComplex::from_densities(g.clone(), f_ext, vec![rat(1, 1)]).unwrap();
        let dx = Cochain::from_terms(0, g.vector_kind(), [(0, rational_vector(&[7, -2])), (1, rational_vector(&[1, 1]))]).unwrap();
        assert_eq!(virtual_work(&fc, &dx).unwrap(), rat(0, 1));
        assert_eq!(virtual_work(&fc, &Cochain::zero(0, g.vector_kind())).unwrap(), rat(0, 1));

        let f_ext = nodal_loads(&g, &[(0, cov(&[3, 4]).scale(&rat(2, 1))), (1, f.negate())]).unwrap();
        let fc = ForceComplex::from_densities(g.clone(), f_ext, vec![rat(1, 1)]).unwrap();
        // residual at A is (3,4), magnitude 5, unit direction (3,4)/5
        let dir = Vector(vec![rat(3, 5), rat(4, 5)]);
        let dx = Cochain::from_terms(0, g.vector_kind(), [(0, dir)]).unwrap();
        assert_eq!(virtual_work(&fc, &dx).unwrap(), rat(5, 1));
        assert!(!equilibrium_via_virtual_work(&fc, 0.0).unwrap());
    }
}
