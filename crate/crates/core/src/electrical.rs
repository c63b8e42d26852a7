//! Kirchhoff's laws as boundary and coboundary conditions.

use crate::chain::{Chain, Cochain};
use crate::coeff::{Coefficient, TimeSeries};
use crate::complex::{Complex, ConeMap};
use crate::error::{Error, Result};
use crate::homology::{is_coboundary, CoboundaryTest};
use crate::scalar::{Integer, Rational};

/// Coefficients usable as circuit signals. Constant (DC) kinds have zero time derivative.
pub trait Signal: Coefficient {
    fn time_derivative(&self) -> Result<Self>;
}

impl Signal for f64 {
    fn time_derivative(&self) -> Result<Self> {
        Ok(0.0)
    }
}

impl Signal for Rational {
    fn time_derivative(&self) -> Result<Self> {
        Ok(Rational::from_integer(0.into()))
    }
}

impl Signal for Integer {
    fn time_derivative(&self) -> Result<Self> {
        Ok(Integer::from(0))
    }
}

impl Signal for TimeSeries {
    fn time_derivative(&self) -> Result<Self> {
        self.derivative()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitState<C> {
    pub complex: Complex,
    /// Charge 0-chain; absent means no stored charge.
    pub charge: Option<Chain<C>>,
    /// Current 1-chain.
    pub current: Chain<C>,
    /// Voltage 0-cochain.
    pub voltage: Option<Cochain<C>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KclReport<C> {
    /// `∂I - dQ/dt`.
    pub residual: Chain<C>,
    /// `I` is a 1-cycle.
    pub conserved: bool,
    /// The extended current chain is a 1-cycle.
    pub extended_cycle: bool,
    pub max_norm: f64,
}

impl<C: Signal> CircuitState<C> {
    pub fn new(complex: Complex, current: Chain<C>) -> Self {
        CircuitState { complex, charge: None, current, voltage: None }
    }

    pub fn with_charge(mut self, q: Chain<C>) -> Self {
        self.charge = Some(q);
        self
    }

    pub fn with_voltage(mut self, v: Cochain<C>) -> Self {
        self.voltage = Some(v);
        self
    }

    fn charge_rate(&self) -> Result<Chain<C>> {
        let module = self.current.module();
        match &self.charge {
            None => Ok(Chain::zero(0, module)),
            Some(q) => {
                if q.module() != module {
                    return Err(Error::KindMismatch);
                }
                let mut out = Chain::zero(0, module).with_prune(q.prune_tolerance());
                for (i, x) in q.terms() {
                    out.add_term(i, x.time_derivative()?)?;
                }
                Ok(out)
            }
        }
    }

    /// `∂I = dQ/dt` node by node.
    pub fn kcl_check(&self, tol: f64) -> Result<KclReport<C>> {
        if let Some(v) = &self.voltage {
            if v.module() != self.current.module() {
                return Err(Error::KindMismatch);
            }
        }
        let di = self.current.boundary(&self.complex)?;
        let qdot = self.charge_rate()?;
        let residual = di.sub(&qdot)?;
        let (_, _, extended) = self.extended_current_chain()?;
        let (cone, _) = self.complex.cone(&self.complex.fresh_node_label("0"))?;
        Ok(KclReport {
            max_norm: residual.max_norm(),
            conserved: di.is_zero_within(tol),
            extended_cycle: extended.is_cycle(&cone, tol)?,
            residual,
        })
    }

    /// `Ī = I + Σ Q̇(i) σ_1(i, 0)` on the cone over the network. Its boundary is
    /// `(∂I - Q̇) + (∂^# Q̇) σ_0(0)`.
    pub fn extended_current_chain(&self) -> Result<(Complex, ConeMap, Chain<C>)> {
        let (cone, map) = self.complex.cone(&self.complex.fresh_node_label("0"))?;
        let qdot = self.charge_rate()?;
        let mut out = self.current.clone();
        for (i, x) in qdot.terms() {
            out.add_term(map.spokes[i], x.clone())?;
        }
        Ok((cone, map, out))
    }

    /// `ΔV = δV`, so `ΔV(a) = V(head) - V(tail)`.
    pub fn voltage_drop(&self) -> Result<Cochain<C>> {
        let v = self.voltage.as_ref().ok_or(Error::HypothesesUnmet("no voltage distribution".into()))?;
        v.coboundary(&self.complex)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KvlResult<C> {
    Pass(Cochain<C>),
    Fail { cycle: Chain<Integer>, sum: C },
}

/// KVL holds iff the drops form a coboundary; a failure carries a witness cycle.
pub fn kvl_check<C: Coefficient>(dv: &Cochain<C>, complex: &Complex, tol: f64) -> Result<KvlResult<C>> {
    Ok(match is_coboundary(dv, complex, tol)? {
        CoboundaryTest::Yes(potential) => KvlResult::Pass(potential),
        CoboundaryTest::No { cycle, value } => KvlResult::Fail { cycle, sum: value },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCochain<C> {
    /// `dE/dt` per branch, identified with the drop.
    pub rate: Cochain<C>,
    pub is_coboundary: bool,
}

pub fn power_cochain<C: Coefficient>(dv: &Cochain<C>, complex: &Complex, tol: f64) -> Result<PowerCochain<C>> {
    let pass = matches!(kvl_check(dv, complex, tol)?, KvlResult::Pass(_));
    Ok(PowerCochain { rate: dv.clone(), is_coboundary: pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle;
    use alloc::vec;

    fn two_node_loop(i1: f64, i2: f64) -> CircuitState<f64> {
        let c = Complex::builder().nodes(["A", "B"]).branch("b1", "A", "B").branch("b2", "B", "A").build().unwrap();
        CircuitState::new(c, Chain::scalar(1, [(0, i1), (1, i2)]))
    }

    #[test]
    fn balanced_loop_conserves() {
        let r = two_node_loop(1.5, 1.5).kcl_check(1e-9).unwrap();
        assert!(r.conserved && r.extended_cycle);
        assert!(r.residual.is_empty());
    }

    #[test]
    fn unbalanced_loop_has_residual() {
        let r = two_node_loop(1.5, 1.0).kcl_check(1e-9).unwrap();
        assert!(!r.conserved);
        assert_eq!(r.residual.get(0), -0.5);
        assert_eq!(r.residual.get(1), 0.5);
    }

    #[test]
    fn charge_accumulation_on_the_cone() {
        let dt = 0.5;
        let c = Complex::builder().nodes(["A", "B"]).branch("s", "A", "B").build().unwrap();
        let ramp = |k: f64| TimeSeries::new(dt, (0..5).map(|t| k * t as f64 * dt).collect());
        // B gains 2 C/s through the branch, A loses it
        let q = Chain::from_terms(0, ramp(-2.0).kind(), [(0, ramp(-2.0)), (1, ramp(2.0))]).unwrap();
        let current = Chain::from_terms(1, ramp(0.0).kind(), [(0, TimeSeries::new(dt, vec![2.0; 5]))]).unwrap();
        let st = CircuitState::new(c.clone(), current).with_charge(q);
        let r = st.kcl_check(1e-9).unwrap();
        assert!(r.max_norm < 1e-12);
        assert!(r.extended_cycle);

        let lone = Chain::from_terms(0, ramp(1.0).kind(), [(1, ramp(1.0))]).unwrap();
        let zero = Chain::zero(1, ramp(0.0).kind());
        let st = CircuitState::new(c, zero).with_charge(lone);
        let (cone, map, ext) = st.extended_current_chain().unwrap();
        let b = ext.boundary(&cone).unwrap();
        assert!(b.get(map.apex).samples.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn kvl_on_circle() {
        let c = circle();
        let v = Cochain::<Rational>::from_i64(0, &[(0, 5), (1, 0), (2, 2)]);
        let st = CircuitState::new(c.clone(), Chain::<Rational>::from_i64(1, &[])).with_voltage(v);
        let dv = st.voltage_drop().unwrap();
        assert_eq!(dv.get(0), Rational::from_integer((-5).into()));
        assert!(matches!(kvl_check(&dv, &c, 0.0), Ok(KvlResult::Pass(_))));
        let bad = Cochain::<Rational>::from_i64(1, &[(0, 1)]);
        let KvlResult::Fail { cycle, sum } = kvl_check(&bad, &c, 0.0).unwrap() else { panic!() };
        assert_eq!(sum.clone() * sum, Rational::from_integer(1.into()));
        assert!(cycle.is_cycle(&c, 0.0).unwrap());
        assert!(!power_cochain(&bad, &c, 0.0).unwrap().is_coboundary);
    }
}
