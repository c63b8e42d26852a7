//! Chain maps between 1-dimensional complexes given on generators.

use alloc::vec::Vec;

use crate::chain::Chain;
use crate::coeff::Coefficient;
use crate::complex::Complex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeImage {
    /// `σ_1(a) ↦ sign · σ_1(index)`.
    Edge { index: usize, sign: i8 },
    /// The branch is crushed to a vertex; its coefficient goes to zero.
    Collapsed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMapSpec {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<EdgeImage>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapCheck {
    Ok,
    Violation(usize),
}

impl ChainMapSpec {
    pub fn identity(complex: &Complex) -> Self {
        ChainMapSpec {
            vertex_map: (0..complex.r(0)).collect(),
            edge_map: (0..complex.r(1)).map(|index| EdgeImage::Edge { index, sign: 1 }).collect(),
        }
    }

    /// Checks `∂ f(σ_1(a)) = f(∂ σ_1(a))` on every branch of `source`.
    pub fn verify(&self, source: &Complex, target: &Complex) -> MapCheck {
        if self.vertex_map.len() != source.r(0) || self.vertex_map.iter().any(|&v| v >= target.r(0)) {
            return MapCheck::Violation(0);
        }
        for a in 0..source.r(1) {
            let Some(image) = self.edge_map.get(a) else {
                return MapCheck::Violation(a);
            };
            let (t, h) = source.branches()[a];
            let (ft, fh) = (self.vertex_map[t], self.vertex_map[h]);
            let ok = match *image {
                EdgeImage::Collapsed => ft == fh,
                EdgeImage::Edge { index, sign } => match target.branches().get(index) {
                    Some(&(tt, th)) if sign > 0 => (tt, th) == (ft, fh),
                    Some(&(tt, th)) => (th, tt) == (ft, fh),
                    None => false,
                },
            };
            if !ok {
                return MapCheck::Violation(a);
            }
        }
        MapCheck::Ok
    }

    /// Pushes a 0- or 1-chain forward. The map is verified first.
    pub fn apply<C: Coefficient>(&self, c: &Chain<C>, source: &Complex, target: &Complex) -> Result<Chain<C>> {
        if let MapCheck::Violation(a) = self.verify(source, target) {
            return Err(Error::UnverifiedSpec(a));
        }
        let mut out = Chain::zero(c.dim(), c.module()).with_prune(c.prune_tolerance());
        match c.dim() {
            0 => {
                for (i, x) in c.terms() {
                    let &j = self.vertex_map.get(i).ok_or(Error::InvalidSimplex { dim: 0, index: i })?;
                    out.add_term(j, x.clone())?;
                }
            }
            1 => {
                for (a, x) in c.terms() {
                    match self.edge_map.get(a).ok_or(Error::InvalidSimplex { dim: 1, index: a })? {
                        EdgeImage::Collapsed => {}
                        &EdgeImage::Edge { index, sign } => {
                            out.add_term(index, if sign > 0 { x.clone() } else { x.negate() })?;
                        }
                    }
                }
            }
            d => return Err(Error::DimensionMismatch { expected: 1, found: d }),
        }
        Ok(out)
    }
}
