//! Chain complexes over finite physical networks.
//!
//! A network is a simplicial complex of dimension at most two. Chains and
//! cochains carry coefficients from integer, rational, real, sampled-signal,
//! vector, covector or bivector modules, and the physical laws (Kirchhoff,
//! equilibrium, balance of mass, momentum and energy) become statements about
//! boundaries and coboundaries.
//!
//! Branch orientation is `tail → head` with `∂σ_1 = head - tail`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod chain;
pub mod chain_map;
pub mod coeff;
pub mod complex;
pub mod electrical;
pub mod error;
pub mod geometry;
pub mod homology;
pub mod kinematics;
pub mod linalg;
pub mod mechanics;
pub mod scalar;
pub mod snf;

pub use chain::{Chain, Cochain};
pub use coeff::{Bivector, Coefficient, Covector, ModuleKind, Sampled, TimeSeries, Vector};
pub use complex::{Complex, ComplexBuilder, SimplexId};
pub use error::{Error, Result};
pub use scalar::{Integer, Rational, Scalar};

/// Absolute tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Engine version recorded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
