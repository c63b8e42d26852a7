//! Statics, dynamics and energetics of mechanical networks.
//!
//! Orientation follows the rest of the crate: `∂(tail → head) = head - tail`.
//! Internal forces are stored as force densities `q(a)`, so `F(a) = q(a) s(a)`
//! stays exact over the rationals. With that orientation and `F_ext = -∂F_int`,
//! the load balancing a branch with `q > 0` points from its head toward its tail.
//! Reports still call `f > 0` tension.

pub mod dynamics;
pub mod energy;
pub mod statics;

pub use dynamics::{
    angular_momentum, angular_momentum_balance, center_of_mass, dalembert_max_residual, dalembert_residual, impulse,
    impulse_momentum_gap, kinetic_energy, kinetic_energy_history, mass_balance_check, mass_moment, moment_impulse_gap, momentum_balance_check,
    AngularBalance, DynamicsState, ForceHistory, MassBalance, MomentumBalance,
};
pub use energy::{
    conservative_check, path_work, trace_work, work_cochain, work_energy_check, Conservativity, WorkEnergyReport,
};
pub use statics::{
    close_open_system, equilibrium_check, equilibrium_matrix, equilibrium_via_virtual_work, force_moment_chain,
    internal_forces, moment_equilibrium_check, moment_residual, nodal_loads, solve_statics, virtual_work, Determinacy,
    EquilibriumReport, ForceComplex, MomentCheck, StaticsSolution,
};
