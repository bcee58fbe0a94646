//! Boundary-driven Lindblad dynamics: baths, generator, steady states and
//! observables.

mod dissipator;
mod liouvillian;
mod observables;
mod solver;
mod state;

pub use dissipator::{jump_operators, twisted_v_ops, twisted_w_ops, DissipatorSpec, TwistedLayout};
pub use liouvillian::{
    build_liouvillian, unvectorize, vectorize, Liouvillian, DENSE_SUPEROP_MAX_DIM,
};
pub use observables::{
    currents_profile, expectation, expectation_with, magnetization_profile, spread, CurrentsProfile,
};
pub use solver::{evolve, residual, steady_state, Method, Route, SolverConfig, SteadyState};
pub use state::{DensityMatrix, Validity};

use crate::chain::{build_hamiltonian, ChainSpec};
use crate::error::Result;

/// Generator for a chain with the given boundary baths.
pub fn chain_liouvillian(spec: &ChainSpec, baths: &DissipatorSpec) -> Result<Liouvillian> {
    let h = build_hamiltonian(spec)?;
    let jumps = jump_operators(baths, spec.n_sites)?;
    build_liouvillian(&h, &jumps)
}

/// Steady state of a chain together with its currents.
#[derive(Debug, Clone)]
pub struct ChainSolution {
    pub steady: SteadyState,
    pub currents: CurrentsProfile,
}

pub fn solve_chain(
    spec: &ChainSpec,
    baths: &DissipatorSpec,
    method: Method,
    cfg: &SolverConfig,
) -> Result<ChainSolution> {
    let liouv = chain_liouvillian(spec, baths)?;
    let steady = steady_state(&liouv, method, cfg)?;
    let currents = currents_profile(&steady.rho, spec)?;
    Ok(ChainSolution { steady, currents })
}
