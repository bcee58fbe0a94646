//! Exact nonequilibrium steady states of boundary-driven XXZ spin chains.
//!
//! The crate builds the chain Hamiltonian and its spin and energy current
//! operators ([`chain`]), assembles the Lindblad generator for two families
//! of boundary baths and solves for the unique steady state ([`lindblad`]),
//! and certifies the bath-inversion symmetries of the steady state and the
//! resulting parities of the currents ([`symmetry`]). A graded classical
//! heat-conduction chain obeying a local Fourier law lives in
//! [`classical`] as a contrast model. [`cli`] drives everything from a TOML
//! experiment file.

pub mod chain;
pub mod classical;
pub mod cli;
pub mod error;
pub mod lindblad;
pub mod pauli;
pub mod symmetry;

pub use chain::{ChainSpec, GradedProfile};
pub use error::{Error, Result};
pub use lindblad::{DensityMatrix, DissipatorSpec, Method, SolverConfig};
pub use pauli::{Axis, Operator};
