use serde::Serialize;

use crate::chain::{energy_current_op, energy_current_xxz_op, spin_current_op, ChainSpec};
use crate::error::{Error, Result};
use crate::pauli::{pauli_string, Axis, Operator};

use super::solver::SolverConfig;
use super::state::DensityMatrix;

/// `Re tr(rho O)` for a Hermitian observable; fails if the imaginary part
/// exceeds `imag_tol`.
pub fn expectation_with(rho: &DensityMatrix, obs: &Operator, imag_tol: f64) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::Shape(format!(
            "state dim {} vs observable dim {}",
            rho.dim(),
            obs.dim()
        )));
    }
    if !obs.is_hermitian() {
        return Err(Error::Spec("observable is not Hermitian".into()));
    }
    let (r, o) = (rho.mat(), obs.mat());
    let d = rho.dim();
    let mut acc = faer::c64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            acc += r[(i, j)] * o[(j, i)];
        }
    }
    if acc.im.abs() > imag_tol {
        return Err(Error::Numerical(format!(
            "expectation has imaginary part {:e}",
            acc.im
        )));
    }
    Ok(acc.re)
}

pub fn expectation(rho: &DensityMatrix, obs: &Operator) -> Result<f64> {
    expectation_with(rho, obs, SolverConfig::default().imag_tol)
}

/// Local currents of a steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurrentsProfile {
    /// Spin current on bonds `1..=N-1`.
    pub spin: Vec<f64>,
    /// Exchange energy current at interior sites `2..=N-1` (empty for N = 2).
    pub energy_xxz: Vec<f64>,
    /// Exchange plus field energy current at interior sites.
    pub energy_total: Vec<f64>,
    pub spin_spread: f64,
    pub energy_xxz_spread: f64,
    pub energy_total_spread: f64,
}

/// `max - min`, zero for fewer than two values.
pub fn spread(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

impl CurrentsProfile {
    /// Representative spin current (bond 1), if the chain has a bond.
    pub fn spin_current(&self) -> Option<f64> {
        self.spin.first().copied()
    }

    /// Representative exchange energy current (site 2), if the chain has one.
    pub fn energy_xxz_current(&self) -> Option<f64> {
        self.energy_xxz.first().copied()
    }

    pub fn energy_total_current(&self) -> Option<f64> {
        self.energy_total.first().copied()
    }
}

pub fn currents_profile(rho: &DensityMatrix, spec: &ChainSpec) -> Result<CurrentsProfile> {
    spec.validate()?;
    if rho.n_sites() != spec.n_sites {
        return Err(Error::Shape(format!(
            "state has {} sites, chain has {}",
            rho.n_sites(),
            spec.n_sites
        )));
    }
    let n = spec.n_sites;
    let spin = (1..n)
        .map(|b| expectation(rho, &spin_current_op(spec, b)?))
        .collect::<Result<Vec<_>>>()?;
    let energy_xxz = (2..n)
        .map(|j| expectation(rho, &energy_current_xxz_op(spec, j)?))
        .collect::<Result<Vec<_>>>()?;
    let energy_total = (2..n)
        .map(|j| expectation(rho, &energy_current_op(spec, j)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurrentsProfile {
        spin_spread: spread(&spin),
        energy_xxz_spread: spread(&energy_xxz),
        energy_total_spread: spread(&energy_total),
        spin,
        energy_xxz,
        energy_total,
    })
}

/// `<sigma_z_j>` for every site.
pub fn magnetization_profile(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let n = rho.n_sites();
    (1..=n)
        .map(|j| expectation(rho, &pauli_string(n, &[(j, Axis::Z)])?))
        .collect()
}
