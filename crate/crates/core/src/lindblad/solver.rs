//! Steady-state solvers and time propagation.
//!
//! `DenseNull` finds the null vector of the dense superoperator. Up to
//! `SolverConfig::eigen_max_dim` it takes a full eigendecomposition; above
//! that it runs shift-invert Arnoldi around the origin, which yields the
//! handful of eigenvalues nearest zero from a single LU factorization.
//! `Evolve` integrates the master equation with fixed-step RK4 in matrix
//! form until the state stops changing.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::liouvillian::{unvectorize, Liouvillian};
use super::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Auto,
    DenseNull,
    Evolve,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::DenseNull => "dense_null",
            Method::Evolve => "evolve",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "dense_null" => Ok(Method::DenseNull),
            "evolve" => Ok(Method::Evolve),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

/// How a dense null vector was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    FullEigen,
    ShiftInvert,
    Relaxation,
}

/// Tolerances and size limits shared by every solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Eigenvalues with modulus below this count towards the null space.
    pub null_tol: f64,
    /// Bound on `max |L(rho)|` for an accepted steady state.
    pub residual_tol: f64,
    pub trace_tol: f64,
    pub hermitian_tol: f64,
    /// Smallest eigenvalue must be at least `-psd_tol`.
    pub psd_tol: f64,
    /// Largest tolerated imaginary part of an expectation value.
    pub imag_tol: f64,
    /// Evolve stops once `max |rho(t+dt) - rho(t)|` falls to this value.
    pub step_tol: f64,
    /// Largest tolerated trace drift during propagation.
    pub trace_drift_tol: f64,
    pub dense_max_sites: usize,
    pub evolve_max_sites: usize,
    /// Superoperator dimension up to which the full eigendecomposition is used.
    pub eigen_max_dim: usize,
    /// Shift for shift-invert Arnoldi.
    pub shift: f64,
    pub krylov_dim: usize,
    /// Fixed step for evolve; `None` picks `1 / spectral_bound`.
    pub dt: Option<f64>,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            null_tol: 1e-10,
            residual_tol: 1e-9,
            trace_tol: 1e-10,
            hermitian_tol: 1e-10,
            psd_tol: 1e-9,
            imag_tol: 1e-9,
            step_tol: 1e-12,
            trace_drift_tol: 1e-8,
            dense_max_sites: 6,
            evolve_max_sites: 10,
            eigen_max_dim: 256,
            shift: 1e-6,
            krylov_dim: 12,
            dt: None,
            max_steps: 5_000_000,
        }
    }
}

/// A solved steady state with its diagnostics.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// Method actually used (never `Auto`).
    pub method: Method,
    pub route: Route,
    /// `max |L(rho)|` after normalization.
    pub residual: f64,
    /// Eigenvalues closest to zero, sorted by modulus (dense routes only).
    pub leading_eigenvalues: Vec<c64>,
    /// Number of RK4 steps (evolve only).
    pub steps: usize,
}

/// `max |L(rho)|`
pub fn residual(liouv: &Liouvillian, rho: &DensityMatrix) -> f64 {
    liouv.apply(rho.mat()).norm_max()
}

impl SolverConfig {
    pub fn resolve(&self, method: Method, n_sites: usize) -> Result<Method> {
        let resolved = match method {
            Method::Auto if n_sites <= self.dense_max_sites => Method::DenseNull,
            Method::Auto => Method::Evolve,
            m => m,
        };
        match resolved {
            Method::DenseNull if n_sites > self.dense_max_sites => Err(Error::Spec(format!(
                "dense_null supports at most {} sites, got {n_sites}",
                self.dense_max_sites
            ))),
            Method::Evolve if n_sites > self.evolve_max_sites => Err(Error::Spec(format!(
                "evolve supports at most {} sites, got {n_sites}",
                self.evolve_max_sites
            ))),
            m => Ok(m),
        }
    }
}

pub fn steady_state(
    liouv: &Liouvillian,
    method: Method,
    cfg: &SolverConfig,
) -> Result<SteadyState> {
    let method = cfg.resolve(method, liouv.n_sites())?;
    let (rho, route, leading, steps) = match method {
        Method::DenseNull => {
            let superop = liouv.superop().ok_or_else(|| {
                Error::Spec("dense_null needs the dense superoperator (N <= 6)".into())
            })?;
            let n = superop.nrows();
            let (vec, leading, route) = if n <= cfg.eigen_max_dim {
                let (v, l) = null_vector_full_eigen(superop, cfg)?;
                (v, l, Route::FullEigen)
            } else {
                let (v, l) = null_vector_shift_invert(superop, cfg)?;
                (v, l, Route::ShiftInvert)
            };
            let rho = DensityMatrix::from_unnormalized(unvectorize(&vec, liouv.dim()))?;
            (rho, route, leading, 0)
        }
        Method::Evolve => {
            let (rho, steps) = relax(liouv, cfg)?;
            (rho, Route::Relaxation, Vec::new(), steps)
        }
        Method::Auto => unreachable!("resolved above"),
    };
    let res = residual(liouv, &rho);
    if res.is_nan() || res > cfg.residual_tol {
        return Err(Error::Numerical(format!(
            "steady-state residual {res:e} exceeds {:e}",
            cfg.residual_tol
        )));
    }
    rho.validate(cfg)?;
    Ok(SteadyState {
        rho,
        method,
        route,
        residual: res,
        leading_eigenvalues: leading,
        steps,
    })
}

fn count_null(eigs: &[c64], cfg: &SolverConfig) -> Result<()> {
    let count = eigs.iter().filter(|l| l.norm() < cfg.null_tol).count();
    if count > 1 {
        return Err(Error::NonUniqueSteadyState {
            count,
            tol: cfg.null_tol,
        });
    }
    Ok(())
}

fn null_vector_full_eigen(superop: &Mat<c64>, cfg: &SolverConfig) -> Result<(Mat<c64>, Vec<c64>)> {
    let evd = superop
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let mut order: Vec<usize> = (0..s.nrows()).collect();
    order.sort_by(|&a, &b| s[a].norm().total_cmp(&s[b].norm()));
    let leading: Vec<c64> = order.iter().take(4).map(|&i| s[i]).collect();
    count_null(&leading, cfg)?;
    let best = order[0];
    let u = evd.U();
    Ok((Mat::from_fn(u.nrows(), 1, |i, _| u[(i, best)]), leading))
}

fn dot(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[c64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn as_col(v: &[c64]) -> Mat<c64> {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

fn start_vector(n: usize) -> Vec<c64> {
    // additive recurrence; deterministic and generic enough to overlap every eigenvector
    let mut v: Vec<c64> = (0..n)
        .map(|p| {
            let t = p as f64 + 1.0;
            c64::new(
                (t * 0.754_877_666_2).fract() - 0.5,
                (t * 0.569_840_290_9).fract() - 0.5,
            )
        })
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

fn null_vector_shift_invert(
    superop: &Mat<c64>,
    cfg: &SolverConfig,
) -> Result<(Mat<c64>, Vec<c64>)> {
    let n = superop.nrows();
    let sigma = cfg.shift;
    let mut shifted = superop.clone();
    for i in 0..n {
        shifted[(i, i)] -= c64::new(sigma, 0.0);
    }
    let lu = shifted.partial_piv_lu();
    drop(shifted);
    let solve = |v: &[c64]| -> Vec<c64> {
        let x = lu.solve(as_col(v));
        (0..n).map(|i| x[(i, 0)]).collect()
    };

    let m_max = cfg.krylov_dim.clamp(2, n);
    let mut basis: Vec<Vec<c64>> = vec![start_vector(n)];
    let mut hess = Mat::<c64>::zeros(m_max + 1, m_max);
    let mut m = m_max;
    for j in 0..m_max {
        let mut w = solve(&basis[j]);
        let w_norm0 = norm(&w);
        if !w_norm0.is_finite() {
            return Err(Error::Numerical(
                "shift-invert solve produced non-finite values".into(),
            ));
        }
        // modified Gram-Schmidt, two passes
        for _ in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let h = dot(v, &w);
                hess[(i, j)] += h;
                w.iter_mut().zip(v).for_each(|(wk, vk)| *wk -= h * vk);
            }
        }
        let h_next = norm(&w);
        hess[(j + 1, j)] = c64::new(h_next, 0.0);
        if h_next <= 1e-14 * w_norm0 {
            m = j + 1;
            break;
        }
        w.iter_mut().for_each(|x| *x /= h_next);
        basis.push(w);
    }

    let small = Mat::from_fn(m, m, |i, j| hess[(i, j)]);
    let evd = small
        .eigen()
        .map_err(|e| Error::Numerical(format!("Ritz eigendecomposition failed: {e:?}")))?;
    let mu = evd.S().column_vector();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| mu[b].norm().total_cmp(&mu[a].norm()));
    let sig = c64::new(sigma, 0.0);
    let leading: Vec<c64> = order.iter().take(4).map(|&i| sig + mu[i].inv()).collect();
    count_null(&leading, cfg)?;

    let y = evd.U();
    let top = order[0];
    let mut x = vec![c64::new(0.0, 0.0); n];
    for (k, v) in basis.iter().take(m).enumerate() {
        let coeff = y[(k, top)];
        x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += coeff * vi);
    }
    for _ in 0..2 {
        x = solve(&x);
        let nx = norm(&x);
        x.iter_mut().for_each(|xi| *xi /= nx);
    }
    Ok((as_col(&x), leading))
}

fn combine(base: &Mat<c64>, step: f64, dir: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(base.nrows(), base.ncols(), |i, j| {
        base[(i, j)] + dir[(i, j)] * step
    })
}

fn rk4_step(liouv: &Liouvillian, rho: &Mat<c64>, dt: f64) -> Mat<c64> {
    let k1 = liouv.apply(rho);
    let k2 = liouv.apply(&combine(rho, 0.5 * dt, &k1));
    let k3 = liouv.apply(&combine(rho, 0.5 * dt, &k2));
    let k4 = liouv.apply(&combine(rho, dt, &k3));
    Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| {
        rho[(i, j)] + (k1[(i, j)] + k2[(i, j)] * 2.0 + k3[(i, j)] * 2.0 + k4[(i, j)]) * (dt / 6.0)
    })
}

/// Fixed-step RK4 propagation of `d rho/dt = L(rho)` for `steps` steps.
pub fn evolve(
    liouv: &Liouvillian,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Spec(format!("dt must be positive, got {dt}")));
    }
    if rho0.dim() != liouv.dim() {
        return Err(Error::Shape(format!(
            "state dim {} does not match generator dim {}",
            rho0.dim(),
            liouv.dim()
        )));
    }
    let mut rho = rho0.mat().clone();
    for step in 0..steps {
        rho = rk4_step(liouv, &rho, dt);
        if !rho.norm_max().is_finite() {
            return Err(Error::NoConvergence(format!(
                "propagation diverged at step {step}"
            )));
        }
    }
    Ok(DensityMatrix::from_operator(
        crate::pauli::Operator::from_mat(rho)?,
    ))
}

/// Propagates from the maximally mixed state until a step changes the state
/// by at most `step_tol`.
fn relax(liouv: &Liouvillian, cfg: &SolverConfig) -> Result<(DensityMatrix, usize)> {
    let dt = cfg
        .dt
        .unwrap_or_else(|| 1.0 / liouv.spectral_bound().max(1e-12));
    let mut rho = DensityMatrix::maximally_mixed(liouv.n_sites())?
        .mat()
        .clone();
    for step in 1..=cfg.max_steps {
        let next = rk4_step(liouv, &rho, dt);
        let change = (&next - &rho).norm_max();
        rho = next;
        if !change.is_finite() {
            return Err(Error::NoConvergence(format!(
                "propagation diverged at step {step}"
            )));
        }
        if change <= cfg.step_tol {
            let tr: c64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
            let drift = (tr - c64::new(1.0, 0.0)).norm();
            if drift > cfg.trace_drift_tol {
                return Err(Error::Numerical(format!("trace drifted by {drift:e}")));
            }
            return Ok((DensityMatrix::from_unnormalized(rho)?, step));
        }
    }
    Err(Error::NoConvergence(format!(
        "state still changing after {} steps of dt = {dt}",
        cfg.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::liouvillian::build_liouvillian;
    use crate::pauli::{pauli, Axis, Operator};

    #[test]
    fn single_site_decay_relaxes_to_spin_down() {
        let h = Operator::zeros(2).unwrap();
        let l = build_liouvillian(&h, &[pauli(Axis::Minus)]).unwrap();
        let cfg = SolverConfig::default();
        for method in [Method::DenseNull, Method::Evolve] {
            let ss = steady_state(&l, method, &cfg).unwrap();
            let m = ss.rho.mat();
            assert!((m[(1, 1)] - c64::new(1.0, 0.0)).norm() < 1e-12, "{method}");
            assert!(m[(0, 0)].norm() < 1e-12);
            assert!(m[(0, 1)].norm() < 1e-12);
        }
    }

    #[test]
    fn no_jumps_gives_non_unique_steady_state() {
        let l = build_liouvillian(&pauli(Axis::Z), &[]).unwrap();
        let err = steady_state(&l, Method::DenseNull, &SolverConfig::default()).unwrap_err();
        assert!(
            matches!(err, Error::NonUniqueSteadyState { count: 2, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn zero_generator_leaves_state_unchanged() {
        let l = build_liouvillian(&Operator::zeros(4).unwrap(), &[]).unwrap();
        let rho0 = DensityMatrix::pure(&[
            c64::new(0.6, 0.0),
            c64::new(0.0, 0.8),
            c64::new(0.0, 0.0),
            c64::new(0.0, 0.0),
        ])
        .unwrap();
        let rho = evolve(&l, &rho0, 0.1, 50).unwrap();
        assert_eq!((rho.mat() - rho0.mat()).norm_max(), 0.0);
    }

    #[test]
    fn precession_under_sigma_z() {
        // ρ(t) = e^{-iHt} ρ0 e^{iHt}: the |0><1| coherence picks up e^{-2it}
        let l = build_liouvillian(&pauli(Axis::Z), &[]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho0 = DensityMatrix::pure(&[c64::new(s, 0.0), c64::new(s, 0.0)]).unwrap();
        let (dt, steps) = (1e-3, 1500);
        let rho = evolve(&l, &rho0, dt, steps).unwrap();
        let t = dt * steps as f64;
        let want = c64::new(0.0, -2.0 * t).exp() * 0.5;
        assert!((rho.mat()[(0, 1)] - want).norm() < 1e-10);
        assert!(rho.trace_error() < 1e-14);
    }

    #[test]
    fn rejects_bad_step_and_size() {
        let l = build_liouvillian(&pauli(Axis::Z), &[pauli(Axis::Minus)]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(matches!(evolve(&l, &rho0, 0.0, 1), Err(Error::Spec(_))));
        let cfg = SolverConfig::default();
        assert!(cfg.resolve(Method::DenseNull, 7).is_err());
        assert!(cfg.resolve(Method::Auto, 11).is_err());
        assert_eq!(cfg.resolve(Method::Auto, 6).unwrap(), Method::DenseNull);
        assert_eq!(cfg.resolve(Method::Auto, 7).unwrap(), Method::Evolve);
    }

    #[test]
    fn relaxation_budget_exhaustion_is_reported() {
        let l = build_liouvillian(&pauli(Axis::X), &[pauli(Axis::Minus).scale_real(0.1)]).unwrap();
        let cfg = SolverConfig {
            max_steps: 3,
            ..SolverConfig::default()
        };
        assert!(matches!(
            steady_state(&l, Method::Evolve, &cfg),
            Err(Error::NoConvergence(_))
        ));
    }
}
