//! Graded classical heat-conduction chain obeying a local Fourier law.
//!
//! The flux across bond `j -> j+1` is
//!
//! ```text
//! F_{j,j+1} = -(T_{j+1} - T_j) / (c_j T_j^a + c_{j+1} T_{j+1}^a)
//! ```
//!
//! with conductivity exponent `a = alpha_exp >= 0`. In the steady state
//! every bond carries the same flux. For `a = 0` the chain is linear in the
//! temperatures and cannot rectify however asymmetric `c` is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative flux-balance tolerance for [`steady_temps`].
pub const FLUX_BALANCE_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 200;
const NEWTON_DAMPING: f64 = 0.5;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalChainSpec {
    /// Local parameters `c_j > 0`.
    pub c: Vec<f64>,
    /// Conductivity exponent.
    pub alpha_exp: f64,
    pub t_left: f64,
    pub t_right: f64,
}

impl ClassicalChainSpec {
    pub fn new(c: Vec<f64>, alpha_exp: f64, t_left: f64, t_right: f64) -> Result<Self> {
        let spec = Self {
            c,
            alpha_exp,
            t_left,
            t_right,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.len() < 2 {
            return Err(Error::Spec("classical chain needs at least 2 sites".into()));
        }
        if let Some(bad) = self.c.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Spec(format!("c_j must be positive, got {bad}")));
        }
        if !(self.alpha_exp >= 0.0 && self.alpha_exp.is_finite()) {
            return Err(Error::Spec(format!(
                "alpha_exp must be >= 0, got {}",
                self.alpha_exp
            )));
        }
        for t in [self.t_left, self.t_right] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain(format!(
                    "edge temperature must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.c.len()
    }

    /// `c` strictly monotone.
    pub fn graded(&self) -> bool {
        let inc = self.c.windows(2).all(|w| w[1] > w[0]);
        let dec = self.c.windows(2).all(|w| w[1] < w[0]);
        inc || dec
    }

    /// Same chain with the edge temperatures exchanged.
    pub fn with_swapped_baths(&self) -> Self {
        Self {
            t_left: self.t_right,
            t_right: self.t_left,
            ..self.clone()
        }
    }
}

/// Small-gradient setup `T_j = T + a_j eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizedSetup {
    pub t_base: f64,
    pub a: Vec<f64>,
    pub eps: f64,
}

impl LinearizedSetup {
    pub fn temperature(&self, site: usize) -> f64 {
        self.t_base + self.a[site - 1] * self.eps
    }
}

fn check_temps(temps: &[f64]) -> Result<()> {
    if let Some(bad) = temps.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {bad}"
        )));
    }
    Ok(())
}

fn resistance(spec: &ClassicalChainSpec, j: usize, temps: &[f64]) -> f64 {
    let a = spec.alpha_exp;
    spec.c[j - 1] * temps[j - 1].powf(a) + spec.c[j] * temps[j].powf(a)
}

/// Heat flow across bond `j -> j+1` (1-based) for the given temperatures.
pub fn bond_flux(spec: &ClassicalChainSpec, bond: usize, temps: &[f64]) -> Result<f64> {
    if temps.len() != spec.n_sites() {
        return Err(Error::Shape(format!(
            "{} temperatures for {} sites",
            temps.len(),
            spec.n_sites()
        )));
    }
    if bond == 0 || bond >= spec.n_sites() {
        return Err(Error::Index(format!(
            "bond {bond} not in 1..={}",
            spec.n_sites() - 1
        )));
    }
    check_temps(&temps[bond - 1..=bond])?;
    Ok(-(temps[bond] - temps[bond - 1]) / resistance(spec, bond, temps))
}

/// `(F, dF/dT_j, dF/dT_{j+1})` for bond `j`.
fn flux_with_derivatives(spec: &ClassicalChainSpec, j: usize, temps: &[f64]) -> (f64, f64, f64) {
    let a = spec.alpha_exp;
    let (tl, tr) = (temps[j - 1], temps[j]);
    let (cl, cr) = (spec.c[j - 1], spec.c[j]);
    let d = cl * tl.powf(a) + cr * tr.powf(a);
    let diff = tr - tl;
    let f = -diff / d;
    let dd_l = if a == 0.0 {
        0.0
    } else {
        a * cl * tl.powf(a - 1.0)
    };
    let dd_r = if a == 0.0 {
        0.0
    } else {
        a * cr * tr.powf(a - 1.0)
    };
    let df_l = 1.0 / d + diff / (d * d) * dd_l;
    let df_r = -1.0 / d + diff / (d * d) * dd_r;
    (f, df_l, df_r)
}

/// Flux-balance residuals `F_{i} - F_{i+1}`, `i = 1..=N-2`, with the
/// tridiagonal Jacobian with respect to the interior temperatures.
fn balance(
    spec: &ClassicalChainSpec,
    temps: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    let n = spec.n_sites();
    let m = n - 2;
    let fluxes: Vec<(f64, f64, f64)> = (1..n)
        .map(|j| flux_with_derivatives(spec, j, temps))
        .collect();
    let scale = fluxes.iter().map(|f| f.0.abs()).fold(0.0, f64::max);
    let mut r = vec![0.0; m];
    let (mut lower, mut diag, mut upper) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for i in 0..m {
        // residual i couples bonds i+1 and i+2 (1-based), i.e. sites i+1, i+2, i+3
        let (f1, d1l, d1r) = fluxes[i];
        let (f2, d2l, d2r) = fluxes[i + 1];
        r[i] = f1 - f2;
        // unknown k corresponds to site k+2
        if i > 0 {
            lower[i] = d1l;
        }
        diag[i] = d1r - d2l;
        if i + 1 < m {
            upper[i] = -d2r;
        }
    }
    (r, lower, diag, upper, scale)
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::Numerical("singular flux-balance Jacobian".into()));
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..m {
        denom = diag[i] - lower[i] * c[i - 1];
        if denom == 0.0 {
            return Err(Error::Numerical("singular flux-balance Jacobian".into()));
        }
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// A few undamped Newton steps past the tolerance, kept while they reduce
/// the residual, so the balance holds to round-off.
fn polish(spec: &ClassicalChainSpec, mut temps: Vec<f64>, mut err: f64) -> Vec<f64> {
    let n = temps.len();
    for _ in 0..3 {
        let (r, lower, diag, upper, _) = balance(spec, &temps);
        let neg_r: Vec<f64> = r.iter().map(|x| -x).collect();
        let Ok(step) = thomas(&lower, &diag, &upper, &neg_r) else {
            break;
        };
        let trial: Vec<f64> = temps
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                if k == 0 || k == n - 1 {
                    t
                } else {
                    t + step[k - 1]
                }
            })
            .collect();
        let trial_err = max_abs(&balance(spec, &trial).0);
        if trial_err.is_nan() || trial_err >= err || trial.iter().any(|&t| t <= 0.0) {
            break;
        }
        temps = trial;
        err = trial_err;
    }
    temps
}

/// Steady temperature profile (edges included) by damped Newton iteration
/// on the flux-balance equations, starting from a linear profile.
///
/// Converged when `max |F_i - F_{i+1}| <= FLUX_BALANCE_TOL * max(1, max |F|)`.
pub fn steady_temps(spec: &ClassicalChainSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n_sites();
    if n < 3 {
        return Err(Error::Spec(format!("steady_temps needs N >= 3, got {n}")));
    }
    let mut temps: Vec<f64> = (0..n)
        .map(|k| spec.t_left + (spec.t_right - spec.t_left) * k as f64 / (n - 1) as f64)
        .collect();
    for _ in 0..NEWTON_MAX_ITER {
        let (r, lower, diag, upper, scale) = balance(spec, &temps);
        let err = max_abs(&r);
        if err <= FLUX_BALANCE_TOL * scale.max(1.0) {
            return Ok(polish(spec, temps, err));
        }
        let neg_r: Vec<f64> = r.iter().map(|x| -x).collect();
        let step = thomas(&lower, &diag, &upper, &neg_r)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = temps
                .iter()
                .enumerate()
                .map(|(k, &t)| {
                    if k == 0 || k == n - 1 {
                        t
                    } else {
                        t + lambda * step[k - 1]
                    }
                })
                .collect();
            if trial.iter().all(|&t| t > 0.0) {
                let trial_err = max_abs(&balance(spec, &trial).0);
                if trial_err < err {
                    temps = trial;
                    accepted = true;
                    break;
                }
            }
            lambda *= NEWTON_DAMPING;
        }
        if !accepted {
            // no descent left at machine precision
            let (r, .., scale) = balance(spec, &temps);
            if max_abs(&r) <= 10.0 * FLUX_BALANCE_TOL * scale.max(1.0) {
                return Ok(temps);
            }
            return Err(Error::NoConvergence(format!(
                "Newton line search stalled at residual {:e}",
                max_abs(&r)
            )));
        }
    }
    Err(Error::NoConvergence(format!(
        "flux balance not reached in {NEWTON_MAX_ITER} Newton iterations"
    )))
}

/// First-order middle-site amplitude of the 3-site chain:
/// `a2 = [c1 a3 + c2 (a1 + a3) + c3 a1] / (2 c2 + c1 + c3)`.
pub fn linearized_a2(c: [f64; 3], a1: f64, a3: f64) -> f64 {
    (c[0] * a3 + c[1] * (a1 + a3) + c[2] * a1) / (2.0 * c[1] + c[0] + c[2])
}

/// First-order difference of inverse conductivities between the original
/// and the inverted 3-site chain:
/// `1/k - 1/k' = alpha eps T^(alpha-1) (c1 - c3)(a1 - a3)(c1 + c3)/(2 c2 + c1 + c3)`.
pub fn conductivity_gap(setup: &LinearizedSetup, c: [f64; 3], alpha_exp: f64) -> f64 {
    if alpha_exp == 0.0 {
        return 0.0;
    }
    let (a1, a3) = (setup.a[0], setup.a[2]);
    alpha_exp
        * setup.eps
        * setup.t_base.powf(alpha_exp - 1.0)
        * (c[0] - c[2])
        * (a1 - a3)
        * (c[0] + c[2])
        / (2.0 * c[1] + c[0] + c[2])
}

/// Forward and bath-swapped steady states of one chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectificationResult {
    pub flux_forward: f64,
    pub flux_reverse: f64,
    pub profile_forward: Vec<f64>,
    pub profile_reverse: Vec<f64>,
    /// `max_j |T_rev[j] - T_fwd[N+1-j]|`: nonzero when the inverted chain's
    /// profile is not the mirror image of the original one.
    pub profile_mismatch: f64,
    /// Effective conductivity `k = -F / (T_N - T_1)` with the original bias.
    pub kappa_forward: f64,
    /// Effective conductivity with the inverted bias.
    pub kappa_reverse: f64,
    /// `1/k - 1/k'`.
    pub inverse_kappa_gap: f64,
    /// `|F_forward| - |F_reverse|`.
    pub magnitude_gap: f64,
}

/// Flux magnitudes for `alpha_exp = 0` must agree to this absolute tolerance.
pub const LINEAR_CHAIN_TOL: f64 = 1e-12;

/// Solves the chain with biases `(T_L, T_R)` and `(T_R, T_L)`.
pub fn rectification_experiment(spec: &ClassicalChainSpec) -> Result<RectificationResult> {
    let fwd = steady_temps(spec)?;
    let swapped = spec.with_swapped_baths();
    let rev = steady_temps(&swapped)?;
    let flux_forward = bond_flux(spec, 1, &fwd)?;
    let flux_reverse = bond_flux(&swapped, 1, &rev)?;
    let n = spec.n_sites();
    let profile_mismatch = (0..n)
        .map(|k| (rev[k] - fwd[n - 1 - k]).abs())
        .fold(0.0, f64::max);
    let span = spec.t_right - spec.t_left;
    let kappa_forward = -flux_forward / span;
    let kappa_reverse = -flux_reverse / -span;
    let magnitude_gap = flux_forward.abs() - flux_reverse.abs();
    if spec.alpha_exp == 0.0 && magnitude_gap.abs() > LINEAR_CHAIN_TOL {
        return Err(Error::Numerical(format!(
            "linear chain rectifies by {magnitude_gap:e}"
        )));
    }
    Ok(RectificationResult {
        flux_forward,
        flux_reverse,
        profile_forward: fwd,
        profile_reverse: rev,
        profile_mismatch,
        kappa_forward,
        kappa_reverse,
        inverse_kappa_gap: 1.0 / kappa_forward - 1.0 / kappa_reverse,
        magnitude_gap,
    })
}
