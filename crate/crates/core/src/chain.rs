//! XXZ chain Hamiltonian and the spin/energy current observables.
//!
//! Energy currents are only defined at interior sites `2..=N-1`, since each
//! one involves the three sites `j-1, j, j+1`. In a steady state the local
//! current is site-independent, so any interior value represents the chain.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{pauli_string, Axis, Operator};

/// Declarative parameterization of a chain of `n_sites` spins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    /// Uniform XX coupling.
    pub alpha: f64,
    /// Uniform YY coupling; must equal `alpha` (XXZ chain).
    pub alpha_prime: f64,
    /// ZZ anisotropy per bond, `n_sites - 1` entries.
    pub delta: Vec<f64>,
    /// Longitudinal field per site, `n_sites` entries.
    pub b_field: Vec<f64>,
}

/// Two-parameter graded anisotropy profile: mean `delta_mean`, asymmetry `delta_step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradedProfile {
    pub delta_mean: f64,
    pub delta_step: f64,
}

impl ChainSpec {
    /// XXZ chain with `alpha_prime = alpha`.
    pub fn new(n_sites: usize, alpha: f64, delta: Vec<f64>, b_field: Vec<f64>) -> Result<Self> {
        let spec = Self {
            n_sites,
            alpha,
            alpha_prime: alpha,
            delta,
            b_field,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Homogeneous chain: every bond has anisotropy `delta`, every site field `b`.
    pub fn homogeneous_chain(n_sites: usize, alpha: f64, delta: f64, b: f64) -> Result<Self> {
        Self::new(
            n_sites,
            alpha,
            vec![delta; n_sites.saturating_sub(1)],
            vec![b; n_sites],
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::Spec("n_sites must be >= 1".into()));
        }
        if self.delta.len() != self.n_sites - 1 {
            return Err(Error::Spec(format!(
                "delta has {} entries, expected {}",
                self.delta.len(),
                self.n_sites - 1
            )));
        }
        if self.b_field.len() != self.n_sites {
            return Err(Error::Spec(format!(
                "b_field has {} entries, expected {}",
                self.b_field.len(),
                self.n_sites
            )));
        }
        if self.alpha_prime != self.alpha {
            return Err(Error::Spec(format!(
                "alpha_prime ({}) must equal alpha ({}): only XXZ currents are supported",
                self.alpha_prime, self.alpha
            )));
        }
        let finite = std::iter::once(self.alpha)
            .chain(self.delta.iter().copied())
            .chain(self.b_field.iter().copied())
            .all(f64::is_finite);
        if !finite {
            return Err(Error::Spec("chain parameters must be finite".into()));
        }
        Ok(())
    }

    /// All anisotropies equal and all fields equal.
    pub fn homogeneous(&self) -> bool {
        let eq = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
        eq(&self.delta) && eq(&self.b_field)
    }

    /// Anisotropy profile strictly monotone.
    pub fn graded(&self) -> bool {
        if self.delta.len() < 2 {
            return false;
        }
        let inc = self.delta.windows(2).all(|w| w[1] > w[0]);
        let dec = self.delta.windows(2).all(|w| w[1] < w[0]);
        inc || dec
    }

    pub fn field_is_zero(&self) -> bool {
        self.b_field.iter().all(|&b| b == 0.0)
    }

    pub fn field_is_uniform(&self) -> bool {
        self.b_field.windows(2).all(|w| w[0] == w[1])
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn with_uniform_field(mut self, b: f64) -> Self {
        self.b_field = vec![b; self.n_sites];
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.alpha_prime = alpha;
        self
    }

    /// The same chain read from right to left: site `j` becomes `N + 1 - j`.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.delta.reverse();
        out.b_field.reverse();
        out
    }
}

impl GradedProfile {
    pub fn new(delta_mean: f64, delta_step: f64) -> Self {
        Self {
            delta_mean,
            delta_step,
        }
    }

    /// Bond anisotropies interpolating linearly from `mean - step` on the
    /// first bond to `mean + step` on the last.
    pub fn bonds(&self, n_sites: usize) -> Result<Vec<f64>> {
        if n_sites < 3 {
            return Err(Error::Spec(format!(
                "graded profile needs at least 3 sites, got {n_sites}"
            )));
        }
        let n_bonds = n_sites - 1;
        let start = self.delta_mean - self.delta_step;
        let incr = 2.0 * self.delta_step / (n_bonds - 1) as f64;
        Ok((0..n_bonds).map(|i| start + incr * i as f64).collect())
    }
}

/// Graded chain with `alpha = 1` and zero field.
pub fn expand_graded(profile: GradedProfile, n_sites: usize) -> Result<ChainSpec> {
    ChainSpec::new(n_sites, 1.0, profile.bonds(n_sites)?, vec![0.0; n_sites])
}

fn accumulate(acc: &mut Mat<c64>, op: &Operator, coeff: f64) {
    if coeff == 0.0 {
        return;
    }
    let m = op.mat();
    for j in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            let v = m[(i, j)];
            if v != c64::new(0.0, 0.0) {
                acc[(i, j)] += v * coeff;
            }
        }
    }
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Result<Operator> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = Mat::<c64>::zeros(spec.dim(), spec.dim());
    for i in 1..n {
        accumulate(
            &mut h,
            &pauli_string(n, &[(i, Axis::X), (i + 1, Axis::X)])?,
            spec.alpha,
        );
        accumulate(
            &mut h,
            &pauli_string(n, &[(i, Axis::Y), (i + 1, Axis::Y)])?,
            spec.alpha_prime,
        );
        accumulate(
            &mut h,
            &pauli_string(n, &[(i, Axis::Z), (i + 1, Axis::Z)])?,
            spec.delta[i - 1],
        );
    }
    for (i, &b) in spec.b_field.iter().enumerate() {
        accumulate(&mut h, &pauli_string(n, &[(i + 1, Axis::Z)])?, b);
    }
    Operator::from_mat(h)
}

fn check_bond(spec: &ChainSpec, bond: usize) -> Result<()> {
    if bond == 0 || bond >= spec.n_sites {
        return Err(Error::Index(format!(
            "bond {bond} not in 1..={}",
            spec.n_sites - 1
        )));
    }
    Ok(())
}

fn check_interior(spec: &ChainSpec, site: usize) -> Result<()> {
    if site < 2 || site + 1 > spec.n_sites {
        return Err(Error::Index(format!(
            "energy current site {site} not in 2..={} (needs N >= 3)",
            spec.n_sites.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Magnetization current across bond `j -> j+1`:
/// `2 alpha (X_j Y_{j+1} - Y_j X_{j+1})`.
pub fn spin_current_op(spec: &ChainSpec, bond: usize) -> Result<Operator> {
    spec.validate()?;
    check_bond(spec, bond)?;
    let n = spec.n_sites;
    let mut m = Mat::<c64>::zeros(spec.dim(), spec.dim());
    let a = 2.0 * spec.alpha;
    accumulate(
        &mut m,
        &pauli_string(n, &[(bond, Axis::X), (bond + 1, Axis::Y)])?,
        a,
    );
    accumulate(
        &mut m,
        &pauli_string(n, &[(bond, Axis::Y), (bond + 1, Axis::X)])?,
        -a,
    );
    Operator::from_mat(m)
}

/// Exchange part of the energy current through interior site `j`:
///
/// ```text
/// 2α [ α (Y Z X - X Z Y) + Δ_{j-1,j} (Z X Y - Z Y X) + Δ_{j,j+1} (X Y Z - Y X Z) ]
/// ```
///
/// on sites `(j-1, j, j+1)`.
pub fn energy_current_xxz_op(spec: &ChainSpec, site: usize) -> Result<Operator> {
    spec.validate()?;
    check_interior(spec, site)?;
    let n = spec.n_sites;
    let (l, c, r) = (site - 1, site, site + 1);
    let pre = 2.0 * spec.alpha;
    let terms: [([Axis; 3], f64); 6] = [
        ([Axis::Y, Axis::Z, Axis::X], pre * spec.alpha),
        ([Axis::X, Axis::Z, Axis::Y], -pre * spec.alpha),
        ([Axis::Z, Axis::X, Axis::Y], pre * spec.delta[l - 1]),
        ([Axis::Z, Axis::Y, Axis::X], -pre * spec.delta[l - 1]),
        ([Axis::X, Axis::Y, Axis::Z], pre * spec.delta[c - 1]),
        ([Axis::Y, Axis::X, Axis::Z], -pre * spec.delta[c - 1]),
    ];
    let mut m = Mat::<c64>::zeros(spec.dim(), spec.dim());
    for (axes, coeff) in terms {
        let op = pauli_string(n, &[(l, axes[0]), (c, axes[1]), (r, axes[2])])?;
        accumulate(&mut m, &op, coeff);
    }
    Operator::from_mat(m)
}

/// Field part of the energy current through interior site `j`:
/// `(B_j / 2)(J_{j-1} + J_j)`.
pub fn energy_current_field_op(spec: &ChainSpec, site: usize) -> Result<Operator> {
    check_interior(spec, site)?;
    let left = spin_current_op(spec, site - 1)?;
    let right = spin_current_op(spec, site)?;
    Ok((&left + &right).scale_real(0.5 * spec.b_field[site - 1]))
}

/// Total energy current operator through interior site `j`.
pub fn energy_current_op(spec: &ChainSpec, site: usize) -> Result<Operator> {
    let xxz = energy_current_xxz_op(spec, site)?;
    let field = energy_current_field_op(spec, site)?;
    xxz.try_add(&field)
}
