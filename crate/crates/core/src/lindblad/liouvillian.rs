//! Vectorized Lindblad generator.
//!
//! Column stacking: `vec(rho)[i + d*j] = rho[i, j]`. With that convention
//!
//! ```text
//! L = -i (I ⊗ H - H^T ⊗ I) + Σ_s [ conj(L_s) ⊗ L_s - ½ I ⊗ L_s†L_s - ½ (L_s†L_s)^T ⊗ I ]
//! ```
//!
//! so that `unvec(L vec(rho)) = i[rho, H] + Σ_s (L_s rho L_s† - ½{L_s†L_s, rho})`.

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::pauli::Operator;

/// Largest Hilbert-space dimension (N = 6) for which the dense `d² x d²`
/// superoperator is assembled.
pub const DENSE_SUPEROP_MAX_DIM: usize = 64;

/// Nonzero entries of a jump operator, `(row, col, value)`.
#[derive(Debug, Clone)]
struct SparseOp {
    entries: Vec<(usize, usize, c64)>,
}

impl SparseOp {
    fn from_operator(op: &Operator) -> Self {
        let m = op.mat();
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v != c64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
        Self { entries }
    }

    /// `out += L X L†`
    fn sandwich_into(&self, x: &Mat<c64>, out: &mut Mat<c64>) {
        for &(i, k, a) in &self.entries {
            for &(j, l, b) in &self.entries {
                out[(i, j)] += a * x[(k, l)] * b.conj();
            }
        }
    }
}

/// Lindblad generator for a Hamiltonian and a set of jump operators.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    hamiltonian: Operator,
    jumps: Vec<Operator>,
    sparse_jumps: Vec<SparseOp>,
    /// `G = -iH - ½ Σ L†L`, so that the generator is `G ρ + ρ G† + Σ L ρ L†`.
    generator: Mat<c64>,
    superop: Option<Mat<c64>>,
}

impl Liouvillian {
    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[Operator] {
        &self.jumps
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn n_sites(&self) -> usize {
        self.hamiltonian.n_sites()
    }

    /// Dense `d² x d²` superoperator, present when `d <= DENSE_SUPEROP_MAX_DIM`.
    pub fn superop(&self) -> Option<&Mat<c64>> {
        self.superop.as_ref()
    }

    /// Applies the generator in matrix form.
    pub fn apply(&self, rho: &Mat<c64>) -> Mat<c64> {
        let g = &self.generator;
        let mut out = g * rho + rho * g.adjoint();
        for jump in &self.sparse_jumps {
            jump.sandwich_into(rho, &mut out);
        }
        out
    }

    /// Crude upper bound on the spectral radius, used to pick a stable
    /// explicit step.
    pub fn spectral_bound(&self) -> f64 {
        let d = self.dim();
        let row_sum = |m: &Mat<c64>| {
            (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].norm()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let jump_sq: f64 = self
            .jumps
            .iter()
            .map(|l| {
                let n = row_sum(l.mat());
                n * n
            })
            .sum();
        2.0 * row_sum(&self.generator) + jump_sq
    }
}

/// Assembles the generator; the dense superoperator is built for `N <= 6`.
pub fn build_liouvillian(h: &Operator, jumps: &[Operator]) -> Result<Liouvillian> {
    build_with_limit(h, jumps, DENSE_SUPEROP_MAX_DIM)
}

pub(crate) fn build_with_limit(
    h: &Operator,
    jumps: &[Operator],
    dense_max_dim: usize,
) -> Result<Liouvillian> {
    let d = h.dim();
    if let Some(bad) = jumps.iter().find(|l| l.dim() != d) {
        return Err(Error::Shape(format!(
            "jump operator dim {} does not match Hamiltonian dim {d}",
            bad.dim()
        )));
    }
    if !h.is_hermitian() {
        return Err(Error::Spec("Hamiltonian must be Hermitian".into()));
    }
    let sparse_jumps: Vec<SparseOp> = jumps.iter().map(SparseOp::from_operator).collect();

    let mut generator = Mat::from_fn(d, d, |i, j| h.get(i, j) * c64::new(0.0, -1.0));
    for jump in &sparse_jumps {
        // ½ L†L, accumulated from the sparse entries: (L†L)[k, l] = Σ_i conj(L[i,k]) L[i,l]
        for &(i, k, a) in &jump.entries {
            for &(i2, l, b) in &jump.entries {
                if i == i2 {
                    generator[(k, l)] -= a.conj() * b * 0.5;
                }
            }
        }
    }

    let superop = (d <= dense_max_dim).then(|| assemble_superop(&generator, &sparse_jumps));

    Ok(Liouvillian {
        hamiltonian: h.clone(),
        jumps: jumps.to_vec(),
        sparse_jumps,
        generator,
        superop,
    })
}

fn assemble_superop(g: &Mat<c64>, jumps: &[SparseOp]) -> Mat<c64> {
    let d = g.nrows();
    let n = d * d;
    let mut s = Mat::<c64>::zeros(n, n);
    // I ⊗ G : row (i, j), col (k, j) -> G[i, k]
    // conj(G) ⊗ I : row (i, j), col (i, l) -> conj(G[j, l])
    for j in 0..d {
        for k in 0..d {
            for i in 0..d {
                s[(i + d * j, k + d * j)] += g[(i, k)];
                s[(k + d * i, k + d * j)] += g[(i, j)].conj();
            }
        }
    }
    // conj(L) ⊗ L : row (i, j), col (k, l) -> L[i, k] conj(L[j, l])
    for jump in jumps {
        for &(j, l, b) in &jump.entries {
            let bc = b.conj();
            for &(i, k, a) in &jump.entries {
                s[(i + d * j, k + d * l)] += a * bc;
            }
        }
    }
    s
}

/// Column-stacking vectorization.
pub fn vectorize(rho: &Mat<c64>) -> Mat<c64> {
    let d = rho.nrows();
    Mat::from_fn(d * d, 1, |p, _| rho[(p % d, p / d)])
}

pub fn unvectorize(v: &Mat<c64>, d: usize) -> Mat<c64> {
    Mat::from_fn(d, d, |i, j| v[(i + d * j, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{anticommutator, commutator, pauli, Axis};

    fn random_hermitian(d: usize, seed: u64) -> Operator {
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Mat::<c64>::from_fn(d, d, |_, _| c64::new(next(), next()));
        Operator::from_mat(Mat::from_fn(d, d, |i, j| {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }))
        .unwrap()
    }

    /// Direct evaluation of `i[ρ,H] + Σ (LρL† − ½{L†L, ρ})`.
    fn direct(h: &Operator, jumps: &[Operator], rho: &Operator) -> Operator {
        let i = c64::new(0.0, 1.0);
        let mut out = commutator(rho, h).unwrap().scale(i);
        for l in jumps {
            let ld = crate::pauli::adjoint(l);
            let ldl = &ld * l;
            let term = &(&(l * rho) * &ld) - &anticommutator(&ldl, rho).unwrap().scale_real(0.5);
            out = &out + &term;
        }
        out
    }

    #[test]
    fn identity_is_stationary_without_jumps() {
        let h = pauli(Axis::Z);
        let l = build_liouvillian(&h, &[]).unwrap();
        let half = Mat::<c64>::from_fn(2, 2, |i, j| {
            if i == j {
                c64::new(0.5, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let out = l.superop().unwrap() * vectorize(&half);
        assert_eq!(out.norm_max(), 0.0);
    }

    #[test]
    fn single_site_decay_superoperator_by_hand() {
        // H = 0, L = σ⁻: d/dt ρ00 = -ρ00, d/dt ρ11 = +ρ00, coherences decay at 1/2
        let h = Operator::zeros(2).unwrap();
        let l = build_liouvillian(&h, &[pauli(Axis::Minus)]).unwrap();
        let s = l.superop().unwrap();
        // vec order: (0,0), (1,0), (0,1), (1,1)
        let expected = [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -0.5, 0.0, 0.0],
            [0.0, 0.0, -0.5, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(s[(r, c)], c64::new(expected[r][c], 0.0), "({r},{c})");
            }
        }
    }

    #[test]
    fn superop_matches_direct_formula_on_random_states() {
        let h = random_hermitian(8, 1);
        let jumps = vec![
            crate::pauli::embed(&pauli(Axis::Plus).scale_real(0.7), 1, 3).unwrap(),
            crate::pauli::embed(&pauli(Axis::Minus).scale_real(0.4), 3, 3).unwrap(),
            crate::pauli::embed(&pauli(Axis::Z), 2, 3)
                .unwrap()
                .scale(c64::new(0.2, 0.3)),
        ];
        let l = build_liouvillian(&h, &jumps).unwrap();
        for seed in 2..6 {
            let rho = random_hermitian(8, seed);
            let want = direct(&h, &jumps, &rho);
            let got = unvectorize(&(l.superop().unwrap() * vectorize(rho.mat())), 8);
            let err = (&got - want.mat()).norm_max();
            assert!(err <= 1e-12, "superop error {err}");
            let got_mf = l.apply(rho.mat());
            assert!((&got_mf - want.mat()).norm_max() <= 1e-12);
        }
    }

    #[test]
    fn trace_preservation_left_null_vector() {
        let h = random_hermitian(4, 9);
        let jumps = vec![crate::pauli::embed(&pauli(Axis::Minus), 1, 2).unwrap()];
        let l = build_liouvillian(&h, &jumps).unwrap();
        let s = l.superop().unwrap();
        let d = 4;
        let mut worst: f64 = 0.0;
        for col in 0..d * d {
            let v: c64 = (0..d).map(|i| s[(i + d * i, col)]).sum();
            worst = worst.max(v.norm());
        }
        assert!(worst <= 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_a_shape_error() {
        let h = pauli(Axis::Z);
        let jumps = vec![Operator::identity(4).unwrap()];
        assert!(matches!(
            build_liouvillian(&h, &jumps),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn no_dense_superop_beyond_limit() {
        let h = Operator::zeros(4).unwrap();
        let l = build_with_limit(&h, &[], 2).unwrap();
        assert!(l.superop().is_none());
    }
}
