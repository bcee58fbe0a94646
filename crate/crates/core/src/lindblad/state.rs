use faer::{c64, Mat, Side};

use crate::error::{Error, Result};
use crate::pauli::{trace, Operator};

use super::solver::SolverConfig;

/// A density matrix on the 2^N-dimensional chain Hilbert space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: Operator,
}

/// Measured deviations from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Validity {
    pub fn holds(&self, cfg: &SolverConfig) -> bool {
        self.trace_error <= cfg.trace_tol
            && self.hermiticity_error <= cfg.hermitian_tol
            && self.min_eigenvalue >= -cfg.psd_tol
    }
}

impl DensityMatrix {
    /// Wraps an operator without normalizing it; see [`DensityMatrix::validate`].
    pub fn from_operator(op: Operator) -> Self {
        Self { op }
    }

    /// Normalizes to unit trace and projects onto the Hermitian part.
    pub fn from_unnormalized(mat: Mat<c64>) -> Result<Self> {
        let d = mat.nrows();
        let tr: c64 = (0..d).map(|i| mat[(i, i)]).sum();
        if tr.norm().is_nan() || tr.norm() <= f64::MIN_POSITIVE || !tr.re.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot normalize a matrix with trace {tr}"
            )));
        }
        let inv = tr.inv();
        let herm = Mat::from_fn(d, d, |i, j| {
            (mat[(i, j)] * inv + (mat[(j, i)] * inv).conj()) * 0.5
        });
        Ok(Self {
            op: Operator::from_mat(herm)?,
        })
    }

    pub fn maximally_mixed(n_sites: usize) -> Result<Self> {
        let d = 1usize << n_sites;
        let w = 1.0 / d as f64;
        Ok(Self {
            op: Operator::from_fn(d, |i, j| {
                if i == j {
                    c64::new(w, 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            })?,
        })
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(psi: &[c64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Numerical(format!("state vector has norm² {norm}")));
        }
        Ok(Self {
            op: Operator::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())?,
        })
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn mat(&self) -> &Mat<c64> {
        self.op.mat()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn n_sites(&self) -> usize {
        self.op.n_sites()
    }

    pub fn trace(&self) -> c64 {
        trace(&self.op)
    }

    pub fn trace_error(&self) -> f64 {
        (self.trace() - c64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.op.hermiticity_error()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let d = self.dim();
        let m = self.mat();
        let herm = Mat::from_fn(d, d, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        let eig = herm
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e:?}")))?;
        Ok(eig.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn measure(&self) -> Result<Validity> {
        Ok(Validity {
            trace_error: self.trace_error(),
            hermiticity_error: self.hermiticity_error(),
            min_eigenvalue: self.min_eigenvalue()?,
        })
    }

    /// Checks trace, Hermiticity and positivity against the configured tolerances.
    pub fn validate(&self, cfg: &SolverConfig) -> Result<Validity> {
        let v = self.measure()?;
        if !v.holds(cfg) {
            return Err(Error::Numerical(format!("invalid density matrix: {v:?}")));
        }
        Ok(v)
    }
}
