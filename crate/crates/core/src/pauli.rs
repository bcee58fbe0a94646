//! Dense complex operators on the 2^N-dimensional spin-1/2 Hilbert space.
//!
//! Basis convention: site 1 is the leftmost tensor factor, i.e. the most
//! significant bit of the basis index. Within a site, index 0 is spin up
//! (`sigma_z = +1`) and index 1 is spin down.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance (scaled by the largest entry) below which an operator
/// is tagged Hermitian at construction.
pub const HERMITIAN_TAG_TOL: f64 = 1e-12;

/// Single-site operator tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
    /// Raising operator `(sigma_x + i sigma_y) / 2`.
    Plus,
    /// Lowering operator `(sigma_x - i sigma_y) / 2`.
    Minus,
    /// The twist `[[0, 1], [i, 0]]`: conjugation maps x to y, y to x and z to -z.
    R,
    Identity,
}

/// A dense square matrix whose dimension is a power of two, together with
/// a Hermiticity tag computed when the operator is created.
#[derive(Clone)]
pub struct Operator {
    mat: Mat<c64>,
    hermitian: bool,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("dim", &self.dim())
            .field("hermitian", &self.hermitian)
            .field("mat", &self.mat)
            .finish()
    }
}

fn hermiticity_error_of(mat: &Mat<c64>) -> f64 {
    let n = mat.nrows();
    let mut err: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            err = err.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    err
}

impl Operator {
    /// Wraps a matrix, checking that it is square with a power-of-two dimension.
    pub fn from_mat(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Shape(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() == 0 || !mat.nrows().is_power_of_two() {
            return Err(Error::Shape(format!(
                "operator dimension {} is not a power of two",
                mat.nrows()
            )));
        }
        Ok(Self::tagged(mat))
    }

    fn tagged(mat: Mat<c64>) -> Self {
        let scale = mat.norm_max().max(1.0);
        let hermitian = hermiticity_error_of(&mat) <= HERMITIAN_TAG_TOL * scale;
        Self { mat, hermitian }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Result<Self> {
        Self::from_mat(Mat::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_mat(Mat::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_mat(Mat::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of spin-1/2 sites, `log2(dim)`.
    pub fn n_sites(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn mat(&self) -> &Mat<c64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.mat[(row, col)]
    }

    /// Hermiticity tag assigned at construction.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |A - A^dagger|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error_of(&self.mat)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.norm_max()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        check_dims(self, other)?;
        Ok((&self.mat - &other.mat).norm_max())
    }

    pub fn scale(&self, factor: c64) -> Operator {
        Self::tagged(Mat::from_fn(self.dim(), self.dim(), |i, j| {
            self.mat[(i, j)] * factor
        }))
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(c64::new(factor, 0.0))
    }

    /// Matrix product with a dimension check.
    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        check_dims(self, other)?;
        Ok(Self::tagged(&self.mat * &other.mat))
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        check_dims(self, other)?;
        Ok(Self::tagged(&self.mat + &other.mat))
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Operator> {
        check_dims(self, other)?;
        Ok(Self::tagged(&self.mat - &other.mat))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Operator {
        let n = self.dim() * other.dim();
        let mut out = Mat::<c64>::zeros(n, n);
        faer::linalg::kron::kron(out.as_mut(), self.mat.as_ref(), other.mat.as_ref());
        // Kronecker products of Hermitian factors are Hermitian.
        if self.hermitian && other.hermitian {
            Self {
                mat: out,
                hermitian: true,
            }
        } else {
            Self::tagged(out)
        }
    }

    /// `self · X · self^dagger`.
    pub fn conjugate(&self, x: &Operator) -> Result<Operator> {
        self.matmul(x)?.matmul(&adjoint(self))
    }
}

fn check_dims(a: &Operator, b: &Operator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

// Operator arithmetic panics on mismatched dimensions; the `try_*` and
// free functions return `Error::Shape` instead.

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator dimensions must match")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator dimensions must match")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs).expect("operator dimensions must match")
    }
}

impl Mul<c64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: c64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

/// The exact 2x2 matrix for a single-site tag.
pub fn pauli(axis: Axis) -> Operator {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let entries = match axis {
        Axis::X => [[z, one], [one, z]],
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[one, z], [z, -one]],
        Axis::Plus => [[z, one], [z, z]],
        Axis::Minus => [[z, z], [one, z]],
        Axis::R => [[z, one], [i, z]],
        Axis::Identity => [[one, z], [z, one]],
    };
    Operator::tagged(Mat::from_fn(2, 2, |r, col| entries[r][col]))
}

/// Places a single-site operator at `site` (1-based) of an `n_sites` chain.
pub fn embed(op: &Operator, site: usize, n_sites: usize) -> Result<Operator> {
    if op.dim() != 2 {
        return Err(Error::Shape(format!(
            "embed expects a single-site operator, got dim {}",
            op.dim()
        )));
    }
    if site == 0 || site > n_sites {
        return Err(Error::Index(format!("site {site} not in 1..={n_sites}")));
    }
    let id = pauli(Axis::Identity);
    let factors: Vec<Operator> = (1..=n_sites)
        .map(|k| if k == site { op.clone() } else { id.clone() })
        .collect();
    kron_chain(&factors)
}

/// Ordered tensor product of single-site factors, site 1 leftmost.
pub fn kron_chain(ops: &[Operator]) -> Result<Operator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyChain)?;
    if let Some(bad) = ops.iter().find(|o| o.dim() != 2) {
        return Err(Error::Shape(format!(
            "kron_chain factors must have dim 2, got {}",
            bad.dim()
        )));
    }
    Ok(rest.iter().fold(first.clone(), |acc, op| acc.kron(op)))
}

/// Product of single-site operators on distinct sites, identity elsewhere.
///
/// Built directly as a Kronecker product, so it costs O(4^N) rather than
/// the O(8^N) of multiplying embedded operators.
pub fn pauli_string(n_sites: usize, factors: &[(usize, Axis)]) -> Result<Operator> {
    let mut slots = vec![Axis::Identity; n_sites];
    for &(site, axis) in factors {
        if site == 0 || site > n_sites {
            return Err(Error::Index(format!("site {site} not in 1..={n_sites}")));
        }
        if slots[site - 1] != Axis::Identity {
            return Err(Error::Spec(format!(
                "site {site} appears twice in a Pauli string"
            )));
        }
        slots[site - 1] = axis;
    }
    let ops: Vec<Operator> = slots.into_iter().map(pauli).collect();
    kron_chain(&ops)
}

/// `[a, b] = ab - ba`
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}

/// `{a, b} = ab + ba`
pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.matmul(b)?.try_add(&b.matmul(a)?)
}

pub fn adjoint(a: &Operator) -> Operator {
    Operator {
        mat: a.mat.adjoint().to_owned(),
        hermitian: a.hermitian,
    }
}

pub fn trace(a: &Operator) -> c64 {
    (0..a.dim()).map(|i| a.mat[(i, i)]).sum()
}
