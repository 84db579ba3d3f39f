//! Dense complex operators on qubit registers.
//!
//! Basis convention: qubit 0 is the most significant bit of the basis index,
//! and `|0>` is the `+1` eigenstate of sigma-z.

mod sparse;

pub use sparse::{expm_multiply, Csr};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Operator = DMatrix<C64>;
pub type StateVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn sigma_x() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> Operator {
    Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Lowering operator `|0><1|` (|1> is the excited state).
pub fn sigma_minus() -> Operator {
    Operator::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn hadamard() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Operator::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

/// `cos(theta) sx + sin(theta) sy`.
pub fn pauli_in_plane(theta: f64) -> Operator {
    sigma_x() * c(theta.cos(), 0.0) + sigma_y() * c(theta.sin(), 0.0)
}

/// Kronecker product with `a` as the slow index.
///
/// Entry `(i*rb + k, j*cb + l)` is the single product `a[i,j] * b[k,l]`, so
/// `kron(kron(a,b),c)` and `kron(a,kron(b,c))` differ only by the rounding of
/// the triple product.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// Value (0 or 1) of qubit `site` in basis index `index` of an `m`-qubit register.
#[inline]
pub fn bit(index: usize, site: usize, m: usize) -> usize {
    (index >> (m - 1 - site)) & 1
}

/// sigma-z eigenvalue of qubit `site` in basis state `index`.
#[inline]
pub fn z_sign(index: usize, site: usize, m: usize) -> f64 {
    1.0 - 2.0 * bit(index, site, m) as f64
}

/// `I ⊗ ... ⊗ op ⊗ ... ⊗ I` with `op` acting on `site`.
pub fn embed(op: &Operator, site: usize, m: usize) -> Result<Operator> {
    if site >= m {
        return Err(Error::SiteOutOfRange { site, qubits: m });
    }
    if op.nrows() != 2 || op.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: op.nrows(),
        });
    }
    let left = identity(1 << site);
    let right = identity(1 << (m - 1 - site));
    Ok(kron(&kron(&left, op), &right))
}

pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Operator) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_deviation(h: &Operator) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

pub fn unitarity_deviation(u: &Operator) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn is_diagonal(a: &Operator, tol: f64) -> bool {
    off_diagonal_max(a) <= tol
}

fn off_diagonal_max(a: &Operator) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if i != j {
                m = m.max(a[(i, j)].norm());
            }
        }
    }
    m
}

/// `exp(-i h t)` via Hermitian eigendecomposition.
pub fn unitary_exp(h: &Operator, t: f64) -> Result<Operator> {
    let scale = max_abs(h).max(1.0);
    let dev = hermiticity_deviation(h);
    if dev > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = h.nrows();
    if t == 0.0 {
        return Ok(identity(n));
    }
    if is_diagonal(h, 0.0) {
        return Ok(Operator::from_diagonal(&DVector::from_iterator(
            n,
            (0..n).map(|k| (-I * h[(k, k)].re * t).exp()),
        )));
    }
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let phases = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| (-I * l * t).exp()));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}

/// Diagonal operator from real entries.
pub fn diagonal(entries: &[f64]) -> Operator {
    Operator::from_diagonal(&DVector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| c(x, 0.0)),
    ))
}

pub fn basis_state(dim: usize, index: usize) -> StateVector {
    let mut v = StateVector::zeros(dim);
    v[index] = ONE;
    v
}

/// Kronecker product of state vectors, first argument most significant.
pub fn kron_states(a: &StateVector, b: &StateVector) -> StateVector {
    a.kronecker(b)
}

pub fn normalize(v: &StateVector) -> StateVector {
    v / c(v.norm(), 0.0)
}

/// `|psi><psi|`.
pub fn projector(psi: &StateVector) -> Operator {
    psi * psi.adjoint()
}

/// `<psi| rho |psi>`, real part.
pub fn expectation(rho: &Operator, psi: &StateVector) -> f64 {
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

/// Reduced density matrix of a single qubit.
pub fn reduce_to_qubit(rho: &Operator, site: usize, m: usize) -> Operator {
    let d = rho.nrows();
    let mut out = Operator::zeros(2, 2);
    for i in 0..d {
        for j in 0..d {
            // rest of the register must agree
            let mask = 1usize << (m - 1 - site);
            if i & !mask == j & !mask {
                out[(bit(i, site, m), bit(j, site, m))] += rho[(i, j)];
            }
        }
    }
    out
}

/// Density matrix with validated invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(m: Operator) -> Result<Self> {
        Self::validate(&m, 1e-10, 1e-9)?;
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Operator) -> Self {
        Self(m)
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        Self(projector(&normalize(psi)))
    }

    /// Checks hermiticity, unit trace and positivity at the given tolerances.
    pub fn validate(m: &Operator, tol: f64, eig_tol: f64) -> Result<()> {
        if !m.is_square() || !m.nrows().is_power_of_two() || m.nrows() < 2 {
            return Err(Error::InvalidState(format!(
                "shape {:?} is not 2^m square",
                m.shape()
            )));
        }
        let herm = hermiticity_deviation(m);
        if herm > tol {
            return Err(Error::InvalidState(format!("not hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let sym = (m + m.adjoint()) * c(0.5, 0.0);
        let min = SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -eig_tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Operator {
        &self.0
    }

    pub fn into_inner(self) -> Operator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn fidelity_with(&self, psi: &StateVector) -> f64 {
        expectation(&self.0, psi)
    }
}
