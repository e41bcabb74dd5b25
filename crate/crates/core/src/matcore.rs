//! Dense Hermitian operators and the spectral quantities built on them.
//!
//! The incoherent basis is the computational basis `|0>, ..., |d-1>`, and every
//! bipartite operator uses A-major index ordering: `|i>_A |j>_B` sits at
//! `i * d_B + j`.
//!
//! Entropies are in bits. [`relative_entropy`] is `tr[X log X] - tr[X log Y]`
//! with no `tr Y - tr X` correction, so for subnormalized arguments (POVM
//! elements) single values can be negative. Sums over a full POVM pair are
//! still nonnegative because the corrections cancel by completeness.

use nalgebra::{Complex, ComplexField, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{max_abs_diff, CMatrix, Cx, Scalar};

/// Complex Hermitian operator on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<T: Scalar> {
    m: CMatrix<T>,
}

/// Which factor of a bipartite operator to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

impl<T: Scalar> Hermitian<T> {
    /// Validates Hermiticity within `herm` tolerance; the stored matrix is
    /// the exact Hermitian part of `m`.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let deviation = max_abs_diff(&m, &m.adjoint());
        if deviation > T::TOL.herm {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Symmetrizes without checking; for results of arithmetic that is
    /// Hermitian up to rounding.
    pub(crate) fn from_matrix_unchecked(m: CMatrix<T>) -> Self {
        let half = T::c(0.5);
        let h = (&m + m.adjoint()).map(|z| z.scale(half));
        Self { m: h }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let d = diag.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = T::cr(*v);
        }
        Self { m }
    }

    /// `|i><i|` in dimension `dim`.
    pub fn basis_projector(i: usize, dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, i)] = Complex::new(T::one(), T::zero());
        Self { m }
    }

    /// `|psi><psi|` (not normalised).
    pub fn outer(psi: &DVector<Cx<T>>) -> Self {
        Self::from_matrix_unchecked(psi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.m[(i, i)].re)
    }

    /// `tr(self * other)`, real for Hermitian pairs.
    pub fn inner(&self, other: &Self) -> T {
        // tr(AB) = sum_ij A_ij B_ji
        let mut acc = T::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        acc
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            m: self.m.map(|z| z.scale(s)),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            m: &self.m + &other.m,
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self {
            m: &self.m - &other.m,
        }
    }

    /// `A X A^dag` for a (possibly rectangular) `A`.
    pub fn conjugate_by(&self, a: &CMatrix<T>) -> Self {
        Self::from_matrix_unchecked(a * &self.m * a.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.m[(i, j)].modulus().f64());
                }
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Eigenvalues (unordered) and the matching eigenvector columns.
    pub fn eigh(&self) -> (Vec<T>, CMatrix<T>) {
        let eig = SymmetricEigen::new(self.m.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        SymmetricEigen::new(self.m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()
            .into_iter()
            .fold(T::infinity(), |a, b| a.min(b))
    }
}

fn check_psd<T: Scalar>(eigs: &[T]) -> Result<()> {
    let min = eigs.iter().copied().fold(T::infinity(), |a, b| a.min(b));
    if min.f64() < -T::TOL.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: min.f64(),
        });
    }
    Ok(())
}

/// `-sum lambda log2 lambda` over the clipped spectrum.
fn entropy_of_spectrum<T: Scalar>(eigs: &[T]) -> T {
    let clip = T::c(T::TOL.eig_clip);
    eigs.iter()
        .filter(|l| **l > clip)
        .fold(T::zero(), |acc, l| acc - *l * l.log2())
}

/// Von Neumann entropy in bits; `X` need not have unit trace.
pub fn von_neumann_entropy<T: Scalar>(x: &Hermitian<T>) -> Result<T> {
    let eigs = x.eigenvalues();
    check_psd(&eigs)?;
    Ok(entropy_of_spectrum(&eigs))
}

/// `tr[X log2 X] - tr[X log2 Y]`, or `+inf` when `supp X` is not inside `supp Y`.
pub fn relative_entropy<T: Scalar>(x: &Hermitian<T>, y: &Hermitian<T>) -> Result<T> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let x_eigs = x.eigenvalues();
    check_psd(&x_eigs)?;
    let (y_eigs, y_vecs) = y.eigh();
    check_psd(&y_eigs)?;

    // Diagonal of V^dag X V: weight of X on each eigenvector of Y.
    let rotated = y_vecs.adjoint() * x.matrix() * &y_vecs;
    let clip = T::c(T::TOL.eig_clip);
    let mut kernel_mass = T::zero();
    let mut cross = T::zero();
    for (j, mu) in y_eigs.iter().enumerate() {
        let w = rotated[(j, j)].re;
        if *mu <= clip {
            kernel_mass += w;
        } else {
            cross += w * mu.log2();
        }
    }
    if kernel_mass.f64() > T::TOL.support {
        return Ok(T::infinity());
    }
    Ok(-entropy_of_spectrum(&x_eigs) - cross)
}

/// Kronecker product, A-major.
pub fn tensor_product<T: Scalar>(x: &Hermitian<T>, y: &Hermitian<T>) -> Hermitian<T> {
    Hermitian {
        m: x.m.kronecker(&y.m),
    }
}

/// Partial trace of a `d_a * d_b` operator, keeping factor `keep`.
pub fn partial_trace<T: Scalar>(
    x: &Hermitian<T>,
    (d_a, d_b): (usize, usize),
    keep: Keep,
) -> Result<Hermitian<T>> {
    if x.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch {
            expected: d_a * d_b,
            found: x.dim(),
        });
    }
    let m = &x.m;
    let out = match keep {
        Keep::A => CMatrix::from_fn(d_a, d_a, |i, k| {
            (0..d_b).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                acc + m[(i * d_b + j, k * d_b + j)]
            })
        }),
        Keep::B => CMatrix::from_fn(d_b, d_b, |j, l| {
            (0..d_a).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
                acc + m[(i * d_b + j, i * d_b + l)]
            })
        }),
    };
    Ok(Hermitian::from_matrix_unchecked(out))
}

/// Dephasing in the computational basis: drops every off-diagonal entry.
pub fn dephase<T: Scalar>(x: &Hermitian<T>) -> Hermitian<T> {
    let d = x.dim();
    Hermitian {
        m: CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                T::cr(x.m[(i, i)].re)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        }),
    }
}

pub fn is_psd<T: Scalar>(x: &Hermitian<T>, tol: f64) -> bool {
    x.min_eigenvalue().f64() >= -tol
}
