use nalgebra::{Complex, ComplexField};

use crate::error::{Error, Result};
use crate::matcore::{dephase, Hermitian};
use crate::scalar::{max_abs_diff, CMatrix, Scalar};

/// Which side of the tensor product the extended channel sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `I_anc (x) E`
    Left,
    /// `E (x) I_anc`
    Right,
}

/// Membership flags returned by [`Channel::classify`]. `dio` and `mio` are
/// only meaningful for square channels and are `false` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChannelClass {
    pub cptp: bool,
    pub unital: bool,
    pub dio: bool,
    pub mio: bool,
}

/// Quantum channel `X -> sum_k K_k X K_k^dag`.
///
/// The Kraus list is canonical. The Choi matrix
/// `sum_ij E(|i><j|) (x) |i><j|` (output factor first) is computed once at
/// construction.
#[derive(Clone, Debug)]
pub struct Channel<T: Scalar> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix<T>>,
    choi: Hermitian<T>,
}

fn choi_from_kraus<T: Scalar>(kraus: &[CMatrix<T>], dim_in: usize, dim_out: usize) -> Hermitian<T> {
    let n = dim_in * dim_out;
    // column k is K_k flattened row-major: index a * dim_in + i
    let v = CMatrix::from_fn(n, kraus.len(), |r, k| kraus[k][(r / dim_in, r % dim_in)]);
    Hermitian::from_matrix_unchecked(&v * v.adjoint())
}

impl<T: Scalar> Channel<T> {
    pub fn from_kraus(kraus: Vec<CMatrix<T>>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Malformed("empty Kraus list".into()))?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::Malformed("zero-sized Kraus operator".into()));
        }
        for k in &kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(Error::Malformed(format!(
                    "Kraus operators have inconsistent shapes {:?} and {:?}",
                    (dim_out, dim_in),
                    k.shape()
                )));
            }
        }
        let ch = Self::from_kraus_unchecked(kraus, dim_in, dim_out);
        let deviation = ch.completeness_deviation();
        if deviation > T::TOL.completeness {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    /// Drops numerically-zero Kraus operators and builds the Choi cache.
    pub(crate) fn from_kraus_unchecked(kraus: Vec<CMatrix<T>>, dim_in: usize, dim_out: usize) -> Self {
        let floor = T::c(T::TOL.eig_clip * T::TOL.eig_clip);
        let mut kraus: Vec<_> = kraus.into_iter().filter(|k| k.norm_squared() > floor).collect();
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(dim_out, dim_in));
        }
        let choi = choi_from_kraus(&kraus, dim_in, dim_out);
        Self {
            dim_in,
            dim_out,
            kraus,
            choi,
        }
    }

    /// Rebuilds a Kraus form from the Choi eigendecomposition.
    pub fn from_choi(choi: &Hermitian<T>, dim_in: usize, dim_out: usize) -> Result<Self> {
        if choi.dim() != dim_in * dim_out {
            return Err(Error::DimensionMismatch {
                expected: dim_in * dim_out,
                found: choi.dim(),
            });
        }
        let (vals, vecs) = choi.eigh();
        let min = vals.iter().copied().fold(T::infinity(), |a, b| a.min(b));
        if min.f64() < -T::TOL.psd {
            return Err(Error::NotPsd {
                min_eigenvalue: min.f64(),
            });
        }
        let clip = T::c(T::TOL.eig_clip);
        let kraus = vals
            .iter()
            .enumerate()
            .filter(|(_, l)| **l > clip)
            .map(|(k, l)| {
                let s = l.sqrt();
                CMatrix::from_fn(dim_out, dim_in, |a, i| vecs[(a * dim_in + i, k)].scale(s))
            })
            .collect();
        Self::from_kraus(kraus)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus_unchecked(vec![CMatrix::identity(d, d)], d, d)
    }

    /// `X -> U X U^dag`; fails unless `U` is unitary.
    pub fn unitary(u: CMatrix<T>) -> Result<Self> {
        Self::from_kraus(vec![u])
    }

    /// Completely dephasing channel in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| Hermitian::<T>::basis_projector(i, d).into_matrix())
            .collect();
        Self::from_kraus_unchecked(kraus, d, d)
    }

    /// Unitary channel of the permutation `|i> -> |perm[i]>`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut u = CMatrix::zeros(d, d);
        for (i, &j) in perm.iter().enumerate() {
            if j >= d {
                return Err(Error::Malformed(format!("permutation image {j} out of range")));
            }
            u[(j, i)] = Complex::new(T::one(), T::zero());
        }
        Self::unitary(u)
    }

    /// Kraus union `{sqrt(p) K} + {sqrt(1-p) K'}`.
    pub fn mixture(p: T, a: &Self, b: &Self) -> Result<Self> {
        if a.dim_in != b.dim_in || a.dim_out != b.dim_out {
            return Err(Error::DimensionMismatch {
                expected: a.dim_in * a.dim_out,
                found: b.dim_in * b.dim_out,
            });
        }
        if p < T::zero() || p > T::one() {
            return Err(Error::PreconditionViolation(format!(
                "mixture weight {p} outside [0, 1]"
            )));
        }
        let (sa, sb) = (p.sqrt(), (T::one() - p).sqrt());
        let kraus = a
            .kraus
            .iter()
            .map(|k| k.map(|z| z.scale(sa)))
            .chain(b.kraus.iter().map(|k| k.map(|z| z.scale(sb))))
            .collect();
        Ok(Self::from_kraus_unchecked(kraus, a.dim_in, a.dim_out))
    }

    /// Weighted mixture of several channels with weights summing to one.
    pub fn convex_combination(weights: &[T], channels: &[Self]) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::Malformed("empty mixture".into()))?;
        if weights.len() != channels.len() {
            return Err(Error::DimensionMismatch {
                expected: channels.len(),
                found: weights.len(),
            });
        }
        let mut kraus = Vec::new();
        for (w, ch) in weights.iter().zip(channels) {
            if ch.dim_in != first.dim_in || ch.dim_out != first.dim_out {
                return Err(Error::DimensionMismatch {
                    expected: first.dim_in,
                    found: ch.dim_in,
                });
            }
            let s = w.sqrt();
            kraus.extend(ch.kraus.iter().map(|k| k.map(|z| z.scale(s))));
        }
        Self::from_kraus(kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    pub fn choi(&self) -> &Hermitian<T> {
        &self.choi
    }

    /// Max-abs deviation of `sum K^dag K` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = CMatrix::<T>::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        max_abs_diff(&acc, &CMatrix::identity(self.dim_in, self.dim_in))
    }

    pub fn apply(&self, x: &Hermitian<T>) -> Result<Hermitian<T>> {
        if x.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: x.dim(),
            });
        }
        let mut acc = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            acc += k * x.matrix() * k.adjoint();
        }
        Ok(Hermitian::from_matrix_unchecked(acc))
    }

    /// Heisenberg picture: `X -> sum_k K_k^dag X K_k`.
    pub fn adjoint_apply(&self, x: &Hermitian<T>) -> Result<Hermitian<T>> {
        if x.dim() != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: x.dim(),
            });
        }
        let mut acc = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc += k.adjoint() * x.matrix() * k;
        }
        Ok(Hermitian::from_matrix_unchecked(acc))
    }

    /// The adjoint map as a channel, Kraus `{K^dag}`. Trace preserving
    /// exactly when `self` is unital.
    pub fn adjoint_channel(&self) -> Result<Self> {
        let kraus = self.kraus.iter().map(|k| k.adjoint()).collect();
        Self::from_kraus(kraus).map_err(|e| match e {
            Error::NotTracePreserving { deviation } => Error::NotUnital { deviation },
            other => other,
        })
    }

    /// `E (x) id_anc` or `id_anc (x) E`.
    pub fn extend_with_identity(&self, d_anc: usize, side: Side) -> Self {
        let id = CMatrix::<T>::identity(d_anc, d_anc);
        let kraus = self
            .kraus
            .iter()
            .map(|k| match side {
                Side::Right => k.kronecker(&id),
                Side::Left => id.kronecker(k),
            })
            .collect();
        Self::from_kraus_unchecked(kraus, self.dim_in * d_anc, self.dim_out * d_anc)
    }

    /// Max-abs distance between Choi matrices; `f64::INFINITY` on shape mismatch.
    pub fn choi_distance(&self, other: &Self) -> f64 {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return f64::INFINITY;
        }
        self.choi.max_abs_diff(&other.choi)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.choi_distance(other) <= T::TOL.channel_eq
    }

    /// Max deviation of `apply(I)` from `I` (square channels only).
    pub fn unitality_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = CMatrix::<T>::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            acc += k * k.adjoint();
        }
        max_abs_diff(&acc, &CMatrix::identity(self.dim_out, self.dim_out))
    }

    /// Max-abs gap between the Choi matrices of `Delta . E` and
    /// `Delta . E . Delta`.
    ///
    /// With Choi index `a * dim_in + i`, the output dephasing keeps entries
    /// with `a == b` and the input dephasing additionally requires `i == j`,
    /// so the gap is the largest `|choi[(a,i),(a,j)]|` with `i != j`.
    pub fn dio_deviation(&self) -> f64 {
        let (din, m) = (self.dim_in, self.choi.matrix());
        let mut worst = 0.0f64;
        for a in 0..self.dim_out {
            for i in 0..din {
                for j in 0..din {
                    if i != j {
                        worst = worst.max(m[(a * din + i, a * din + j)].modulus().f64());
                    }
                }
            }
        }
        worst
    }

    /// Largest coherence `E` produces from an incoherent basis input.
    pub fn mio_deviation(&self) -> f64 {
        (0..self.dim_in)
            .map(|i| {
                let out = self
                    .apply(&Hermitian::basis_projector(i, self.dim_in))
                    .expect("dimension matches");
                out.max_abs_diff(&dephase(&out))
            })
            .fold(0.0, f64::max)
    }

    pub fn classify(&self) -> ChannelClass {
        let tol = T::TOL.completeness;
        let cptp = self.completeness_deviation() <= tol
            && self.choi.min_eigenvalue().f64() >= -T::TOL.psd;
        let square = self.is_square();
        ChannelClass {
            cptp,
            unital: square && self.unitality_deviation() <= tol,
            dio: square && self.dio_deviation() <= tol,
            mio: square && self.mio_deviation() <= tol,
        }
    }
}

/// `E2 . E1`: Kraus products `K2 K1`.
pub fn compose<T: Scalar>(e2: &Channel<T>, e1: &Channel<T>) -> Result<Channel<T>> {
    if e1.dim_out != e2.dim_in {
        return Err(Error::DimensionMismatch {
            expected: e2.dim_in,
            found: e1.dim_out,
        });
    }
    let mut kraus = Vec::with_capacity(e1.kraus.len() * e2.kraus.len());
    for k2 in &e2.kraus {
        for k1 in &e1.kraus {
            kraus.push(k2 * k1);
        }
    }
    Ok(Channel::from_kraus_unchecked(kraus, e1.dim_in, e2.dim_out))
}
