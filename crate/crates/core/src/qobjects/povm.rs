
use super::{Channel, Stochastic};
use crate::error::{Error, Result};
use crate::matcore::{tensor_product, Hermitian};
use crate::scalar::{CMatrix, Scalar};

/// POVM on a `dim`-dimensional system: PSD elements summing to the identity.
/// The outcome count is unrestricted.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<T: Scalar> {
    dim: usize,
    elements: Vec<Hermitian<T>>,
}

impl<T: Scalar> Measurement<T> {
    pub fn new(elements: Vec<Hermitian<T>>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .dim();
        if let Some(e) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::InvalidPovm(format!(
                "element dimension {} differs from {dim}",
                e.dim()
            )));
        }
        for (x, e) in elements.iter().enumerate() {
            let min = e.min_eigenvalue().f64();
            if min < -T::TOL.psd {
                return Err(Error::InvalidPovm(format!(
                    "element {x} is not PSD (min eigenvalue {min:e})"
                )));
            }
        }
        let m = Self { dim, elements };
        let dev = m.completeness_deviation();
        if dev > T::TOL.completeness {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(dim: usize, elements: Vec<Hermitian<T>>) -> Self {
        Self { dim, elements }
    }

    /// Measurement in the incoherent (computational) basis.
    pub fn basis(d: usize) -> Self {
        Self {
            dim: d,
            elements: (0..d).map(|i| Hermitian::basis_projector(i, d)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes.
    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Hermitian<T>] {
        &self.elements
    }

    pub fn completeness_deviation(&self) -> f64 {
        let total = self
            .elements
            .iter()
            .fold(Hermitian::zeros(self.dim), |acc, e| acc.plus(e));
        total.max_abs_diff(&Hermitian::identity(self.dim))
    }

    /// Outcome distribution `tr(M_x rho)`.
    pub fn probabilities(&self, rho: &Hermitian<T>) -> Result<Vec<T>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        Ok(self.elements.iter().map(|e| e.inner(rho)).collect())
    }

    /// Elementwise max-abs distance; infinite if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim || self.n() != other.n() {
            return f64::INFINITY;
        }
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Product measurement with outcome `(x, y)` at index `x * other.n() + y`.
    pub fn tensor(&self, other: &Self) -> Self {
        let elements = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| tensor_product(a, b)))
            .collect();
        Self {
            dim: self.dim * other.dim,
            elements,
        }
    }

    /// Elementwise `p M + (1-p) N`.
    pub fn mixture(p: T, a: &Self, b: &Self) -> Result<Self> {
        if a.dim != b.dim || a.n() != b.n() {
            return Err(Error::DimensionMismatch {
                expected: a.n(),
                found: b.n(),
            });
        }
        let q = T::one() - p;
        let elements = a
            .elements
            .iter()
            .zip(&b.elements)
            .map(|(x, y)| x.scaled(p).plus(&y.scaled(q)))
            .collect();
        Ok(Self {
            dim: a.dim,
            elements,
        })
    }

    /// Appends zero elements until there are `n` outcomes.
    pub fn padded(&self, n: usize) -> Self {
        let mut elements = self.elements.clone();
        while elements.len() < n {
            elements.push(Hermitian::zeros(self.dim));
        }
        Self {
            dim: self.dim,
            elements,
        }
    }
}

/// Measurement as a channel with classical output:
/// `rho -> sum_x tr(M_x rho) |x><x|`.
///
/// Kraus operators are `sqrt(lambda) |x><phi|` over the eigenpairs of each
/// element.
pub fn measurement_as_channel<T: Scalar>(m: &Measurement<T>) -> Result<Channel<T>> {
    let (d, n) = (m.dim(), m.n());
    let clip = T::c(T::TOL.eig_clip);
    let mut kraus = Vec::new();
    for (x, e) in m.elements().iter().enumerate() {
        let (vals, vecs) = e.eigh();
        for (k, l) in vals.iter().enumerate() {
            if *l <= clip {
                continue;
            }
            let s = l.sqrt();
            let mut op = CMatrix::zeros(n, d);
            for i in 0..d {
                op[(x, i)] = vecs[(i, k)].conj().scale(s);
            }
            kraus.push(op);
        }
    }
    if kraus.is_empty() {
        return Err(Error::InvalidPovm("all elements vanish".into()));
    }
    Channel::from_kraus(kraus).map_err(|e| Error::InvalidPovm(e.to_string()))
}

/// `M'_y = sum_x p(y|x) M_x`.
pub fn classical_postprocess<T: Scalar>(
    m: &Measurement<T>,
    s: &Stochastic<T>,
) -> Result<Measurement<T>> {
    if s.cols() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: s.cols(),
        });
    }
    let elements = (0..s.rows())
        .map(|y| {
            m.elements()
                .iter()
                .enumerate()
                .fold(Hermitian::zeros(m.dim()), |acc, (x, e)| {
                    acc.plus(&e.scaled(s.prob(y, x)))
                })
        })
        .collect();
    Ok(Measurement::new_unchecked(m.dim(), elements))
}

/// Measurement `M . E`: elements `E^dag(M_x)`.
pub fn pullback_povm<T: Scalar>(e: &Channel<T>, m: &Measurement<T>) -> Result<Measurement<T>> {
    if m.dim() != e.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: e.dim_out(),
            found: m.dim(),
        });
    }
    let elements = m
        .elements()
        .iter()
        .map(|x| e.adjoint_apply(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Measurement::new_unchecked(e.dim_in(), elements))
}
