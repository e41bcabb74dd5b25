//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All operators are complex matrices over a real field `T`. The field carries
//! its own numerical tolerances, so an `f32` build does not inherit thresholds
//! that only make sense at double precision.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::{Complex, ComplexField, DMatrix, RealField};
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

/// Dense complex matrix over `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Numerical thresholds used by validation and spectral routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max-abs deviation from Hermiticity accepted on construction.
    pub herm: f64,
    /// Most negative eigenvalue still treated as positive semidefinite.
    pub psd: f64,
    /// Eigenvalues at or below this are treated as zero.
    pub eig_clip: f64,
    /// Max-abs deviation of `sum K^dag K` (or a POVM sum) from the identity.
    pub completeness: f64,
    /// Column-sum deviation accepted for stochastic matrices.
    pub stochastic: f64,
    /// Mass of `X` on the kernel of `Y` above which `D(X||Y)` is infinite.
    pub support: f64,
    /// Unit-trace deviation accepted for density operators.
    pub trace: f64,
    /// Choi max-abs distance under which two channels are equal.
    pub channel_eq: f64,
}

pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + LowerExp + Debug + Send + Sync + 'static
{
    const TOL: Tolerances;

    fn infinity() -> Self;

    fn is_finite_value(self) -> bool;

    /// Lossy conversion from `f64` literals and sampled values.
    #[inline]
    fn c(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("scalar converts to f64")
    }

    #[inline]
    fn cx(re: Self, im: Self) -> Cx<Self> {
        Complex::new(re, im)
    }

    #[inline]
    fn cr(re: Self) -> Cx<Self> {
        Complex::new(re, Self::zero())
    }
}

macro_rules! impl_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const TOL: Tolerances = $tol;

            #[inline]
            fn infinity() -> Self {
                <$t as Float>::infinity()
            }

            #[inline]
            fn is_finite_value(self) -> bool {
                <$t as Float>::is_finite(self)
            }
        }
    };
}

impl_scalar!(
    f64,
    Tolerances {
        herm: 1e-10,
        psd: 1e-9,
        eig_clip: 1e-12,
        completeness: 1e-9,
        stochastic: 1e-10,
        support: 1e-9,
        trace: 1e-9,
        channel_eq: 1e-9,
    }
);

impl_scalar!(
    f32,
    Tolerances {
        herm: 1e-5,
        psd: 1e-5,
        eig_clip: 1e-6,
        completeness: 1e-5,
        stochastic: 1e-5,
        support: 1e-5,
        trace: 1e-5,
        channel_eq: 1e-5,
    }
);

/// Max-abs entry of `a - b`, as `f64`.
pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).modulus().f64())
        .fold(0.0, f64::max)
}

/// Max-abs entry of `a`, as `f64`.
pub fn max_abs<T: Scalar>(a: &CMatrix<T>) -> f64 {
    a.iter().map(|x| x.modulus().f64()).fold(0.0, f64::max)
}
