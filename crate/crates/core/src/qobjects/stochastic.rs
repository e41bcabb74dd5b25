use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column-stochastic conditional distribution `p(x|i)`: row `x`, column `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stochastic<T: Scalar> {
    p: DMatrix<T>,
}

impl<T: Scalar> Stochastic<T> {
    pub fn new(p: DMatrix<T>) -> Result<Self> {
        if p.nrows() == 0 || p.ncols() == 0 {
            return Err(Error::InvalidStochastic("empty matrix".into()));
        }
        let tol = T::TOL.stochastic;
        if let Some(v) = p.iter().find(|v| v.f64() < -tol) {
            return Err(Error::InvalidStochastic(format!("negative entry {v}")));
        }
        let s = Self { p };
        let dev = s.column_sum_deviation();
        if dev > tol {
            return Err(Error::InvalidStochastic(format!(
                "column sums deviate from 1 by {dev:e}"
            )));
        }
        Ok(s)
    }

    pub fn identity(m: usize) -> Self {
        Self {
            p: DMatrix::identity(m, m),
        }
    }

    /// Outcomes.
    pub fn rows(&self) -> usize {
        self.p.nrows()
    }

    /// Inputs.
    pub fn cols(&self) -> usize {
        self.p.ncols()
    }

    /// `p(x|i)`.
    pub fn prob(&self, x: usize, i: usize) -> T {
        self.p[(x, i)]
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.p
    }

    pub fn column_sum_deviation(&self) -> f64 {
        self.p
            .column_iter()
            .map(|c| (c.sum() - T::one()).abs().f64())
            .fold(0.0, f64::max)
    }
}
