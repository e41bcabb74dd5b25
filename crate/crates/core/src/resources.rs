//! Static resource quantifiers: coherence of states and measurements, the
//! measurement relative entropy, incoherent-measurement structure and the
//! marginal-entropy lower bound on the relative entropy of entanglement.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matcore::{dephase, partial_trace, relative_entropy, von_neumann_entropy, Hermitian, Keep};
use crate::qobjects::{classical_postprocess, Measurement, Stochastic};
use crate::scalar::Scalar;

/// Incoherent POVM rewritten as basis measurement + classical post-processing.
#[derive(Clone, Debug)]
pub struct IncoherentDecomposition<T: Scalar> {
    /// `p(x|i) = <i|M_x|i>`, shape `n x d`.
    pub post: Stochastic<T>,
    /// Max-abs error of rebuilding the POVM from `post`.
    pub residual: f64,
}

/// `C_R(rho) = S(Delta(rho)) - S(rho)`.
pub fn relative_entropy_of_coherence<T: Scalar>(rho: &Hermitian<T>) -> Result<T> {
    let tr = rho.trace();
    if (tr - T::one()).abs().f64() > T::TOL.trace {
        return Err(Error::NotDensity(format!("trace is {tr}")));
    }
    let s = von_neumann_entropy(rho).map_err(|e| Error::NotDensity(e.to_string()))?;
    Ok(von_neumann_entropy(&dephase(rho))? - s)
}

/// `D_m(M||N) = (1/d) sum_x D(M_x||N_x)`; `+inf` if any term is.
pub fn measurement_relative_entropy<T: Scalar>(m: &Measurement<T>, n: &Measurement<T>) -> Result<T> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: n.dim(),
        });
    }
    if m.n() != n.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: n.n(),
        });
    }
    let mut acc = T::zero();
    for (a, b) in m.elements().iter().zip(n.elements()) {
        let d = relative_entropy(a, b)?;
        if !d.is_finite_value() {
            return Ok(T::infinity());
        }
        acc += d;
    }
    Ok(acc / T::c(m.dim() as f64))
}

/// `C_m(M) = (1/d) sum_x [S(Delta(M_x)) - S(M_x)]`.
pub fn measurement_coherence<T: Scalar>(m: &Measurement<T>) -> Result<T> {
    let mut acc = T::zero();
    for e in m.elements() {
        let s = von_neumann_entropy(e).map_err(|err| Error::InvalidPovm(err.to_string()))?;
        acc += von_neumann_entropy(&dephase(e))? - s;
    }
    Ok(acc / T::c(m.dim() as f64))
}

/// Coarse-grid-plus-refinement minimum of `D_m(M||F)` over every incoherent
/// two-outcome qubit POVM `F_0 = diag(a, b)`, `F_1 = I - F_0`.
///
/// Independent of [`measurement_coherence`]: it evaluates the definition
/// `D(M_x||F_x) = -S(M_x) - sum_i <i|M_x|i> log2 f_{x,i}` directly.
pub fn measurement_coherence_bruteforce<T: Scalar>(m: &Measurement<T>, grid_steps: usize) -> Result<T> {
    if m.dim() != 2 || m.n() != 2 {
        return Err(Error::UnsupportedScale(format!(
            "brute-force oracle supports d = 2, n = 2 only (got d = {}, n = {})",
            m.dim(),
            m.n()
        )));
    }
    if grid_steps < 100 {
        return Err(Error::PreconditionViolation(format!(
            "grid_steps must be at least 100, got {grid_steps}"
        )));
    }
    let neg_entropy: Vec<f64> = m
        .elements()
        .iter()
        .map(|e| von_neumann_entropy(e).map(|s| -s.f64()))
        .collect::<Result<_>>()?;
    let diag: Vec<[f64; 2]> = m
        .elements()
        .iter()
        .map(|e| {
            let d = e.diagonal();
            [d[0].f64(), d[1].f64()]
        })
        .collect();
    let support = T::TOL.support;
    let cross = |w: f64, f: f64| -> f64 {
        if w <= support {
            0.0
        } else if f <= 0.0 {
            f64::INFINITY
        } else {
            -w * f.log2()
        }
    };
    let objective = |a: f64, b: f64| -> f64 {
        let d0 = neg_entropy[0] + cross(diag[0][0], a) + cross(diag[0][1], b);
        let d1 = neg_entropy[1] + cross(diag[1][0], 1.0 - a) + cross(diag[1][1], 1.0 - b);
        0.5 * (d0 + d1)
    };
    let search = |lo_a: f64, hi_a: f64, lo_b: f64, hi_b: f64, steps: usize| {
        let mut best = (f64::INFINITY, lo_a, lo_b);
        let span = (steps - 1) as f64;
        for k in 0..steps {
            let a = lo_a + (hi_a - lo_a) * k as f64 / span;
            for l in 0..steps {
                let b = lo_b + (hi_b - lo_b) * l as f64 / span;
                let v = objective(a, b);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        best
    };

    let (_, a, b) = search(0.0, 1.0, 0.0, 1.0, grid_steps);
    let h = 1.0 / (grid_steps - 1) as f64;
    let (best, _, _) = search(
        (a - h).max(0.0),
        (a + h).min(1.0),
        (b - h).max(0.0),
        (b + h).min(1.0),
        201,
    );
    Ok(T::c(best))
}

/// Every element diagonal within `tol` (max-abs off-diagonal entry).
pub fn is_incoherent_measurement<T: Scalar>(m: &Measurement<T>, tol: f64) -> bool {
    m.elements().iter().all(|e| e.off_diagonal_max() <= tol)
}

/// Extracts `p(x|i) = <i|M_x|i>` from an incoherent POVM.
pub fn decompose_incoherent<T: Scalar>(m: &Measurement<T>) -> Result<IncoherentDecomposition<T>> {
    let off = m
        .elements()
        .iter()
        .map(|e| e.off_diagonal_max())
        .fold(0.0, f64::max);
    if off > T::TOL.completeness {
        return Err(Error::NotIncoherent { off_diagonal: off });
    }
    let (d, n) = (m.dim(), m.n());
    let p = DMatrix::from_fn(n, d, |x, i| m.elements()[x].matrix()[(i, i)].re);
    let post = Stochastic::new(p).map_err(|e| Error::InvalidPovm(e.to_string()))?;
    let rebuilt = classical_postprocess(&Measurement::basis(d), &post)?;
    let residual = rebuilt.max_abs_diff(m);
    Ok(IncoherentDecomposition { post, residual })
}

/// `max{S(X_A) - S(X), S(X_B) - S(X)}`, returned unclamped.
pub fn ere_lower_bound<T: Scalar>(x: &Hermitian<T>, dims: (usize, usize)) -> Result<T> {
    let joint = von_neumann_entropy(x)?;
    let sa = von_neumann_entropy(&partial_trace(x, dims, Keep::A)?)?;
    let sb = von_neumann_entropy(&partial_trace(x, dims, Keep::B)?)?;
    Ok((sa - joint).max(sb - joint))
}
