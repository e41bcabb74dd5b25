//! Dynamical resource powers of channels and the coherence-to-entanglement
//! conversion through the generalized CNOT.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::Hermitian;
use crate::qobjects::{compose, measurement_as_channel, pullback_povm, Channel, Measurement, Side};
use crate::resources::{ere_lower_bound, measurement_coherence, relative_entropy_of_coherence};
use crate::scalar::{CMatrix, Scalar};

/// Largest local dimension accepted by the conversion routines.
pub const CONVERSION_DIM_CAP: usize = 6;

/// Internal-consistency tolerance on the conversion certificate gap.
pub const CONVERSION_GAP_TOL: f64 = 1e-9;

/// Both sides of the conversion identity for one channel.
#[derive(Clone, Debug, Serialize)]
pub struct ConversionCertificate {
    pub cohering_power: f64,
    pub avg_ere_lower_bound: f64,
    pub per_element_bounds: Vec<f64>,
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DualityCheck {
    /// State-cohering power of `E`.
    pub c_g: f64,
    /// Measurement-cohering power of the adjoint channel.
    pub c_adj: f64,
    /// `(1/d) sum_i C_R(E(|i><i|))`, which `c_adj` must equal.
    pub c_adj_identity: f64,
    pub sandwich_ok: bool,
}

fn require_square<T: Scalar>(e: &Channel<T>) -> Result<usize> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch {
            expected: e.dim_in(),
            found: e.dim_out(),
        });
    }
    Ok(e.dim_in())
}

/// `C(E) = C_m(I . E)`: measurement coherence of the basis measurement
/// pulled back through `E`.
pub fn measurement_cohering_power<T: Scalar>(e: &Channel<T>) -> Result<T> {
    let d = require_square(e)?;
    measurement_coherence(&pullback_povm(e, &Measurement::basis(d))?)
}

/// `C_g(E) = max_i C_R(E(|i><i|))`.
pub fn state_cohering_power<T: Scalar>(e: &Channel<T>) -> Result<T> {
    let d = require_square(e)?;
    let mut best = T::zero();
    for i in 0..d {
        let out = e.apply(&Hermitian::basis_projector(i, d))?;
        best = best.max(relative_entropy_of_coherence(&out)?);
    }
    Ok(best)
}

/// `U = sum_ij |i, i+j mod d><i, j|` on `d * d` dimensions.
pub fn cnot_matrix<T: Scalar>(d: usize) -> CMatrix<T> {
    let mut u = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(i * d + (i + j) % d, i * d + j)] = Complex::new(T::one(), T::zero());
        }
    }
    u
}

pub fn cnot_unitary<T: Scalar>(d: usize) -> Result<Channel<T>> {
    if d < 2 {
        return Err(Error::PreconditionViolation(format!(
            "generalized CNOT needs d >= 2, got {d}"
        )));
    }
    Channel::unitary(cnot_matrix(d))
}

fn check_cap(d: usize, cap: usize) -> Result<()> {
    if d > cap {
        return Err(Error::DimensionCap { dim: d, cap });
    }
    Ok(())
}

/// `Delta_AB . (E (x) id_B) . U_CNOT^dag` on `d * d` dimensions.
pub fn conversion_channel<T: Scalar>(e: &Channel<T>) -> Result<Channel<T>> {
    let d = require_square(e)?;
    let u_dag = Channel::unitary(cnot_matrix::<T>(d.max(1)).adjoint())?;
    let inner = compose(&e.extend_with_identity(d, Side::Right), &u_dag)?;
    compose(&Channel::dephasing(d * d), &inner)
}

/// Pulls a measurement back through `stages`, applied right to left as a
/// channel (`stages[0]` acts last on states, so it is pulled back first).
fn pull_back_through<T: Scalar>(stages: &[&Channel<T>], m: Measurement<T>) -> Result<Measurement<T>> {
    stages.iter().try_fold(m, |acc, ch| pullback_povm(ch, &acc))
}

fn average_bound<T: Scalar>(povm: &Measurement<T>, d: usize) -> Result<(f64, Vec<f64>)> {
    let bounds = povm
        .elements()
        .iter()
        .map(|x| ere_lower_bound(x, (d, d)).map(|v| v.f64()))
        .collect::<Result<Vec<_>>>()?;
    let avg = bounds.iter().sum::<f64>() / (d * d) as f64;
    Ok((avg, bounds))
}

/// Certificate that the conversion channel's pulled-back basis measurement
/// carries `C(E)` worth of entanglement lower bound.
pub fn conversion_ent_lower_bound<T: Scalar>(e: &Channel<T>) -> Result<ConversionCertificate> {
    conversion_ent_lower_bound_capped(e, CONVERSION_DIM_CAP)
}

pub fn conversion_ent_lower_bound_capped<T: Scalar>(
    e: &Channel<T>,
    cap: usize,
) -> Result<ConversionCertificate> {
    let d = require_square(e)?;
    check_cap(d, cap)?;
    let u_dag = Channel::unitary(cnot_matrix::<T>(d).adjoint())?;
    let extended = e.extend_with_identity(d, Side::Right);
    let dephasing = Channel::dephasing(d * d);
    let pulled = pull_back_through(&[&dephasing, &extended, &u_dag], Measurement::basis(d * d))?;
    let (avg, per_element_bounds) = average_bound(&pulled, d)?;
    let cohering_power = measurement_cohering_power(e)?.f64();
    Ok(ConversionCertificate {
        cohering_power,
        avg_ere_lower_bound: avg,
        per_element_bounds,
        gap: (cohering_power - avg).abs(),
    })
}

/// Average entanglement lower bound of the basis measurement pulled back
/// through `Delta . K . (E (x) id) . L`. Lower-bounds the measurement
/// entangling power of that composite, so it never exceeds `C(E)`.
pub fn composite_ent_lower_bound<T: Scalar>(
    e: &Channel<T>,
    k: &Channel<T>,
    l: &Channel<T>,
) -> Result<T> {
    let d = require_square(e)?;
    for (name, ch) in [("K", k), ("L", l)] {
        if !ch.is_square() || ch.dim_in() != d * d {
            return Err(Error::PreconditionViolation(format!(
                "{name} must act on dimension {}",
                d * d
            )));
        }
    }
    let kc = k.classify();
    if !kc.dio {
        return Err(Error::PreconditionViolation("K is not DIO".into()));
    }
    let lc = l.classify();
    if !(lc.dio && lc.unital) {
        return Err(Error::PreconditionViolation("L is not a unital DIO".into()));
    }
    let extended = e.extend_with_identity(d, Side::Right);
    let dephasing = Channel::dephasing(d * d);
    let pulled = pull_back_through(&[&dephasing, k, &extended, l], Measurement::basis(d * d))?;
    let (avg, _) = average_bound(&pulled, d)?;
    Ok(T::c(avg))
}

/// Compares `C_g(E)` with `C(E^dag)` for a unital channel.
pub fn duality_check<T: Scalar>(e: &Channel<T>) -> Result<DualityCheck> {
    let d = require_square(e)?;
    let dev = e.unitality_deviation();
    if dev > T::TOL.completeness {
        return Err(Error::NotUnital { deviation: dev });
    }
    let adj = e.adjoint_channel()?;
    let c_g = state_cohering_power(e)?.f64();
    let c_adj = measurement_cohering_power(&adj)?.f64();
    let mut sum = 0.0;
    for i in 0..d {
        sum += relative_entropy_of_coherence(&e.apply(&Hermitian::basis_projector(i, d))?)?.f64();
    }
    let slack = 1e-8;
    Ok(DualityCheck {
        c_g,
        c_adj,
        c_adj_identity: sum / d as f64,
        sandwich_ok: c_g / d as f64 - slack <= c_adj && c_adj <= c_g + slack,
    })
}

/// Measurement channel made square by padding with zero-probability
/// outcomes up to `d`. Fails when the POVM has more outcomes than `d`.
pub fn embed_measurement_channel<T: Scalar>(m: &Measurement<T>) -> Result<Channel<T>> {
    if m.n() > m.dim() {
        return Err(Error::UnsupportedScale(format!(
            "{} outcomes do not fit a square channel on dimension {}",
            m.n(),
            m.dim()
        )));
    }
    measurement_as_channel(&m.padded(m.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named_examples, ExampleChannel};
    use approx::assert_abs_diff_eq;

    #[test]
    fn example_channel_powers() {
        let ex = named_examples::<f64>();
        let g = &ex[&ExampleChannel::G];
        let prep = &ex[&ExampleChannel::Prep];
        assert_abs_diff_eq!(measurement_cohering_power(g).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(state_cohering_power(g).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(measurement_cohering_power(prep).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(state_cohering_power(prep).unwrap(), 1.0, epsilon = 1e-12);
        let h = &ex[&ExampleChannel::Hadamard];
        assert_abs_diff_eq!(measurement_cohering_power(h).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(state_cohering_power(&Channel::<f64>::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn powers_need_square_channels() {
        let m = Measurement::<f64>::basis(2).padded(3);
        let ch = measurement_as_channel(&m).unwrap();
        assert!(matches!(
            measurement_cohering_power(&ch),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cnot_action() {
        let u = cnot_matrix::<f64>(2);
        // |10> -> |11>, |11> -> |10>, |00>, |01> fixed
        assert_eq!(u[(3, 2)], Complex::new(1.0, 0.0));
        assert_eq!(u[(2, 3)], Complex::new(1.0, 0.0));
        assert_eq!(u[(0, 0)], Complex::new(1.0, 0.0));
        assert_eq!(u[(1, 1)], Complex::new(1.0, 0.0));
        let u3 = cnot_matrix::<f64>(3);
        // |12> -> |10>
        assert_eq!(u3[(3, 5)], Complex::new(1.0, 0.0));
        let uu = &u3 * u3.adjoint();
        assert!(crate::scalar::max_abs_diff(&uu, &CMatrix::identity(9, 9)) < 1e-12);
        assert!(cnot_unitary::<f64>(1).is_err());
    }

    #[test]
    fn conversion_of_identity_and_dephasing() {
        let id = conversion_channel(&Channel::<f64>::identity(2)).unwrap();
        assert!(id.classify().cptp);
        let cert = conversion_ent_lower_bound(&Channel::<f64>::identity(2)).unwrap();
        assert!(cert.cohering_power.abs() < 1e-12 && cert.avg_ere_lower_bound.abs() < 1e-12);
        let cert = conversion_ent_lower_bound(&Channel::<f64>::dephasing(3)).unwrap();
        assert!(cert.gap <= CONVERSION_GAP_TOL && cert.cohering_power.abs() < 1e-12);
    }

    #[test]
    fn conversion_output_is_dephased() {
        let ex = named_examples::<f64>();
        let conv = conversion_channel(&ex[&ExampleChannel::G]).unwrap();
        let deph = compose(&Channel::dephasing(4), &conv).unwrap();
        assert!(deph.approx_eq(&conv));
    }

    #[test]
    fn certificate_for_g() {
        let ex = named_examples::<f64>();
        let cert = conversion_ent_lower_bound(&ex[&ExampleChannel::G]).unwrap();
        assert_abs_diff_eq!(cert.cohering_power, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.avg_ere_lower_bound, 1.0, epsilon = 1e-12);
        assert_eq!(cert.per_element_bounds.len(), 4);
        assert!(cert.gap <= CONVERSION_GAP_TOL);
    }

    #[test]
    fn stagewise_pullback_matches_built_channel() {
        let ex = named_examples::<f64>();
        let g = &ex[&ExampleChannel::G];
        let conv = conversion_channel(g).unwrap();
        let direct = pullback_povm(&conv, &Measurement::basis(4)).unwrap();
        let u_dag = Channel::unitary(cnot_matrix::<f64>(2).adjoint()).unwrap();
        let ext = g.extend_with_identity(2, Side::Right);
        let deph = Channel::dephasing(4);
        let staged = pull_back_through(&[&deph, &ext, &u_dag], Measurement::basis(4)).unwrap();
        assert!(direct.max_abs_diff(&staged) < 1e-12);
    }

    #[test]
    fn conversion_cap() {
        let e = Channel::<f64>::identity(7);
        assert!(matches!(
            conversion_ent_lower_bound(&e),
            Err(Error::DimensionCap { dim: 7, cap: 6 })
        ));
    }

    #[test]
    fn composite_checks_preconditions() {
        let ex = named_examples::<f64>();
        let g = &ex[&ExampleChannel::G];
        let id4 = Channel::identity(4);
        let v = composite_ent_lower_bound(g, &id4, &id4).unwrap();
        assert!(v <= 1.0 + 1e-8);
        let h2 = ex[&ExampleChannel::Hadamard].extend_with_identity(2, Side::Right);
        assert!(matches!(
            composite_ent_lower_bound(g, &h2, &id4),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            composite_ent_lower_bound(g, &id4, &h2),
            Err(Error::PreconditionViolation(_))
        ));
        // the CNOT itself is an admissible L and attains the bound
        let u_dag = Channel::unitary(cnot_matrix::<f64>(2).adjoint()).unwrap();
        let v = composite_ent_lower_bound(g, &id4, &u_dag).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn duality_examples() {
        let ex = named_examples::<f64>();
        let h = duality_check(&ex[&ExampleChannel::Hadamard]).unwrap();
        assert_abs_diff_eq!(h.c_g, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h.c_adj, 1.0, epsilon = 1e-12);
        assert!(h.sandwich_ok);
        let id = duality_check(&Channel::<f64>::identity(2)).unwrap();
        assert!(id.c_g.abs() < 1e-12 && id.c_adj.abs() < 1e-12 && id.sandwich_ok);
        assert!(matches!(
            duality_check(&ex[&ExampleChannel::Prep]),
            Err(Error::NotUnital { .. })
        ));
    }

    #[test]
    fn embedding_pads_or_rejects() {
        let m = Measurement::<f64>::basis(2);
        let big = Measurement::new(vec![
            Hermitian::basis_projector(0, 3),
            Hermitian::basis_projector(1, 3),
            Hermitian::basis_projector(2, 3),
        ])
        .unwrap();
        assert!(embed_measurement_channel(&m).unwrap().is_square());
        let merged = crate::qobjects::classical_postprocess(
            &big,
            &crate::qobjects::Stochastic::new(nalgebra::DMatrix::from_row_slice(
                2,
                3,
                &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ))
            .unwrap(),
        )
        .unwrap();
        let ch = embed_measurement_channel(&merged).unwrap();
        assert_eq!((ch.dim_in(), ch.dim_out()), (3, 3));
        let wide = Measurement::new(vec![
            Hermitian::<f64>::identity(2).scaled(0.25),
            Hermitian::identity(2).scaled(0.25),
            Hermitian::identity(2).scaled(0.5),
        ])
        .unwrap();
        assert!(matches!(
            embed_measurement_channel(&wide),
            Err(Error::UnsupportedScale(_))
        ));
    }
}
