use mrpower_core::generators::{
    random_channel, random_density, random_dio, random_hermitian, random_povm, random_stochastic,
    ChannelKind, SeededRng,
};
use mrpower_core::matcore::{dephase, tensor_product, Hermitian};
use mrpower_core::qobjects::{
    classical_postprocess, compose, measurement_as_channel, pullback_povm, Channel, Measurement,
    Side,
};
use mrpower_core::resources::is_incoherent_measurement;

type H = Hermitian<f64>;

fn general(d: usize, rng: &mut SeededRng) -> Channel<f64> {
    let rank = 1 + rng.index(d * d);
    random_channel(d, rank, ChannelKind::General, rng).unwrap()
}

#[test]
fn choi_round_trip() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(200, t);
        let d = 2 + (t as usize) % 2;
        let e = general(d, &mut rng);
        let rebuilt = Channel::from_choi(e.choi(), d, d).unwrap();
        assert!(rebuilt.choi().max_abs_diff(e.choi()) < 1e-9);
    }
}

#[test]
fn adjoint_duality() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(201, t);
        let d = 2 + rng.index(2);
        let e = general(d, &mut rng);
        let x = random_hermitian::<f64>(d, &mut rng);
        let y = random_hermitian::<f64>(d, &mut rng);
        let lhs = x.inner(&e.apply(&y).unwrap());
        let rhs = e.adjoint_apply(&x).unwrap().inner(&y);
        assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn adjoint_is_unital_and_channels_preserve_trace() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(202, t);
        let d = 2 + rng.index(3);
        let e = general(d, &mut rng);
        assert!(e.adjoint_apply(&H::identity(d)).unwrap().max_abs_diff(&H::identity(d)) < 1e-9);
        let rho = random_density::<f64>(d, &mut rng);
        assert!((e.apply(&rho).unwrap().trace() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn composition_matches_sequential_application() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(203, t);
        let d = 2 + rng.index(2);
        let (e1, e2) = (general(d, &mut rng), general(d, &mut rng));
        let rho = random_density::<f64>(d, &mut rng);
        let lhs = compose(&e2, &e1).unwrap().apply(&rho).unwrap();
        let rhs = e2.apply(&e1.apply(&rho).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}

#[test]
fn extension_acts_on_one_factor() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(204, t);
        let (d, anc) = (2 + rng.index(2), 2 + rng.index(2));
        let e = general(d, &mut rng);
        let x = random_hermitian::<f64>(d, &mut rng);
        let y = random_hermitian::<f64>(anc, &mut rng);
        let right = e.extend_with_identity(anc, Side::Right);
        let lhs = right.apply(&tensor_product(&x, &y)).unwrap();
        assert!(lhs.max_abs_diff(&tensor_product(&e.apply(&x).unwrap(), &y)) < 1e-12);
        let left = e.extend_with_identity(anc, Side::Left);
        let lhs = left.apply(&tensor_product(&y, &x)).unwrap();
        assert!(lhs.max_abs_diff(&tensor_product(&y, &e.apply(&x).unwrap())) < 1e-12);
        assert!(right.completeness_deviation() < 1e-9 && right.classify().cptp);
    }
}

#[test]
fn dephasing_after_anything_is_dio() {
    for t in 0..30 {
        let mut rng = SeededRng::for_trial(205, t);
        let d = 2 + rng.index(2);
        let e = general(d, &mut rng);
        let ed = compose(&e, &Channel::dephasing(d)).unwrap();
        assert!(ed.classify().dio);
    }
}

#[test]
fn incoherent_measurements_only_see_populations() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(206, t);
        let d = 2 + rng.index(3);
        let m = random_povm::<f64>(d, 2 + rng.index(4), true, &mut rng).unwrap();
        let rho = random_density::<f64>(d, &mut rng);
        let p = m.probabilities(&rho).unwrap();
        let q = m.probabilities(&dephase(&rho)).unwrap();
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn dio_pullback_keeps_measurements_incoherent() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(207, t);
        let d = 2 + rng.index(2);
        let e = random_dio::<f64>(d, t % 2 == 0, &mut rng).unwrap();
        let m = random_povm::<f64>(d, 2 + rng.index(3), true, &mut rng).unwrap();
        assert!(is_incoherent_measurement(&pullback_povm(&e, &m).unwrap(), 1e-9));
    }
}

#[test]
fn pullback_is_the_heisenberg_picture() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(208, t);
        let d = 2 + rng.index(2);
        let e = general(d, &mut rng);
        let m = random_povm::<f64>(d, 3, false, &mut rng).unwrap();
        let rho = random_density::<f64>(d, &mut rng);
        let pulled = pullback_povm(&e, &m).unwrap();
        let lhs = pulled.probabilities(&rho).unwrap();
        let rhs = m.probabilities(&e.apply(&rho).unwrap()).unwrap();
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
        // the pulled-back POVM is a valid POVM
        Measurement::new(pulled.elements().to_vec()).unwrap();
    }
}

#[test]
fn postprocessing_preserves_completeness() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(209, t);
        let d = 2 + rng.index(3);
        let n = 2 + rng.index(3);
        let m = random_povm::<f64>(d, n, false, &mut rng).unwrap();
        let s = random_stochastic::<f64>(1 + rng.index(4), n, &mut rng);
        let out = classical_postprocess(&m, &s).unwrap();
        assert!(out.completeness_deviation() < 1e-9);
    }
}

#[test]
fn measurement_channels_output_diagonal_states() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(210, t);
        let d = 2 + rng.index(2);
        let m = random_povm::<f64>(d, 2 + rng.index(3), false, &mut rng).unwrap();
        let ch = measurement_as_channel(&m).unwrap();
        let out = ch.apply(&random_density::<f64>(d, &mut rng)).unwrap();
        assert!(out.off_diagonal_max() < 1e-12);
        // basis measurement coincides with dephasing
        let rho = random_density::<f64>(d, &mut rng);
        let b = measurement_as_channel(&Measurement::basis(d)).unwrap();
        assert!(b.apply(&rho).unwrap().max_abs_diff(&dephase(&rho)) < 1e-12);
    }
}
