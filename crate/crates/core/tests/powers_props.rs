use mrpower_core::generators::{
    haar_unitary, named_examples, random_channel, random_dio, random_povm, ChannelKind,
    ExampleChannel, SeededRng,
};
use mrpower_core::powers::{
    conversion_channel, conversion_ent_lower_bound, duality_check, embed_measurement_channel,
    measurement_cohering_power, state_cohering_power,
};
use mrpower_core::qobjects::{compose, pullback_povm, Channel, Measurement};
use mrpower_core::resources::{ere_lower_bound, measurement_coherence};

fn general(d: usize, rng: &mut SeededRng) -> Channel<f64> {
    let rank = 1 + rng.index(d * d);
    random_channel(d, rank, ChannelKind::General, rng).unwrap()
}

#[test]
fn cohering_power_is_nonnegative_and_faithful() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(400, t);
        let d = 2 + rng.index(2);
        let e = general(d, &mut rng);
        let c = measurement_cohering_power(&e).unwrap();
        assert!(c >= -1e-8);
        assert_eq!(c > 1e-8, !e.classify().dio);
        let k = random_dio::<f64>(d, t % 2 == 0, &mut rng).unwrap();
        assert!(measurement_cohering_power(&k).unwrap().abs() <= 1e-8);
    }
}

#[test]
fn cohering_power_is_monotone_under_dio_sandwiches() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(401, t);
        let d = 2 + rng.index(2);
        let e = general(d, &mut rng);
        let k = random_dio::<f64>(d, false, &mut rng).unwrap();
        let l = random_dio::<f64>(d, true, &mut rng).unwrap();
        let lhs = measurement_cohering_power(&compose(&k, &compose(&e, &l).unwrap()).unwrap()).unwrap();
        assert!(lhs <= measurement_cohering_power(&e).unwrap() + 1e-8);
    }
}

#[test]
fn cohering_power_is_convex() {
    for t in 0..20 {
        let mut rng = SeededRng::for_trial(402, t);
        let d = 2 + rng.index(2);
        let (e, g) = (general(d, &mut rng), general(d, &mut rng));
        let p = rng.uniform();
        let mix = Channel::mixture(p, &e, &g).unwrap();
        let lhs = measurement_cohering_power(&mix).unwrap();
        let rhs = p * measurement_cohering_power(&e).unwrap()
            + (1.0 - p) * measurement_cohering_power(&g).unwrap();
        assert!(lhs <= rhs + 1e-8);
    }
}

#[test]
fn permutations_leave_cohering_power_unchanged() {
    for t in 0..50 {
        let mut rng = SeededRng::for_trial(403, t);
        let d = 2 + rng.index(3);
        let e = general(d, &mut rng);
        let p = Channel::permutation(&rng.permutation(d)).unwrap();
        let q = Channel::permutation(&rng.permutation(d)).unwrap();
        let pe = compose(&p, &compose(&e, &q).unwrap()).unwrap();
        let diff = measurement_cohering_power(&pe).unwrap() - measurement_cohering_power(&e).unwrap();
        assert!(diff.abs() < 1e-10);
    }
}

#[test]
fn measurement_channels_have_power_equal_to_their_coherence() {
    for t in 0..100 {
        let mut rng = SeededRng::for_trial(404, t);
        let d = 2 + rng.index(3);
        let n = 2 + rng.index(d - 1);
        let m = random_povm::<f64>(d, n, false, &mut rng).unwrap();
        let power = measurement_cohering_power(&embed_measurement_channel(&m).unwrap()).unwrap();
        assert!((power - measurement_coherence(&m).unwrap()).abs() < 1e-9);
    }
}

/// Both sides of the conversion identity from first principles: build the
/// conversion channel, pull back the basis measurement, bound each element.
fn conversion_sides(e: &Channel<f64>) -> (f64, f64) {
    let d = e.dim_in();
    let conv = conversion_channel(e).unwrap();
    let pulled = pullback_povm(&conv, &Measurement::basis(d * d)).unwrap();
    let avg = pulled
        .elements()
        .iter()
        .map(|x| ere_lower_bound(x, (d, d)).unwrap())
        .sum::<f64>()
        / (d * d) as f64;
    (measurement_cohering_power(e).unwrap(), avg)
}

#[test]
fn conversion_equality_on_random_channels() {
    for t in 0..200 {
        let mut rng = SeededRng::for_trial(405, t);
        let d = 2 + (t as usize) % 2;
        let e = if t % 4 < 2 {
            Channel::unitary(haar_unitary::<f64>(d, &mut rng)).unwrap()
        } else {
            general(d, &mut rng)
        };
        let cert = conversion_ent_lower_bound(&e).unwrap();
        assert!(cert.gap <= 1e-9, "trial {t}: gap {}", cert.gap);
        if t % 10 == 0 {
            let (c, avg) = conversion_sides(&e);
            assert!((c - avg).abs() <= 1e-9);
            assert!((avg - cert.avg_ere_lower_bound).abs() <= 1e-10);
        }
    }
}

#[test]
fn dio_channels_convert_to_nothing() {
    for t in 0..20 {
        let mut rng = SeededRng::for_trial(406, t);
        let d = 2 + rng.index(2);
        let k = random_dio::<f64>(d, t % 2 == 1, &mut rng).unwrap();
        let cert = conversion_ent_lower_bound(&k).unwrap();
        assert!(cert.cohering_power.abs() < 1e-9 && cert.avg_ere_lower_bound.abs() < 1e-9);
    }
}

#[test]
fn duality_sandwich_on_random_unital_channels() {
    for t in 0..200 {
        let mut rng = SeededRng::for_trial(407, t);
        let d = 2 + (t as usize) % 2;
        let rank = 1 + rng.index(d * d);
        let e = random_channel::<f64>(d, rank, ChannelKind::Unital, &mut rng).unwrap();
        let r = duality_check(&e).unwrap();
        assert!(r.sandwich_ok, "trial {t}: {r:?}");
        assert!((r.c_adj - r.c_adj_identity).abs() <= 1e-10);
    }
}

#[test]
fn example_channel_values() {
    let ex = named_examples::<f64>();
    let pairs = [
        (ExampleChannel::G, 1.0, 0.0),
        (ExampleChannel::Prep, 0.0, 1.0),
        (ExampleChannel::Hadamard, 1.0, 1.0),
        (ExampleChannel::QubitDephase, 0.0, 0.0),
    ];
    for (name, c, cg) in pairs {
        assert!((measurement_cohering_power(&ex[&name]).unwrap() - c).abs() < 1e-9, "{name:?}");
        assert!((state_cohering_power(&ex[&name]).unwrap() - cg).abs() < 1e-9, "{name:?}");
    }
}

#[test]
fn single_precision_pipeline() {
    let ex = named_examples::<f32>();
    let c = measurement_cohering_power(&ex[&ExampleChannel::G]).unwrap();
    assert!((c - 1.0).abs() < 1e-4);
    let cert = conversion_ent_lower_bound(&ex[&ExampleChannel::G]).unwrap();
    assert!(cert.gap < 1e-4);
}
