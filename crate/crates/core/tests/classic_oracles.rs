use fapanc::oracle::{invert, relative_max_deviation, weighted_autocorrelation};
use fapanc::{AdaptiveFilter, Lms, Nlms, Rls};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noise(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[test]
fn rls_inverse_matches_direct_inverse() {
    for lambda in [0.9, 0.99, 1.0] {
        for order in 1..=4 {
            let mut rls = Rls::new(order, lambda, 0.05).unwrap();
            let mut regressors = Vec::new();
            for (&x, &d) in noise(order as u64, 200).iter().zip(&noise(99, 200)) {
                rls.step(x, d).unwrap();
                regressors.push(rls.input().window(0, order).collect::<Vec<_>>());
            }
            let c = weighted_autocorrelation(&regressors, lambda, 0.05, order);
            let direct = invert(&c, order).unwrap();
            let dev = relative_max_deviation(rls.p_matrix(), &direct);
            assert!(dev < 1e-6, "lambda {lambda}, order {order}: {dev}");
        }
    }
}

#[test]
fn nlms_is_scale_invariant_without_regularizer() {
    let mut a = Nlms::new(6, 0.4, 0.0).unwrap();
    let mut b = a.clone();
    for (&x, &d) in noise(1, 10_000).iter().zip(&noise(2, 10_000)) {
        a.step(x, d).unwrap();
        b.step(1e3 * x, 1e3 * d).unwrap();
    }
    for (p, q) in a.taps().iter().zip(b.taps()) {
        assert!((p - q).abs() < 1e-9);
    }
}

#[test]
fn lms_is_not_scale_invariant() {
    let mut a = Lms::new(4, 0.01).unwrap();
    let mut b = a.clone();
    for (&x, &d) in noise(3, 100).iter().zip(&noise(4, 100)) {
        a.step(x, d).unwrap();
        b.step(2.0 * x, 2.0 * d).unwrap();
    }
    assert_ne!(a.taps(), b.taps());
}
