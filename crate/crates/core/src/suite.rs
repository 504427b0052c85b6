//! Randomized equivalence suites pitting the fast recursions against the
//! direct references in [`crate::oracle`].
//!
//! Each suite is deterministic in its seed and reports the worst deviation it
//! saw next to the tolerance it is held to.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cache::{cache_oracle, InnerProductCache};
use crate::classic::{Nlms, Rls};
use crate::delay::DelayLine;
use crate::fap::{Fap, FapConfig};
use crate::filter::AdaptiveFilter;
use crate::oracle::{self, NaiveFap};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Number of comparisons that went into `max_deviation`.
    pub checks: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<18} max deviation {:.3e} (tolerance {:.0e}, {} checks)",
            self.name, self.max_deviation, self.tolerance, self.checks
        )
    }
}

/// Deliberate corruption of a fast path, for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Perturb one Gram entry of the recursive cache before each comparison.
    Cache,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-1.0..=1.0)
}

/// Recursive inner-product cache against direct summation after every sample.
///
/// Entries are compared relative to `max(|oracle|, 1)`: a window sum of `L`
/// unit-scale products has magnitude ~1, and off-diagonal sums that land near
/// zero would otherwise turn rounding noise into huge relative errors.
pub fn cache_equivalence(
    samples: usize,
    order: usize,
    window: usize,
    seed: u64,
    fault: Fault,
) -> SuiteReport {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = InnerProductCache::new(order, window).expect("window must exceed order");
    let mut x = DelayLine::new(cache.input_capacity());
    let mut d = DelayLine::new(cache.desired_capacity());
    let mut worst = 0.0f64;
    for _ in 0..samples {
        x.push(uniform(&mut rng));
        d.push(uniform(&mut rng));
        cache.step(&x, &d);
        let reference = cache_oracle(&x, &d, order, window).expect("validated above");
        let dev = if fault == Fault::Cache {
            let mut bad = cache.clone();
            bad.perturb_for_testing(0, 0, 1e-6);
            bad.max_deviation(&reference, TOL, TOL)
        } else {
            cache.max_deviation(&reference, TOL, TOL)
        };
        worst = worst.max(dev);
    }
    SuiteReport {
        name: "cache",
        max_deviation: worst,
        tolerance: TOL,
        checks: samples as u64,
    }
}

/// Random small FAP configurations: tap trajectory of the fast filter against
/// the materialized implementation, compared after every sample.
pub fn fap_equivalence(configs: usize, samples: usize, seed: u64) -> SuiteReport {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for _ in 0..configs {
        let order = rng.random_range(1..=4);
        let cfg = FapConfig {
            window: rng.random_range(order + 1..=8),
            iterations: rng.random_range(1..=4),
            mu: rng.random_range(0.05..=1.0),
            ..FapConfig::new(order)
        };
        let mut fast = Fap::new(cfg).expect("valid random config");
        let mut naive = NaiveFap::new(cfg);
        for _ in 0..samples {
            let (xs, ds) = (uniform(&mut rng), uniform(&mut rng));
            let e_fast = fast.step(xs, ds).expect("bounded input cannot diverge").e;
            let (e_naive, _) = naive.step(xs, ds);
            worst = worst.max((e_fast - e_naive).abs());
            for (a, b) in fast.taps().iter().zip(naive.taps()) {
                worst = worst.max((a - b).abs());
            }
            checks += 1;
        }
    }
    SuiteReport {
        name: "fap-vs-naive",
        max_deviation: worst,
        tolerance: TOL,
        checks,
    }
}

/// Maintained RLS inverse against a direct inverse of the weighted
/// autocorrelation sum, for orders 1..=4 and each `lambda`, after every step.
pub fn rls_equivalence(steps: usize, lambdas: &[f64], seed: u64) -> SuiteReport {
    const TOL: f64 = 1e-6;
    const DELTA: f64 = 0.01;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for order in 1..=4 {
        for &lambda in lambdas {
            let mut rls = Rls::new(order, lambda, DELTA).expect("lambda in range");
            let mut regressors = Vec::with_capacity(steps);
            for _ in 0..steps {
                rls.step(uniform(&mut rng), uniform(&mut rng))
                    .expect("bounded input");
                regressors.push(rls.input().window(0, order).collect::<Vec<_>>());
                let c = oracle::weighted_autocorrelation(&regressors, lambda, DELTA, order);
                let direct = oracle::invert(&c, order).expect("regularized sum is invertible");
                worst = worst.max(oracle::relative_max_deviation(rls.p_matrix(), &direct));
                checks += 1;
            }
        }
    }
    SuiteReport {
        name: "rls-inverse",
        max_deviation: worst,
        tolerance: TOL,
        checks,
    }
}

/// With `mu = 1`, every update leaves the residual orthogonal to the column it
/// used. The inner product is formed from the explicit residual.
pub fn orthogonality(samples: usize, seed: u64) -> SuiteReport {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = FapConfig {
        mu: 1.0,
        ..FapConfig::new(8)
    };
    let mut fap = Fap::new(cfg).expect("valid config");
    let mut worst = 0.0f64;
    let mut checks = 0;
    for _ in 0..samples {
        fap.refresh(uniform(&mut rng), uniform(&mut rng));
        for iteration in 0..cfg.iterations {
            let Some(rec) = fap.select(iteration) else {
                break;
            };
            fap.apply(&rec).expect("bounded input");
            let cross = oracle::materialized_residual_cross(
                fap.input(),
                fap.desired(),
                fap.taps(),
                cfg.window,
            );
            worst = worst.max(cross[rec.index].abs());
            checks += 1;
        }
    }
    SuiteReport {
        name: "orthogonality",
        max_deviation: worst,
        tolerance: TOL,
        checks,
    }
}

/// NLMS with `eps = 0` on `(x, d)` and `(scale x, scale d)`: tap trajectories
/// must coincide.
pub fn nlms_scale_invariance(samples: usize, scale: f64, seed: u64) -> SuiteReport {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = Nlms::new(8, 0.5, 0.0).expect("valid config");
    let mut scaled = base.clone();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (xs, ds) = (uniform(&mut rng), uniform(&mut rng));
        base.step(xs, ds).expect("bounded input");
        scaled.step(scale * xs, scale * ds).expect("bounded input");
        for (a, b) in base.taps().iter().zip(scaled.taps()) {
            worst = worst.max((a - b).abs());
        }
    }
    SuiteReport {
        name: "nlms-scale",
        max_deviation: worst,
        tolerance: TOL,
        checks: samples as u64,
    }
}
