use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::filter::{all_finite, AdaptiveFilter, Step};

/// Default regularizer added to `||x(n)||^2`.
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Normalized LMS: `h <- h + mu / (||x(n)||^2 + eps) * x(n) * e(n)`.
///
/// When the denominator is exactly zero (silent history with `eps = 0`) the
/// update is skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Nlms {
    taps: Vec<f64>,
    mu: f64,
    epsilon: f64,
    x_line: DelayLine,
    n: u64,
}

impl Nlms {
    pub fn new(order: usize, mu: f64, epsilon: f64) -> Result<Self> {
        super::check_order(order)?;
        super::check_mu(mu)?;
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::config(format!(
                "epsilon out of range: {epsilon} (need epsilon >= 0)"
            )));
        }
        Ok(Self {
            taps: vec![0.0; order],
            mu,
            epsilon,
            x_line: DelayLine::new(order),
            n: 0,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn input(&self) -> &DelayLine {
        &self.x_line
    }
}

impl AdaptiveFilter for Nlms {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step> {
        self.x_line.push(x_new);
        let y = self.x_line.dot(&self.taps);
        let e = d_new - y;
        let energy: f64 = self.x_line.window(0, self.taps.len()).map(|v| v * v).sum();
        let denom = energy + self.epsilon;
        if denom > 0.0 {
            let scale = self.mu * e / denom;
            for (k, h) in self.taps.iter_mut().enumerate() {
                *h += scale * self.x_line.get(k);
            }
        }
        let sample = self.n;
        self.n += 1;
        if !all_finite(&self.taps) {
            return Err(Error::NumericalDivergence { sample });
        }
        Ok(Step { e, y })
    }

    fn taps(&self) -> &[f64] {
        &self.taps
    }

    fn name(&self) -> &'static str {
        "nlms"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::Lms;
    use proptest::prelude::*;

    #[test]
    fn two_tap_hand_example() {
        let mut f = Nlms::new(2, 0.5, 0.0).unwrap();
        f.step(1.0, 0.0).unwrap();
        let s = f.step(1.0, 1.0).unwrap();
        assert_eq!(s.e, 1.0);
        assert_eq!(f.taps(), &[0.25, 0.25]);
    }

    #[test]
    fn silent_history_skips_update() {
        let mut f = Nlms::new(3, 0.5, 0.0).unwrap();
        for _ in 0..5 {
            let s = f.step(0.0, 2.0).unwrap();
            assert_eq!(s.e, 2.0);
        }
        assert_eq!(f.taps(), &[0.0; 3]);
    }

    #[test]
    fn rejects_negative_epsilon() {
        assert!(Nlms::new(2, 0.1, -1.0).is_err());
    }

    proptest! {
        // NLMS with mu_n = c * (||x||^2 + eps) takes the same step as LMS with mu = c.
        #[test]
        fn single_step_matches_lms(
            history in prop::collection::vec(-1.0f64..1.0, 4),
            d_new in -1.0f64..1.0,
            c in 0.01f64..1.0,
        ) {
            let eps = 1e-3;
            let mut lms = Lms::new(4, c).unwrap();
            for &x in &history[..3] {
                lms.step(x, 0.0).unwrap();
            }
            let before = lms.clone();
            let energy: f64 = history.iter().map(|v| v * v).sum();
            let mut nlms = Nlms::new(4, c * (energy + eps), eps).unwrap();
            nlms.taps.copy_from_slice(before.taps());
            for &x in &history[..3] {
                nlms.x_line.push(x);
            }
            let a = lms.step(history[3], d_new).unwrap();
            let b = nlms.step(history[3], d_new).unwrap();
            prop_assert_eq!(a.e, b.e);
            for (p, q) in lms.taps().iter().zip(nlms.taps()) {
                prop_assert!((p - q).abs() <= 1e-12);
            }
        }
    }
}
