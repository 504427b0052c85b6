use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::filter::{all_finite, AdaptiveFilter, Step};

pub const DEFAULT_LAMBDA: f64 = 0.99;
pub const DEFAULT_DELTA: f64 = 0.01;

const MIN_DENOMINATOR: f64 = 1e-300;

/// Exponentially weighted recursive least squares.
///
/// Keeps `P(n)`, the inverse of `C(n) = lambda * C(n-1) + x(n) x(n)^T` with
/// `C(0) = delta * I`, through the matrix inversion lemma:
///
/// ```text
/// g    = P(n-1) x / (lambda + x^T P(n-1) x)
/// P(n) = (P(n-1) - g x^T P(n-1)) / lambda
/// h    = h + g e
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Rls {
    taps: Vec<f64>,
    lambda: f64,
    delta: f64,
    /// Row-major `M x M`.
    p: Vec<f64>,
    x_line: DelayLine,
    px: Vec<f64>,
    n: u64,
}

impl Rls {
    pub fn new(order: usize, lambda: f64, delta: f64) -> Result<Self> {
        super::check_order(order)?;
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::config(format!(
                "lambda out of range: {lambda} (need 0 < lambda <= 1)"
            )));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::config(format!(
                "delta out of range: {delta} (need delta > 0)"
            )));
        }
        let mut p = vec![0.0; order * order];
        for k in 0..order {
            p[k * order + k] = 1.0 / delta;
        }
        Ok(Self {
            taps: vec![0.0; order],
            lambda,
            delta,
            p,
            x_line: DelayLine::new(order),
            px: vec![0.0; order],
            n: 0,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Current inverse autocorrelation estimate, row-major.
    pub fn p_matrix(&self) -> &[f64] {
        &self.p
    }

    pub fn input(&self) -> &DelayLine {
        &self.x_line
    }
}

impl AdaptiveFilter for Rls {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step> {
        let m = self.taps.len();
        let sample = self.n;
        self.n += 1;
        self.x_line.push(x_new);
        let x = &self.x_line;

        for (k, px) in self.px.iter_mut().enumerate() {
            *px = (0..m).map(|j| self.p[k * m + j] * x.get(j)).sum();
        }
        let quad: f64 = (0..m).map(|k| x.get(k) * self.px[k]).sum();
        let denom = self.lambda + quad;
        if !denom.is_finite() {
            return Err(Error::NumericalDivergence { sample });
        }
        if denom < MIN_DENOMINATOR {
            return Err(Error::DenominatorUnderflow { sample });
        }

        let y = x.dot(&self.taps);
        let e = d_new - y;
        // g = px / denom; P is symmetric so x^T P = px^T.
        for k in 0..m {
            let g = self.px[k] / denom;
            self.taps[k] += g * e;
            for j in 0..m {
                self.p[k * m + j] = (self.p[k * m + j] - g * self.px[j]) / self.lambda;
            }
        }
        for k in 0..m {
            for j in k + 1..m {
                let avg = 0.5 * (self.p[k * m + j] + self.p[j * m + k]);
                self.p[k * m + j] = avg;
                self.p[j * m + k] = avg;
            }
        }

        if !all_finite(&self.taps) || !all_finite(&self.p) {
            return Err(Error::NumericalDivergence { sample });
        }
        Ok(Step { e, y })
    }

    fn taps(&self) -> &[f64] {
        &self.taps
    }

    fn name(&self) -> &'static str {
        "rls"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_regressor_scales_p() {
        let mut f = Rls::new(2, 0.5, 1.0).unwrap();
        let s = f.step(0.0, 1.5).unwrap();
        assert_eq!(s.e, 1.5);
        assert_eq!(f.taps(), &[0.0, 0.0]);
        assert_eq!(f.p_matrix(), &[2.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn scalar_gain_hand_example() {
        let mut f = Rls::new(1, 1.0, 1.0).unwrap();
        let s = f.step(1.0, 1.0).unwrap();
        assert_eq!(s.e, 1.0);
        assert_eq!(f.taps(), &[0.5]);
        assert_eq!(f.p_matrix(), &[0.5]);
    }

    #[test]
    fn lambda_validation() {
        assert!(Rls::new(2, 1.5, 0.01)
            .unwrap_err()
            .to_string()
            .contains("lambda out of range"));
        assert!(Rls::new(2, 0.0, 0.01).is_err());
        assert!(Rls::new(2, 1.0, 0.01).is_ok());
        assert!(Rls::new(2, 0.9, 0.0).is_err());
    }

    #[test]
    fn identifies_noiseless_system() {
        use rand::{Rng, SeedableRng};
        let planted = [0.8, -0.4, 0.25, 0.1];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // With lambda = 1 the estimate is biased by the initial delta * I term
        // (about delta / N); a small delta keeps that bias below 1e-6.
        let mut f = Rls::new(4, 1.0, 1e-6).unwrap();
        let mut hist = DelayLine::new(4);
        for _ in 0..500 {
            let x: f64 = rng.random_range(-1.0..1.0);
            hist.push(x);
            f.step(x, hist.dot(&planted)).unwrap();
        }
        let err: f64 = f
            .taps()
            .iter()
            .zip(&planted)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-6, "err = {err}");
    }

    #[test]
    fn p_stays_symmetric() {
        let mut f = Rls::new(3, 0.95, 0.01).unwrap();
        for t in 0..300 {
            let x = ((t * 37 % 101) as f64 / 50.0) - 1.0;
            f.step(x, 0.3 * x).unwrap();
        }
        let p = f.p_matrix();
        for k in 0..3 {
            for j in 0..3 {
                assert_eq!(p[k * 3 + j], p[j * 3 + k]);
            }
        }
    }
}
