use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::filter::{all_finite, AdaptiveFilter, Step};

/// Least mean squares filter: `h <- h + mu * x(n) * e(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lms {
    taps: Vec<f64>,
    mu: f64,
    x_line: DelayLine,
    n: u64,
}

impl Lms {
    pub fn new(order: usize, mu: f64) -> Result<Self> {
        super::check_order(order)?;
        super::check_mu(mu)?;
        Ok(Self {
            taps: vec![0.0; order],
            mu,
            x_line: DelayLine::new(order),
            n: 0,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn input(&self) -> &DelayLine {
        &self.x_line
    }
}

impl AdaptiveFilter for Lms {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step> {
        self.x_line.push(x_new);
        let y = self.x_line.dot(&self.taps);
        let e = d_new - y;
        let scale = self.mu * e;
        for (k, h) in self.taps.iter_mut().enumerate() {
            *h += scale * self.x_line.get(k);
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
        "lms"
    }
}
