//! Sliding-window inner products between the filter's data columns.
//!
//! For a filter of order `M` and window length `L`, column `j` at time `n` is
//! the length-`L` vector `x_j(n) = [x(n-j), x(n-j-1), ..., x(n-j-L+1)]` and the
//! desired vector is `d(n) = [d(n), ..., d(n-L+1)]`. The cache keeps the Gram
//! matrix `<x_k(n), x_j(n)>` and the cross vector `<d(n), x_j(n)>` up to date
//! with one add and one subtract per entry per sample, without ever forming
//! the `L x M` data matrix.

use crate::delay::DelayLine;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductCache {
    order: usize,
    window: usize,
    /// Row-major `order x order`, kept exactly symmetric.
    gram: Vec<f64>,
    cross: Vec<f64>,
}

impl InnerProductCache {
    /// An all-zero cache, which is exact for zero-padded (silent) history.
    pub fn new(order: usize, window: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::config("filter order must be at least 1"));
        }
        if window <= order {
            return Err(Error::config(format!(
                "window length L={window} must exceed filter order M={order}"
            )));
        }
        Ok(Self {
            order,
            window,
            gram: vec![0.0; order * order],
            cross: vec![0.0; order],
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// History an input line must retain for [`step`](Self::step).
    pub fn input_capacity(&self) -> usize {
        self.order + self.window
    }

    /// History a desired-signal line must retain for [`step`](Self::step).
    pub fn desired_capacity(&self) -> usize {
        self.window + 1
    }

    #[inline]
    pub fn gram(&self, k: usize, j: usize) -> f64 {
        self.gram[k * self.order + j]
    }

    pub fn gram_row(&self, k: usize) -> &[f64] {
        &self.gram[k * self.order..(k + 1) * self.order]
    }

    pub fn gram_matrix(&self) -> &[f64] {
        &self.gram
    }

    pub fn cross(&self) -> &[f64] {
        &self.cross
    }

    /// Squared column norm `||x_j(n)||^2`, the Gram diagonal.
    #[inline]
    pub fn norm_sq(&self, j: usize) -> f64 {
        self.gram(j, j)
    }

    /// Advances every inner product by one sample.
    ///
    /// Both lines must already hold the new samples `x(n)` and `d(n)`; the
    /// sample leaving the window is read at lag `L` (and `L + j` for column `j`).
    pub fn step(&mut self, x: &DelayLine, d: &DelayLine) {
        let (m, l) = (self.order, self.window);
        let d_new = d.get(0);
        let d_old = d.get(l);
        for j in 0..m {
            self.cross[j] += d_new * x.get(j) - d_old * x.get(j + l);
        }
        for k in 0..m {
            let (xk_new, xk_old) = (x.get(k), x.get(k + l));
            for j in k..m {
                let v = self.gram[k * m + j] + xk_new * x.get(j) - xk_old * x.get(j + l);
                self.gram[k * m + j] = v;
                self.gram[j * m + k] = v;
            }
        }
    }

    pub fn reset(&mut self) {
        self.gram.iter_mut().for_each(|v| *v = 0.0);
        self.cross.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Adds `delta` to one Gram entry (and its mirror). Only for exercising
    /// the equivalence checks.
    #[doc(hidden)]
    pub fn perturb_for_testing(&mut self, k: usize, j: usize, delta: f64) {
        let m = self.order;
        self.gram[k * m + j] += delta;
        if k != j {
            self.gram[j * m + k] += delta;
        }
    }

    /// Largest entry-wise deviation from `reference`, measured as
    /// `|a - b| / max(|b|, abs_floor / rel_tol)`, so that a result `<= rel_tol`
    /// means every entry is within `rel_tol` relative or `abs_floor` absolute.
    pub fn max_deviation(&self, reference: &Self, rel_tol: f64, abs_floor: f64) -> f64 {
        assert_eq!(self.order, reference.order);
        let scale_floor = abs_floor / rel_tol;
        self.gram
            .iter()
            .zip(&reference.gram)
            .chain(self.cross.iter().zip(&reference.cross))
            .map(|(a, b)| (a - b).abs() / b.abs().max(scale_floor))
            .fold(0.0, f64::max)
    }
}

/// Builds the cache by direct summation over explicitly formed windows.
///
/// This is the reference the recursive [`InnerProductCache::step`] is checked
/// against; it costs `O(M^2 L)` per call.
pub fn cache_oracle(
    x: &DelayLine,
    d: &DelayLine,
    order: usize,
    window: usize,
) -> Result<InnerProductCache> {
    let mut cache = InnerProductCache::new(order, window)?;
    let columns: Vec<Vec<f64>> = (0..order).map(|j| x.window(j, window).collect()).collect();
    let desired: Vec<f64> = d.window(0, window).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    for j in 0..order {
        cache.cross[j] = dot(&desired, &columns[j]);
        for k in 0..order {
            cache.gram[k * order + j] = dot(&columns[k], &columns[j]);
        }
    }
    Ok(cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lines(order: usize, window: usize) -> (DelayLine, DelayLine) {
        (DelayLine::new(order + window), DelayLine::new(window + 1))
    }

    #[test]
    fn rejects_window_not_exceeding_order() {
        assert!(InnerProductCache::new(4, 4).is_err());
        assert!(InnerProductCache::new(0, 4).is_err());
    }

    #[test]
    fn zero_step_keeps_zero_cache() {
        let mut cache = InnerProductCache::new(3, 5).unwrap();
        let (mut x, mut d) = lines(3, 5);
        x.push(0.0);
        d.push(0.0);
        cache.step(&x, &d);
        assert_eq!(cache, InnerProductCache::new(3, 5).unwrap());
    }

    #[test]
    fn first_nonzero_step() {
        // x(0)=1, d(0)=2 from silence: x_0=(1,0,0), x_1=0, d=(2,0,0).
        let mut cache = InnerProductCache::new(2, 3).unwrap();
        let (mut x, mut d) = lines(2, 3);
        x.push(1.0);
        d.push(2.0);
        cache.step(&x, &d);
        assert_eq!(cache.cross(), &[2.0, 0.0]);
        assert_eq!(cache.gram_matrix(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn oracle_hand_summation() {
        // M=1, L=2, x history (3, 4), d history (1, 2), newest first.
        let (mut x, mut d) = lines(1, 2);
        for (xs, ds) in [(4.0, 2.0), (3.0, 1.0)] {
            x.push(xs);
            d.push(ds);
        }
        let cache = cache_oracle(&x, &d, 1, 2).unwrap();
        assert_eq!(cache.cross(), &[11.0]);
        assert_eq!(cache.gram(0, 0), 25.0);
    }

    #[test]
    fn oracle_of_silence_is_zero() {
        let (x, d) = lines(3, 6);
        assert_eq!(
            cache_oracle(&x, &d, 3, 6).unwrap(),
            InnerProductCache::new(3, 6).unwrap()
        );
    }

    proptest! {
        #[test]
        fn recursion_matches_oracle(
            order in 1usize..6,
            extra in 1usize..8,
            samples in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..200),
        ) {
            let window = order + extra;
            let mut cache = InnerProductCache::new(order, window).unwrap();
            let (mut x, mut d) = lines(order, window);
            for &(xs, ds) in &samples {
                x.push(xs);
                d.push(ds);
                cache.step(&x, &d);
                let oracle = cache_oracle(&x, &d, order, window).unwrap();
                prop_assert!(cache.max_deviation(&oracle, 1e-9, 1e-12) <= 1e-9);
                for k in 0..order {
                    prop_assert!(cache.norm_sq(k) >= 0.0);
                    for j in 0..order {
                        prop_assert_eq!(cache.gram(k, j).to_bits(), cache.gram(j, k).to_bits());
                    }
                }
            }
        }
    }
}
