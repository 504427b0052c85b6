//! Slow, direct reference implementations used to validate the fast paths.
//!
//! Nothing here shares code with the recursive implementations beyond the
//! [`DelayLine`] that stores raw samples.

use crate::delay::DelayLine;
use crate::fap::{FapConfig, SelectionNorm};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Explicit `L x M` data matrix, stored as `M` columns of length `L`.
pub fn data_columns(x: &DelayLine, order: usize, window: usize) -> Vec<Vec<f64>> {
    (0..order).map(|j| x.window(j, window).collect()).collect()
}

/// `e = d(n) - X(n) h`, formed explicitly.
pub fn materialized_residual(
    x: &DelayLine,
    d: &DelayLine,
    taps: &[f64],
    window: usize,
) -> Vec<f64> {
    let cols = data_columns(x, taps.len(), window);
    (0..window)
        .map(|i| d.get(i) - cols.iter().zip(taps).map(|(c, h)| c[i] * h).sum::<f64>())
        .collect()
}

/// `<e, x_j(n)>` for every column, from the explicitly formed residual.
pub fn materialized_residual_cross(
    x: &DelayLine,
    d: &DelayLine,
    taps: &[f64],
    window: usize,
) -> Vec<f64> {
    let e = materialized_residual(x, d, taps, window);
    data_columns(x, taps.len(), window)
        .iter()
        .map(|c| dot(&e, c))
        .collect()
}

/// One matching-pursuit iteration on explicit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveIteration {
    pub index: usize,
    pub value: f64,
    /// `||e_i||^2` before the update.
    pub residual_energy_before: f64,
    /// `||e_{i+1}||^2` after the update.
    pub residual_energy_after: f64,
}

/// Reference matching-pursuit affine projection filter that forms `X(n)`,
/// `d(n)` and every residual `e_i(n)` explicitly at each sample.
#[derive(Debug, Clone)]
pub struct NaiveFap {
    cfg: FapConfig,
    taps: Vec<f64>,
    x: DelayLine,
    d: DelayLine,
}

impl NaiveFap {
    pub fn new(cfg: FapConfig) -> Self {
        Self {
            taps: vec![0.0; cfg.order],
            x: DelayLine::new(cfg.order + cfg.window),
            d: DelayLine::new(cfg.window),
            cfg,
        }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Processes one sample, returning the a priori error and the iterations run.
    pub fn step(&mut self, x_new: f64, d_new: f64) -> (f64, Vec<NaiveIteration>) {
        let (m, l) = (self.cfg.order, self.cfg.window);
        self.x.push(x_new);
        self.d.push(d_new);
        let cols = data_columns(&self.x, m, l);
        let desired: Vec<f64> = self.d.window(0, l).collect();
        let y: f64 = (0..m).map(|k| self.taps[k] * self.x.get(k)).sum();
        let mut log = Vec::new();

        for _ in 0..self.cfg.iterations {
            let residual: Vec<f64> = (0..l)
                .map(|i| desired[i] - (0..m).map(|k| cols[k][i] * self.taps[k]).sum::<f64>())
                .collect();
            let mut best: Option<(usize, f64)> = None;
            for (j, col) in cols.iter().enumerate() {
                let norm_sq = dot(col, col);
                if norm_sq.is_nan() || norm_sq <= self.cfg.norm_floor {
                    continue;
                }
                let proj = dot(&residual, col).abs();
                let score = match self.cfg.selection_norm {
                    SelectionNorm::Norm => proj / norm_sq.sqrt(),
                    SelectionNorm::NormSquared => proj / norm_sq,
                };
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((j, score));
                }
            }
            let Some((j, _)) = best else { break };
            let value = dot(&residual, &cols[j]) / dot(&cols[j], &cols[j]);
            let step = self.cfg.mu * value;
            self.taps[j] += step;
            let after: Vec<f64> = residual
                .iter()
                .zip(&cols[j])
                .map(|(e, c)| e - step * c)
                .collect();
            log.push(NaiveIteration {
                index: j,
                value,
                residual_energy_before: dot(&residual, &residual),
                residual_energy_after: dot(&after, &after),
            });
        }
        (d_new - y, log)
    }
}

/// `C(n) = sum_i lambda^(n-i) x(i) x(i)^T + lambda^n delta I`, summed directly
/// over the regressor history `x(1..=n)`. Row-major.
pub fn weighted_autocorrelation(
    regressors: &[Vec<f64>],
    lambda: f64,
    delta: f64,
    order: usize,
) -> Vec<f64> {
    let n = regressors.len();
    let mut c = vec![0.0; order * order];
    for (i, x) in regressors.iter().enumerate() {
        let w = lambda.powi((n - 1 - i) as i32);
        for k in 0..order {
            for j in 0..order {
                c[k * order + j] += w * x[k] * x[j];
            }
        }
    }
    let reg = lambda.powi(n as i32) * delta;
    for k in 0..order {
        c[k * order + k] += reg;
    }
    c
}

/// Gauss-Jordan inverse with partial pivoting. `None` if singular.
pub fn invert(matrix: &[f64], order: usize) -> Option<Vec<f64>> {
    let w = 2 * order;
    let mut a = vec![0.0; order * w];
    for r in 0..order {
        a[r * w..r * w + order].copy_from_slice(&matrix[r * order..(r + 1) * order]);
        a[r * w + order + r] = 1.0;
    }
    for col in 0..order {
        let pivot =
            (col..order).max_by(|&p, &q| a[p * w + col].abs().total_cmp(&a[q * w + col].abs()))?;
        if a[pivot * w + col] == 0.0 {
            return None;
        }
        for c in 0..w {
            a.swap(col * w + c, pivot * w + c);
        }
        let inv = 1.0 / a[col * w + col];
        for c in 0..w {
            a[col * w + c] *= inv;
        }
        for r in 0..order {
            if r != col {
                let f = a[r * w + col];
                if f != 0.0 {
                    for c in 0..w {
                        a[r * w + c] -= f * a[col * w + c];
                    }
                }
            }
        }
    }
    Some(
        (0..order)
            .flat_map(|r| a[r * w + order..(r + 1) * w].to_vec())
            .collect(),
    )
}

/// `max |a - b| / max |b|`.
pub fn relative_max_deviation(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_known_matrix() {
        let m = [4.0, 7.0, 2.0, 6.0];
        let inv = invert(&m, 2).unwrap();
        let expected = [0.6, -0.7, -0.2, 0.4];
        for (a, b) in inv.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(invert(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    }

    #[test]
    fn inverse_needs_pivoting() {
        let m = [0.0, 1.0, 1.0, 0.0];
        assert_eq!(invert(&m, 2).unwrap(), vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn autocorrelation_weights() {
        let xs = vec![vec![1.0], vec![2.0]];
        // 0.5 * 1 + 4 + 0.25 * 2
        assert_eq!(weighted_autocorrelation(&xs, 0.5, 2.0, 1), vec![5.0]);
    }

    #[test]
    fn naive_unit_step_decreases_energy() {
        let cfg = FapConfig {
            window: 5,
            iterations: 3,
            mu: 1.0,
            ..FapConfig::new(2)
        };
        let mut f = NaiveFap::new(cfg);
        for t in 0..30 {
            let (_, log) = f.step((t as f64).sin(), (t as f64 * 0.5).cos());
            for it in log {
                assert!(it.residual_energy_after <= it.residual_energy_before + 1e-12);
            }
        }
    }
}
