//! Fast affine projection by matching pursuit.
//!
//! Every sample the filter treats the last `L` samples as an over-determined
//! least-squares problem `X(n) h ~ d(n)` with `L > M`, and runs `P` greedy
//! matching-pursuit iterations against it: pick the data column onto which the
//! current residual has the largest normalized projection, then move that one
//! coefficient by `mu` times the projection coefficient. The coefficient vector
//! carries over from sample to sample.
//!
//! All of this runs in the `M`-dimensional inner-product domain. The residual
//! `e_i(n) = d(n) - X(n) h` is represented only through its correlations with
//! the columns,
//!
//! ```text
//! rho(j) = <e_i(n), x_j(n)> = <d(n), x_j(n)> - sum_k h_k <x_k(n), x_j(n)>
//! ```
//!
//! which the [`InnerProductCache`] supplies in `O(M^2)` per sample, and a
//! coefficient update at index `j*` shifts it by `-mu * value * gram(j*, .)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cache::{cache_oracle, InnerProductCache};
use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::filter::{all_finite, AdaptiveFilter, Step};

pub const DEFAULT_WINDOW: usize = 25;
pub const DEFAULT_ITERATIONS: usize = 8;
pub const DEFAULT_MU: f64 = 0.002;
pub const DEFAULT_NORM_FLOOR: f64 = 1e-12;

/// How column projections are normalized when choosing the coefficient to update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionNorm {
    /// `|rho(j)| / ||x_j||`, the length of the projection onto the unit column.
    #[default]
    Norm,
    /// `|rho(j)| / ||x_j||^2`, the magnitude of the projection coefficient.
    NormSquared,
}

impl fmt::Display for SelectionNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionNorm::Norm => "norm",
            SelectionNorm::NormSquared => "norm_squared",
        })
    }
}

impl FromStr for SelectionNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm" => Ok(SelectionNorm::Norm),
            "norm_squared" | "norm-squared" => Ok(SelectionNorm::NormSquared),
            other => Err(Error::config(format!(
                "unknown selection norm '{other}' (expected norm or norm_squared)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FapConfig {
    pub order: usize,
    pub window: usize,
    pub iterations: usize,
    pub mu: f64,
    pub selection_norm: SelectionNorm,
    /// Columns with `||x_j||^2 <= norm_floor` are never selected.
    pub norm_floor: f64,
    /// Recompute the cache by direct summation every this many samples; 0 disables it.
    pub rebuild_every: usize,
}

impl FapConfig {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            window: DEFAULT_WINDOW,
            iterations: DEFAULT_ITERATIONS,
            mu: DEFAULT_MU,
            selection_norm: SelectionNorm::default(),
            norm_floor: DEFAULT_NORM_FLOOR,
            rebuild_every: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::config("filter order must be at least 1"));
        }
        if self.window <= self.order {
            return Err(Error::config(format!(
                "window length L={} must exceed filter order M={}",
                self.window, self.order
            )));
        }
        if self.iterations == 0 {
            return Err(Error::config("iterations per sample P must be at least 1"));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::config(format!(
                "step size mu out of range: {} (need mu > 0)",
                self.mu
            )));
        }
        if self.norm_floor.is_nan() || self.norm_floor < 0.0 {
            return Err(Error::config("norm floor must be non-negative"));
        }
        Ok(())
    }
}

/// One coefficient update chosen by a matching-pursuit iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpdateRecord {
    /// Selected coefficient index.
    pub index: usize,
    /// Projection coefficient `rho(j) / ||x_j||^2`, before step-size scaling.
    pub value: f64,
    /// Iteration number within the sample.
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fap {
    cfg: FapConfig,
    taps: Vec<f64>,
    x_line: DelayLine,
    d_line: DelayLine,
    cache: InnerProductCache,
    residual: Vec<f64>,
    records: Vec<UpdateRecord>,
    n: u64,
}

impl Fap {
    pub fn new(cfg: FapConfig) -> Result<Self> {
        cfg.validate()?;
        let cache = InnerProductCache::new(cfg.order, cfg.window)?;
        Ok(Self {
            taps: vec![0.0; cfg.order],
            x_line: DelayLine::new(cache.input_capacity()),
            d_line: DelayLine::new(cache.desired_capacity()),
            cache,
            residual: vec![0.0; cfg.order],
            records: Vec::with_capacity(cfg.iterations),
            n: 0,
            cfg,
        })
    }

    pub fn config(&self) -> &FapConfig {
        &self.cfg
    }

    pub fn cache(&self) -> &InnerProductCache {
        &self.cache
    }

    pub fn input(&self) -> &DelayLine {
        &self.x_line
    }

    pub fn desired(&self) -> &DelayLine {
        &self.d_line
    }

    /// `rho(j)`: correlation of the current residual with each column.
    pub fn residual_cross(&self) -> &[f64] {
        &self.residual
    }

    /// Takes in the new sample pair, advances the inner products and resets
    /// the residual correlations to the a priori residual under the current taps.
    pub fn refresh(&mut self, x_new: f64, d_new: f64) {
        self.x_line.push(x_new);
        self.d_line.push(d_new);
        self.n += 1;
        if self.cfg.rebuild_every > 0 && self.n.is_multiple_of(self.cfg.rebuild_every as u64) {
            self.cache = cache_oracle(&self.x_line, &self.d_line, self.cfg.order, self.cfg.window)
                .expect("config validated at construction");
        } else {
            self.cache.step(&self.x_line, &self.d_line);
        }
        let m = self.cfg.order;
        for j in 0..m {
            let fitted: f64 = (0..m).map(|k| self.taps[k] * self.cache.gram(k, j)).sum();
            self.residual[j] = self.cache.cross()[j] - fitted;
        }
    }

    /// Picks the column with the largest normalized projection of the residual.
    ///
    /// Returns `None` when every column norm is at or below the floor. Ties go
    /// to the smallest index.
    pub fn select(&self, iteration: usize) -> Option<UpdateRecord> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cfg.order {
            let norm_sq = self.cache.norm_sq(j);
            if norm_sq.is_nan() || norm_sq <= self.cfg.norm_floor {
                continue;
            }
            let score = match self.cfg.selection_norm {
                SelectionNorm::Norm => self.residual[j].abs() / norm_sq.sqrt(),
                SelectionNorm::NormSquared => self.residual[j].abs() / norm_sq,
            };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        best.map(|(index, _)| UpdateRecord {
            index,
            value: self.residual[index] / self.cache.norm_sq(index),
            iteration,
        })
    }

    /// Moves coefficient `rec.index` by `mu * rec.value` and updates the
    /// residual correlations to match.
    pub fn apply(&mut self, rec: &UpdateRecord) -> Result<()> {
        let delta = self.cfg.mu * rec.value;
        self.taps[rec.index] += delta;
        for (rho, g) in self.residual.iter_mut().zip(self.cache.gram_row(rec.index)) {
            *rho -= delta * g;
        }
        if !self.taps[rec.index].is_finite() {
            return Err(Error::NumericalDivergence {
                sample: self.n.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Full per-sample step, also returning the updates it performed.
    pub fn step_with_records(&mut self, x_new: f64, d_new: f64) -> Result<(Step, &[UpdateRecord])> {
        self.records.clear();
        self.refresh(x_new, d_new);
        let y = self.x_line.dot(&self.taps);
        let e = d_new - y;
        for iteration in 0..self.cfg.iterations {
            let Some(rec) = self.select(iteration) else {
                break;
            };
            self.records.push(rec);
            self.apply(&rec)?;
        }
        if !all_finite(&self.residual) {
            return Err(Error::NumericalDivergence { sample: self.n - 1 });
        }
        Ok((Step { e, y }, &self.records))
    }
}

impl AdaptiveFilter for Fap {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step> {
        self.step_with_records(x_new, d_new).map(|(s, _)| s)
    }

    fn taps(&self) -> &[f64] {
        &self.taps
    }

    fn name(&self) -> &'static str {
        "fap"
    }

    fn last_updates(&self) -> &[UpdateRecord] {
        &self.records
    }
}
