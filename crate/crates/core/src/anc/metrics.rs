use serde::Serialize;

use crate::error::{Error, Result};

/// Moving-average window used for the smoothed learning curve.
pub const DEFAULT_SMOOTHING: usize = 128;

/// Reported in place of an infinite output SNR.
pub const SNR_CAP_DB: f64 = 150.0;

/// Band around the final-quartile level that counts as converged.
pub const CONVERGENCE_BAND_DB: f64 = 3.0;

/// Moving-average window of the curve the convergence time is read from.
/// Shorter windows let the speech envelope alone swing the error power by
/// more than the band.
pub const CONVERGENCE_SMOOTHING: usize = 2048;

/// `10 log10(sum signal^2 / sum noise^2)`.
pub fn snr_db(signal: &[f64], noise: &[f64]) -> Result<f64> {
    if signal.len() != noise.len() {
        return Err(Error::config(format!(
            "SNR inputs differ in length ({} vs {})",
            signal.len(),
            noise.len()
        )));
    }
    let noise_power: f64 = noise.iter().map(|v| v * v).sum();
    if noise_power == 0.0 {
        return Err(Error::DegenerateSnr);
    }
    let signal_power: f64 = signal.iter().map(|v| v * v).sum();
    Ok(10.0 * (signal_power / noise_power).log10())
}

/// Trailing moving average; the first `window - 1` outputs average the
/// samples available so far.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    for (t, v) in values.iter().enumerate() {
        acc += v;
        if t >= window {
            acc -= values[t - window];
        }
        let n = (t + 1).min(window);
        // Periodic exact re-sum bounds drift of the running total.
        if t % 4096 == 4095 {
            acc = values[t + 1 - n..=t].iter().sum();
        }
        out.push((acc / n as f64).max(0.0));
    }
    out
}

/// Squared-error time series of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearningCurve {
    pub mse: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub window: usize,
}

impl LearningCurve {
    pub fn from_errors(errors: &[f64], window: usize) -> Self {
        let mse: Vec<f64> = errors.iter().map(|e| e * e).collect();
        let smoothed = moving_average(&mse, window);
        Self {
            mse,
            smoothed,
            window,
        }
    }

    pub fn len(&self) -> usize {
        self.mse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mse.is_empty()
    }

    /// Mean of the smoothed curve over its last quarter.
    pub fn final_level(&self) -> Option<f64> {
        final_quartile_mean(&self.smoothed)
    }

    /// First sample index from which the squared error, averaged over
    /// `window` samples, stays within `band_db` of its final-quartile mean.
    pub fn convergence_index(&self, window: usize, band_db: f64) -> Option<usize> {
        let smoothed = moving_average(&self.mse, window);
        let level = final_quartile_mean(&smoothed)?;
        let ratio = 10f64.powf(band_db / 10.0);
        let inside = |v: f64| {
            if level == 0.0 {
                v == 0.0
            } else {
                v <= level * ratio && v >= level / ratio
            }
        };
        let mut start = smoothed.len();
        while start > 0 && inside(smoothed[start - 1]) {
            start -= 1;
        }
        (start < smoothed.len()).then_some(start)
    }
}

fn final_quartile_mean(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let tail = &values[n - (n / 4).max(1)..];
    Some(tail.iter().sum::<f64>() / tail.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrSummary {
    pub snr_in: f64,
    pub snr_out: f64,
    pub snri: f64,
    /// Output noise was exactly zero and `snr_out` was capped at [`SNR_CAP_DB`].
    pub capped: bool,
}

impl SnrSummary {
    /// Input SNR of `primary` and output SNR of `output`, both against `clean`;
    /// the noise components are `primary - clean` and `output - clean`.
    ///
    /// `None` when the input SNR is not a finite number.
    pub fn measure(clean: &[f64], primary: &[f64], output: &[f64]) -> Result<Option<Self>> {
        let residual =
            |x: &[f64]| -> Vec<f64> { x.iter().zip(clean).map(|(a, s)| a - s).collect() };
        if primary.len() != clean.len() || output.len() != clean.len() {
            return Err(Error::config("SNR inputs differ in length"));
        }
        let snr_in = match snr_db(clean, &residual(primary)) {
            Ok(v) if v.is_finite() => v,
            Ok(_) | Err(Error::DegenerateSnr) => return Ok(None),
            Err(e) => return Err(e),
        };
        let (snr_out, capped) = match snr_db(clean, &residual(output)) {
            Ok(v) => (v.min(SNR_CAP_DB), v > SNR_CAP_DB),
            Err(Error::DegenerateSnr) => (SNR_CAP_DB, true),
            Err(e) => return Err(e),
        };
        Ok(Some(Self {
            snr_in,
            snr_out,
            snri: snr_out - snr_in,
            capped,
        }))
    }
}
