//! Synthetic two-microphone recordings.
//!
//! A scenario holds the five signal roles of the noise-cancellation setup:
//! clean speech `s`, the noise `n1` picked up by the reference microphone,
//! the unknown FIR path `w_e` from the noise source to the primary
//! microphone, the noise `n0 = w_e * n1` reaching the primary microphone, and
//! the primary input `d = s + n0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

pub const SAMPLE_RATE: u32 = 8000;
pub const DEFAULT_LENGTH: usize = 30_000;
pub const DEFAULT_CHANNEL_ORDER: usize = 8;
/// Primary-input SNR of the reference recording.
pub const DEFAULT_SNR_DB: f64 = -10.218;

const SPEECH_RMS: f64 = 0.1;
const NOISE_RMS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    White,
    /// First-order low-pass noise.
    #[default]
    Colored,
    /// Sum of several independent speech-like sources.
    Babble,
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::White => "white",
            NoiseKind::Colored => "colored",
            NoiseKind::Babble => "babble-like",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "white" => Ok(NoiseKind::White),
            "colored" | "coloured" => Ok(NoiseKind::Colored),
            "babble" | "babble-like" => Ok(NoiseKind::Babble),
            other => Err(Error::config(format!(
                "unknown noise kind '{other}' (expected white, colored or babble-like)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub length: usize,
    pub channel_order: usize,
    pub snr_db: f64,
    pub noise_kind: NoiseKind,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            length: DEFAULT_LENGTH,
            channel_order: DEFAULT_CHANNEL_ORDER,
            snr_db: DEFAULT_SNR_DB,
            noise_kind: NoiseKind::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AncScenario {
    pub s: Vec<f64>,
    pub n1: Vec<f64>,
    pub w_e: Vec<f64>,
    pub n0: Vec<f64>,
    pub d: Vec<f64>,
    pub sample_rate: u32,
}

/// Borrowed view of the streams a noise canceller consumes.
#[derive(Debug, Clone, Copy)]
pub struct AncSignals<'a> {
    pub primary: &'a [f64],
    pub reference: &'a [f64],
    pub clean: Option<&'a [f64]>,
}

impl AncScenario {
    /// Builds `n0 = w_e * n1` (zero initial conditions) and `d = s + n0`.
    pub fn from_parts(s: Vec<f64>, n1: Vec<f64>, w_e: Vec<f64>) -> Result<Self> {
        if s.len() != n1.len() {
            return Err(Error::config(format!(
                "clean and reference streams differ in length ({} vs {})",
                s.len(),
                n1.len()
            )));
        }
        if w_e.is_empty() {
            return Err(Error::config("channel must have at least one coefficient"));
        }
        let n0 = fir(&w_e, &n1);
        let d = s.iter().zip(&n0).map(|(a, b)| a + b).collect();
        Ok(Self {
            s,
            n1,
            w_e,
            n0,
            d,
            sample_rate: SAMPLE_RATE,
        })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn signals(&self) -> AncSignals<'_> {
        AncSignals {
            primary: &self.d,
            reference: &self.n1,
            clean: Some(&self.s),
        }
    }

    /// Same scenario with every stream (and the channel's output) multiplied by `gain`.
    pub fn scaled(&self, gain: f64) -> Self {
        let scale = |v: &[f64]| v.iter().map(|x| x * gain).collect::<Vec<_>>();
        Self {
            s: scale(&self.s),
            n1: scale(&self.n1),
            w_e: self.w_e.clone(),
            n0: scale(&self.n0),
            d: scale(&self.d),
            sample_rate: self.sample_rate,
        }
    }
}

/// Direct-form FIR filtering with zero initial state.
pub fn fir(coeffs: &[f64], input: &[f64]) -> Vec<f64> {
    (0..input.len())
        .map(|t| {
            coeffs
                .iter()
                .enumerate()
                .take(t + 1)
                .map(|(k, c)| c * input[t - k])
                .sum()
        })
        .collect()
}

fn power(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>() / v.len().max(1) as f64
}

fn normalize_rms(v: &mut [f64], rms: f64) {
    let p = power(v);
    if p > 0.0 {
        let g = rms / p.sqrt();
        v.iter_mut().for_each(|x| *x *= g);
    }
}

/// `1 / sqrt(var)` of the stationary AR(2) output `y = a1 y' + a2 y'' + u`
/// for unit-variance `u`, so the drifting resonator keeps a constant power.
fn resonator_gain_correction(a1: f64, a2: f64) -> f64 {
    let var = (1.0 - a2) / ((1.0 + a2) * ((1.0 - a2).powi(2) - a1 * a1));
    var.sqrt().recip()
}

/// Speech-like source: a two-pole resonator whose centre frequency drifts
/// slowly, driven by white noise and amplitude-modulated at a pitch rate.
fn speech_like(rng: &mut ChaCha8Rng, length: usize) -> Vec<f64> {
    let formant_hz = rng.random_range(400.0..900.0);
    let sweep_hz = rng.random_range(150.0..350.0);
    let sweep_period = rng.random_range(2500.0..5000.0);
    let pitch_hz = rng.random_range(100.0..180.0);
    let phase = rng.random_range(0.0..2.0 * PI);
    let radius: f64 = 0.95;
    let fs = SAMPLE_RATE as f64;

    let (mut y1, mut y2) = (0.0, 0.0);
    let mut out = Vec::with_capacity(length);
    for t in 0..length {
        let tf = t as f64;
        let centre = formant_hz + sweep_hz * (2.0 * PI * tf / sweep_period + phase).sin();
        let theta = 2.0 * PI * centre / fs;
        let (a1, a2) = (2.0 * radius * theta.cos(), -radius * radius);
        let u: f64 = rng.sample(StandardNormal);
        let y = a1 * y1 + a2 * y2 + u * resonator_gain_correction(a1, a2);
        y2 = y1;
        y1 = y;
        let pitch = 1.0 + 0.7 * (2.0 * PI * pitch_hz * tf / fs).sin();
        out.push(y * pitch);
    }
    out
}

fn noise(rng: &mut ChaCha8Rng, kind: NoiseKind, length: usize) -> Vec<f64> {
    match kind {
        NoiseKind::White => (0..length).map(|_| rng.sample(StandardNormal)).collect(),
        NoiseKind::Colored => {
            let mut prev = 0.0;
            (0..length)
                .map(|_| {
                    let w: f64 = rng.sample(StandardNormal);
                    prev = 0.8 * prev + w;
                    prev
                })
                .collect()
        }
        NoiseKind::Babble => {
            let mut mix = vec![0.0; length];
            for _ in 0..6 {
                let mut voice = speech_like(rng, length);
                normalize_rms(&mut voice, 1.0);
                mix.iter_mut().zip(&voice).for_each(|(m, v)| *m += v);
            }
            mix
        }
    }
}

/// Channel taps with decaying magnitude and a nonzero leading tap.
fn channel(rng: &mut ChaCha8Rng, order: usize) -> Vec<f64> {
    (0..order)
        .map(|k| {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let magnitude = 0.25 + 0.75 * rng.random::<f64>();
            sign * magnitude * 0.7f64.powi(k as i32)
        })
        .collect()
}

/// Generates a deterministic scenario whose primary input has SNR `snr_db`
/// relative to the clean signal.
pub fn synth_scenario(cfg: &SynthConfig) -> Result<AncScenario> {
    if cfg.channel_order == 0 {
        return Err(Error::config("channel order must be at least 1"));
    }
    if cfg.length == 0 || cfg.length <= cfg.channel_order {
        return Err(Error::config(format!(
            "scenario length {} must exceed channel order {}",
            cfg.length, cfg.channel_order
        )));
    }
    if !cfg.snr_db.is_finite() {
        return Err(Error::config("target SNR must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut s = speech_like(&mut rng, cfg.length);
    normalize_rms(&mut s, SPEECH_RMS);
    let mut n1 = noise(&mut rng, cfg.noise_kind, cfg.length);
    normalize_rms(&mut n1, NOISE_RMS);
    let mut w_e = channel(&mut rng, cfg.channel_order);

    let raw = power(&fir(&w_e, &n1));
    let target = power(&s) / 10f64.powf(cfg.snr_db / 10.0);
    let gain = (target / raw).sqrt();
    w_e.iter_mut().for_each(|w| *w *= gain);
    AncScenario::from_parts(s, n1, w_e)
}
