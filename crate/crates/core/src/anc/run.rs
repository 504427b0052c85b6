use serde::Serialize;

use super::metrics::{
    LearningCurve, SnrSummary, CONVERGENCE_BAND_DB, CONVERGENCE_SMOOTHING, DEFAULT_SMOOTHING,
};
use super::scenario::AncSignals;
use crate::error::{Error, Result};
use crate::fap::UpdateRecord;
use crate::filter::AdaptiveFilter;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Keep every coefficient update the filter reports.
    pub log_updates: bool,
    pub smoothing: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            log_updates: false,
            smoothing: DEFAULT_SMOOTHING,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoggedUpdate {
    pub sample: usize,
    #[serde(flatten)]
    pub record: UpdateRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AncResult {
    /// System output `d - y`, the denoised signal.
    pub e: Vec<f64>,
    pub y: Vec<f64>,
    pub curve: LearningCurve,
    /// Steady-state SNR figures over the final half of the run; `None` without
    /// a clean reference or after divergence.
    pub snr: Option<SnrSummary>,
    pub samples_to_converge: Option<usize>,
    pub update_log: Option<Vec<LoggedUpdate>>,
    /// Sample index at which the filter diverged; outputs are truncated there.
    pub diverged: Option<usize>,
}

/// Runs `filter` over the two microphone streams: the reference drives the
/// filter input, the primary is the desired signal, and the a priori error is
/// the denoised output.
pub fn run_anc<F: AdaptiveFilter + ?Sized>(
    signals: AncSignals<'_>,
    filter: &mut F,
    opts: &RunOptions,
) -> Result<AncResult> {
    let len = signals.primary.len();
    if signals.reference.len() != len {
        return Err(Error::config(format!(
            "primary and reference differ in length ({len} vs {})",
            signals.reference.len()
        )));
    }
    if let Some(clean) = signals.clean {
        if clean.len() != len {
            return Err(Error::config(format!(
                "clean and primary differ in length ({} vs {len})",
                clean.len()
            )));
        }
    }
    if filter.order() > len {
        return Err(Error::config(format!(
            "filter order {} exceeds signal length {len}",
            filter.order()
        )));
    }

    let mut e = Vec::with_capacity(len);
    let mut y = Vec::with_capacity(len);
    let mut log = opts.log_updates.then(Vec::new);
    let mut diverged = None;
    for (t, (&x, &d)) in signals.reference.iter().zip(signals.primary).enumerate() {
        match filter.step(x, d) {
            Ok(step) => {
                y.push(step.y);
                e.push(d - step.y);
            }
            Err(Error::NumericalDivergence { .. } | Error::DenominatorUnderflow { .. }) => {
                diverged = Some(t);
                break;
            }
            Err(other) => return Err(other),
        }
        if let Some(log) = log.as_mut() {
            log.extend(
                filter
                    .last_updates()
                    .iter()
                    .map(|&record| LoggedUpdate { sample: t, record }),
            );
        }
    }

    let curve = LearningCurve::from_errors(&e, opts.smoothing);
    let samples_to_converge = if diverged.is_none() {
        curve.convergence_index(CONVERGENCE_SMOOTHING, CONVERGENCE_BAND_DB)
    } else {
        None
    };
    let snr = match (signals.clean, diverged) {
        (Some(clean), None) => {
            let from = len / 2;
            SnrSummary::measure(&clean[from..], &signals.primary[from..], &e[from..])?
        }
        _ => None,
    };
    Ok(AncResult {
        e,
        y,
        curve,
        snr,
        samples_to_converge,
        update_log: log,
        diverged,
    })
}

/// Output SNR minus input SNR, in dB.
pub fn snri_db(result: &AncResult) -> Result<f64> {
    if let Some(sample) = result.diverged {
        return Err(Error::NumericalDivergence {
            sample: sample as u64,
        });
    }
    match result.snr {
        Some(s) if s.capped => Err(Error::DegenerateSnr),
        Some(s) => Ok(s.snri),
        None => Err(Error::config(
            "SNR improvement needs a clean reference signal",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anc::scenario::{synth_scenario, AncScenario, NoiseKind, SynthConfig};
    use crate::classic::{Lms, Nlms, Rls};
    use crate::fap::{Fap, FapConfig};
    use crate::filter::Step;
    use crate::settings::{Algorithm, FilterSettings};

    /// Never adapts and always outputs zero.
    struct Bypass;

    impl AdaptiveFilter for Bypass {
        fn step(&mut self, _x: f64, _d: f64) -> Result<Step> {
            Ok(Step { e: _d, y: 0.0 })
        }
        fn taps(&self) -> &[f64] {
            &[0.0]
        }
        fn name(&self) -> &'static str {
            "bypass"
        }
    }

    fn scenario(seed: u64, length: usize) -> AncScenario {
        synth_scenario(&SynthConfig {
            seed,
            length,
            channel_order: 8,
            snr_db: -10.0,
            noise_kind: NoiseKind::Colored,
        })
        .unwrap()
    }

    #[test]
    fn bypass_has_zero_improvement() {
        let sc = scenario(2, 4000);
        let r = run_anc(sc.signals(), &mut Bypass, &RunOptions::default()).unwrap();
        assert!(snri_db(&r).unwrap().abs() < 1e-9);
    }

    #[test]
    fn perfect_cancellation_is_degenerate() {
        let sc = scenario(2, 400);
        struct Oracle<'a>(&'a [f64], usize, Vec<f64>);
        impl AdaptiveFilter for Oracle<'_> {
            fn step(&mut self, _x: f64, d: f64) -> Result<Step> {
                let y = self.0[self.1];
                self.1 += 1;
                Ok(Step { e: d - y, y })
            }
            fn taps(&self) -> &[f64] {
                &self.2
            }
            fn name(&self) -> &'static str {
                "oracle"
            }
        }
        let mut f = Oracle(&sc.n0, 0, vec![0.0]);
        let r = run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap();
        let snr = r.snr.unwrap();
        assert!(snr.capped);
        assert_eq!(snr.snr_out, 150.0);
        assert_eq!(snri_db(&r), Err(Error::DegenerateSnr));
    }

    #[test]
    fn output_identity_every_algorithm() {
        let sc = scenario(4, 3000);
        for algo in Algorithm::ALL {
            let mut f = FilterSettings::defaults(algo).build().unwrap();
            let r = run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap();
            assert_eq!(r.e.len(), sc.len());
            assert_eq!(r.curve.len(), sc.len());
            for t in 0..sc.len() {
                assert_eq!(r.e[t], sc.d[t] - r.y[t]);
            }
        }
    }

    #[test]
    fn boundary_length_run() {
        let sc = scenario(6, 600);
        let m = 8;
        let short =
            AncScenario::from_parts(sc.s[..m].to_vec(), sc.n1[..m].to_vec(), sc.w_e.clone())
                .unwrap();
        for algo in Algorithm::ALL {
            let mut f = FilterSettings::defaults(algo).build().unwrap();
            let r = run_anc(short.signals(), &mut f, &RunOptions::default()).unwrap();
            assert!(r.diverged.is_none());
            assert!(r.e.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn rejects_mismatched_streams() {
        let sc = scenario(6, 600);
        let bad = AncSignals {
            primary: &sc.d,
            reference: &sc.n1[..500],
            clean: None,
        };
        let mut f = Lms::new(4, 0.01).unwrap();
        assert!(matches!(
            run_anc(bad, &mut f, &RunOptions::default()),
            Err(Error::InvalidConfig(_))
        ));
        let mut big = Lms::new(1000, 0.01).unwrap();
        assert!(run_anc(sc.signals(), &mut big, &RunOptions::default()).is_err());
    }

    #[test]
    fn divergence_truncates() {
        let sc = scenario(8, 2000);
        let mut f = Lms::new(8, 1e3).unwrap();
        let r = run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap();
        let at = r.diverged.expect("oversized step should diverge");
        assert_eq!(r.e.len(), at);
        assert_eq!(r.curve.len(), at);
        assert!(r.snr.is_none());
        assert!(snri_db(&r).is_err());
    }

    #[test]
    fn update_log_only_for_fap() {
        let sc = scenario(3, 500);
        let opts = RunOptions {
            log_updates: true,
            ..RunOptions::default()
        };
        let mut fap = Fap::new(FapConfig::new(8)).unwrap();
        let r = run_anc(sc.signals(), &mut fap, &opts).unwrap();
        let log = r.update_log.unwrap();
        assert_eq!(log.len(), 500 * 8);
        assert!(log
            .iter()
            .all(|u| u.record.index < 8 && u.record.iteration < 8));
        let mut nlms = Nlms::new(8, 0.005, 1e-8).unwrap();
        let r = run_anc(sc.signals(), &mut nlms, &opts).unwrap();
        assert_eq!(r.update_log, Some(vec![]));
    }

    #[test]
    fn without_clean_no_snr() {
        let sc = scenario(3, 800);
        let signals = AncSignals {
            clean: None,
            ..sc.signals()
        };
        let mut f = Rls::new(8, 0.99, 0.01).unwrap();
        let r = run_anc(signals, &mut f, &RunOptions::default()).unwrap();
        assert!(r.snr.is_none());
    }

    #[test]
    fn deterministic_results() {
        let sc = scenario(12, 3000);
        for algo in Algorithm::ALL {
            let run = || {
                let mut f = FilterSettings::defaults(algo).build().unwrap();
                run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap()
            };
            assert_eq!(run(), run());
        }
    }
}
