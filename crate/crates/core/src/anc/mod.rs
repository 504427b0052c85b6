//! Two-microphone adaptive noise cancellation.

pub mod metrics;
mod run;
pub mod scenario;

pub use metrics::{snr_db, LearningCurve, SnrSummary};
pub use run::{run_anc, snri_db, AncResult, LoggedUpdate, RunOptions};
pub use scenario::{synth_scenario, AncScenario, AncSignals, NoiseKind, SynthConfig};
