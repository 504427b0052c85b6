use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use fapanc::anc::{run_anc, synth_scenario, AncResult, AncSignals, RunOptions, SynthConfig};
use fapanc::suite::{self, Fault, SuiteReport};
use fapanc::{Algorithm, FilterSettings};
use serde::Serialize;

use crate::args::{CompareArgs, FilterArgs, InputArgs, OracleArgs, RunArgs, SynthArgs};
use crate::error::{CliError, Result};
use crate::output::{self, CompareRow};
use crate::wav::Wav;

/// Microphone streams plus what the summary needs to say about their origin.
struct Input {
    primary: Vec<f64>,
    reference: Vec<f64>,
    clean: Option<Vec<f64>>,
    sample_rate: u32,
    source: Source,
}

impl Input {
    fn signals(&self) -> AncSignals<'_> {
        AncSignals {
            primary: &self.primary,
            reference: &self.reference,
            clean: self.clean.as_deref(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
enum Source {
    Synth {
        seed: u64,
        length: usize,
        channel_order: usize,
        snr_db: f64,
        noise_kind: String,
    },
    Wav {
        primary: PathBuf,
        reference: PathBuf,
        clean: Option<PathBuf>,
    },
}

fn synth_config(args: &InputArgs) -> Result<SynthConfig> {
    if !args.snr_db.is_finite() {
        return Err(CliError::Config(format!(
            "--snr-db must be finite, got {}",
            args.snr_db
        )));
    }
    Ok(SynthConfig {
        seed: args.seed,
        length: args.length,
        channel_order: args.channel_order,
        snr_db: args.snr_db,
        noise_kind: args.noise_kind,
    })
}

fn read_wav(path: &Path) -> Result<Wav> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Wav::decode(&bytes).map_err(|source| CliError::Wav {
        path: path.to_path_buf(),
        source,
    })
}

fn load_input(args: &InputArgs) -> Result<Input> {
    if args.synth {
        if args.primary.is_some() || args.reference.is_some() || args.clean.is_some() {
            return Err(CliError::Config(
                "--synth cannot be combined with input WAV paths".into(),
            ));
        }
        let cfg = synth_config(args)?;
        let sc = synth_scenario(&cfg)?;
        return Ok(Input {
            sample_rate: sc.sample_rate,
            source: Source::Synth {
                seed: cfg.seed,
                length: cfg.length,
                channel_order: cfg.channel_order,
                snr_db: cfg.snr_db,
                noise_kind: cfg.noise_kind.to_string(),
            },
            primary: sc.d,
            reference: sc.n1,
            clean: Some(sc.s),
        });
    }
    let (Some(primary_path), Some(reference_path)) = (&args.primary, &args.reference) else {
        return Err(CliError::Config(
            "give --primary and --reference WAVs, or --synth".into(),
        ));
    };
    let primary = read_wav(primary_path)?;
    let reference = read_wav(reference_path)?;
    let clean = args.clean.as_deref().map(read_wav).transpose()?;
    for (name, other) in [("reference", Some(&reference)), ("clean", clean.as_ref())] {
        let Some(other) = other else { continue };
        if other.sample_rate != primary.sample_rate {
            return Err(CliError::Config(format!(
                "{name} sample rate {} differs from primary {}",
                other.sample_rate, primary.sample_rate
            )));
        }
        if other.samples.len() != primary.samples.len() {
            return Err(CliError::Config(format!(
                "{name} has {} samples, primary has {}",
                other.samples.len(),
                primary.samples.len()
            )));
        }
    }
    Ok(Input {
        primary: primary.to_real(),
        reference: reference.to_real(),
        clean: clean.as_ref().map(Wav::to_real),
        sample_rate: primary.sample_rate,
        source: Source::Wav {
            primary: primary_path.clone(),
            reference: reference_path.clone(),
            clean: args.clean.clone(),
        },
    })
}

fn settings(algo: Algorithm, f: &FilterArgs) -> Result<FilterSettings> {
    let mut s = FilterSettings::defaults(algo);
    s.order = f.order.unwrap_or(s.order);
    s.mu = f.mu.unwrap_or(s.mu);
    s.lambda = f.lambda.unwrap_or(s.lambda);
    s.delta = f.delta.unwrap_or(s.delta);
    s.epsilon = f.epsilon.unwrap_or(s.epsilon);
    s.window = f.window.unwrap_or(s.window);
    s.iterations = f.iterations.unwrap_or(s.iterations);
    s.selection_norm = f.selection_norm.unwrap_or(s.selection_norm);
    s.validate()?;
    Ok(s)
}

/// Parameters an algorithm actually uses; the rest serialize as null.
#[derive(Debug, Serialize)]
struct Parameters {
    order: usize,
    mu: Option<f64>,
    epsilon: Option<f64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    window: Option<usize>,
    iterations: Option<usize>,
    selection_norm: Option<String>,
}

impl Parameters {
    fn of(s: &FilterSettings) -> Self {
        let is = |a: Algorithm| s.algorithm == a;
        let fap = is(Algorithm::Fap);
        Self {
            order: s.order,
            mu: (!is(Algorithm::Rls)).then_some(s.mu),
            epsilon: is(Algorithm::Nlms).then_some(s.epsilon),
            lambda: is(Algorithm::Rls).then_some(s.lambda),
            delta: is(Algorithm::Rls).then_some(s.delta),
            window: fap.then_some(s.window),
            iterations: fap.then_some(s.iterations),
            selection_norm: fap.then(|| s.selection_norm.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
struct AlgoSummary {
    algo: &'static str,
    parameters: Parameters,
    samples: usize,
    snr_in: Option<f64>,
    snr_out: Option<f64>,
    snri: Option<f64>,
    snr_capped: bool,
    samples_to_converge: Option<usize>,
    diverged: bool,
    diverged_at: Option<usize>,
    clipped_samples: usize,
}

impl AlgoSummary {
    fn new(s: &FilterSettings, r: &AncResult, clipped_samples: usize) -> Self {
        Self {
            algo: s.algorithm.as_str(),
            parameters: Parameters::of(s),
            samples: r.e.len(),
            snr_in: r.snr.map(|v| v.snr_in),
            snr_out: r.snr.map(|v| v.snr_out),
            snri: r.snr.map(|v| v.snri),
            snr_capped: r.snr.is_some_and(|v| v.capped),
            samples_to_converge: r.samples_to_converge,
            diverged: r.diverged.is_some(),
            diverged_at: r.diverged,
            clipped_samples,
        }
    }
}

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    input: &'a Source,
    sample_rate: u32,
    #[serde(flatten)]
    result: AlgoSummary,
}

#[derive(Debug, Serialize)]
struct CompareSummary<'a> {
    input: &'a Source,
    sample_rate: u32,
    algorithms: Vec<AlgoSummary>,
}

fn divergence(s: &FilterSettings, r: &AncResult) -> Option<CliError> {
    r.diverged.map(|sample| CliError::Divergence {
        algo: s.algorithm.to_string(),
        sample,
    })
}

pub fn run(args: &RunArgs) -> Result<()> {
    let s = settings(args.algo, &args.filter)?;
    let input = load_input(&args.input)?;
    let mut filter = s.build()?;
    let result = run_anc(input.signals(), &mut filter, &RunOptions::default())?;

    let clipped = match &args.out {
        Some(path) => output::write_wav(path, input.sample_rate, &result.e)?,
        None => 0,
    };
    if let Some(path) = &args.mse_csv {
        output::write_atomic(path, &output::curve_csv(&result.curve))?;
    }
    let summary = RunSummary {
        input: &input.source,
        sample_rate: input.sample_rate,
        result: AlgoSummary::new(&s, &result, clipped),
    };
    let json = output::json_bytes(&summary);
    if let Some(path) = &args.summary_json {
        output::write_atomic(path, &json)?;
    }
    print!("{}", String::from_utf8_lossy(&json));
    if clipped > 0 {
        eprintln!("warning: {clipped} output samples clipped to the 16-bit range");
    }
    divergence(&s, &result).map_or(Ok(()), Err)
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let all: Vec<FilterSettings> = Algorithm::ALL
        .iter()
        .map(|&a| settings(a, &args.filter))
        .collect::<Result<_>>()?;
    let input = load_input(&args.input)?;

    let results: Vec<fapanc::Result<AncResult>> = thread::scope(|scope| {
        let handles: Vec<_> = all
            .iter()
            .map(|s| {
                let input = &input;
                scope.spawn(move || {
                    let mut filter = s.build()?;
                    run_anc(input.signals(), &mut filter, &RunOptions::default())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("filter thread panicked"))
            .collect()
    });
    let results = results.into_iter().collect::<fapanc::Result<Vec<_>>>()?;

    output::create_dir(&args.out)?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (s, r) in all.iter().zip(&results) {
        let name = s.algorithm.as_str();
        let clipped = output::write_wav(
            &args.out.join(format!("denoised_{name}.wav")),
            input.sample_rate,
            &r.e,
        )?;
        output::write_atomic(
            &args.out.join(format!("mse_{name}.csv")),
            &output::curve_csv(&r.curve),
        )?;
        rows.push(CompareRow {
            algo: name,
            snri_db: r.snr.map(|v| v.snri),
            samples_to_converge: r.samples_to_converge,
            diverged: r.diverged.is_some(),
        });
        summaries.push(AlgoSummary::new(s, r, clipped));
    }
    output::write_atomic(&args.out.join("compare.csv"), &output::compare_csv(&rows))?;
    let summary = CompareSummary {
        input: &input.source,
        sample_rate: input.sample_rate,
        algorithms: summaries,
    };
    let summary_path = args
        .summary_json
        .clone()
        .unwrap_or_else(|| args.out.join("summary.json"));
    output::write_atomic(&summary_path, &output::json_bytes(&summary))?;
    print!("{}", output::compare_table(&rows));

    all.iter()
        .zip(&results)
        .find_map(|(s, r)| divergence(s, r))
        .map_or(Ok(()), Err)
}

/// Common gain that keeps every stream inside the 16-bit range. Scaling all
/// streams together leaves the noise path and every SNR unchanged.
fn headroom_gain(streams: &[&[f64]]) -> f64 {
    const CEILING: f64 = 0.9;
    let peak = streams
        .iter()
        .flat_map(|s| s.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > CEILING {
        CEILING / peak
    } else {
        1.0
    }
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let cfg = synth_config(&args.input)?;
    let sc = synth_scenario(&cfg)?;
    let gain = headroom_gain(&[&sc.d, &sc.n1, &sc.s]);
    let sc = sc.scaled(gain);
    output::create_dir(&args.out)?;
    for (name, data) in [("primary", &sc.d), ("reference", &sc.n1), ("clean", &sc.s)] {
        let path = args.out.join(format!("{name}.wav"));
        output::write_wav(&path, sc.sample_rate, data)?;
        println!("{}", path.display());
    }
    if gain != 1.0 {
        println!("streams scaled by {gain:.6} to fit the 16-bit range");
    }
    Ok(())
}

pub fn oracle_check(args: &OracleArgs) -> Result<()> {
    if args.order == 0 || args.window <= args.order {
        return Err(CliError::Config(format!(
            "window length L={} must exceed filter order M={} >= 1",
            args.window, args.order
        )));
    }
    let fault = if args.inject_fault {
        Fault::Cache
    } else {
        Fault::None
    };
    let suites: [&dyn Fn() -> SuiteReport; 5] = [
        &|| suite::cache_equivalence(args.samples, args.order, args.window, args.seed, fault),
        &|| suite::fap_equivalence(20, 500, args.seed),
        &|| suite::rls_equivalence(200, &[0.9, 0.99, 1.0], args.seed),
        &|| suite::orthogonality(10_000, args.seed),
        &|| suite::nlms_scale_invariance(10_000, 1e3, args.seed),
    ];
    for run in suites {
        let report = run();
        println!("{} {report}", if report.passed() { "ok  " } else { "FAIL" });
        if !report.passed() {
            return Err(CliError::Oracle(format!(
                "{}: deviation {:.3e} exceeds {:.0e}",
                report.name, report.max_deviation, report.tolerance
            )));
        }
    }
    Ok(())
}
