//! Artifact serialization. Every file goes to a temporary sibling first and is
//! renamed into place, so a crash never leaves a partial output behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use fapanc::anc::LearningCurve;

use crate::error::{CliError, Result};
use crate::wav::Wav;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".fapanc-")
        .tempfile_in(dir)
        .map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Writes a 16-bit WAV and returns how many samples were clipped.
pub fn write_wav(path: &Path, sample_rate: u32, samples: &[f64]) -> Result<usize> {
    let (wav, clipped) = Wav::from_real(sample_rate, samples);
    write_atomic(path, &wav.encode())?;
    Ok(clipped)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("writing to memory cannot fail")
}

/// `sample_index,mse_raw,mse_smoothed`, one row per sample.
pub fn curve_csv(curve: &LearningCurve) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(["sample_index", "mse_raw", "mse_smoothed"])
        .unwrap();
    for (t, (raw, smooth)) in curve.mse.iter().zip(&curve.smoothed).enumerate() {
        w.write_record([t.to_string(), raw.to_string(), smooth.to_string()])
            .unwrap();
    }
    finish(w)
}

pub struct CompareRow {
    pub algo: &'static str,
    pub snri_db: Option<f64>,
    pub samples_to_converge: Option<usize>,
    pub diverged: bool,
}

/// `algo,snri_db,samples_to_converge,diverged`; unavailable values are empty.
pub fn compare_csv(rows: &[CompareRow]) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(["algo", "snri_db", "samples_to_converge", "diverged"])
        .unwrap();
    for r in rows {
        w.write_record([
            r.algo.to_string(),
            r.snri_db.map(|v| v.to_string()).unwrap_or_default(),
            r.samples_to_converge
                .map(|v| v.to_string())
                .unwrap_or_default(),
            r.diverged.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// Plain-text table; SNRI to four decimals.
pub fn compare_table(rows: &[CompareRow]) -> String {
    let mut out = format!(
        "{:<10}{:>12}{:>16}\n",
        "Algorithm", "SNRI (dB)", "Converged at"
    );
    for r in rows {
        let snri = r
            .snri_db
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        let conv = match (r.diverged, r.samples_to_converge) {
            (true, _) => "diverged".to_string(),
            (false, Some(n)) => n.to_string(),
            (false, None) => "n/a".to_string(),
        };
        out.push_str(&format!(
            "{:<10}{:>12}{:>16}\n",
            r.algo.to_uppercase(),
            snri,
            conv
        ));
    }
    out
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("summaries serialize");
    bytes.push(b'\n');
    bytes
}
