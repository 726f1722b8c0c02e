use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

use super::ExperimentReport;
use crate::error::{Error, Result};
use crate::exponents::{KappaValue, NoiseSpec};

/// Which files [`emit_outputs`] writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormats {
    /// `curves.csv`: `trial,n,sigma`.
    pub curves: bool,
    /// `summary.json`.
    pub summary: bool,
    /// `plot.dat`: `ln n` against `ln` of the median `σ_n`.
    pub plot: bool,
}

impl Default for OutputFormats {
    fn default() -> Self {
        OutputFormats {
            curves: true,
            summary: true,
            plot: true,
        }
    }
}

/// JSON has no infinities; they are written as strings.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum TheoryRecord {
    Exact { value: Num },
    Bounds { lower: Num, upper: Num },
    Infinite,
    None,
}

#[derive(Debug, Clone, Serialize)]
struct TrialRecord {
    index: usize,
    seed: u64,
    kappa: Num,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    family: &'static str,
    noise: NoiseSpec,
    operator: String,
    gamma: f64,
    d: usize,
    level: u32,
    wavelet_order: usize,
    p0: f64,
    tau0: f64,
    trials: usize,
    fit_range: [usize; 2],
    kappa_hat_median: Num,
    kappa_hat_iqr: [Num; 2],
    theory: TheoryRecord,
    admissibility: String,
    condition_satisfied: bool,
    tolerance: f64,
    verdict: &'static str,
    verdict_note: String,
    per_trial: Vec<TrialRecord>,
    config_hash: String,
    version: &'static str,
    base_seed: u64,
}

impl Summary {
    pub fn from_report(report: &ExperimentReport) -> Self {
        let c = &report.config;
        let theory = match report.prediction.value {
            Some(KappaValue::Exact(v)) => TheoryRecord::Exact { value: Num(v) },
            Some(KappaValue::Bounds { lower, upper }) => TheoryRecord::Bounds {
                lower: Num(lower),
                upper: Num(upper),
            },
            Some(KappaValue::Infinite) => TheoryRecord::Infinite,
            None => TheoryRecord::None,
        };
        Summary {
            family: c.noise.family_name(),
            noise: NoiseSpec::from(&c.noise),
            operator: c.operator.clone(),
            gamma: c.gamma,
            d: c.d,
            level: c.level,
            wavelet_order: c.wavelet_order,
            p0: c.p0,
            tau0: c.tau0,
            trials: c.trials,
            fit_range: [report.fit_range.0, report.fit_range.1],
            kappa_hat_median: Num(report.kappa_median),
            kappa_hat_iqr: [Num(report.kappa_iqr.0), Num(report.kappa_iqr.1)],
            theory,
            admissibility: report.condition.clone(),
            condition_satisfied: report.prediction.condition_satisfied,
            tolerance: c.tolerance,
            verdict: report.verdict.as_str(),
            verdict_note: report.verdict_note.clone(),
            per_trial: report
                .trials
                .iter()
                .map(|t| TrialRecord {
                    index: t.index,
                    seed: t.seed,
                    kappa: Num(t.kappa.value()),
                })
                .collect(),
            config_hash: report.provenance.config_hash.clone(),
            version: report.provenance.version,
            base_seed: report.provenance.base_seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("summary serializes");
        text.push('\n');
        text
    }
}

fn curves_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("trial,n,sigma\n");
    for t in &report.trials {
        for (n, s) in t.curve.n_values.iter().zip(&t.curve.sigma) {
            writeln!(out, "{},{},{:e}", t.index, n, s).unwrap();
        }
    }
    out
}

fn plot_dat(report: &ExperimentReport) -> String {
    let mut out = String::from("# ln_n ln_median_sigma\n");
    for (n, s) in report.median_sigma() {
        if s > 0.0 {
            writeln!(out, "{:e} {:e}", (n as f64).ln(), s.ln()).unwrap();
        }
    }
    out
}

fn write(path: PathBuf, contents: String) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the requested files into `dir`, creating it if needed. The bytes
/// written depend only on the report.
pub fn emit_outputs(report: &ExperimentReport, dir: &Path, formats: OutputFormats) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    if formats.curves {
        written.push(write(dir.join("curves.csv"), curves_csv(report))?);
    }
    if formats.summary {
        written.push(write(dir.join("summary.json"), Summary::from_report(report).to_json())?);
    }
    if formats.plot {
        written.push(write(dir.join("plot.dat"), plot_dat(report))?);
    }
    Ok(written)
}
