//! Monte-Carlo experiments: sample processes, measure best `n`-term decay and
//! compare the fitted rate with the predicted one.

mod config;
mod output;
pub mod selftest;

pub use config::{ExperimentConfig, NGrid, ResolvedConfig};
pub use output::{emit_outputs, OutputFormats, Summary};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::besov::{estimate_kappa, sigma_curve, DecayCurve, KappaEstimate, KappaFit};
use crate::error::{Error, Result};
use crate::exponents::{KappaPrediction, KappaValue};
use crate::sampling::trial_seed;
use crate::spectral::synthesize_process;
use crate::wavelets::dwt_periodic;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "LEVY_COMPRESS_THREADS";

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub index: usize,
    pub seed: u64,
    pub curve: DecayCurve,
    pub kappa: KappaEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No prediction exists (admissibility failed and the run was forced).
    NoPrediction,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NoPrediction => "no-prediction",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_hash: String,
    pub version: &'static str,
    pub base_seed: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub fit_range: (usize, usize),
    pub trials: Vec<TrialResult>,
    pub kappa_median: f64,
    /// First and third quartile of the per-trial estimates.
    pub kappa_iqr: (f64, f64),
    pub prediction: KappaPrediction,
    pub condition: String,
    pub verdict: Verdict,
    pub verdict_note: String,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn kappa_values(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.kappa.value()).collect()
    }

    /// Median of `σ_n` across trials, one entry per grid point.
    pub fn median_sigma(&self) -> Vec<(usize, f64)> {
        let Some(first) = self.trials.first() else {
            return Vec::new();
        };
        first
            .curve
            .n_values
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let column: Vec<f64> = self.trials.iter().map(|t| t.curve.sigma[i]).collect();
                (n, quantile(&column, 0.5))
            })
            .collect()
    }

    /// Median `σ_n` at a grid point, if `n` is on the grid.
    pub fn median_sigma_at(&self, n: usize) -> Option<f64> {
        self.median_sigma()
            .into_iter()
            .find(|&(m, _)| m == n)
            .map(|(_, s)| s)
    }
}

/// Linear-interpolation quantile that tolerates infinite entries.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    let (a, b) = (sorted[lo], sorted[hi]);
    if frac == 0.0 || a == b {
        a
    } else if b.is_infinite() {
        b
    } else {
        a + (b - a) * frac
    }
}

fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.to_toml().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.trim().parse().map_err(|_| {
            Error::Config(format!("{THREADS_ENV}={value:?} is not a thread count"))
        })?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn run_trial(config: &ExperimentConfig, resolved: &ResolvedConfig, index: usize) -> Result<TrialResult> {
    let seed = trial_seed(config.seed, index);
    let process = synthesize_process(&config.noise, &resolved.grid, &resolved.symbol, seed)?;
    let coeffs = dwt_periodic(&resolved.grid, &process.values, &resolved.wavelet)?;
    let mut curve = sigma_curve(&coeffs, &resolved.params, &resolved.n_grid)?;
    let kappa = estimate_kappa(&curve, resolved.fit_range)?;
    curve.fit = Some(KappaFit {
        estimate: kappa,
        range: resolved.fit_range,
    });
    Ok(TrialResult {
        index,
        seed,
        curve,
        kappa,
    })
}

fn judge(config: &ExperimentConfig, prediction: &KappaPrediction, median: f64) -> (Verdict, String) {
    let tol = config.tolerance;
    match prediction.value {
        None => (
            Verdict::NoPrediction,
            "admissibility inequality fails; no prediction to compare against".into(),
        ),
        Some(KappaValue::Exact(v)) => {
            let ok = (median - v).abs() <= tol;
            (
                if ok { Verdict::Pass } else { Verdict::Fail },
                format!("median {median:.4} vs predicted {v:.4} (tolerance {tol})"),
            )
        }
        Some(KappaValue::Bounds { lower, upper }) => {
            let ok = median >= lower - tol;
            (
                if ok { Verdict::Pass } else { Verdict::Fail },
                format!(
                    "median {median:.4} vs predicted range [{lower:.4}, {upper:.4}]; \
                     finite-resolution estimates may exceed the range, \
                     only the lower bound is checked (tolerance {tol})"
                ),
            )
        }
        Some(KappaValue::Infinite) => {
            let gaussian_rate = (config.gamma - config.tau0) / config.d as f64 - 0.5;
            let threshold = gaussian_rate + config.infinite_margin;
            let ok = median >= threshold;
            (
                if ok { Verdict::Pass } else { Verdict::Fail },
                format!(
                    "median {median:.4} vs unbounded prediction; \
                     must reach the Gaussian rate {gaussian_rate:.4} plus {}",
                    config.infinite_margin
                ),
            )
        }
    }
}

/// Runs every trial of an experiment and reduces the results.
///
/// Trials run in parallel but each has its own seed, so the report does not
/// depend on the thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let resolved = config.resolve()?;
    let pool = thread_pool()?;
    let results: Vec<Result<TrialResult>> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, &resolved, i))
            .collect()
    });
    let mut trials = Vec::with_capacity(results.len());
    for (index, result) in results.into_iter().enumerate() {
        trials.push(result.map_err(|source| Error::Trial {
            trial: index,
            source: Box::new(source),
        })?);
    }

    let kappas: Vec<f64> = trials.iter().map(|t| t.kappa.value()).collect();
    let kappa_median = quantile(&kappas, 0.5);
    let kappa_iqr = (quantile(&kappas, 0.25), quantile(&kappas, 0.75));
    let (verdict, verdict_note) = judge(config, &resolved.prediction, kappa_median);

    Ok(ExperimentReport {
        config: config.clone(),
        fit_range: resolved.fit_range,
        trials,
        kappa_median,
        kappa_iqr,
        prediction: resolved.prediction,
        condition: resolved.condition,
        verdict,
        verdict_note,
        provenance: Provenance {
            config_hash: config_hash(config),
            version: env!("CARGO_PKG_VERSION"),
            base_seed: config.seed,
        },
    })
}

/// Sort key for the predicted rate: the lower end of a range, `+∞` for an
/// unbounded prediction and NaN when there is none.
pub fn prediction_key(prediction: &KappaPrediction) -> f64 {
    match prediction.value {
        Some(KappaValue::Exact(v)) => v,
        Some(KappaValue::Bounds { lower, .. }) => lower,
        Some(KappaValue::Infinite) => f64::INFINITY,
        None => f64::NAN,
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonEntry {
    pub label: String,
    pub prediction: KappaPrediction,
    pub kappa_median: f64,
    pub kappa_iqr: (f64, f64),
    pub sigma_median: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct FamilyComparison {
    /// Entries sorted by predicted rate, ties in input order.
    pub entries: Vec<ComparisonEntry>,
    /// Pairs `(a, b)` predicted `κ_a < κ_b` whose medians are not ordered
    /// the same way.
    pub inversions: Vec<(String, String)>,
}

impl FamilyComparison {
    pub fn is_consistent(&self) -> bool {
        self.inversions.is_empty()
    }
}

/// Orders finished experiments by predicted rate and lists every pair whose
/// measured medians disagree with that order.
pub fn compare_reports(reports: &[ExperimentReport]) -> Result<FamilyComparison> {
    if let Some(first) = reports.first() {
        let a = &first.config;
        for r in &reports[1..] {
            let b = &r.config;
            if a.gamma != b.gamma || a.d != b.d || a.level != b.level || a.p0 != b.p0 || a.tau0 != b.tau0 {
                return Err(Error::Config(
                    "compared experiments must share gamma, d, level, p0 and tau0".into(),
                ));
            }
        }
    }
    let mut entries: Vec<ComparisonEntry> = reports
        .iter()
        .map(|r| ComparisonEntry {
            label: r.config.noise.to_string(),
            prediction: r.prediction,
            kappa_median: r.kappa_median,
            kappa_iqr: r.kappa_iqr,
            sigma_median: r.median_sigma(),
        })
        .collect();
    entries.sort_by(|x, y| prediction_key(&x.prediction).total_cmp(&prediction_key(&y.prediction)));

    let mut inversions = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let (ka, kb) = (prediction_key(&a.prediction), prediction_key(&b.prediction));
            if ka.is_nan() || kb.is_nan() || ka == kb {
                continue;
            }
            if a.kappa_median >= b.kappa_median {
                inversions.push((a.label.clone(), b.label.clone()));
            }
        }
    }
    Ok(FamilyComparison {
        entries,
        inversions,
    })
}

/// Runs each experiment and compares them.
pub fn compare_families(configs: &[ExperimentConfig]) -> Result<(Vec<ExperimentReport>, FamilyComparison)> {
    let reports = configs.iter().map(run_experiment).collect::<Result<Vec<_>>>()?;
    let comparison = compare_reports(&reports)?;
    Ok((reports, comparison))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::LevyExponent;

    fn small(noise: LevyExponent) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(noise, 1.0);
        c.level = 12;
        c.trials = 4;
        c.seed = 7;
        c
    }

    #[test]
    fn quantile_handles_infinity() {
        let inf = f64::INFINITY;
        assert_eq!(quantile(&[1.0, 2.0, 3.0], 0.5), 2.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile(&[1.0, inf, inf], 0.5), inf);
        assert_eq!(quantile(&[1.0, 2.0, inf, inf], 0.25), 1.75);
        assert_eq!(quantile(&[1.0, 2.0, inf, inf], 0.5), inf);
        assert_eq!(quantile(&[inf, inf], 0.5), inf);
    }

    #[test]
    fn runs_are_reproducible_and_thread_independent() {
        let c = small(LevyExponent::cauchy());
        let a = run_experiment(&c).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| run_experiment(&c).unwrap());
        assert_eq!(a.kappa_values(), b.kappa_values());
        assert_eq!(a.provenance.config_hash, b.provenance.config_hash);
        for (x, y) in a.trials.iter().zip(&b.trials) {
            assert_eq!(x.curve.sigma, y.curve.sigma);
            assert_eq!(x.seed, trial_seed(7, x.index));
        }
    }

    #[test]
    fn gaussian_small_run_is_near_prediction() {
        let report = run_experiment(&small(LevyExponent::gaussian(1.0).unwrap())).unwrap();
        assert!((report.kappa_median - 0.5).abs() < 0.3, "{}", report.kappa_median);
        assert_ne!(report.verdict, Verdict::NoPrediction);
    }

    #[test]
    fn forced_inadmissible_run_has_no_prediction() {
        let mut c = small(LevyExponent::gaussian(1.0).unwrap());
        c.gamma = 0.4;
        assert!(run_experiment(&c).is_err());
        c.allow_inadmissible = true;
        let report = run_experiment(&c).unwrap();
        assert_eq!(report.verdict, Verdict::NoPrediction);
    }

    #[test]
    fn verdict_rules() {
        let c = small(LevyExponent::gaussian(1.0).unwrap());
        let exact = KappaPrediction {
            value: Some(KappaValue::Exact(0.5)),
            condition_satisfied: true,
        };
        assert_eq!(judge(&c, &exact, 0.6).0, Verdict::Pass);
        assert_eq!(judge(&c, &exact, 0.7).0, Verdict::Fail);
        let bounds = KappaPrediction {
            value: Some(KappaValue::Bounds { lower: 1.0, upper: 1.0 }),
            condition_satisfied: true,
        };
        assert_eq!(judge(&c, &bounds, 3.0).0, Verdict::Pass);
        assert_eq!(judge(&c, &bounds, 0.8).0, Verdict::Fail);
        let inf = KappaPrediction {
            value: Some(KappaValue::Infinite),
            condition_satisfied: true,
        };
        assert_eq!(judge(&c, &inf, f64::INFINITY).0, Verdict::Pass);
        assert_eq!(judge(&c, &inf, 1.6).0, Verdict::Pass);
        assert_eq!(judge(&c, &inf, 1.2).0, Verdict::Fail);
    }

    #[test]
    fn comparison_rejects_mismatched_settings() {
        let a = run_experiment(&small(LevyExponent::gaussian(1.0).unwrap())).unwrap();
        let mut c = small(LevyExponent::cauchy());
        c.gamma = 1.5;
        let b = run_experiment(&c).unwrap();
        assert!(compare_reports(&[a, b]).is_err());
    }
}
