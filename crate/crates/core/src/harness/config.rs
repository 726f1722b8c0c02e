//! Experiment configuration files.
//!
//! A configuration is a TOML document. Unknown keys are rejected.
//!
//! ```toml
//! gamma = 1.0            # operator order (required)
//! operator = "fractional-laplacian"   # or "matern", "derivative"
//! # operator_coefficients = [1.0]     # a_0..a_{n-1}, derivative only
//! d = 1                  # dimension, 1 or 2
//! level = 14             # grid has 2^level cells per axis
//! wavelet_order = 4      # Daubechies vanishing moments
//! trials = 20
//! seed = 0
//! p0 = 2.0
//! tau0 = 0.0
//! n_grid = "dyadic"      # or an explicit ascending list
//! # fit_range = [16, 1024]
//! tolerance = 0.15
//! infinite_margin = 1.0
//! allow_inadmissible = false
//! output = "out"
//!
//! [noise]
//! family = "gaussian"    # gaussian, sas, cauchy, compound-poisson, laplace, inverse-gaussian
//! variance = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::besov::{dyadic_grid, BesovParams, MIN_FIT_POINTS};
use crate::error::{Error, Result};
use crate::exponents::{admissibility_condition, theoretical_kappa, KappaPrediction, LevyExponent};
use crate::sampling::GridSpec;
use crate::spectral::OperatorSymbol;
use crate::wavelets::WaveletSpec;

fn default_operator() -> String {
    "fractional-laplacian".into()
}
fn default_d() -> usize {
    1
}
fn default_level() -> u32 {
    14
}
fn default_wavelet_order() -> usize {
    4
}
fn default_trials() -> usize {
    20
}
fn default_p0() -> f64 {
    2.0
}
fn default_tolerance() -> f64 {
    0.15
}
fn default_infinite_margin() -> f64 {
    1.0
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// `n` values at which `σ_n` is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NGrid {
    /// `"dyadic"`: `{2^2, …, 2^{Jd−2}}`.
    Named(String),
    Explicit(Vec<usize>),
}

impl Default for NGrid {
    fn default() -> Self {
        NGrid::Named("dyadic".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub gamma: f64,
    #[serde(default = "default_operator")]
    pub operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator_coefficients: Option<Vec<f64>>,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_level")]
    pub level: u32,
    #[serde(default = "default_wavelet_order")]
    pub wavelet_order: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_p0")]
    pub p0: f64,
    #[serde(default)]
    pub tau0: f64,
    #[serde(default)]
    pub n_grid: NGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_range: Option<[usize; 2]>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_infinite_margin")]
    pub infinite_margin: f64,
    #[serde(default)]
    pub allow_inadmissible: bool,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub noise: LevyExponent,
}

/// Everything a run needs, derived from a checked configuration.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub grid: GridSpec,
    pub wavelet: WaveletSpec,
    pub symbol: OperatorSymbol,
    pub params: BesovParams,
    pub n_grid: Vec<usize>,
    pub fit_range: (usize, usize),
    pub prediction: KappaPrediction,
    pub condition: String,
}

impl ExperimentConfig {
    /// Desk-scale defaults for the given noise and operator order.
    pub fn new(noise: LevyExponent, gamma: f64) -> Self {
        ExperimentConfig {
            gamma,
            operator: default_operator(),
            operator_coefficients: None,
            d: default_d(),
            level: default_level(),
            wavelet_order: default_wavelet_order(),
            trials: default_trials(),
            seed: 0,
            p0: default_p0(),
            tau0: 0.0,
            n_grid: NGrid::default(),
            fit_range: None,
            tolerance: default_tolerance(),
            infinite_margin: default_infinite_margin(),
            allow_inadmissible: false,
            output: default_output(),
            noise,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    pub fn symbol(&self) -> Result<OperatorSymbol> {
        match (self.operator.as_str(), &self.operator_coefficients) {
            ("fractional-laplacian", None) => OperatorSymbol::fractional_laplacian(self.gamma),
            ("matern", None) => OperatorSymbol::matern(self.gamma),
            ("derivative", Some(coefficients)) => {
                if coefficients.len() as f64 != self.gamma {
                    return Err(Error::Config(format!(
                        "derivative operator with {} coefficients has order {}, but gamma = {}",
                        coefficients.len(),
                        coefficients.len(),
                        self.gamma
                    )));
                }
                OperatorSymbol::derivative(coefficients.clone())
            }
            ("derivative", None) => Err(Error::Config(
                "operator 'derivative' needs operator_coefficients".into(),
            )),
            ("fractional-laplacian" | "matern", Some(_)) => Err(Error::Config(format!(
                "operator_coefficients do not apply to operator '{}'",
                self.operator
            ))),
            (other, _) => Err(Error::Config(format!(
                "unknown operator '{other}' (expected fractional-laplacian, matern or derivative)"
            ))),
        }
    }

    /// Checks the configuration and derives the run parameters. Configurations
    /// violating the admissibility inequality are rejected unless
    /// `allow_inadmissible` is set.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        self.noise.validate()?;
        let grid = GridSpec::new(self.d, self.level)?;
        let wavelet = WaveletSpec::new(self.wavelet_order)?;
        wavelet.max_level(self.level)?;
        let symbol = self.symbol()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !self.p0.is_finite() {
            return Err(Error::Config(
                "p0 = inf is only supported by the prediction, not by measured norms".into(),
            ));
        }
        if !(self.tolerance >= 0.0) || !(self.infinite_margin >= 0.0) {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        let params = BesovParams::diagonal(self.tau0, self.p0)?;

        let bits = self.level * self.d as u32;
        let n_grid = match &self.n_grid {
            NGrid::Named(name) if name == "dyadic" => {
                if bits < 4 {
                    return Err(Error::Config("grid too small for the dyadic n grid".into()));
                }
                dyadic_grid(2, bits - 2)
            }
            NGrid::Named(other) => {
                return Err(Error::Config(format!(
                    "unknown n_grid policy '{other}' (expected \"dyadic\" or a list)"
                )))
            }
            NGrid::Explicit(list) => {
                if list.is_empty() || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("n_grid must be a non-empty ascending list".into()));
                }
                list.clone()
            }
        };
        let fit_range = match self.fit_range {
            Some([lo, hi]) if lo <= hi => (lo, hi),
            Some([lo, hi]) => {
                return Err(Error::Config(format!("fit_range [{lo}, {hi}] is reversed")))
            }
            None => {
                if bits < 8 {
                    return Err(Error::Config(
                        "grid too small for the default fit window [2^4, 2^{Jd-4}]".into(),
                    ));
                }
                (1 << 4, 1 << (bits - 4))
            }
        };
        let in_window = n_grid.iter().filter(|&&n| n >= fit_range.0 && n <= fit_range.1).count();
        if in_window < MIN_FIT_POINTS {
            return Err(Error::Config(format!(
                "fit window [{}, {}] holds {in_window} grid points, at least {MIN_FIT_POINTS} are needed",
                fit_range.0, fit_range.1
            )));
        }

        let prediction = theoretical_kappa(&self.noise, self.gamma, self.d, self.p0, self.tau0)?;
        let (holds, condition) =
            admissibility_condition(&self.noise, self.gamma, self.d, self.p0, self.tau0);
        if !holds && !self.allow_inadmissible {
            return Err(Error::Precondition(format!(
                "{condition} does not hold for {}; set allow_inadmissible = true to run anyway",
                self.noise
            )));
        }
        Ok(ResolvedConfig {
            grid,
            wavelet,
            symbol,
            params,
            n_grid,
            fit_range,
            prediction,
            condition,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAUSS: &str = r#"
gamma = 1.0
trials = 3
level = 12

[noise]
family = "gaussian"
variance = 1.0
"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml(GAUSS).unwrap();
        assert_eq!(c.d, 1);
        assert_eq!(c.wavelet_order, 4);
        assert_eq!(c.p0, 2.0);
        let r = c.resolve().unwrap();
        assert_eq!(r.n_grid, dyadic_grid(2, 10));
        assert_eq!(r.fit_range, (16, 256));
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = GAUSS.replace("trials = 3", "trails = 3");
        let err = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("trails"), "{err}");
        let text = GAUSS.replace("variance = 1.0", "variance = 1.0\nalpha = 1.0");
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }

    #[test]
    fn admissibility_gate_names_the_inequality() {
        let text = GAUSS.replace("gamma = 1.0", "gamma = 0.4");
        let c = ExperimentConfig::from_toml(&text).unwrap();
        let err = c.resolve().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma > tau0 + d/2"), "{msg}");
        let mut c = c;
        c.allow_inadmissible = true;
        let r = c.resolve().unwrap();
        assert!(!r.prediction.condition_satisfied);
    }

    #[test]
    fn toml_round_trip() {
        let c = ExperimentConfig::from_toml(GAUSS).unwrap();
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn operator_selection() {
        let mut c = ExperimentConfig::from_toml(GAUSS).unwrap();
        c.operator = "matern".into();
        assert!(c.resolve().is_ok());
        c.operator = "derivative".into();
        assert!(c.resolve().is_err());
        c.operator_coefficients = Some(vec![1.0]);
        assert!(c.resolve().is_ok());
        c.operator = "hilbert".into();
        assert!(c.resolve().is_err());
    }

    #[test]
    fn bad_grids_and_ranges() {
        let mut c = ExperimentConfig::from_toml(GAUSS).unwrap();
        c.fit_range = Some([64, 16]);
        assert!(c.resolve().is_err());
        c.fit_range = None;
        c.n_grid = NGrid::Explicit(vec![4, 2]);
        assert!(c.resolve().is_err());
        c.n_grid = NGrid::Named("linear".into());
        assert!(c.resolve().is_err());
        c.n_grid = NGrid::default();
        c.p0 = f64::INFINITY;
        assert!(c.resolve().is_err());
        c.p0 = 2.0;
        c.level = 10;
        let err = c.resolve().unwrap_err().to_string();
        assert!(err.contains("3 grid points"), "{err}");
        c.level = 2;
        assert!(c.resolve().is_err());
    }
}
