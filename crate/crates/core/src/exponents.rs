//! Lévy exponent families and the compressibility they predict.
//!
//! Every supported white noise is specified by a closed-form Lévy exponent
//! `ψ`, so that `E[exp(i ξ ⟨w, φ⟩)] = exp(∫ ψ(ξ φ(x)) dx)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of the jumps of a compound Poisson noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpDistribution {
    /// Centered normal jumps with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Jumps uniform on `[low, high]`.
    Uniform { low: f64, high: f64 },
    /// Every jump equals `value`.
    Dirac { value: f64 },
}

impl JumpDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpDistribution::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(
                Error::Parameter(format!("gaussian jump sigma must be positive, got {sigma}")),
            ),
            JumpDistribution::Uniform { low, high }
                if !(low.is_finite() && high.is_finite() && low < high) =>
            {
                Err(Error::Parameter(format!(
                    "uniform jumps need finite low < high, got [{low}, {high}]"
                )))
            }
            JumpDistribution::Dirac { value } if !value.is_finite() => Err(Error::Parameter(
                format!("dirac jump value must be finite, got {value}"),
            )),
            _ => Ok(()),
        }
    }

    /// Characteristic function `E[exp(i ξ J)]` of a single jump.
    pub fn char_fn(&self, xi: f64) -> Complex64 {
        match *self {
            JumpDistribution::Gaussian { sigma } => {
                Complex64::new((-0.5 * sigma * sigma * xi * xi).exp(), 0.0)
            }
            JumpDistribution::Uniform { low, high } => {
                if xi == 0.0 {
                    return Complex64::new(1.0, 0.0);
                }
                let i = Complex64::i();
                ((i * xi * high).exp() - (i * xi * low).exp()) / (i * xi * (high - low))
            }
            JumpDistribution::Dirac { value } => Complex64::from_polar(1.0, xi * value),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            JumpDistribution::Gaussian { .. } => "gaussian",
            JumpDistribution::Uniform { .. } => "uniform",
            JumpDistribution::Dirac { .. } => "dirac",
        }
    }
}

/// A Lévy exponent family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyExponent {
    /// `ψ(ξ) = −σ² ξ² / 2`.
    Gaussian { variance: f64 },
    /// Symmetric α-stable, `ψ(ξ) = −|ξ|^α` with `0 < α < 2`. `α = 1` is Cauchy.
    SymmetricStable { alpha: f64 },
    /// `ψ(ξ) = λ (P̂_J(ξ) − 1)`.
    CompoundPoisson { rate: f64, jumps: JumpDistribution },
    /// `ψ(ξ) = −log(1 + ξ²)`.
    Laplace,
    /// Inverse Gaussian subordinator, `ψ(ξ) = δ (γ − sqrt(γ² − 2iξ))`.
    InverseGaussian { delta: f64, gamma: f64 },
}

/// Blumenthal–Getoor indices `(β, β′)` of a Lévy exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BgIndices {
    pub beta: f64,
    pub beta_prime: f64,
}

/// Predicted value of the compressibility exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaValue {
    Exact(f64),
    Bounds { lower: f64, upper: f64 },
    Infinite,
}

/// Compressibility prediction together with the admissibility check it rests on.
/// `value` is `None` when the admissibility inequality fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaPrediction {
    pub value: Option<KappaValue>,
    pub condition_satisfied: bool,
}

/// Almost-sure Besov membership of `s = L⁻¹ w` predicted from `(γ, β, β′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    AlmostSurelyIn,
    AlmostSurelyOut,
    Critical,
}

impl LevyExponent {
    pub fn gaussian(variance: f64) -> Result<Self> {
        let e = LevyExponent::Gaussian { variance };
        e.validate()?;
        Ok(e)
    }

    pub fn stable(alpha: f64) -> Result<Self> {
        let e = LevyExponent::SymmetricStable { alpha };
        e.validate()?;
        Ok(e)
    }

    pub fn cauchy() -> Self {
        LevyExponent::SymmetricStable { alpha: 1.0 }
    }

    pub fn compound_poisson(rate: f64, jumps: JumpDistribution) -> Result<Self> {
        let e = LevyExponent::CompoundPoisson { rate, jumps };
        e.validate()?;
        Ok(e)
    }

    pub fn inverse_gaussian(delta: f64, gamma: f64) -> Result<Self> {
        let e = LevyExponent::InverseGaussian { delta, gamma };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            LevyExponent::Gaussian { variance } => positive("gaussian variance", variance),
            LevyExponent::SymmetricStable { alpha } => {
                if alpha > 0.0 && alpha < 2.0 {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "stable index alpha must lie in (0, 2), got {alpha}"
                    )))
                }
            }
            LevyExponent::CompoundPoisson { rate, jumps } => {
                positive("compound Poisson rate", rate)?;
                jumps.validate()
            }
            LevyExponent::Laplace => Ok(()),
            LevyExponent::InverseGaussian { delta, gamma } => {
                positive("inverse Gaussian delta", delta)?;
                positive("inverse Gaussian gamma", gamma)
            }
        }
    }

    /// Evaluates `ψ(ξ)`.
    pub fn psi(&self, xi: f64) -> Result<Complex64> {
        self.validate()?;
        Ok(self.psi_unchecked(xi))
    }

    pub(crate) fn psi_unchecked(&self, xi: f64) -> Complex64 {
        if xi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match *self {
            LevyExponent::Gaussian { variance } => Complex64::new(-0.5 * variance * xi * xi, 0.0),
            LevyExponent::SymmetricStable { alpha } => Complex64::new(-xi.abs().powf(alpha), 0.0),
            LevyExponent::CompoundPoisson { rate, jumps } => {
                rate * (jumps.char_fn(xi) - Complex64::new(1.0, 0.0))
            }
            LevyExponent::Laplace => Complex64::new(-(xi * xi).ln_1p(), 0.0),
            LevyExponent::InverseGaussian { delta, gamma } => {
                let root = Complex64::new(gamma * gamma, -2.0 * xi).sqrt();
                delta * (Complex64::new(gamma, 0.0) - root)
            }
        }
    }

    /// Characteristic function `exp(volume · ψ(ξ))` of the noise tested
    /// against the indicator of a set of the given volume.
    pub fn increment_char_fn(&self, volume: f64, xi: f64) -> Result<Complex64> {
        Ok((volume * self.psi(xi)?).exp())
    }

    pub fn bg_indices(&self) -> BgIndices {
        let beta = match *self {
            LevyExponent::Gaussian { .. } => 2.0,
            LevyExponent::SymmetricStable { alpha } => alpha,
            LevyExponent::CompoundPoisson { .. } | LevyExponent::Laplace => 0.0,
            LevyExponent::InverseGaussian { .. } => 0.5,
        };
        BgIndices {
            beta,
            beta_prime: beta,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, LevyExponent::Gaussian { .. })
    }

    /// Short family name used in configuration files and reports.
    pub fn family_name(&self) -> &'static str {
        match *self {
            LevyExponent::Gaussian { .. } => "gaussian",
            LevyExponent::SymmetricStable { alpha: 1.0 } => "cauchy",
            LevyExponent::SymmetricStable { .. } => "sas",
            LevyExponent::CompoundPoisson { .. } => "compound-poisson",
            LevyExponent::Laplace => "laplace",
            LevyExponent::InverseGaussian { .. } => "inverse-gaussian",
        }
    }
}

/// Compressibility `κ_{p0,τ0}` of `s = L⁻¹ w` for an operator of order `gamma`.
///
/// `p0` may be `f64::INFINITY`.
pub fn theoretical_kappa(
    exponent: &LevyExponent,
    gamma: f64,
    d: usize,
    p0: f64,
    tau0: f64,
) -> Result<KappaPrediction> {
    exponent.validate()?;
    if !(gamma > 0.0) {
        return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
    }
    if !(p0 > 0.0) {
        return Err(Error::Parameter(format!("p0 must be positive, got {p0}")));
    }
    if d == 0 {
        return Err(Error::Parameter("dimension must be at least 1".into()));
    }
    let d = d as f64;
    let condition_satisfied = admissibility_gap(exponent, gamma, d, p0, tau0) > 0.0;
    if !condition_satisfied {
        return Ok(KappaPrediction {
            value: None,
            condition_satisfied,
        });
    }
    let base = (gamma - tau0) / d;
    let value = if exponent.is_gaussian() {
        KappaValue::Exact(base - 0.5)
    } else {
        let BgIndices { beta, beta_prime } = exponent.bg_indices();
        if beta == 0.0 {
            KappaValue::Infinite
        } else {
            let lower = base + 1.0 / beta - 1.0;
            let upper = if beta_prime == 0.0 {
                f64::INFINITY
            } else {
                base + 1.0 / beta_prime - 1.0
            };
            KappaValue::Bounds { lower, upper }
        }
    };
    Ok(KappaPrediction {
        value: Some(value),
        condition_satisfied,
    })
}

/// Left side minus right side of the admissibility inequality; positive when it holds.
fn admissibility_gap(exponent: &LevyExponent, gamma: f64, d: f64, p0: f64, tau0: f64) -> f64 {
    if exponent.is_gaussian() {
        gamma - (tau0 + d / 2.0)
    } else {
        gamma - (tau0 + d - d / p0)
    }
}

/// Human-readable form of the admissibility inequality with its numbers filled in.
pub fn admissibility_condition(
    exponent: &LevyExponent,
    gamma: f64,
    d: usize,
    p0: f64,
    tau0: f64,
) -> (bool, String) {
    let df = d as f64;
    let holds = admissibility_gap(exponent, gamma, df, p0, tau0) > 0.0;
    let text = if exponent.is_gaussian() {
        format!(
            "gamma > tau0 + d/2 ({gamma} > {})",
            tau0 + df / 2.0
        )
    } else {
        format!(
            "gamma > tau0 + d - d/p0 ({gamma} > {})",
            tau0 + df - df / p0
        )
    };
    (holds, text)
}

/// Predicted almost-sure membership of `s = L⁻¹ w` in `B^τ_{p,q}`.
pub fn check_besov_membership_prediction(
    exponent: &LevyExponent,
    gamma: f64,
    d: usize,
    p: f64,
    tau: f64,
) -> Membership {
    let d = d as f64;
    let (inside_below, outside_above) = if exponent.is_gaussian() {
        let t = gamma - d / 2.0;
        (t, t)
    } else {
        let BgIndices { beta, beta_prime } = exponent.bg_indices();
        (
            gamma + d * (1.0 / p.max(beta) - 1.0),
            gamma + d * (1.0 / p.max(beta_prime) - 1.0),
        )
    };
    if tau < inside_below {
        Membership::AlmostSurelyIn
    } else if tau > outside_above {
        Membership::AlmostSurelyOut
    } else {
        Membership::Critical
    }
}

/// Flat key/value form of an exponent, as it appears in configuration files.
///
/// ```toml
/// family = "compound-poisson"
/// rate = 1.0
/// jump = "gaussian"
/// jump_sigma = 1.0
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_low: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_high: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl NoiseSpec {
    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let fields: [(&'static str, bool); 10] = [
            ("variance", self.variance.is_some()),
            ("alpha", self.alpha.is_some()),
            ("rate", self.rate.is_some()),
            ("jump", self.jump.is_some()),
            ("jump_sigma", self.jump_sigma.is_some()),
            ("jump_low", self.jump_low.is_some()),
            ("jump_high", self.jump_high.is_some()),
            ("jump_value", self.jump_value.is_some()),
            ("delta", self.delta.is_some()),
            ("gamma", self.gamma.is_some()),
        ];
        for (name, set) in fields {
            if set {
                keys.push(name);
            }
        }
        keys
    }
}

impl TryFrom<&NoiseSpec> for LevyExponent {
    type Error = Error;

    fn try_from(spec: &NoiseSpec) -> Result<Self> {
        let allowed: &[&str] = match spec.family.as_str() {
            "gaussian" => &["variance"],
            "sas" => &["alpha"],
            "cauchy" | "laplace" => &[],
            "compound-poisson" => &[
                "rate",
                "jump",
                "jump_sigma",
                "jump_low",
                "jump_high",
                "jump_value",
            ],
            "inverse-gaussian" => &["delta", "gamma"],
            other => {
                return Err(Error::Config(format!(
                    "unknown noise family '{other}' (expected gaussian, sas, cauchy, \
                     compound-poisson, laplace or inverse-gaussian)"
                )))
            }
        };
        if let Some(bad) = spec.present().into_iter().find(|k| !allowed.contains(k)) {
            return Err(Error::Config(format!(
                "parameter '{bad}' does not apply to family '{}'",
                spec.family
            )));
        }
        let exponent = match spec.family.as_str() {
            "gaussian" => LevyExponent::Gaussian {
                variance: spec.variance.unwrap_or(1.0),
            },
            "sas" => LevyExponent::SymmetricStable {
                alpha: spec
                    .alpha
                    .ok_or_else(|| Error::Config("family 'sas' requires 'alpha'".into()))?,
            },
            "cauchy" => LevyExponent::cauchy(),
            "laplace" => LevyExponent::Laplace,
            "compound-poisson" => {
                let jumps = match spec.jump.as_deref().unwrap_or("gaussian") {
                    "gaussian" => {
                        jump_only(spec, &["jump_sigma"])?;
                        JumpDistribution::Gaussian {
                            sigma: spec.jump_sigma.unwrap_or(1.0),
                        }
                    }
                    "uniform" => {
                        jump_only(spec, &["jump_low", "jump_high"])?;
                        JumpDistribution::Uniform {
                            low: spec.jump_low.unwrap_or(-1.0),
                            high: spec.jump_high.unwrap_or(1.0),
                        }
                    }
                    "dirac" => {
                        jump_only(spec, &["jump_value"])?;
                        JumpDistribution::Dirac {
                            value: spec.jump_value.unwrap_or(1.0),
                        }
                    }
                    other => {
                        return Err(Error::Config(format!(
                            "unknown jump law '{other}' (expected gaussian, uniform or dirac)"
                        )))
                    }
                };
                LevyExponent::CompoundPoisson {
                    rate: spec.rate.unwrap_or(1.0),
                    jumps,
                }
            }
            "inverse-gaussian" => LevyExponent::InverseGaussian {
                delta: spec.delta.unwrap_or(1.0),
                gamma: spec.gamma.unwrap_or(1.0),
            },
            _ => unreachable!(),
        };
        exponent.validate()?;
        Ok(exponent)
    }
}

fn jump_only(spec: &NoiseSpec, allowed: &[&str]) -> Result<()> {
    let jump_keys = ["jump_sigma", "jump_low", "jump_high", "jump_value"];
    for key in spec.present() {
        if jump_keys.contains(&key) && !allowed.contains(&key) {
            return Err(Error::Config(format!(
                "parameter '{key}' does not apply to jump law '{}'",
                spec.jump.as_deref().unwrap_or("gaussian")
            )));
        }
    }
    Ok(())
}

impl From<&LevyExponent> for NoiseSpec {
    fn from(e: &LevyExponent) -> Self {
        let mut spec = NoiseSpec {
            family: e.family_name().to_string(),
            ..NoiseSpec::default()
        };
        match *e {
            LevyExponent::Gaussian { variance } => spec.variance = Some(variance),
            LevyExponent::SymmetricStable { alpha } if alpha != 1.0 => spec.alpha = Some(alpha),
            LevyExponent::SymmetricStable { .. } | LevyExponent::Laplace => {}
            LevyExponent::CompoundPoisson { rate, jumps } => {
                spec.rate = Some(rate);
                spec.jump = Some(jumps.name().to_string());
                match jumps {
                    JumpDistribution::Gaussian { sigma } => spec.jump_sigma = Some(sigma),
                    JumpDistribution::Uniform { low, high } => {
                        spec.jump_low = Some(low);
                        spec.jump_high = Some(high);
                    }
                    JumpDistribution::Dirac { value } => spec.jump_value = Some(value),
                }
            }
            LevyExponent::InverseGaussian { delta, gamma } => {
                spec.delta = Some(delta);
                spec.gamma = Some(gamma);
            }
        }
        spec
    }
}

impl Serialize for LevyExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NoiseSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LevyExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = NoiseSpec::deserialize(d)?;
        LevyExponent::try_from(&spec).map_err(serde::de::Error::custom)
    }
}

/// Parses the compact command-line form `family[:key=value,...]`,
/// e.g. `sas:alpha=1.5` or `compound-poisson:rate=3,jump=dirac,jump_value=1`.
impl FromStr for LevyExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), p),
            None => (s.trim(), ""),
        };
        let mut spec = NoiseSpec {
            family: family.to_string(),
            ..NoiseSpec::default()
        };
        for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{pair}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "jump" {
                spec.jump = Some(value.to_string());
                continue;
            }
            let v: f64 = value
                .parse()
                .map_err(|_| Error::Config(format!("'{value}' is not a number (key '{key}')")))?;
            let slot = match key {
                "variance" => &mut spec.variance,
                "alpha" => &mut spec.alpha,
                "rate" => &mut spec.rate,
                "jump_sigma" => &mut spec.jump_sigma,
                "jump_low" => &mut spec.jump_low,
                "jump_high" => &mut spec.jump_high,
                "jump_value" => &mut spec.jump_value,
                "delta" => &mut spec.delta,
                "gamma" => &mut spec.gamma,
                other => return Err(Error::Config(format!("unknown noise parameter '{other}'"))),
            };
            *slot = Some(v);
        }
        LevyExponent::try_from(&spec)
    }
}

impl fmt::Display for LevyExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LevyExponent::Gaussian { variance } => write!(f, "gaussian(variance={variance})"),
            LevyExponent::SymmetricStable { alpha: 1.0 } => write!(f, "cauchy"),
            LevyExponent::SymmetricStable { alpha } => write!(f, "sas(alpha={alpha})"),
            LevyExponent::CompoundPoisson { rate, jumps } => {
                write!(f, "compound-poisson(rate={rate}, jumps=")?;
                match jumps {
                    JumpDistribution::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma}))"),
                    JumpDistribution::Uniform { low, high } => {
                        write!(f, "uniform[{low}, {high}])")
                    }
                    JumpDistribution::Dirac { value } => write!(f, "dirac({value}))"),
                }
            }
            LevyExponent::Laplace => write!(f, "laplace"),
            LevyExponent::InverseGaussian { delta, gamma } => {
                write!(f, "inverse-gaussian(delta={delta}, gamma={gamma})")
            }
        }
    }
}
