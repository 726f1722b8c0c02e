//! Besov sequence norms, best `n`-term approximation and decay-rate estimation.
//!
//! With `p = q` the Besov sequence quasi-norm is a weighted `ℓ_p` norm of
//! `a = 2^{j(τ − d/p)} |λ^{j,G}_m|`. Its `p`-th power is additive over
//! coefficients, so keeping the `n` largest weighted magnitudes is a best
//! `n`-term approximation and its error is the `ℓ_p` norm of the rest.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::wavelets::WaveletCoeffs;

/// Smoothness `tau`, integrability `p` and fine index `q` (may be infinite).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesovParams {
    pub tau: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovParams {
    pub fn new(tau: f64, p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("p must be positive and finite, got {p}")));
        }
        if !(q > 0.0) {
            return Err(Error::Parameter(format!("q must be positive, got {q}")));
        }
        if !tau.is_finite() {
            return Err(Error::Parameter(format!("tau must be finite, got {tau}")));
        }
        Ok(BesovParams { tau, p, q })
    }

    /// The `p = q` space used for `n`-term approximation.
    pub fn diagonal(tau: f64, p: f64) -> Result<Self> {
        Self::new(tau, p, p)
    }

    /// Level weight `2^{j(τ − d/p)}`.
    pub fn weight(&self, j: u32, d: usize) -> f64 {
        2f64.powf(j as f64 * (self.tau - d as f64 / self.p))
    }

    fn require_diagonal(&self) -> Result<()> {
        if self.q != self.p {
            return Err(Error::Parameter(format!(
                "n-term approximation needs q = p, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        Ok(())
    }
}

pub fn besov_seq_norm(coeffs: &WaveletCoeffs, params: &BesovParams) -> f64 {
    let BesovParams { tau: _, p, q } = *params;
    let d = coeffs.dim();
    let mut acc = 0.0f64;
    for level in coeffs.levels() {
        let w = params.weight(level.j, d);
        for band in &level.bands {
            let inner = band.values.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
            if q.is_infinite() {
                acc = acc.max(w * inner);
            } else {
                acc += (w * inner).powf(q);
            }
        }
    }
    if q.is_infinite() {
        acc
    } else {
        acc.powf(1.0 / q)
    }
}

/// Weighted magnitudes `2^{j(τ − d/p)} |λ|` in coefficient iteration order.
pub fn weighted_magnitudes(coeffs: &WaveletCoeffs, params: &BesovParams) -> Vec<f64> {
    let d = coeffs.dim();
    let mut out = Vec::with_capacity(coeffs.len());
    for level in coeffs.levels() {
        let w = params.weight(level.j, d);
        for band in &level.bands {
            out.extend(band.values.iter().map(|v| w * v.abs()));
        }
    }
    out
}

/// Positions sorted by decreasing magnitude; equal magnitudes keep iteration order.
/// `x^p`, with the common exponents spelled out so every call site rounds
/// identically whatever the optimizer does with `powf`.
pub fn pow_p(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// Inverse of [`pow_p`].
pub fn root_p(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x.sqrt()
    } else if p == 1.0 {
        x
    } else {
        x.powf(1.0 / p)
    }
}

fn rank(weighted: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weighted.len()).collect();
    order.sort_by(|&a, &b| weighted[b].total_cmp(&weighted[a]));
    order
}

/// Result of a best `n`-term selection.
#[derive(Debug, Clone, PartialEq)]
pub struct NTermApprox {
    /// Kept positions in coefficient iteration order, ascending.
    pub kept: Vec<usize>,
    pub residual: f64,
}

/// Best `n`-term selection on precomputed weighted magnitudes.
pub fn best_n_term_weighted(weighted: &[f64], p: f64, n: usize) -> NTermApprox {
    let order = rank(weighted);
    let split = n.min(order.len());
    // Smallest first.
    let tail: f64 = order[split..]
        .iter()
        .rev()
        .fold(0.0, |acc, &i| acc + pow_p(weighted[i], p));
    let mut kept = order[..split].to_vec();
    kept.sort_unstable();
    NTermApprox {
        kept,
        residual: root_p(tail, p),
    }
}

pub fn best_n_term(coeffs: &WaveletCoeffs, params: &BesovParams, n: usize) -> Result<NTermApprox> {
    params.require_diagonal()?;
    Ok(best_n_term_weighted(
        &weighted_magnitudes(coeffs, params),
        params.p,
        n,
    ))
}

/// Least-squares decay rate of a curve, or the sentinel for a curve that
/// reaches zero inside the fit window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaEstimate {
    Finite { kappa: f64, stderr: f64 },
    Infinite,
}

impl KappaEstimate {
    /// Point value, `+∞` for the sentinel.
    pub fn value(&self) -> f64 {
        match *self {
            KappaEstimate::Finite { kappa, .. } => kappa,
            KappaEstimate::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaFit {
    pub estimate: KappaEstimate,
    pub range: (usize, usize),
}

/// Best `n`-term errors `σ_n` on a grid of `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub n_values: Vec<usize>,
    pub sigma: Vec<f64>,
    pub params: BesovParams,
    pub fit: Option<KappaFit>,
}

/// `σ_n` for every `n` in `n_grid` from a single sort.
pub fn sigma_curve(coeffs: &WaveletCoeffs, params: &BesovParams, n_grid: &[usize]) -> Result<DecayCurve> {
    params.require_diagonal()?;
    sigma_curve_weighted(&weighted_magnitudes(coeffs, params), params, n_grid)
}

pub fn sigma_curve_weighted(
    weighted: &[f64],
    params: &BesovParams,
    n_grid: &[usize],
) -> Result<DecayCurve> {
    params.require_diagonal()?;
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("n grid must be strictly ascending".into()));
    }
    let order = rank(weighted);
    let total = order.len();
    let mut tail = vec![0.0f64; total + 1];
    for i in (0..total).rev() {
        tail[i] = tail[i + 1] + pow_p(weighted[order[i]], params.p);
    }
    let sigma = n_grid
        .iter()
        .map(|&n| root_p(tail[n.min(total)], params.p))
        .collect();
    Ok(DecayCurve {
        n_values: n_grid.to_vec(),
        sigma,
        params: *params,
        fit: None,
    })
}

/// Dyadic grid `{2^lo, …, 2^hi}`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

/// Fewest grid points [`estimate_kappa`] accepts inside the fit window.
pub const MIN_FIT_POINTS: usize = 5;

/// Slope of `−log σ_n` against `log n` over `n ∈ [lo, hi]`.
///
/// A curve that reaches zero inside the window has no algebraic rate and
/// yields [`KappaEstimate::Infinite`].
pub fn estimate_kappa(curve: &DecayCurve, fit_range: (usize, usize)) -> Result<KappaEstimate> {
    let (lo, hi) = fit_range;
    let points: Vec<(f64, f64)> = curve
        .n_values
        .iter()
        .zip(&curve.sigma)
        .filter(|(&n, _)| n >= lo && n <= hi && n > 0)
        .map(|(&n, &s)| (n as f64, s))
        .collect();
    if points.iter().any(|&(_, s)| s == 0.0) {
        return Ok(KappaEstimate::Infinite);
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            found: points.len(),
        });
    }
    // Logs are taken relative to the first point so that rescaling the curve
    // by a power of two leaves every regression input unchanged.
    let reference = points[0].1;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, s)| -(s / reference).ln()).collect();
    let (slope, stderr) = linear_fit(&xs, &ys);
    Ok(KappaEstimate::Finite {
        kappa: slope,
        stderr,
    })
}

/// Ordinary least squares; returns the slope and its standard error.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, stderr)
}

/// One `(p, τ)` cell of a regularity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEntry {
    pub p: f64,
    pub tau: f64,
    /// Slope of `log₂` of the level partial norm against `j`.
    pub slope: f64,
    /// Negative slope: the level norms decay, so the tail converges.
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityScan {
    pub entries: Vec<ScanEntry>,
}

impl RegularityScan {
    /// Interpolated `τ` where the slope changes sign for this `p`, if the
    /// τ grid brackets it.
    pub fn critical_tau(&self, p: f64) -> Option<f64> {
        let mut row: Vec<&ScanEntry> = self.entries.iter().filter(|e| e.p == p).collect();
        row.sort_by(|a, b| a.tau.total_cmp(&b.tau));
        row.windows(2).find_map(|w| {
            let (a, b) = (w[0], w[1]);
            if a.slope < 0.0 && b.slope >= 0.0 {
                Some(a.tau + (b.tau - a.tau) * (-a.slope) / (b.slope - a.slope))
            } else {
                None
            }
        })
    }
}

/// Minimum number of levels for a regularity scan.
pub const MIN_SCAN_LEVELS: usize = 6;

/// Level-wise partial norms `2^{j(τ − d/p)} (Σ_{G≠0, m} |λ|^p)^{1/p}` and
/// their growth rate in `j`, as a finiteness proxy for `b^τ_{p,p}`.
/// Pure scaling coefficients are left out.
pub fn empirical_regularity_scan(
    coeffs: &WaveletCoeffs,
    p_grid: &[f64],
    tau_grid: &[f64],
) -> Result<RegularityScan> {
    if coeffs.levels().len() < MIN_SCAN_LEVELS {
        return Err(Error::Shape(format!(
            "regularity scan needs at least {MIN_SCAN_LEVELS} levels, got {}",
            coeffs.levels().len()
        )));
    }
    let d = coeffs.dim() as f64;
    let mut entries = Vec::with_capacity(p_grid.len() * tau_grid.len());
    for &p in p_grid {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("p must be positive and finite, got {p}")));
        }
        // (j, log₂ of the unweighted level ℓ_p norm)
        let levels: Vec<(f64, f64)> = coeffs
            .levels()
            .iter()
            .filter_map(|level| {
                let sum: f64 = level
                    .bands
                    .iter()
                    .filter(|b| !b.gender.is_scaling())
                    .flat_map(|b| b.values.iter())
                    .map(|v| v.abs().powf(p))
                    .sum();
                (sum > 0.0).then(|| (level.j as f64, sum.log2() / p))
            })
            .collect();
        for &tau in tau_grid {
            let slope = if levels.len() < 2 {
                f64::NEG_INFINITY
            } else {
                let xs: Vec<f64> = levels.iter().map(|l| l.0).collect();
                let ys: Vec<f64> = levels.iter().map(|l| l.0 * (tau - d / p) + l.1).collect();
                linear_fit(&xs, &ys).0
            };
            entries.push(ScanEntry {
                p,
                tau,
                slope,
                member: slope < 0.0,
            });
        }
    }
    Ok(RegularityScan { entries })
}
