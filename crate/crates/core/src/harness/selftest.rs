//! Fast internal consistency checks, run by `levy-compress selftest`.

use rand::Rng;

use crate::besov::{best_n_term_weighted, pow_p, root_p};
use crate::exponents::{JumpDistribution, LevyExponent};
use crate::sampling::{rng_from_seed, GridSpec, IncrementSampler};
use crate::spectral::{
    apply_forward_operator, apply_inverse_operator, forward_fft, inverse_fft_real, synthesize_process,
    OperatorSymbol,
};
use crate::wavelets::{dwt_periodic, idwt_periodic, WaveletSpec};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, failure: Option<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "ok".into()),
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn energy(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum()
}

fn wavelet_round_trip() -> Option<String> {
    let mut rng = rng_from_seed(1);
    for &(d, level) in &[(1usize, 9u32), (2, 6)] {
        let grid = GridSpec::new(d, level).unwrap();
        let x: Vec<f64> = (0..grid.cells()).map(|_| rng.random::<f64>() - 0.5).collect();
        for k in [1, 2, 4] {
            let spec = WaveletSpec::new(k).unwrap();
            let c = match dwt_periodic(&grid, &x, &spec) {
                Ok(c) => c,
                Err(e) => return Some(format!("db{k} d={d}: {e}")),
            };
            let back = idwt_periodic(&c, &spec).unwrap();
            let err = max_abs_diff(&x, &back);
            if err > 1e-10 {
                return Some(format!("db{k} d={d}: reconstruction error {err:e}"));
            }
            let scale = 2f64.powi(-((level as usize * d) as i32));
            let e_in = energy(x.iter().copied()) * scale;
            let e_coeff: f64 = c
                .iter()
                .map(|co| {
                    let w = 2f64.powf(-((co.j + spec.zeta()) as f64) * d as f64 / 2.0);
                    (co.value * w).powi(2)
                })
                .sum();
            if (e_in - e_coeff).abs() > 1e-9 * e_in.max(1.0) {
                return Some(format!("db{k} d={d}: energy {e_in} vs {e_coeff}"));
            }
        }
    }
    None
}

fn exhaustive_sigma(weighted: &[f64], p: f64, n: usize) -> f64 {
    let len = weighted.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << len) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let mut dropped: Vec<f64> = (0..len).filter(|i| mask & (1 << i) == 0).map(|i| weighted[i]).collect();
        dropped.sort_by(f64::total_cmp);
        let rest = dropped.iter().fold(0.0, |acc, &v| acc + pow_p(v, p));
        best = best.min(root_p(rest, p));
    }
    best
}

fn greedy_is_optimal() -> Option<String> {
    let mut rng = rng_from_seed(2);
    for case in 0..100 {
        let len = rng.random_range(1..=10);
        let p = [0.5, 1.0, 1.5, 2.0][case % 4];
        let w: Vec<f64> = (0..len).map(|_| rng.random::<f64>() * 4.0).collect();
        let n = rng.random_range(0..=len);
        let greedy = best_n_term_weighted(&w, p, n).residual;
        let exhaustive = exhaustive_sigma(&w, p, n);
        if greedy != exhaustive {
            return Some(format!("case {case}: greedy {greedy} vs exhaustive {exhaustive}"));
        }
    }
    None
}

fn sampler_char_fn() -> Option<String> {
    let families = [
        LevyExponent::gaussian(1.0).unwrap(),
        LevyExponent::stable(1.5).unwrap(),
        LevyExponent::cauchy(),
        LevyExponent::compound_poisson(1.0, JumpDistribution::Gaussian { sigma: 1.0 }).unwrap(),
        LevyExponent::Laplace,
        LevyExponent::inverse_gaussian(1.0, 1.0).unwrap(),
    ];
    let samples = 1 << 14;
    // Three standard errors of an empirical characteristic function.
    let bound = 3.0 / (samples as f64).sqrt();
    for (i, exponent) in families.iter().enumerate() {
        let sampler = IncrementSampler::new(exponent, 1.0).unwrap();
        let mut rng = rng_from_seed(100 + i as u64);
        let draws: Vec<f64> = (0..samples).map(|_| sampler.sample(&mut rng)).collect();
        for xi in [0.5, 1.0, 2.0] {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in &draws {
                re += (xi * x).cos();
                im += (xi * x).sin();
            }
            let m = samples as f64;
            let expected = exponent.increment_char_fn(1.0, xi).unwrap();
            let err = ((re / m - expected.re).powi(2) + (im / m - expected.im).powi(2)).sqrt();
            if err > bound {
                return Some(format!("{exponent} at xi={xi}: deviation {err:.4} > {bound:.4}"));
            }
        }
    }
    None
}

fn spectral_round_trip() -> Option<String> {
    let grid = GridSpec::new(1, 10).unwrap();
    let mut rng = rng_from_seed(3);
    let mut x: Vec<f64> = (0..grid.cells()).map(|_| rng.random::<f64>()).collect();
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let spectrum = forward_fft(&grid, &x).unwrap();
    let back = inverse_fft_real(&spectrum);
    let err = max_abs_diff(&x, &back);
    if err > 1e-12 {
        return Some(format!("FFT round trip error {err:e}"));
    }
    for symbol in [
        OperatorSymbol::fractional_laplacian(1.3).unwrap(),
        OperatorSymbol::matern(2.0).unwrap(),
        OperatorSymbol::derivative(vec![1.0]).unwrap(),
    ] {
        let there = apply_inverse_operator(&spectrum, &symbol).unwrap();
        let back = inverse_fft_real(&apply_forward_operator(&there, &symbol).unwrap());
        let err = max_abs_diff(&x, &back);
        if err > 1e-9 {
            return Some(format!("operator round trip ({:?}) error {err:e}", symbol.kind()));
        }
    }
    None
}

fn exponent_invariants() -> Option<String> {
    let families = [
        LevyExponent::gaussian(2.0).unwrap(),
        LevyExponent::stable(0.7).unwrap(),
        LevyExponent::compound_poisson(3.0, JumpDistribution::Uniform { low: -1.0, high: 2.0 }).unwrap(),
        LevyExponent::Laplace,
        LevyExponent::inverse_gaussian(0.5, 2.0).unwrap(),
    ];
    for e in &families {
        let at_zero = e.psi(0.0).unwrap();
        if at_zero.norm() > 1e-14 {
            return Some(format!("{e}: psi(0) = {at_zero}"));
        }
        for xi in [-3.0, -0.1, 0.2, 5.0] {
            let v = e.psi(xi).unwrap();
            if v.re > 1e-14 {
                return Some(format!("{e}: Re psi({xi}) = {} > 0", v.re));
            }
        }
        let bg = e.bg_indices();
        if !(0.0 <= bg.beta && bg.beta <= bg.beta_prime && bg.beta_prime <= 2.0) {
            return Some(format!("{e}: indices {bg:?} out of order"));
        }
    }
    None
}

fn synthesis_is_deterministic() -> Option<String> {
    let grid = GridSpec::new(2, 5).unwrap();
    let symbol = OperatorSymbol::fractional_laplacian(1.5).unwrap();
    let e = LevyExponent::stable(1.2).unwrap();
    let a = synthesize_process(&e, &grid, &symbol, 42).unwrap();
    let b = synthesize_process(&e, &grid, &symbol, 42).unwrap();
    let c = synthesize_process(&e, &grid, &symbol, 43).unwrap();
    if a.values != b.values {
        return Some("same seed gave different fields".into());
    }
    if a.values == c.values {
        return Some("different seeds gave identical fields".into());
    }
    None
}

/// Runs every check; completes in a few seconds.
pub fn run_selftest() -> Vec<CheckOutcome> {
    vec![
        outcome("wavelet reconstruction and energy", wavelet_round_trip()),
        outcome("greedy n-term selection is optimal", greedy_is_optimal()),
        outcome("sampler characteristic functions", sampler_char_fn()),
        outcome("spectral round trips", spectral_round_trip()),
        outcome("Levy exponent invariants", exponent_invariants()),
        outcome("seeded synthesis is deterministic", synthesis_is_deterministic()),
    ]
}
