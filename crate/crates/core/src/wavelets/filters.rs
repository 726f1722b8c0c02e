//! Daubechies filters by spectral factorization.
//!
//! The squared magnitude of the low-pass response is
//! `cos^{2k}(ω/2) P(sin²(ω/2))` with `P(y) = Σ_{i<k} C(k−1+i, i) y^i`.
//! Each root `y` of `P` is mapped to the pair `z, 1/z` solving
//! `y = (2 − z − 1/z) / 4`; keeping the root inside the unit disc gives the
//! extremal-phase (classical) filter.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Low-pass analysis filter `h` of the Daubechies wavelet with `k` vanishing
/// moments, length `2k`, normalized to `Σ h = √2`.
pub fn daubechies_lowpass(k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Parameter("wavelet order must be at least 1".into()));
    }
    if k > 20 {
        return Err(Error::Parameter(format!(
            "wavelet order {k} is beyond the accurate factorization range (max 20)"
        )));
    }
    let k64 = k as u64;
    let p: Vec<Complex64> = (0..k64)
        .map(|i| Complex64::new(binomial(k64 - 1 + i, i), 0.0))
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let mut zeros: Vec<Complex64> = vec![-one; k];
    for y in poly::roots(&p) {
        let b = one - 2.0 * y;
        let disc = (b * b - one).sqrt();
        let (z1, z2) = (b + disc, b - disc);
        zeros.push(if z1.norm() < z2.norm() { z1 } else { z2 });
    }
    let expanded = poly::from_roots(&zeros);
    // Descending powers give the classical ordering.
    let mut h: Vec<f64> = expanded.iter().rev().map(|c| c.re).collect();
    let sum: f64 = h.iter().sum();
    let scale = std::f64::consts::SQRT_2 / sum;
    for v in h.iter_mut() {
        *v *= scale;
    }
    Ok(h)
}

/// High-pass filter `g[n] = (−1)^n h[L−1−n]`.
pub fn quadrature_mirror(h: &[f64]) -> Vec<f64> {
    let len = h.len();
    (0..len)
        .map(|n| {
            let v = h[len - 1 - n];
            if n % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}
