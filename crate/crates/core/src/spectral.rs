//! Fourier-multiplier operators on the discrete torus and the spectral solver
//! for `L s = w`.
//!
//! Fourier coefficients use the torus normalization
//! `f̂(m) = 2^{-Jd} Σ_x f(x) exp(−2πi m·x)`, so that `f = Σ_m f̂(m) exp(2πi m·x)`
//! and `cos(2πx)` has coefficients `1/2` at `m = ±1`. Frequencies are the signed
//! representatives in `[−N/2, N/2)` along each axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::exponents::LevyExponent;
use crate::poly;
use crate::sampling::{generate_noise, GridSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    /// `L̂(m) = |m|^γ`.
    FractionalLaplacian,
    /// `L̂(m) = (1 + |m|²)^{γ/2}`.
    Matern,
    /// One-dimensional `D^n + a_{n−1} D^{n−1} + … + a_0` with
    /// `L̂(m) = (2πim)^n + Σ a_k (2πim)^k`.
    Derivative { coefficients: Vec<f64> },
}

/// Symbol `m ↦ L̂(m)` of an operator of order `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSymbol {
    kind: SymbolKind,
    order: f64,
}

impl OperatorSymbol {
    pub fn fractional_laplacian(gamma: f64) -> Result<Self> {
        check_order(gamma)?;
        Ok(OperatorSymbol {
            kind: SymbolKind::FractionalLaplacian,
            order: gamma,
        })
    }

    pub fn matern(gamma: f64) -> Result<Self> {
        check_order(gamma)?;
        Ok(OperatorSymbol {
            kind: SymbolKind::Matern,
            order: gamma,
        })
    }

    /// Monic derivative polynomial of order `coefficients.len()`; the
    /// coefficients are `a_0, …, a_{n−1}`. Rejected when the symbol has a zero
    /// on `ℤ \ {0}`.
    pub fn derivative(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Parameter(
                "derivative operator needs order at least 1".into(),
            ));
        }
        if coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::Parameter("derivative coefficients must be finite".into()));
        }
        let mut poly: Vec<Complex64> = coefficients.iter().map(|&a| a.into()).collect();
        poly.push(Complex64::new(1.0, 0.0));
        for root in poly::roots(&poly) {
            let freq = root.im / (2.0 * PI);
            let k = freq.round();
            if k != 0.0
                && root.re.abs() <= 1e-9 * (1.0 + root.norm())
                && (freq - k).abs() <= 1e-9 * (1.0 + k.abs())
            {
                return Err(Error::Admissibility { m: vec![k as i64] });
            }
        }
        Ok(OperatorSymbol {
            order: coefficients.len() as f64,
            kind: SymbolKind::Derivative { coefficients },
        })
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// `L̂(m)` and a magnitude scale used to decide whether it vanishes.
    fn eval_scaled(&self, m: &[i64]) -> Result<(Complex64, f64)> {
        let norm2: f64 = m.iter().map(|&k| (k * k) as f64).sum();
        match &self.kind {
            SymbolKind::FractionalLaplacian => {
                let v = norm2.powf(self.order / 2.0);
                Ok((v.into(), v))
            }
            SymbolKind::Matern => {
                let v = (1.0 + norm2).powf(self.order / 2.0);
                Ok((v.into(), v))
            }
            SymbolKind::Derivative { coefficients } => {
                if m.len() != 1 {
                    return Err(Error::Shape(
                        "derivative symbols are defined on the 1-torus only".into(),
                    ));
                }
                let s = Complex64::new(0.0, 2.0 * PI * m[0] as f64);
                let mut power = Complex64::new(1.0, 0.0);
                let mut value = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for &a in coefficients {
                    value += a * power;
                    scale += (a * power).norm();
                    power *= s;
                }
                value += power;
                scale += power.norm();
                Ok((value, scale))
            }
        }
    }

    /// `L̂(m)` at a lattice frequency.
    pub fn eval(&self, m: &[i64]) -> Result<Complex64> {
        Ok(self.eval_scaled(m)?.0)
    }

    fn eval_nonvanishing(&self, m: &[i64]) -> Result<Complex64> {
        let (value, scale) = self.eval_scaled(m)?;
        if !(value.norm() > 1e-12 * scale) {
            return Err(Error::Admissibility { m: m.to_vec() });
        }
        Ok(value)
    }
}

fn check_order(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("operator order must be positive, got {gamma}")))
    }
}

/// Fourier coefficients of a real field, in FFT index order, with `f̂(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Vec<Complex64>,
}

/// Signed frequency of FFT index `index` on an axis of length `n`.
pub fn signed_frequency(index: usize, n: usize) -> i64 {
    if index < n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

impl SpectralField {
    /// Lattice frequency of flat position `pos`.
    pub fn frequency(&self, pos: usize) -> Vec<i64> {
        let n = self.grid.side();
        match self.grid.dim() {
            1 => vec![signed_frequency(pos, n)],
            _ => vec![signed_frequency(pos / n, n), signed_frequency(pos % n, n)],
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.cells()],
        }
    }

    /// Flat position of a lattice frequency.
    pub fn position(&self, m: &[i64]) -> usize {
        let n = self.grid.side() as i64;
        m.iter()
            .fold(0usize, |acc, &k| acc * n as usize + k.rem_euclid(n) as usize)
    }
}

fn transform(grid: &GridSpec, data: &mut [Complex64], direction: FftDirection) {
    let n = grid.side();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    if grid.dim() == 2 {
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                column[r] = data[r * n + c];
            }
            fft.process_with_scratch(&mut column, &mut scratch);
            for r in 0..n {
                data[r * n + c] = column[r];
            }
        }
    }
}

/// Fourier coefficients of a real grid field; the DC coefficient is zeroed.
pub fn forward_fft(grid: &GridSpec, values: &[f64]) -> Result<SpectralField> {
    if values.len() != grid.cells() {
        return Err(Error::Shape(format!(
            "{} values for a grid of {} cells",
            values.len(),
            grid.cells()
        )));
    }
    let mut data: Vec<Complex64> = values.iter().map(|&v| v.into()).collect();
    transform(grid, &mut data, FftDirection::Forward);
    let h = grid.cell_volume();
    for c in data.iter_mut() {
        *c *= h;
    }
    data[0] = Complex64::new(0.0, 0.0);
    Ok(SpectralField {
        grid: *grid,
        coeffs: data,
    })
}

/// Grid values `Σ_m f̂(m) exp(2πi m·x)`.
pub fn inverse_fft(field: &SpectralField) -> Vec<Complex64> {
    let mut data = field.coeffs.clone();
    transform(&field.grid, &mut data, FftDirection::Inverse);
    data
}

/// Real part of [`inverse_fft`].
pub fn inverse_fft_real(field: &SpectralField) -> Vec<f64> {
    inverse_fft(field).into_iter().map(|c| c.re).collect()
}

/// Mean `|f̂(m)|²` over shells of lattice frequencies with `round(|m|) = k`,
/// for `1 ≤ k < N/2`, as `(k, power)` pairs. Empty shells are skipped.
pub fn radial_power_spectrum(field: &SpectralField) -> Vec<(f64, f64)> {
    let shells = field.grid.side() / 2;
    let mut sum = vec![0.0f64; shells];
    let mut count = vec![0usize; shells];
    for (pos, c) in field.coeffs.iter().enumerate() {
        let m = field.frequency(pos);
        let radius = m.iter().map(|&k| (k * k) as f64).sum::<f64>().sqrt().round() as usize;
        if radius >= 1 && radius < shells {
            sum[radius] += c.norm_sqr();
            count[radius] += 1;
        }
    }
    (1..shells)
        .filter(|&k| count[k] > 0)
        .map(|k| (k as f64, sum[k] / count[k] as f64))
        .collect()
}

fn apply(
    field: &SpectralField,
    symbol: &OperatorSymbol,
    op: impl Fn(Complex64, Complex64) -> Complex64,
) -> Result<SpectralField> {
    let mut out = field.clone();
    out.coeffs[0] = Complex64::new(0.0, 0.0);
    for pos in 1..out.coeffs.len() {
        let m = field.frequency(pos);
        let l = symbol.eval_nonvanishing(&m)?;
        out.coeffs[pos] = op(field.coeffs[pos], l);
    }
    Ok(out)
}

/// `ŝ(m) = ŵ(m) / L̂(m)` for `m ≠ 0`, `ŝ(0) = 0`.
pub fn apply_inverse_operator(noise: &SpectralField, symbol: &OperatorSymbol) -> Result<SpectralField> {
    apply(noise, symbol, |w, l| w / l)
}

/// `(Lf)^(m) = f̂(m) L̂(m)` for `m ≠ 0`, zero at `m = 0`.
pub fn apply_forward_operator(field: &SpectralField, symbol: &OperatorSymbol) -> Result<SpectralField> {
    apply(field, symbol, |f, l| f * l)
}

/// A realization of `s = L⁻¹ w` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessField {
    pub grid: GridSpec,
    pub seed: u64,
    pub values: Vec<f64>,
}

/// Noise generation, spectral inversion of `L`, and synthesis back to the grid.
pub fn synthesize_process(
    exponent: &LevyExponent,
    grid: &GridSpec,
    symbol: &OperatorSymbol,
    seed: u64,
) -> Result<ProcessField> {
    let noise = generate_noise(exponent, grid, seed)?;
    let spectrum = forward_fft(grid, &noise.values)?;
    let process = apply_inverse_operator(&spectrum, symbol)?;
    Ok(ProcessField {
        grid: *grid,
        seed,
        values: inverse_fft_real(&process),
    })
}
