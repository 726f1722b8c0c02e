//! Discrete realizations of periodic Lévy white noise.
//!
//! The torus `[-1/2, 1/2)^d` is cut into `2^{Jd}` cells of volume `h = 2^{-Jd}`.
//! The noise tested against a cell indicator has characteristic function
//! `exp(h ψ(ξ))`, so the values of different cells are i.i.d. infinitely
//! divisible increments. A [`NoiseField`] stores those increments divided by
//! `h`, with the mean removed.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Normal, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::exponents::{JumpDistribution, LevyExponent};

/// Upper bound on the number of grid cells.
pub const MAX_CELLS: u64 = 1 << 26;

/// Dyadic grid on the `d`-torus with `2^level` cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    d: usize,
    level: u32,
}

impl GridSpec {
    pub fn new(d: usize, level: u32) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::Grid(format!("dimension must be 1 or 2, got {d}")));
        }
        if level < 1 {
            return Err(Error::Grid("grid level must be at least 1".into()));
        }
        let bits = level as u64 * d as u64;
        if bits > 26 {
            let cells = if bits < 64 { 1u64 << bits } else { u64::MAX };
            return Err(Error::GridTooLarge {
                cells,
                limit: MAX_CELLS,
            });
        }
        Ok(GridSpec { d, level })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Dyadic level `J`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Cells per axis, `2^J`.
    pub fn side(&self) -> usize {
        1 << self.level
    }

    pub fn cells(&self) -> usize {
        1 << (self.level as usize * self.d)
    }

    pub fn cell_volume(&self) -> f64 {
        1.0 / self.cells() as f64
    }
}

/// Deterministic generator used for every random draw in the crate.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of trial `index` in an experiment with the given base seed.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    base ^ splitmix64(index as u64)
}

/// Draws increments `⟨w, 1_A⟩` for sets `A` of a fixed volume.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Gaussian(Normal<f64>),
    Stable { alpha: f64, scale: f64 },
    CompoundPoisson { count: Poisson<f64>, jumps: JumpSampler },
    Laplace(Gamma<f64>),
    InverseGaussian { mean: f64, shape: f64 },
}

#[derive(Debug, Clone)]
enum JumpSampler {
    Gaussian(Normal<f64>),
    Uniform { low: f64, width: f64 },
    Dirac(f64),
}

impl JumpSampler {
    fn new(jumps: &JumpDistribution) -> Result<Self> {
        jumps.validate()?;
        Ok(match *jumps {
            JumpDistribution::Gaussian { sigma } => JumpSampler::Gaussian(
                Normal::new(0.0, sigma).map_err(|e| Error::Parameter(e.to_string()))?,
            ),
            JumpDistribution::Uniform { low, high } => JumpSampler::Uniform {
                low,
                width: high - low,
            },
            JumpDistribution::Dirac { value } => JumpSampler::Dirac(value),
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            JumpSampler::Gaussian(ref n) => n.sample(rng),
            JumpSampler::Uniform { low, width } => low + width * rng.random::<f64>(),
            JumpSampler::Dirac(v) => v,
        }
    }
}

impl IncrementSampler {
    pub fn new(exponent: &LevyExponent, volume: f64) -> Result<Self> {
        exponent.validate()?;
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::Parameter(format!("volume must be positive, got {volume}")));
        }
        let param = |e: rand_distr::NormalError| Error::Parameter(e.to_string());
        let kind = match *exponent {
            LevyExponent::Gaussian { variance } => {
                SamplerKind::Gaussian(Normal::new(0.0, (variance * volume).sqrt()).map_err(param)?)
            }
            LevyExponent::SymmetricStable { alpha } => SamplerKind::Stable {
                alpha,
                scale: volume.powf(1.0 / alpha),
            },
            LevyExponent::CompoundPoisson { rate, ref jumps } => SamplerKind::CompoundPoisson {
                count: Poisson::new(rate * volume)
                    .map_err(|e| Error::Parameter(e.to_string()))?,
                jumps: JumpSampler::new(jumps)?,
            },
            LevyExponent::Laplace => SamplerKind::Laplace(
                Gamma::new(volume, 1.0).map_err(|e| Error::Parameter(e.to_string()))?,
            ),
            LevyExponent::InverseGaussian { delta, gamma } => SamplerKind::InverseGaussian {
                mean: delta * volume / gamma,
                shape: delta * delta * volume * volume,
            },
        };
        Ok(IncrementSampler { kind })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            SamplerKind::Gaussian(ref n) => n.sample(rng),
            SamplerKind::Stable { alpha, scale } => scale * standard_symmetric_stable(alpha, rng),
            SamplerKind::CompoundPoisson { .. } => self.sample_with_jump_count(rng).0,
            SamplerKind::Laplace(ref g) => g.sample(rng) - g.sample(rng),
            SamplerKind::InverseGaussian { mean, shape } => inverse_gaussian(mean, shape, rng),
        }
    }

    /// Increment together with the number of jumps it contains
    /// (always 0 for families without a finite jump count).
    pub(crate) fn sample_with_jump_count<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, u64) {
        match self.kind {
            SamplerKind::CompoundPoisson {
                ref count,
                ref jumps,
            } => {
                let n = count.sample(rng) as u64;
                let total = (0..n).map(|_| jumps.sample(rng)).sum();
                (total, n)
            }
            _ => (self.sample(rng), 0),
        }
    }
}

/// Standard symmetric α-stable variate, `E[exp(iξX)] = exp(−|ξ|^α)`,
/// by the Chambers–Mallows–Stuck transform.
pub fn standard_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let v = PI * (u - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = rng.sample(Exp1);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Inverse Gaussian variate with the given mean and shape
/// (Michael, Schucany and Haas). The smaller root is evaluated in a form
/// that does not cancel when `shape` is tiny compared to `mean`.
pub fn inverse_gaussian<R: Rng + ?Sized>(mean: f64, shape: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.sample(StandardNormal);
    let y = mean * v * v;
    let x = if y == 0.0 {
        mean
    } else {
        let r = (y * y + 4.0 * shape * y).sqrt();
        let s = y + r;
        mean * (4.0 * shape * y / s) / s
    };
    let u: f64 = rng.random();
    if u * (mean + x) <= mean {
        x
    } else {
        mean * mean / x
    }
}

/// One draw of `⟨w, 1_A⟩` for a set of the given volume.
pub fn sample_id_increment<R: Rng + ?Sized>(
    exponent: &LevyExponent,
    volume: f64,
    rng: &mut R,
) -> Result<f64> {
    Ok(IncrementSampler::new(exponent, volume)?.sample(rng))
}

/// A zero-mean white-noise realization on a dyadic grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub seed: u64,
    pub exponent: LevyExponent,
}

/// Raw cell increments `⟨w, 1_cell⟩` in row-major order, before any scaling.
pub fn raw_increments(exponent: &LevyExponent, grid: &GridSpec, seed: u64) -> Result<Vec<f64>> {
    let sampler = IncrementSampler::new(exponent, grid.cell_volume())?;
    let mut rng = rng_from_seed(seed);
    Ok((0..grid.cells()).map(|_| sampler.sample(&mut rng)).collect())
}

pub fn generate_noise(exponent: &LevyExponent, grid: &GridSpec, seed: u64) -> Result<NoiseField> {
    let h = grid.cell_volume();
    let mut values = raw_increments(exponent, grid, seed)?;
    for v in values.iter_mut() {
        *v /= h;
    }
    remove_mean(&mut values);
    Ok(NoiseField {
        grid: *grid,
        values,
        seed,
        exponent: *exponent,
    })
}

pub(crate) fn remove_mean(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
}

const DUMP_MAGIC: &[u8; 4] = b"LVNF";
const DUMP_HEADER_LEN: usize = 32;

/// Writes a real grid field in the binary dump layout:
///
/// | bytes  | content                          |
/// |--------|----------------------------------|
/// | 0..4   | magic `LVNF`                     |
/// | 4..8   | `d` as u32                       |
/// | 8..12  | `J` as u32                       |
/// | 12..16 | reserved, zero                   |
/// | 16..24 | seed as u64                      |
/// | 24..32 | number of values as u64          |
/// | 32..   | values as f64, row-major         |
///
/// All integers and floats are little-endian.
pub fn write_field_dump<W: Write>(
    mut out: W,
    grid: &GridSpec,
    seed: u64,
    values: &[f64],
) -> std::io::Result<()> {
    if values.len() != grid.cells() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            format!("{} values for a grid of {} cells", values.len(), grid.cells()),
        ));
    }
    let mut header = [0u8; DUMP_HEADER_LEN];
    header[0..4].copy_from_slice(DUMP_MAGIC);
    header[4..8].copy_from_slice(&(grid.dim() as u32).to_le_bytes());
    header[8..12].copy_from_slice(&grid.level().to_le_bytes());
    header[16..24].copy_from_slice(&seed.to_le_bytes());
    header[24..32].copy_from_slice(&(values.len() as u64).to_le_bytes());
    out.write_all(&header)?;
    let mut body = Vec::with_capacity(values.len() * 8);
    for v in values {
        body.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&body)
}

/// Contents of a binary field dump.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub grid: GridSpec,
    pub seed: u64,
    pub values: Vec<f64>,
}

pub fn read_field_dump<R: Read>(mut input: R) -> Result<FieldDump> {
    let mut header = [0u8; DUMP_HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::Dump(format!("short header: {e}")))?;
    if &header[0..4] != DUMP_MAGIC {
        return Err(Error::Dump("bad magic".into()));
    }
    let word = |r: std::ops::Range<usize>| u32::from_le_bytes(header[r].try_into().unwrap());
    let quad = |r: std::ops::Range<usize>| u64::from_le_bytes(header[r].try_into().unwrap());
    let grid = GridSpec::new(word(4..8) as usize, word(8..12))?;
    let seed = quad(16..24);
    let count = quad(24..32);
    if count != grid.cells() as u64 {
        return Err(Error::Dump(format!(
            "header announces {count} values for a grid of {} cells",
            grid.cells()
        )));
    }
    let mut body = vec![0u8; grid.cells() * 8];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Dump(format!("truncated body: {e}")))?;
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(FieldDump { grid, seed, values })
}

impl NoiseField {
    pub fn write_dump<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_field_dump(out, &self.grid, self.seed, &self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn families() -> Vec<LevyExponent> {
        vec![
            LevyExponent::gaussian(1.0).unwrap(),
            LevyExponent::stable(0.7).unwrap(),
            LevyExponent::cauchy(),
            LevyExponent::stable(1.5).unwrap(),
            LevyExponent::compound_poisson(1.0, JumpDistribution::Gaussian { sigma: 1.0 }).unwrap(),
            LevyExponent::compound_poisson(2.0, JumpDistribution::Uniform { low: -1.0, high: 3.0 })
                .unwrap(),
            LevyExponent::Laplace,
            LevyExponent::inverse_gaussian(1.0, 1.0).unwrap(),
        ]
    }

    fn ecf(samples: &[f64], xi: f64) -> Complex64 {
        let sum: Complex64 = samples.iter().map(|&x| Complex64::from_polar(1.0, xi * x)).sum();
        sum / samples.len() as f64
    }

    #[test]
    fn grid_guards() {
        assert!(GridSpec::new(3, 4).is_err());
        assert!(GridSpec::new(1, 0).is_err());
        assert!(matches!(GridSpec::new(2, 14), Err(Error::GridTooLarge { .. })));
        let g = GridSpec::new(2, 13).unwrap();
        assert_eq!(g.cells(), 1 << 26);
        assert_eq!(GridSpec::new(1, 3).unwrap().cell_volume(), 0.125);
    }

    #[test]
    fn noise_is_deterministic_and_centered() {
        let grid = GridSpec::new(1, 10).unwrap();
        for e in families() {
            let a = generate_noise(&e, &grid, 17).unwrap();
            let b = generate_noise(&e, &grid, 17).unwrap();
            assert_eq!(a.values, b.values);
            let n = a.values.len() as f64;
            let mean = a.values.iter().sum::<f64>() / n;
            let std = (a.values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
            assert!(mean.abs() <= 1e-12 * std.max(f64::MIN_POSITIVE), "{e}: {mean} vs {std}");
        }
    }

    #[test]
    fn ecf_of_raw_increments_matches_exponent() {
        let grid = GridSpec::new(1, 14).unwrap();
        let bound = 4.0 / (grid.cells() as f64).sqrt();
        for e in families() {
            let raw = raw_increments(&e, &grid, 5).unwrap();
            for xi in [1.0, 2.0, 5.0] {
                let target = e.increment_char_fn(grid.cell_volume(), xi).unwrap();
                let dev = (ecf(&raw, xi) - target).norm();
                assert!(dev <= bound, "{e} at {xi}: {dev}");
            }
        }
    }

    #[test]
    fn ecf_at_unit_volume() {
        let m = 1 << 14;
        let bound = 4.0 / (m as f64).sqrt();
        for e in families() {
            let sampler = IncrementSampler::new(&e, 1.0).unwrap();
            let mut rng = rng_from_seed(99);
            let draws: Vec<f64> = (0..m).map(|_| sampler.sample(&mut rng)).collect();
            for xi in [0.5, 1.0, 2.0] {
                let target = e.increment_char_fn(1.0, xi).unwrap();
                let dev = (ecf(&draws, xi) - target).norm();
                assert!(dev <= bound, "{e} at {xi}: {dev}");
            }
        }
    }

    #[test]
    fn compound_poisson_zero_fraction() {
        let e = LevyExponent::compound_poisson(1.0, JumpDistribution::Gaussian { sigma: 1.0 })
            .unwrap();
        let m = 200_000;
        for h in [0.1, 0.5, 1.0] {
            let sampler = IncrementSampler::new(&e, h).unwrap();
            let mut rng = rng_from_seed(3);
            let zeros = (0..m).filter(|_| sampler.sample(&mut rng) == 0.0).count();
            let p = (-h).exp();
            let tol = 4.0 * (p * (1.0 - p) / m as f64).sqrt();
            assert!((zeros as f64 / m as f64 - p).abs() <= tol, "h={h}");
        }
    }

    #[test]
    fn gaussian_increment_variance() {
        let e = LevyExponent::gaussian(1.0).unwrap();
        let m = 100_000;
        for h in [1e-3, 0.25, 1.0] {
            let sampler = IncrementSampler::new(&e, h).unwrap();
            let mut rng = rng_from_seed(8);
            let xs: Vec<f64> = (0..m).map(|_| sampler.sample(&mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / m as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            assert!((var - h).abs() <= 4.0 * h * (2.0 / m as f64).sqrt(), "h={h}: {var}");
        }
    }

    #[test]
    fn gaussian_cell_variance_scales_with_resolution() {
        let e = LevyExponent::gaussian(1.0).unwrap();
        let var = |level: u32, seed: u64| {
            let f = generate_noise(&e, &GridSpec::new(1, level).unwrap(), seed).unwrap();
            f.values.iter().map(|v| v * v).sum::<f64>() / f.values.len() as f64
        };
        // A single ratio fluctuates by about 5%; the mean of 20 by about 1.2%.
        let mean = (0..20).map(|t| var(11, 2 * t) / var(10, 2 * t + 1)).sum::<f64>() / 20.0;
        assert!((mean / 2.0 - 1.0).abs() < 0.05, "mean ratio {mean}");
    }

    #[test]
    fn compound_poisson_total_count_is_poisson() {
        // Total jump count over the unit torus is Poisson(λ); chi-square over 2000 trials.
        let rate = 2.0;
        let e = LevyExponent::compound_poisson(rate, JumpDistribution::Gaussian { sigma: 1.0 })
            .unwrap();
        let grid = GridSpec::new(1, 8).unwrap();
        let sampler = IncrementSampler::new(&e, grid.cell_volume()).unwrap();
        let trials = 2000;
        let bins = 7; // counts 0..=5 and >= 6
        let mut observed = vec![0usize; bins];
        for t in 0..trials {
            let mut rng = rng_from_seed(trial_seed(1234, t));
            let total: u64 = (0..grid.cells())
                .map(|_| sampler.sample_with_jump_count(&mut rng).1)
                .sum();
            observed[(total as usize).min(bins - 1)] += 1;
        }
        let mut expected = vec![0.0; bins];
        let mut pk = (-rate).exp();
        let mut acc = 0.0;
        for (k, slot) in expected.iter_mut().enumerate().take(bins - 1) {
            *slot = pk * trials as f64;
            acc += pk;
            pk *= rate / (k + 1) as f64;
        }
        expected[bins - 1] = (1.0 - acc) * trials as f64;
        let chi2: f64 = observed
            .iter()
            .zip(&expected)
            .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
            .sum();
        // 99th percentile of chi-square with 6 degrees of freedom.
        assert!(chi2 < 16.812, "chi2 = {chi2}");
    }

    #[test]
    fn stable_increments_scale_with_volume() {
        // Draws at volume h have the law of h^{1/α} times a unit-volume draw.
        let m = 20_000;
        for alpha in [0.7, 1.0, 1.5] {
            let e = LevyExponent::stable(alpha).unwrap();
            let h: f64 = 1.0 / 64.0;
            let small = IncrementSampler::new(&e, h).unwrap();
            let unit = IncrementSampler::new(&e, 1.0).unwrap();
            let mut rng_a = rng_from_seed(10);
            let mut rng_b = rng_from_seed(11);
            let mut a: Vec<f64> = (0..m).map(|_| small.sample(&mut rng_a)).collect();
            let mut b: Vec<f64> = (0..m)
                .map(|_| h.powf(1.0 / alpha) * unit.sample(&mut rng_b))
                .collect();
            let ks = two_sample_ks(&mut a, &mut b);
            let critical = 1.628 * (2.0 / m as f64).sqrt();
            assert!(ks < critical, "alpha={alpha}: D={ks}");
        }
    }

    fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> f64 {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn inverse_gaussian_moments() {
        let (mean, shape) = (2.0, 3.0);
        let mut rng = rng_from_seed(4);
        let m = 200_000;
        let xs: Vec<f64> = (0..m).map(|_| inverse_gaussian(mean, shape, &mut rng)).collect();
        let mu = xs.iter().sum::<f64>() / m as f64;
        let var = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / m as f64;
        // Var = mean^3 / shape.
        assert!((mu - mean).abs() < 0.02, "{mu}");
        assert!((var / (mean.powi(3) / shape) - 1.0).abs() < 0.05, "{var}");
        assert!(xs.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn tiny_volume_inverse_gaussian_is_finite_and_positive() {
        let e = LevyExponent::inverse_gaussian(1.0, 1.0).unwrap();
        let sampler = IncrementSampler::new(&e, 2f64.powi(-26)).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..100_000 {
            let x = sampler.sample(&mut rng);
            assert!(x.is_finite() && x > 0.0);
        }
    }

    #[test]
    fn dump_round_trip_and_header() {
        let grid = GridSpec::new(2, 3).unwrap();
        let e = LevyExponent::Laplace;
        let field = generate_noise(&e, &grid, 0xDEAD_BEEF).unwrap();
        let mut bytes = Vec::new();
        field.write_dump(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 32 + 64 * 8);
        assert_eq!(&bytes[0..4], b"LVNF");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        assert_eq!(&bytes[16..24], &0xDEAD_BEEFu64.to_le_bytes());
        assert_eq!(&bytes[32..40], &field.values[0].to_le_bytes());
        let back = read_field_dump(bytes.as_slice()).unwrap();
        assert_eq!(back.values, field.values);
        assert_eq!(back.grid, grid);
        assert_eq!(back.seed, 0xDEAD_BEEF);

        bytes[0] = b'X';
        assert!(read_field_dump(bytes.as_slice()).is_err());
        assert!(read_field_dump(&bytes[..40]).is_err());
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
