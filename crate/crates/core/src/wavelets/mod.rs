//! Periodized Daubechies wavelets on the `d`-torus.
//!
//! Grid samples of `f` on a `2^J`-per-axis grid are read as the level-`J`
//! scaling coefficients `2^{-Jd/2} f(x)`, and an orthonormal periodic Mallat
//! transform (tensor product in `d = 2`) runs down to continuous level `ζ`.
//! Coefficients are stored as `λ^{j,G}_m = ⟨f, 2^{(j+ζ)d/2} Ψ^{j}_{G,m}⟩`,
//! where the level index `j` counts from the coarsest admissible scale
//! `2^{-ζ}`, `G` is a gender and `m ∈ {0, …, 2^{j+ζ} − 1}^d`.

mod filters;

use std::io::Write;

pub use filters::{daubechies_lowpass, quadrature_mirror};

use crate::error::{Error, Result};
use crate::sampling::GridSpec;

/// Wavelet family and decomposition depth.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    order: usize,
    zeta: u32,
    depth: Option<u32>,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletSpec {
    /// Daubechies wavelet with `k` vanishing moments (filter length `2k`),
    /// decomposed as deeply as the support condition allows.
    pub fn new(k: usize) -> Result<Self> {
        let lowpass = daubechies_lowpass(k)?;
        let highpass = quadrature_mirror(&lowpass);
        let support = 2 * k as u64 - 1;
        let zeta = (0..64u32).find(|z| (1u64 << z) >= support).unwrap();
        Ok(WaveletSpec {
            order: k,
            zeta,
            depth: None,
            lowpass,
            highpass,
        })
    }

    /// Stops after `depth` analysis steps instead of descending to level `ζ`.
    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Smallest `ζ` with `2^ζ ≥ 2k − 1`.
    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    /// Finest level index `j` available on a grid of level `J`.
    pub fn max_level(&self, grid_level: u32) -> Result<u32> {
        if grid_level <= self.zeta {
            return Err(Error::Shape(format!(
                "grid level {grid_level} is too coarse for Daubechies-{} (needs more than {})",
                self.order, self.zeta
            )));
        }
        Ok(grid_level - self.zeta - 1)
    }

    /// Number of analysis steps used on a grid of level `J`.
    pub fn depth_for(&self, grid_level: u32) -> Result<u32> {
        let full = self.max_level(grid_level)? + 1;
        match self.depth {
            None => Ok(full),
            Some(d) if d <= full => Ok(d),
            Some(d) => Err(Error::Shape(format!(
                "depth {d} exceeds the {full} levels available at grid level {grid_level}"
            ))),
        }
    }
}

/// Wavelet gender: bit `r` is set when the factor along axis `r` is the
/// wavelet, clear when it is the scaling function. Gender `0` only occurs at
/// the coarsest level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gender(pub u8);

impl Gender {
    pub fn is_scaling(self) -> bool {
        self.0 == 0
    }
}

/// Coefficients of one gender at one level, row-major over shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub gender: Gender,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub j: u32,
    pub bands: Vec<Band>,
}

/// One coefficient in iteration order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub j: u32,
    pub gender: Gender,
    /// Row-major flat index of the shift `m`.
    pub shift: usize,
    pub value: f64,
}

/// Coefficients `λ^{j,G}_m`, coarsest level first.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    grid: GridSpec,
    order: usize,
    zeta: u32,
    levels: Vec<Level>,
}

impl WaveletCoeffs {
    /// All-zero coefficients with the layout `dwt_periodic` would produce.
    pub fn zeros(grid: &GridSpec, spec: &WaveletSpec) -> Result<Self> {
        let depth = spec.depth_for(grid.level())?;
        let coarse_continuous = grid.level() - depth;
        let d = grid.dim();
        let mut levels = Vec::with_capacity(depth as usize);
        for step in (0..depth).rev() {
            let continuous = grid.level() - step - 1;
            let j = continuous - spec.zeta;
            let count = 1usize << (continuous as usize * d);
            let first = if continuous == coarse_continuous { 0 } else { 1 };
            let bands = (first..(1u8 << d))
                .map(|g| Band {
                    gender: Gender(g),
                    values: vec![0.0; count],
                })
                .collect();
            levels.push(Level { j, bands });
        }
        if depth == 0 {
            let j = coarse_continuous - spec.zeta;
            levels.push(Level {
                j,
                bands: vec![Band {
                    gender: Gender(0),
                    values: vec![0.0; grid.cells()],
                }],
            });
        }
        Ok(WaveletCoeffs {
            grid: *grid,
            order: spec.order,
            zeta: spec.zeta,
            levels,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn zeta(&self) -> u32 {
        self.zeta
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [Level] {
        &mut self.levels
    }

    /// Shifts per axis at level `j`, `2^{j+ζ}`.
    pub fn shifts_per_axis(&self, j: u32) -> usize {
        1 << (j + self.zeta)
    }

    pub fn len(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.bands.iter())
            .map(|b| b.values.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficients ordered by level, then gender, then shift.
    pub fn iter(&self) -> impl Iterator<Item = Coefficient> + '_ {
        self.levels.iter().flat_map(|level| {
            level.bands.iter().flat_map(move |band| {
                band.values
                    .iter()
                    .enumerate()
                    .map(move |(shift, &value)| Coefficient {
                        j: level.j,
                        gender: band.gender,
                        shift,
                        value,
                    })
            })
        })
    }

    pub fn band_mut(&mut self, j: u32, gender: Gender) -> Option<&mut Band> {
        self.levels
            .iter_mut()
            .find(|l| l.j == j)?
            .bands
            .iter_mut()
            .find(|b| b.gender == gender)
    }

    pub fn band(&self, j: u32, gender: Gender) -> Option<&Band> {
        self.levels
            .iter()
            .find(|l| l.j == j)?
            .bands
            .iter()
            .find(|b| b.gender == gender)
    }

    /// Sets every coefficient, in iteration order.
    pub fn assign(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::Shape(format!(
                "{} values for {} coefficients",
                values.len(),
                self.len()
            )));
        }
        let slots = self
            .levels
            .iter_mut()
            .flat_map(|l| l.bands.iter_mut())
            .flat_map(|b| b.values.iter_mut());
        for (slot, &v) in slots.zip(values) {
            *slot = v;
        }
        Ok(())
    }

    /// Writes `j,gender,m,lambda` rows in iteration order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "j,gender,m,lambda")?;
        for c in self.iter() {
            writeln!(out, "{},{},{},{:e}", c.j, c.gender.0, c.shift, c.value)?;
        }
        Ok(())
    }

    fn check_spec(&self, spec: &WaveletSpec) -> Result<()> {
        if spec.order != self.order || spec.zeta != self.zeta {
            return Err(Error::Shape(format!(
                "coefficients come from Daubechies-{} but the spec is Daubechies-{}",
                self.order, spec.order
            )));
        }
        Ok(())
    }
}

/// One periodic analysis step on `x` (even length) into `low` and `high`.
fn analyze(x: &[f64], h: &[f64], g: &[f64], low: &mut [f64], high: &mut [f64]) {
    let len = x.len();
    for n in 0..len / 2 {
        let (mut a, mut d) = (0.0, 0.0);
        for k in 0..h.len() {
            let v = x[(2 * n + k) % len];
            a += h[k] * v;
            d += g[k] * v;
        }
        low[n] = a;
        high[n] = d;
    }
}

/// Adjoint of [`analyze`].
fn synthesize(low: &[f64], high: &[f64], h: &[f64], g: &[f64], x: &mut [f64]) {
    let len = x.len();
    x.iter_mut().for_each(|v| *v = 0.0);
    for n in 0..len / 2 {
        for k in 0..h.len() {
            x[(2 * n + k) % len] += h[k] * low[n] + g[k] * high[n];
        }
    }
}

/// Runs `step` along one axis of the leading `size × size` block (or the
/// leading `size` entries in 1-D) of a row-major buffer with row stride `stride`.
fn along_axis(
    data: &mut [f64],
    d: usize,
    stride: usize,
    size: usize,
    axis: usize,
    mut step: impl FnMut(&[f64], &mut [f64]),
) {
    let mut line = vec![0.0; size];
    let mut out = vec![0.0; size];
    let lines = if d == 1 { 1 } else { size };
    for t in 0..lines {
        let index = |i: usize| match (d, axis) {
            (1, _) => i,
            (_, 0) => i * stride + t,
            _ => t * stride + i,
        };
        for i in 0..size {
            line[i] = data[index(i)];
        }
        step(&line, &mut out);
        for i in 0..size {
            data[index(i)] = out[i];
        }
    }
}

/// Orthonormal periodic wavelet decomposition of grid values.
pub fn dwt_periodic(grid: &GridSpec, values: &[f64], spec: &WaveletSpec) -> Result<WaveletCoeffs> {
    if values.len() != grid.cells() {
        return Err(Error::Shape(format!(
            "{} values for a grid of {} cells",
            values.len(),
            grid.cells()
        )));
    }
    let mut coeffs = WaveletCoeffs::zeros(grid, spec)?;
    let depth = spec.depth_for(grid.level())?;
    let d = grid.dim();
    let n = grid.side();
    let input_scale = 2f64.powf(-(grid.level() as f64) * d as f64 / 2.0);
    let mut buf: Vec<f64> = values.iter().map(|v| v * input_scale).collect();
    let (h, g) = (&spec.lowpass, &spec.highpass);

    for s in 0..depth {
        let size = n >> s;
        let half = size / 2;
        for axis in 0..d {
            along_axis(&mut buf, d, n, size, axis, |line, out| {
                let (low, high) = out.split_at_mut(half);
                analyze(line, h, g, low, high);
            });
        }
        let continuous = grid.level() - s - 1;
        let j = continuous - spec.zeta;
        let lambda_scale = 2f64.powf(continuous as f64 * d as f64 / 2.0);
        let level = coeffs.levels.iter_mut().find(|l| l.j == j).unwrap();
        for band in level.bands.iter_mut().filter(|b| !b.gender.is_scaling()) {
            extract(&buf, d, n, half, band, lambda_scale);
        }
        if s + 1 == depth {
            let band = &mut level.bands[0];
            debug_assert!(band.gender.is_scaling());
            extract(&buf, d, n, half, band, lambda_scale);
        }
    }
    if depth == 0 {
        coeffs.levels[0].bands[0]
            .values
            .iter_mut()
            .zip(&buf)
            .for_each(|(c, v)| *c = v * 2f64.powf(grid.level() as f64 * d as f64 / 2.0));
    }
    Ok(coeffs)
}

/// Offset of a gender's quadrant inside the leading block.
fn quadrant(d: usize, gender: Gender, half: usize) -> (usize, usize) {
    let bit = |r: usize| ((gender.0 >> r) & 1) as usize * half;
    if d == 1 {
        (0, bit(0))
    } else {
        (bit(0), bit(1))
    }
}

fn extract(buf: &[f64], d: usize, stride: usize, half: usize, band: &mut Band, scale: f64) {
    let (r0, c0) = quadrant(d, band.gender, half);
    if d == 1 {
        for m in 0..half {
            band.values[m] = buf[c0 + m] * scale;
        }
    } else {
        for r in 0..half {
            for c in 0..half {
                band.values[r * half + c] = buf[(r0 + r) * stride + c0 + c] * scale;
            }
        }
    }
}

fn insert(buf: &mut [f64], d: usize, stride: usize, half: usize, band: &Band, scale: f64) {
    let (r0, c0) = quadrant(d, band.gender, half);
    if d == 1 {
        for m in 0..half {
            buf[c0 + m] = band.values[m] * scale;
        }
    } else {
        for r in 0..half {
            for c in 0..half {
                buf[(r0 + r) * stride + c0 + c] = band.values[r * half + c] * scale;
            }
        }
    }
}

/// Inverse of [`dwt_periodic`].
pub fn idwt_periodic(coeffs: &WaveletCoeffs, spec: &WaveletSpec) -> Result<Vec<f64>> {
    coeffs.check_spec(spec)?;
    let grid = coeffs.grid;
    let layout = WaveletCoeffs::zeros(&grid, spec)?;
    let same_shape = layout.levels.len() == coeffs.levels.len()
        && layout.levels.iter().zip(&coeffs.levels).all(|(a, b)| {
            a.j == b.j
                && a.bands.len() == b.bands.len()
                && a.bands.iter().zip(&b.bands).all(|(x, y)| {
                    x.gender == y.gender && x.values.len() == y.values.len()
                })
        });
    if !same_shape {
        return Err(Error::Shape(
            "coefficient layout does not match the wavelet spec and grid".into(),
        ));
    }
    let depth = spec.depth_for(grid.level())?;
    let d = grid.dim();
    let n = grid.side();
    let mut buf = vec![0.0; grid.cells()];
    let (h, g) = (&spec.lowpass, &spec.highpass);

    if depth == 0 {
        let s = 2f64.powf(-(grid.level() as f64) * d as f64 / 2.0);
        insert(&mut buf, d, n, n, &coeffs.levels[0].bands[0], s);
    }
    for s in (0..depth).rev() {
        let size = n >> s;
        let half = size / 2;
        let continuous = grid.level() - s - 1;
        let j = continuous - spec.zeta;
        let scale = 2f64.powf(-(continuous as f64) * d as f64 / 2.0);
        let level = coeffs.levels.iter().find(|l| l.j == j).unwrap();
        for band in &level.bands {
            insert(&mut buf, d, n, half, band, scale);
        }
        for axis in (0..d).rev() {
            along_axis(&mut buf, d, n, size, axis, |line, out| {
                let (low, high) = line.split_at(half);
                synthesize(low, high, h, g, out);
            });
        }
    }
    let output_scale = 2f64.powf(grid.level() as f64 * d as f64 / 2.0);
    buf.iter_mut().for_each(|v| *v *= output_scale);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng_from_seed;
    use rand::Rng;

    fn random(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        (0..len).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
    }

    fn rel(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE);
        (num / den).sqrt()
    }

    #[test]
    fn zeta_values() {
        assert_eq!(WaveletSpec::new(1).unwrap().zeta(), 0);
        assert_eq!(WaveletSpec::new(2).unwrap().zeta(), 2);
        assert_eq!(WaveletSpec::new(3).unwrap().zeta(), 3);
        assert_eq!(WaveletSpec::new(4).unwrap().zeta(), 3);
        assert_eq!(WaveletSpec::new(5).unwrap().zeta(), 4);
    }

    #[test]
    fn counts_match_index_sets() {
        for k in [1, 2, 4] {
            let spec = WaveletSpec::new(k).unwrap();
            for (d, level) in [(1, 6), (1, 9), (2, 5)] {
                let grid = GridSpec::new(d, level).unwrap();
                let c = WaveletCoeffs::zeros(&grid, &spec).unwrap();
                assert_eq!(c.len(), grid.cells());
                assert_eq!(c.levels()[0].j, 0);
                assert_eq!(c.levels()[0].bands.len(), 1 << d);
                for l in &c.levels()[1..] {
                    assert_eq!(l.bands.len(), (1 << d) - 1);
                }
                for l in c.levels() {
                    for b in &l.bands {
                        assert_eq!(b.values.len(), 1 << ((l.j + spec.zeta()) as usize * d));
                    }
                }
            }
        }
    }

    #[test]
    fn iteration_counts() {
        let haar = WaveletSpec::new(1).unwrap();
        let grid = GridSpec::new(1, 3).unwrap();
        assert_eq!(dwt_periodic(&grid, &random(8, 1), &haar).unwrap().iter().count(), 8);

        let grid = GridSpec::new(2, 2).unwrap();
        let one = WaveletSpec::new(1).unwrap().with_depth(1);
        let c = dwt_periodic(&grid, &random(16, 2), &one).unwrap();
        let scaling = c.iter().filter(|x| x.gender.is_scaling()).count();
        assert_eq!((scaling, c.len() - scaling), (4, 12));
    }

    #[test]
    fn iteration_order_is_stable() {
        let spec = WaveletSpec::new(2).unwrap();
        let grid = GridSpec::new(2, 4).unwrap();
        let c = dwt_periodic(&grid, &random(256, 3), &spec).unwrap();
        let a: Vec<_> = c.iter().collect();
        let b: Vec<_> = c.iter().collect();
        assert_eq!(a, b);
        for w in a.windows(2) {
            let key = |x: &Coefficient| (x.j, x.gender, x.shift);
            assert!(key(&w[0]) < key(&w[1]));
        }
    }

    #[test]
    fn perfect_reconstruction_and_parseval() {
        for k in [1, 2, 4] {
            let spec = WaveletSpec::new(k).unwrap();
            for (d, level) in [(1, 4), (1, 10), (2, 4), (2, 7)] {
                let grid = GridSpec::new(d, level).unwrap();
                let f = random(grid.cells(), 10 + k as u64);
                let c = dwt_periodic(&grid, &f, &spec).unwrap();
                let back = idwt_periodic(&c, &spec).unwrap();
                assert!(rel(&back, &f) < 1e-10, "k={k} d={d} J={level}");

                let energy = grid.cell_volume() * f.iter().map(|v| v * v).sum::<f64>();
                let coeff_energy: f64 = c
                    .iter()
                    .map(|x| {
                        let s = 2f64.powf(-((x.j + spec.zeta()) as f64) * d as f64 / 2.0);
                        (x.value * s).powi(2)
                    })
                    .sum();
                assert!((coeff_energy / energy - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn basis_function_analysis() {
        let spec = WaveletSpec::new(2).unwrap();
        let grid = GridSpec::new(2, 6).unwrap();
        let mut unit = WaveletCoeffs::zeros(&grid, &spec).unwrap();
        let target = (1u32, Gender(2), 9usize);
        unit.band_mut(target.0, target.1).unwrap().values[target.2] = 1.0;
        let f = idwt_periodic(&unit, &spec).unwrap();
        let c = dwt_periodic(&grid, &f, &spec).unwrap();
        for x in c.iter() {
            let expected = if (x.j, x.gender, x.shift) == target { 1.0 } else { 0.0 };
            assert!((x.value - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn coarse_scaling_function_has_unit_norm() {
        let spec = WaveletSpec::new(4).unwrap();
        let grid = GridSpec::new(1, 9).unwrap();
        let mut c = WaveletCoeffs::zeros(&grid, &spec).unwrap();
        c.band_mut(0, Gender(0)).unwrap().values[3] = 1.0;
        let f = idwt_periodic(&c, &spec).unwrap();
        // f = 2^{-ζ/2} φ, so ‖f‖² = 2^{-ζ}.
        let norm2 = grid.cell_volume() * f.iter().map(|v| v * v).sum::<f64>();
        assert!((norm2 * 2f64.powi(spec.zeta() as i32) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_in_zero_out_and_linearity() {
        let spec = WaveletSpec::new(4).unwrap();
        let grid = GridSpec::new(2, 5).unwrap();
        let c = dwt_periodic(&grid, &vec![0.0; grid.cells()], &spec).unwrap();
        assert!(c.iter().all(|x| x.value == 0.0));

        let mut c1 = WaveletCoeffs::zeros(&grid, &spec).unwrap();
        let mut c2 = c1.clone();
        c1.assign(&random(grid.cells(), 5)).unwrap();
        c2.assign(&random(grid.cells(), 6)).unwrap();
        let a = -1.7;
        let mut combo = c1.clone();
        let mixed: Vec<f64> = c1.iter().zip(c2.iter()).map(|(x, y)| a * x.value + y.value).collect();
        combo.assign(&mixed).unwrap();
        let lhs = idwt_periodic(&combo, &spec).unwrap();
        let f1 = idwt_periodic(&c1, &spec).unwrap();
        let f2 = idwt_periodic(&c2, &spec).unwrap();
        let rhs: Vec<f64> = f1.iter().zip(&f2).map(|(x, y)| a * x + y).collect();
        assert!(rel(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn vanishing_moments_away_from_wrap() {
        // Samples of a cubic: interior detail coefficients vanish for k = 4.
        let spec = WaveletSpec::new(4).unwrap();
        let grid = GridSpec::new(1, 9).unwrap();
        let n = grid.side();
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 / n as f64;
                1.0 + 2.0 * x - 3.0 * x * x + 0.5 * x * x * x
            })
            .collect();
        let c = dwt_periodic(&grid, &f, &spec).unwrap();
        let taps = spec.lowpass().len();
        // Finest level: shift m reads samples 2m .. 2m + taps − 1.
        let finest = c.levels().last().unwrap();
        let band = &finest.bands[0];
        let len = n;
        let mut checked = 0;
        for (m, v) in band.values.iter().enumerate() {
            if 2 * m + taps <= len {
                assert!(v.abs() < 1e-8, "m={m}: {v}");
                checked += 1;
            } else {
                assert!(v.abs() > 1e-6);
            }
        }
        assert!(checked > 200);
        // Second finest: the low-pass output is wrap-free for 2m + taps ≤ n/2 − taps/2.
        let second = &c.levels()[c.levels().len() - 2].bands[0];
        for (m, v) in second.values.iter().enumerate() {
            if 2 * m + taps + taps / 2 <= len / 2 {
                assert!(v.abs() < 1e-8, "m={m}: {v}");
            }
        }
    }

    #[test]
    fn shape_errors() {
        let spec = WaveletSpec::new(4).unwrap();
        let grid = GridSpec::new(1, 3).unwrap();
        assert!(dwt_periodic(&grid, &[0.0; 8], &spec).is_err());
        let grid = GridSpec::new(1, 6).unwrap();
        assert!(dwt_periodic(&grid, &[0.0; 8], &spec).is_err());
        let c = dwt_periodic(&grid, &[0.0; 64], &spec).unwrap();
        assert!(idwt_periodic(&c, &WaveletSpec::new(2).unwrap()).is_err());
        assert!(WaveletCoeffs::zeros(&grid, &WaveletSpec::new(1).unwrap().with_depth(7)).is_err());
    }

    #[test]
    fn csv_export() {
        let spec = WaveletSpec::new(1).unwrap();
        let grid = GridSpec::new(1, 2).unwrap();
        let c = dwt_periodic(&grid, &[1.0, 2.0, 3.0, 4.0], &spec).unwrap();
        let mut out = Vec::new();
        c.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "j,gender,m,lambda");
        assert_eq!(lines.len(), 5);
        // Scaling coefficient of the mean: λ = ⟨f, φ⟩ = 2.5.
        assert!(lines[1].starts_with("0,0,0,"));
        let v: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }
}
