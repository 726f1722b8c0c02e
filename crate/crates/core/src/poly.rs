//! Complex polynomial helpers shared by the filter design and the operator checks.

use num_complex::Complex64;

/// Evaluates `Σ c_k z^k` (coefficients in ascending degree).
pub(crate) fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// All roots of a polynomial given in ascending degree, by Durand–Kerner
/// iteration followed by Newton polishing on the original polynomial.
pub(crate) fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();

    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(0.4 * radius.min(2.0) + 0.5, 0.9);
    let mut z: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32 + 1)).collect();

    for _ in 0..2000 {
        let mut change = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(&monic, z[i]) / denom;
            z[i] -= step;
            change = change.max(step.norm() / (1.0 + z[i].norm()));
        }
        if change < 1e-16 {
            break;
        }
    }

    let d = derivative(&monic);
    for root in z.iter_mut() {
        for _ in 0..4 {
            let slope = eval(&d, *root);
            if slope.norm() == 0.0 {
                break;
            }
            let step = eval(&monic, *root) / slope;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *root -= step;
        }
    }
    z
}

/// Expands `Π (z − r)` into ascending coefficients.
pub(crate) fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
        for (k, &c) in out.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn recovers_known_roots() {
        let expected = [c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 1.5), c(0.5, -1.5), c(3.0, 0.25)];
        let poly = from_roots(&expected);
        let found = roots(&poly);
        assert_eq!(found.len(), expected.len());
        for r in expected {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-12, "{r}: {best}");
        }
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&[c(3.0, 0.0)]).is_empty());
        assert_eq!(roots(&[c(-2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).len(), 1);
    }
}
