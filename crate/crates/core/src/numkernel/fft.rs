use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::ComplexScalar;
use crate::error::{Error, Result};

/// Fourier coefficients of samples taken at `θ_j = 2πj/K`, scaled so that
/// samples of `e^{ikθ}` give coefficient 1 at slot `k mod K`.
pub fn circle_fft(samples: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
    let k = samples.len();
    if !k.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k));
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let scale = 1.0 / k as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}

/// Inverse of [`circle_fft`]: samples of `Σ c_k e^{ikθ}` on the same grid.
pub fn circle_synthesize(coeffs: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
    let k = coeffs.len();
    if !k.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k));
    }
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(k).process(&mut buf);
    Ok(buf)
}

/// Coefficient of `e^{ikθ}` for a possibly negative harmonic `k`.
pub fn harmonic(coeffs: &[ComplexScalar], k: i64) -> ComplexScalar {
    let len = coeffs.len() as i64;
    coeffs[k.rem_euclid(len) as usize]
}

/// Grid points `e^{2πij/K}`.
pub fn circle_grid(size: usize) -> Vec<ComplexScalar> {
    (0..size)
        .map(|j| ComplexScalar::from_polar(1.0, 2.0 * PI * j as f64 / size as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples() {
        let c = circle_fft(&vec![ComplexScalar::new(1.0, 0.0); 32]).unwrap();
        assert!((c[0] - ComplexScalar::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn pure_harmonic() {
        let s: Vec<_> = circle_grid(64);
        let c = circle_fft(&s).unwrap();
        assert!((c[1] - ComplexScalar::new(1.0, 0.0)).norm() < 1e-13);
        let conj: Vec<_> = s.iter().map(|z| z.conj()).collect();
        let c = circle_fft(&conj).unwrap();
        assert!((harmonic(&c, -1) - ComplexScalar::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(circle_fft(&[ComplexScalar::new(0.0, 0.0); 12]), Err(Error::NotPowerOfTwo(12)));
        assert!(circle_synthesize(&[ComplexScalar::new(0.0, 0.0); 3]).is_err());
    }
}
