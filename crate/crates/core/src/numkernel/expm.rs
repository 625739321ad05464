use nalgebra::DMatrix;

use super::matrix::norm_one;
use super::{ComplexScalar, OperatorMatrix};
use crate::error::{Error, Result};

/// Matrices with a larger 1-norm are rejected by [`mat_exp`].
pub const DEFAULT_EXP_NORM_BOUND: f64 = 700.0;

// [13/13] diagonal Padé coefficients of exp and the matching 1-norm threshold
// (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// `e^A` by scaling and squaring around the [13/13] Padé approximant.
pub fn mat_exp(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    mat_exp_bounded(a, DEFAULT_EXP_NORM_BOUND)
}

pub fn mat_exp_bounded(a: &OperatorMatrix, norm_bound: f64) -> Result<OperatorMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite("exponential argument"));
    }
    let e = if is_diagonal(a.data()) {
        let norm = norm_one(a.data());
        if norm > norm_bound {
            return Err(Error::ExpOverflow { norm, bound: norm_bound });
        }
        DMatrix::from_diagonal(&a.data().diagonal().map(|z| z.exp()))
    } else {
        expm_dense(a.data(), norm_bound)?
    };
    if e.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential"));
    }
    Ok(OperatorMatrix::from_parts_unchecked(*a.window(), a.basis(), e))
}

fn is_diagonal(a: &DMatrix<ComplexScalar>) -> bool {
    a.iter().enumerate().all(|(k, z)| {
        let (r, c) = (k % a.nrows(), k / a.nrows());
        r == c || (z.re == 0.0 && z.im == 0.0)
    })
}

pub(crate) fn expm_dense(a: &DMatrix<ComplexScalar>, norm_bound: f64) -> Result<DMatrix<ComplexScalar>> {
    let n = a.nrows();
    let norm = norm_one(a);
    if norm > norm_bound {
        return Err(Error::ExpOverflow { norm, bound: norm_bound });
    }
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * ComplexScalar::from(2f64.powi(-squarings));

    let ident = DMatrix::<ComplexScalar>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| ComplexScalar::from(PADE13[k]);

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or(Error::Singular { condition: f64::INFINITY })?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c64, Basis, TruncationWindow};

    #[test]
    fn exp_of_zero_is_identity() {
        let w = TruncationWindow::unilateral(5, 1).unwrap();
        let z = OperatorMatrix::zeros(w, Basis::Monomial);
        let e = mat_exp(&z).unwrap();
        assert_eq!(e, OperatorMatrix::identity(w, Basis::Monomial));
    }

    #[test]
    fn exp_of_imaginary_diagonal() {
        let w = TruncationWindow::unilateral(1, 0).unwrap();
        let theta = [0.1, -0.3];
        let a = OperatorMatrix::diagonal(w, Basis::Monomial, |n| c64(0.0, theta[n as usize]));
        let e = mat_exp(&a).unwrap();
        for (k, t) in theta.iter().enumerate() {
            let k = k as i64;
            assert!((e.get(k, k) - c64(0.0, *t).exp()).norm() < 1e-14);
        }
        assert_eq!(e.get(0, 1), c64(0.0, 0.0));
    }

    #[test]
    fn exp_of_large_scaled_diagonal_uses_squarings() {
        let w = TruncationWindow::unilateral(2, 0).unwrap();
        let a = OperatorMatrix::diagonal(w, Basis::Monomial, |n| c64(-3.0 * n as f64, 7.0 * n as f64));
        let e = mat_exp(&a).unwrap();
        for n in 0..=2 {
            let want = c64(-3.0 * n as f64, 7.0 * n as f64).exp();
            assert!((e.get(n, n) - want).norm() < 1e-13 * want.norm().max(1.0));
        }
    }

    #[test]
    fn oversized_argument_is_rejected() {
        let w = TruncationWindow::unilateral(1, 0).unwrap();
        let a = OperatorMatrix::diagonal(w, Basis::Monomial, |_| c64(0.0, 1000.0));
        assert!(matches!(mat_exp(&a), Err(Error::ExpOverflow { .. })));
        assert!(mat_exp_bounded(&a, 2000.0).is_ok());
    }
}
