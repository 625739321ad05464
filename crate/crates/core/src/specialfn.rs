//! Complex gamma function and the Gram norms `‖f_n‖² = Γ(1−μ+n)/Γ(λ+μ̄+n)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{ComplexScalar, IndexSet, TruncationWindow};
use crate::repn::RepnParams;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Relative size of an imaginary part that may be discarded from a quantity
/// that is real in exact arithmetic.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Γ(z) by the Lanczos approximation, with reflection for `Re z < 1/2`.
pub fn complex_gamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("gamma argument"));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: ComplexScalar) -> ComplexScalar {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return ComplexScalar::from(PI) / (s * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = ComplexScalar::from(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// Squared norms of the monomials over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSequence {
    window: TruncationWindow,
    values: Vec<f64>,
}

impl NormSequence {
    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `‖f_n‖²`, or `None` outside the window.
    pub fn get(&self, n: i64) -> Option<f64> {
        self.window.position(n).map(|p| self.values[p])
    }
}

/// `‖f_n‖²` for every index of `w`.
///
/// The value at `n = 0` comes from the gamma ratio; the rest follow from the
/// one-step ratio `(1−μ+n)/(λ+μ̄+n)` in both directions, so no gamma is
/// ever evaluated at a negative argument. When `1−μ` and `λ+μ̄` coincide
/// (the principal series) every norm is exactly one.
pub fn norm_sq_sequence(params: &RepnParams, w: &TruncationWindow) -> Result<NormSequence> {
    if w.kind() != params.index_set() {
        return Err(Error::Mismatch(format!("{} parameters on a {} window", params.index_set(), w.kind())));
    }
    let lambda = params.lambda();
    let mu = params.mu();
    let top = 1.0 - mu;
    let bottom = lambda + mu.conj();

    if (top - bottom).norm() <= IMAGINARY_RESIDUE_TOL * top.norm().max(1.0) {
        return Ok(NormSequence { window: *w, values: vec![1.0; w.size()] });
    }

    let anchor = complex_gamma(top)? / complex_gamma(bottom)?;
    let mut values = vec![0.0; w.size()];
    let zero = w.position(0).expect("every window contains index 0");
    values[zero] = real_positive(anchor, "‖f_0‖²")?;

    for n in 0..w.last() {
        let ratio = (top + n as f64) / (bottom + n as f64);
        let r = real_positive(ratio, "norm ratio")?;
        let p = w.position(n).unwrap();
        values[p + 1] = values[p] * r;
    }
    if w.kind() == IndexSet::Bilateral {
        for n in (w.first() + 1..=0).rev() {
            // ‖f_{n−1}‖² = ‖f_n‖² · (λ+μ̄+n−1)/(1−μ+n−1)
            let ratio = (bottom + (n - 1) as f64) / (top + (n - 1) as f64);
            let r = real_positive(ratio, "norm ratio")?;
            let p = w.position(n).unwrap();
            values[p - 1] = values[p] * r;
        }
    }
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::ParameterRange("norm sequence leaves the positive reals".into()));
    }
    Ok(NormSequence { window: *w, values })
}

fn real_positive(z: ComplexScalar, what: &str) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::ParameterRange(format!("{what} is not finite")));
    }
    if z.im.abs() > IMAGINARY_RESIDUE_TOL * z.norm() || z.re <= 0.0 {
        return Err(Error::ParameterRange(format!("{what} = {z} is not real and positive")));
    }
    Ok(z.re)
}
