//! Dense complex linear algebra shared by every other module.
//!
//! All operators live on a [`TruncationWindow`]: a finite run of basis
//! indices standing in for `Z` or `Z⁺`. Defects are measured with
//! [`interior_norm`], which ignores the `padding` rows and columns at each
//! end of the window.

mod expm;
mod fft;
mod matrix;
mod solve;
mod window;

pub use expm::{mat_exp, mat_exp_bounded, DEFAULT_EXP_NORM_BOUND};
pub use fft::{circle_fft, circle_grid, circle_synthesize, harmonic};
pub use matrix::{Basis, OperatorMatrix};
pub use solve::{solve, solve_with_threshold, Solution, DEFAULT_CONDITION_THRESHOLD};
pub use window::{IndexSet, TruncationWindow};

pub use num_complex::Complex64 as ComplexScalar;

use crate::error::{Error, Result};

/// Shorthand for `re + i·im`.
#[inline]
pub fn c64(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Frobenius norm of the block of `a` whose row and column indices are both
/// interior to `w`.
///
/// `w` must cover the same index range as `a`'s own window; its padding may
/// differ, which is how padding sweeps reuse one matrix.
pub fn interior_norm(a: &OperatorMatrix, w: &TruncationWindow) -> Result<f64> {
    let range = interior_range(a, w)?;
    let data = a.data();
    let mut sum = 0.0;
    for col in range.clone() {
        for row in range.clone() {
            sum += data[(row, col)].norm_sqr();
        }
    }
    Ok(sum.sqrt())
}

/// Largest entry modulus on the interior block.
pub fn interior_max_abs(a: &OperatorMatrix, w: &TruncationWindow) -> Result<f64> {
    let range = interior_range(a, w)?;
    let data = a.data();
    let mut max = 0.0_f64;
    for col in range.clone() {
        for row in range.clone() {
            max = max.max(data[(row, col)].norm());
        }
    }
    Ok(max)
}

fn interior_range(a: &OperatorMatrix, w: &TruncationWindow) -> Result<std::ops::Range<usize>> {
    if !a.window().same_extent(w) {
        return Err(Error::Mismatch(format!(
            "matrix window {} does not match measurement window {}",
            a.window(),
            w
        )));
    }
    let range = w.interior_positions();
    if range.is_empty() {
        return Err(Error::EmptyInterior { n: w.n(), padding: w.padding() });
    }
    Ok(range)
}
