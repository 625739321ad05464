use super::{OperatorMatrix};
use super::matrix::norm_one;
use crate::error::{Error, Result};

/// Solves above this 1-norm condition estimate are refused.
pub const DEFAULT_CONDITION_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: OperatorMatrix,
    /// Frobenius norm of `A·X − B`.
    pub residual: f64,
    /// `‖A‖₁·‖A⁻¹‖₁`.
    pub condition: f64,
}

/// Solve `A·X = B` by LU factorisation.
pub fn solve(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Solution> {
    solve_with_threshold(a, b, DEFAULT_CONDITION_THRESHOLD)
}

pub fn solve_with_threshold(a: &OperatorMatrix, b: &OperatorMatrix, threshold: f64) -> Result<Solution> {
    a.ensure_compatible(b)?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("linear system"));
    }
    let lu = a.data().clone().lu();
    let inv = lu.try_inverse().ok_or(Error::Singular { condition: f64::INFINITY })?;
    let condition = norm_one(a.data()) * norm_one(&inv);
    if !condition.is_finite() || condition > threshold {
        return Err(Error::Singular { condition });
    }
    let x = lu.solve(b.data()).ok_or(Error::Singular { condition })?;
    let x = OperatorMatrix::from_dmatrix(*b.window(), b.basis(), x)?;
    let residual = (&(a * &x) - b).frobenius();
    Ok(Solution { x, residual, condition })
}
