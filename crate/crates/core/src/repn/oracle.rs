use serde::{Deserialize, Serialize};

use super::params::RepnParams;
use crate::error::{Error, Result};
use crate::mobius::{apply, inverse, log_derivative, path_to_mobius, GroupPath, MobiusElement};
use crate::numkernel::{c64, circle_fft, circle_grid, harmonic, Basis, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};

/// Largest `|β|` accepted by [`circle_rep_oracle`].
pub const ORACLE_BETA_LIMIT: f64 = 0.3;
const NYQUIST_TAIL_TOL: f64 = 1e-9;
const NEGATIVE_LEAK_TOL: f64 = 1e-10;

/// Coefficients of `F = Σ c_n f_n` over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    window: TruncationWindow,
    coeffs: Vec<ComplexScalar>,
}

impl CoefficientVector {
    pub fn new(window: TruncationWindow, coeffs: Vec<ComplexScalar>) -> Result<Self> {
        if coeffs.len() != window.size() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for a window of size {}",
                coeffs.len(),
                window.size()
            )));
        }
        Ok(Self { window, coeffs })
    }

    pub fn zeros(window: TruncationWindow) -> Self {
        Self { window, coeffs: vec![c64(0.0, 0.0); window.size()] }
    }

    /// The basis vector `f_n`.
    pub fn basis_vector(window: TruncationWindow, n: i64) -> Result<Self> {
        let pos = window
            .position(n)
            .ok_or(Error::IndexDomain { index: n, what: "window".into() })?;
        let mut v = Self::zeros(window);
        v.coeffs[pos] = c64(1.0, 0.0);
        Ok(v)
    }

    /// Column `n` of a matrix.
    pub fn column(m: &OperatorMatrix, n: i64) -> Result<Self> {
        let pos = m
            .window()
            .position(n)
            .ok_or(Error::IndexDomain { index: n, what: "window".into() })?;
        Ok(Self { window: *m.window(), coeffs: m.data().column(pos).iter().copied().collect() })
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn get(&self, n: i64) -> Option<ComplexScalar> {
        self.window.position(n).map(|p| self.coeffs[p])
    }

    /// Sum of `|c_n|` over the interior indices.
    pub fn interior_distance(&self, other: &CoefficientVector) -> Result<f64> {
        if !self.window.same_extent(&other.window) {
            return Err(Error::Mismatch("coefficient vectors on different windows".into()));
        }
        Ok(self
            .window
            .interior_positions()
            .map(|p| (self.coeffs[p] - other.coeffs[p]).norm())
            .fold(0.0, f64::max))
    }
}

/// Smallest power of two at least `8·(window size)`.
pub fn default_grid_size(w: &TruncationWindow) -> usize {
    (8 * w.size()).next_power_of_two()
}

/// Apply `R(g)` to `F` by evaluation on the unit circle.
///
/// Computes `(φ′)^{η₊} · conj(φ′)^{η₋} · F∘φ` with `φ = phi_inv`, using
/// principal logarithms, and reads off Fourier coefficients.
pub fn circle_rep_oracle(
    p: &RepnParams,
    phi_inv: &MobiusElement,
    eta_plus: ComplexScalar,
    eta_minus: ComplexScalar,
    f: &CoefficientVector,
    grid_size: usize,
) -> Result<CoefficientVector> {
    let w = f.window;
    if w.kind() != p.index_set() {
        return Err(Error::Mismatch(format!("window is {} but parameters are {}", w.kind(), p.index_set())));
    }
    if phi_inv.beta().norm() > ORACLE_BETA_LIMIT {
        return Err(Error::OracleRange(format!(
            "|beta| = {} exceeds {ORACLE_BETA_LIMIT}",
            phi_inv.beta().norm()
        )));
    }
    if !grid_size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(grid_size));
    }
    if grid_size < 2 * w.size() {
        return Err(Error::GridTooSmall { tail: f64::INFINITY, size: grid_size });
    }

    let samples: Vec<ComplexScalar> = circle_grid(grid_size)
        .into_iter()
        .map(|z| {
            let u = apply(phi_inv, z);
            let lg = log_derivative(phi_inv, z);
            let weight = (eta_plus * lg + eta_minus * lg.conj()).exp();
            weight * eval_laurent(&f.coeffs, w.first(), u)
        })
        .collect();
    let c = circle_fft(&samples)?;

    let k = grid_size as i64;
    let band = (k / 16).max(1);
    let tail = (k / 2 - band..=k / 2 + band).map(|j| harmonic(&c, j).norm()).fold(0.0, f64::max);
    if tail > NYQUIST_TAIL_TOL {
        return Err(Error::GridTooSmall { tail, size: grid_size });
    }
    if w.kind() == IndexSet::Unilateral {
        let leak = (1..k / 2 - band).map(|j| harmonic(&c, -j).norm()).fold(0.0, f64::max);
        if leak > NEGATIVE_LEAK_TOL {
            return Err(Error::OracleRange(format!("negative harmonics of size {leak} in a unilateral image")));
        }
    }
    Ok(CoefficientVector { window: w, coeffs: w.indices().map(|n| harmonic(&c, n)).collect() })
}

fn eval_laurent(coeffs: &[ComplexScalar], first: i64, u: ComplexScalar) -> ComplexScalar {
    // Horner in u from the top index, then the overall factor u^first.
    let acc = coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, c| acc * u + c);
    acc * u.powi(first as i32)
}

/// Full matrix of `R(g)` on `w` obtained column by column from the oracle.
pub fn circle_rep_matrix(p: &RepnParams, path: &GroupPath, w: &TruncationWindow) -> Result<OperatorMatrix> {
    let phi_inv = inverse(&path_to_mobius(path)?);
    let eta_plus = (p.lambda() + p.mu()) / 2.0;
    let eta_minus = p.mu() / 2.0;
    let grid = default_grid_size(w);
    let mut m = OperatorMatrix::zeros(*w, Basis::Monomial);
    for n in w.indices() {
        let col = circle_rep_oracle(p, &phi_inv, eta_plus, eta_minus, &CoefficientVector::basis_vector(*w, n)?, grid)?;
        for (row, v) in w.indices().zip(col.coeffs) {
            m.set(row, n, v);
        }
    }
    Ok(m)
}
