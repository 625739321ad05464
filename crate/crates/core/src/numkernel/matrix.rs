use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{ComplexScalar, TruncationWindow};
use crate::error::{Error, Result};

/// Which basis the matrix entries refer to: the monomials `f_n(z) = zⁿ`
/// or the orthonormalised `x_n = f_n / ‖f_n‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Orthonormal,
}

/// Square complex matrix indexed by the basis indices of a window.
///
/// Column `n` holds the image of the `n`-th basis vector. Arithmetic between
/// operators on different windows or bases is a programming error and panics,
/// in the same way mismatched dimensions do in `nalgebra`; use
/// [`OperatorMatrix::ensure_compatible`] where the operands come from users.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    window: TruncationWindow,
    basis: Basis,
    data: DMatrix<ComplexScalar>,
}

impl OperatorMatrix {
    pub fn zeros(window: TruncationWindow, basis: Basis) -> Self {
        let d = window.size();
        Self { window, basis, data: DMatrix::zeros(d, d) }
    }

    pub fn identity(window: TruncationWindow, basis: Basis) -> Self {
        let d = window.size();
        Self { window, basis, data: DMatrix::identity(d, d) }
    }

    /// Entry at (row index, column index) given by `f`.
    pub fn from_fn(
        window: TruncationWindow,
        basis: Basis,
        mut f: impl FnMut(i64, i64) -> ComplexScalar,
    ) -> Self {
        let d = window.size();
        let data = DMatrix::from_fn(d, d, |r, c| f(window.index_at(r), window.index_at(c)));
        Self { window, basis, data }
    }

    pub fn diagonal(window: TruncationWindow, basis: Basis, mut f: impl FnMut(i64) -> ComplexScalar) -> Self {
        let mut m = Self::zeros(window, basis);
        for (pos, n) in window.indices().enumerate() {
            m.data[(pos, pos)] = f(n);
        }
        m
    }

    pub fn from_dmatrix(window: TruncationWindow, basis: Basis, data: DMatrix<ComplexScalar>) -> Result<Self> {
        let d = window.size();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::Mismatch(format!(
                "{}x{} matrix on a window of size {d}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator matrix"));
        }
        Ok(Self { window, basis, data })
    }

    pub(crate) fn from_parts_unchecked(window: TruncationWindow, basis: Basis, data: DMatrix<ComplexScalar>) -> Self {
        debug_assert_eq!(data.nrows(), window.size());
        Self { window, basis, data }
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn size(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<ComplexScalar> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<ComplexScalar> {
        self.data
    }

    /// Replace the padding of the attached window (the index range is unchanged).
    pub fn with_window_padding(mut self, padding: usize) -> Result<Self> {
        self.window = self.window.with_padding(padding)?;
        Ok(self)
    }

    /// Entry at basis indices `(row, col)`; `None` outside the window.
    pub fn entry(&self, row: i64, col: i64) -> Option<ComplexScalar> {
        Some(self.data[(self.window.position(row)?, self.window.position(col)?)])
    }

    /// Entry at basis indices; panics outside the window.
    pub fn get(&self, row: i64, col: i64) -> ComplexScalar {
        self.entry(row, col)
            .unwrap_or_else(|| panic!("entry ({row}, {col}) outside window {}", self.window))
    }

    pub fn set(&mut self, row: i64, col: i64, value: ComplexScalar) {
        let (r, c) = (self.window.position(row), self.window.position(col));
        match (r, c) {
            (Some(r), Some(c)) => self.data[(r, c)] = value,
            _ => panic!("entry ({row}, {col}) outside window {}", self.window),
        }
    }

    pub fn ensure_compatible(&self, other: &OperatorMatrix) -> Result<()> {
        if self.window != other.window && !self.window.same_extent(&other.window) {
            return Err(Error::Mismatch(format!("windows {} and {}", self.window, other.window)));
        }
        if self.basis != other.basis {
            return Err(Error::Mismatch(format!("bases {:?} and {:?}", self.basis, other.basis)));
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &OperatorMatrix) {
        if let Err(e) = self.ensure_compatible(other) {
            panic!("{e}");
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { window: self.window, basis: self.basis, data: self.data.adjoint() }
    }

    pub fn scale(&self, c: ComplexScalar) -> Self {
        Self { window: self.window, basis: self.basis, data: &self.data * c }
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &OperatorMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        norm_one(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        self.assert_compatible(other);
        self.data.iter().zip(other.data.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Integer power by repeated multiplication (`p = 0` gives the identity).
    pub fn pow(&self, p: u32) -> Self {
        let mut acc = Self::identity(self.window, self.basis);
        for _ in 0..p {
            acc = &acc * self;
        }
        acc
    }
}

pub(crate) fn norm_one(m: &DMatrix<ComplexScalar>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("window", &self.window)
            .field("basis", &self.basis)
            .field("frobenius", &self.frobenius())
            .finish()
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_compatible(rhs);
        OperatorMatrix { window: self.window, basis: self.basis, data: &self.data + &rhs.data }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_compatible(rhs);
        OperatorMatrix { window: self.window, basis: self.basis, data: &self.data - &rhs.data }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.assert_compatible(rhs);
        OperatorMatrix { window: self.window, basis: self.basis, data: &self.data * &rhs.data }
    }
}

impl Mul<ComplexScalar> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: ComplexScalar) -> OperatorMatrix {
        self.scale(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: OperatorMatrix) -> OperatorMatrix {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                (&self).$m(rhs)
            }
        }
        impl $tr<OperatorMatrix> for &OperatorMatrix {
            type Output = OperatorMatrix;
            fn $m(self, rhs: OperatorMatrix) -> OperatorMatrix {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix { window: self.window, basis: self.basis, data: -&self.data }
    }
}
