//! Weighted shifts: the canonical homogeneous shifts of each series, their
//! weight sequences in orthonormal bases, and the shift on the reducible sum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c64, Basis, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};
use crate::repn::{RepnParams, SeriesTag};

/// Largest coupling `|r|` accepted for the reducible shift.
pub const MAX_COUPLING: f64 = 10.0;

/// `T f_n = a_n f_{n−m}`; `a_n` is absent where `n − m` leaves the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedShiftSpec {
    pub window: TruncationWindow,
    pub step: i64,
    pub coefficients: Vec<Option<ComplexScalar>>,
    pub basis: Basis,
}

impl WeightedShiftSpec {
    /// Build from a coefficient rule; `None` from `a` marks an index outside
    /// the operator's domain.
    pub fn from_rule(
        window: TruncationWindow,
        step: i64,
        basis: Basis,
        mut a: impl FnMut(i64) -> Option<ComplexScalar>,
    ) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(window.size());
        for n in window.indices() {
            let value = if window.contains(n - step) { a(n) } else { None };
            if let Some(v) = value {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Pole(format!("shift coefficient at n = {n} is not finite")));
                }
            }
            coefficients.push(value);
        }
        Ok(Self { window, step, coefficients, basis })
    }

    /// Read the `step`-diagonal of a matrix.
    pub fn from_matrix(t: &OperatorMatrix, step: i64) -> Self {
        let w = *t.window();
        let coefficients = w.indices().map(|n| t.entry(n - step, n)).collect();
        Self { window: w, step, coefficients, basis: t.basis() }
    }

    pub fn coefficient(&self, n: i64) -> Option<ComplexScalar> {
        self.window.position(n).and_then(|p| self.coefficients[p])
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(self.window, self.basis);
        for (n, a) in self.window.indices().zip(&self.coefficients) {
            if let Some(a) = a {
                m.set(n - self.step, n, *a);
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().flatten().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftKind {
    T1,
    #[serde(rename = "T1star")]
    T1Star,
    T2,
    T3,
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftKind::T1 => "T1",
            ShiftKind::T1Star => "T1star",
            ShiftKind::T2 => "T2",
            ShiftKind::T3 => "T3",
        })
    }
}

impl FromStr for ShiftKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(ShiftKind::T1),
            "T1star" | "t1star" | "T1*" => Ok(ShiftKind::T1Star),
            "T2" | "t2" => Ok(ShiftKind::T2),
            "T3" | "t3" => Ok(ShiftKind::T3),
            other => Err(Error::InvalidArgument(format!("unknown shift '{other}'"))),
        }
    }
}

/// Coefficient rule and step of a canonical shift.
pub fn canonical_shift_spec(kind: ShiftKind, p: &RepnParams, w: &TruncationWindow) -> Result<WeightedShiftSpec> {
    let need = match kind {
        ShiftKind::T1 | ShiftKind::T1Star => IndexSet::Unilateral,
        ShiftKind::T2 | ShiftKind::T3 => IndexSet::Bilateral,
    };
    if p.index_set() != need {
        return Err(Error::IncompatibleShift(format!("{kind} needs a {need} representation, got {}", p.index_set())));
    }
    if w.kind() != need {
        return Err(Error::Mismatch(format!("{kind} needs a {need} window, got {}", w.kind())));
    }
    let (lambda, mu) = (p.lambda(), p.mu());
    match kind {
        ShiftKind::T1 | ShiftKind::T2 => WeightedShiftSpec::from_rule(*w, -1, Basis::Monomial, |_| Some(c64(1.0, 0.0))),
        ShiftKind::T1Star => {
            if lambda <= 0.0 {
                return Err(Error::IncompatibleShift(format!("T1star needs lambda > 0, got {lambda}")));
            }
            WeightedShiftSpec::from_rule(*w, 1, Basis::Monomial, |n| {
                let n = n as f64;
                Some(c64(n / (lambda + n - 1.0), 0.0))
            })
        }
        ShiftKind::T3 => {
            if mu.im == 0.0 && mu.re == mu.re.round() {
                return Err(Error::Pole(format!("T3 needs a non-integer mu, got {mu}")));
            }
            WeightedShiftSpec::from_rule(*w, -1, Basis::Monomial, |n| {
                let n = n as f64;
                Some((lambda + mu + n) / (n + 1.0 - mu))
            })
        }
    }
}

/// Monomial-basis matrix of a canonical homogeneous shift.
pub fn canonical_shift(kind: ShiftKind, p: &RepnParams, w: &TruncationWindow) -> Result<OperatorMatrix> {
    Ok(canonical_shift_spec(kind, p, w)?.to_matrix())
}

/// Which of the two bilateral shifts a weight table refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ShiftBranch {
    #[default]
    T2,
    T3,
}

impl FromStr for ShiftBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T2" | "t2" => Ok(ShiftBranch::T2),
            "T3" | "t3" => Ok(ShiftBranch::T3),
            other => Err(Error::InvalidArgument(format!("unknown shift branch '{other}'"))),
        }
    }
}

/// Orthonormal-basis weight `w_n` in `T x_n = w_n x_{n+1}`.
///
/// Holomorphic series live on `n ≥ 0`, anti-holomorphic on `n ≤ 0` (where
/// `x_0` has nowhere to go and `w_0 = 0`), the rest on all of `Z`. The
/// branch only matters for the principal and complementary series. Principal
/// `T3` weights are complex of modulus one.
pub fn weight_sequence(series: SeriesTag, p: &RepnParams, branch: ShiftBranch, n: i64) -> Result<ComplexScalar> {
    let (lambda, mu) = (p.lambda(), p.mu());
    let nf = n as f64;
    let out_of_domain = |what: &str| Error::IndexDomain { index: n, what: what.into() };
    let w = match series {
        SeriesTag::HoloDiscrete => {
            if n < 0 {
                return Err(out_of_domain("holomorphic series (n >= 0)"));
            }
            c64(((1.0 + nf) / (lambda + nf)).sqrt(), 0.0)
        }
        SeriesTag::AntiHoloDiscrete => {
            if n > 0 {
                return Err(out_of_domain("anti-holomorphic series (n <= 0)"));
            }
            if n == 0 {
                c64(0.0, 0.0)
            } else {
                c64((nf / (1.0 - lambda + nf)).sqrt(), 0.0)
            }
        }
        SeriesTag::Principal => match branch {
            ShiftBranch::T2 => c64(1.0, 0.0),
            ShiftBranch::T3 => (lambda + mu + nf) / (nf + 1.0 - mu),
        },
        SeriesTag::Complementary => {
            let m = mu.re;
            match branch {
                ShiftBranch::T2 => c64(((1.0 - m + nf) / (lambda + m + nf)).sqrt(), 0.0),
                ShiftBranch::T3 => c64(((lambda + m + nf) / (1.0 - m + nf)).sqrt(), 0.0),
            }
        }
        SeriesTag::ReducibleSum { r, .. } => {
            if n == -1 {
                r
            } else {
                c64(1.0, 0.0)
            }
        }
    };
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Pole(format!("weight at n = {n} is not finite")));
    }
    Ok(w)
}

/// `G^{1/2} T G^{−1/2}`: the matrix of `T` in the orthonormal basis
/// `x_n = f_n/‖f_n‖`.
pub fn to_orthonormal(t: &OperatorMatrix, g: &OperatorMatrix) -> Result<OperatorMatrix> {
    t.ensure_compatible(g)?;
    if t.basis() != Basis::Monomial {
        return Err(Error::Mismatch("operator is already in the orthonormal basis".into()));
    }
    let w = *t.window();
    let mut root = Vec::with_capacity(w.size());
    for n in w.indices() {
        let v = g.get(n, n);
        if v.re.is_nan() || v.re <= 0.0 || v.im != 0.0 || !v.re.is_finite() {
            return Err(Error::ParameterRange(format!("Gram entry at n = {n} is {v}, not positive")));
        }
        root.push(v.re.sqrt());
    }
    let data = t.data();
    let out = OperatorMatrix::from_fn(w, Basis::Orthonormal, |row, col| {
        let (r, c) = (w.position(row).expect("row"), w.position(col).expect("col"));
        data[(r, c)] * (root[r] / root[c])
    });
    Ok(out)
}

/// `(λ, r)` for the shift on `D⁻_{2−λ} ⊕ D⁺_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducibleShiftSpec {
    lambda: f64,
    r: ComplexScalar,
}

impl ReducibleShiftSpec {
    pub fn new(lambda: f64, r: ComplexScalar) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 2.0) {
            return Err(Error::ParameterRange(format!("reducible shift needs lambda in (0, 2), got {lambda}")));
        }
        if r.norm().is_nan() || r.norm() > MAX_COUPLING {
            return Err(Error::ParameterRange(format!("coupling |r| = {} exceeds {MAX_COUPLING}", r.norm())));
        }
        Ok(Self { lambda, r })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn r(&self) -> ComplexScalar {
        self.r
    }

    /// `a_n` in `T g_n = a_n g_{n+1}`.
    pub fn coefficient(&self, n: i64) -> ComplexScalar {
        match n {
            -1 => self.r,
            n if n < -1 => c64((1.0 + n as f64) / (self.lambda + n as f64), 0.0),
            _ => c64(1.0, 0.0),
        }
    }
}

/// Matrix of the reducible shift in the `g_n` basis.
pub fn reducible_shift(spec: &ReducibleShiftSpec, w: &TruncationWindow) -> Result<OperatorMatrix> {
    if w.kind() != IndexSet::Bilateral {
        return Err(Error::Mismatch("reducible shift needs a bilateral window".into()));
    }
    Ok(WeightedShiftSpec::from_rule(*w, -1, Basis::Monomial, |n| Some(spec.coefficient(n)))?.to_matrix())
}

/// Block decomposition along `span{g_n : n < 0} ⊕ span{g_n : n ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockStructure {
    /// Largest entry of the block mapping the second summand into the first.
    pub t12_max_abs: f64,
    /// Numerical rank of the block mapping the first summand into the second.
    pub t21_rank: usize,
}

pub fn block_structure(t: &OperatorMatrix) -> Result<BlockStructure> {
    let w = *t.window();
    if w.kind() != IndexSet::Bilateral {
        return Err(Error::Mismatch("block structure needs a bilateral window".into()));
    }
    let neg: Vec<usize> = w.indices().filter(|n| *n < 0).map(|n| w.position(n).expect("in window")).collect();
    let pos: Vec<usize> = w.indices().filter(|n| *n >= 0).map(|n| w.position(n).expect("in window")).collect();
    let data = t.data();
    let t12_max_abs = neg
        .iter()
        .flat_map(|&r| pos.iter().map(move |&c| (r, c)))
        .map(|rc| data[rc].norm())
        .fold(0.0, f64::max);
    let t21 = data.select_rows(&pos).select_columns(&neg);
    let t21_rank = t21.rank(1e-12 * t.frobenius().max(1.0));
    Ok(BlockStructure { t12_max_abs, t21_rank })
}
