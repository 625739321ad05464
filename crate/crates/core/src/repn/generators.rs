use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::params::{classify_series, RepnParams, SeriesTag};
use crate::error::{Error, Result};
use crate::mobius::{star_path, Generator, GroupPath};
use crate::numkernel::{c64, interior_norm, mat_exp, Basis, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};
use crate::specialfn::{complex_gamma, norm_sq_sequence};

/// Real generators `h, L, M` and the complex combinations
/// `e = ½(L − iM)`, `f = ½(L + iM)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LieElement {
    #[serde(rename = "h")]
    H,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "f")]
    F,
    L,
    M,
}

impl LieElement {
    pub const ALL: [LieElement; 5] = [LieElement::H, LieElement::E, LieElement::F, LieElement::L, LieElement::M];
}

impl From<Generator> for LieElement {
    fn from(g: Generator) -> Self {
        match g {
            Generator::H => LieElement::H,
            Generator::L => LieElement::L,
            Generator::M => LieElement::M,
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LieElement::H => "h",
            LieElement::E => "e",
            LieElement::F => "f",
            LieElement::L => "L",
            LieElement::M => "M",
        })
    }
}

impl FromStr for LieElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(LieElement::H),
            "e" => Ok(LieElement::E),
            "f" => Ok(LieElement::F),
            "L" => Ok(LieElement::L),
            "M" => Ok(LieElement::M),
            other => Err(Error::InvalidArgument(format!("unknown Lie element '{other}'"))),
        }
    }
}

fn check_kind(kind: IndexSet, w: &TruncationWindow) -> Result<()> {
    if w.kind() != kind {
        return Err(Error::Mismatch(format!("window is {} but the representation lives on {kind}", w.kind())));
    }
    Ok(())
}

/// Assemble `h, L, M` from the diagonal of `h` and the coefficient maps of
/// `e` (`f_n ↦ a_n f_{n−1}`) and `f` (`f_n ↦ b_n f_{n+1}`).
fn assemble(
    x: LieElement,
    w: &TruncationWindow,
    lambda: f64,
    e_coef: impl Fn(i64) -> ComplexScalar,
    f_coef: impl Fn(i64) -> ComplexScalar,
) -> OperatorMatrix {
    let e = || {
        let mut m = OperatorMatrix::zeros(*w, Basis::Monomial);
        for n in w.indices() {
            if w.contains(n - 1) {
                m.set(n - 1, n, e_coef(n));
            }
        }
        m
    };
    let f = || {
        let mut m = OperatorMatrix::zeros(*w, Basis::Monomial);
        for n in w.indices() {
            if w.contains(n + 1) {
                m.set(n + 1, n, f_coef(n));
            }
        }
        m
    };
    match x {
        LieElement::H => OperatorMatrix::diagonal(*w, Basis::Monomial, |n| c64(0.0, -(2.0 * n as f64 + lambda))),
        LieElement::E => e(),
        LieElement::F => f(),
        LieElement::L => &e() + &f(),
        LieElement::M => (&e() - &f()).scale(c64(0.0, 1.0)),
    }
}

/// Monomial-basis matrix of `dR_{λ,μ}(X)` on `w`.
///
/// No series membership is required, so the reducible point `R_{1,0}` can
/// be built as well.
pub fn generator_matrix(p: &RepnParams, x: LieElement, w: &TruncationWindow) -> Result<OperatorMatrix> {
    check_kind(p.index_set(), w)?;
    let (lambda, mu) = (p.lambda(), p.mu());
    Ok(assemble(x, w, lambda, |n| mu - n as f64, |n| lambda + mu + n as f64))
}

/// Matrix of `dX` in the `g_n` basis of `D⁻_{2−λ} ⊕ D⁺_λ`.
pub fn reducible_generator_matrix(lambda: f64, x: LieElement, w: &TruncationWindow) -> Result<OperatorMatrix> {
    check_reducible(lambda, w)?;
    Ok(assemble(
        x,
        w,
        lambda,
        |n| match n {
            n if n < 0 => c64(1.0 - lambda - n as f64, 0.0),
            0 => c64(0.0, 0.0),
            n => c64(-(n as f64), 0.0),
        },
        |n| match n {
            n if n < -1 => c64((n + 1) as f64, 0.0),
            -1 => c64(0.0, 0.0),
            n => c64(lambda + n as f64, 0.0),
        },
    ))
}

fn check_reducible(lambda: f64, w: &TruncationWindow) -> Result<()> {
    check_kind(IndexSet::Bilateral, w)?;
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(Error::ParameterRange(format!("reducible sum needs lambda in (0, 2), got {lambda}")));
    }
    Ok(())
}

/// Ordered product of segment exponentials for an arbitrary generator source.
fn path_product(
    w: &TruncationWindow,
    path: &GroupPath,
    mut gen: impl FnMut(LieElement) -> Result<OperatorMatrix>,
) -> Result<OperatorMatrix> {
    let mut cache: [Option<OperatorMatrix>; 3] = [None, None, None];
    let mut acc = OperatorMatrix::identity(*w, Basis::Monomial);
    for &(g, t) in path.segments() {
        let slot = g as usize;
        if cache[slot].is_none() {
            cache[slot] = Some(gen(g.into())?);
        }
        let x = cache[slot].as_ref().expect("cached above");
        acc = &acc * &mat_exp(&x.scale(c64(t, 0.0)))?;
    }
    Ok(acc)
}

/// `R_{λ,μ}(g)` for the group element reached along `path`.
pub fn rep_matrix(p: &RepnParams, path: &GroupPath, w: &TruncationWindow) -> Result<OperatorMatrix> {
    check_kind(p.index_set(), w)?;
    path_product(w, path, |x| generator_matrix(p, x, w))
}

/// `R#(g) = R(g*)`.
pub fn rep_matrix_sharp(p: &RepnParams, path: &GroupPath, w: &TruncationWindow) -> Result<OperatorMatrix> {
    rep_matrix(p, &star_path(path), w)
}

pub fn reducible_rep_matrix(lambda: f64, path: &GroupPath, w: &TruncationWindow) -> Result<OperatorMatrix> {
    check_reducible(lambda, w)?;
    path_product(w, path, |x| reducible_generator_matrix(lambda, x, w))
}

/// Diagonal Gram matrix `diag ‖f_n‖²`.
pub fn gram(p: &RepnParams, w: &TruncationWindow) -> Result<OperatorMatrix> {
    let seq = norm_sq_sequence(p, w)?;
    Ok(OperatorMatrix::diagonal(*w, Basis::Monomial, |n| {
        c64(seq.get(n).expect("sequence covers the window"), 0.0)
    }))
}

/// Invariant form on `D⁻_{2−λ} ⊕ D⁺_λ`: `‖g_n‖² = Γ(1+k)/Γ(2−λ+k)` with
/// `k = −1−n` for `n < 0` and `Γ(1+n)/Γ(λ+n)` for `n ≥ 0`.
pub fn reducible_gram(lambda: f64, w: &TruncationWindow) -> Result<OperatorMatrix> {
    check_reducible(lambda, w)?;
    let mut values = Vec::with_capacity(w.size());
    for n in w.indices() {
        let v = if n < 0 {
            let k = (-1 - n) as f64;
            gamma_ratio(1.0 + k, 2.0 - lambda + k)?
        } else {
            let holo = RepnParams::holomorphic(lambda)?;
            let single = TruncationWindow::unilateral(n as usize + 1, 0)?;
            norm_sq_sequence(&holo, &single)?.get(n).expect("index in window")
        };
        values.push(v);
    }
    Ok(OperatorMatrix::diagonal(*w, Basis::Monomial, |n| c64(values[w.position(n).expect("in window")], 0.0)))
}

fn gamma_ratio(top: f64, bottom: f64) -> Result<f64> {
    // Γ(top)/Γ(bottom) with both arguments shifted down towards [1, 2).
    let shift = (top.min(bottom).floor() - 1.0).max(0.0);
    let mut ratio = (complex_gamma(c64(top - shift, 0.0))? / complex_gamma(c64(bottom - shift, 0.0))?).re;
    for j in 0..shift as i64 {
        ratio *= (top - shift + j as f64) / (bottom - shift + j as f64);
    }
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::ParameterRange(format!("Gram entry Γ({top})/Γ({bottom}) is not positive")));
    }
    Ok(ratio)
}

/// `‖R* G R − G‖` on the interior of `w`.
pub fn unitarity_defect(p: &RepnParams, path: &GroupPath, w: &TruncationWindow) -> Result<f64> {
    RepModel::Standard(*p).unitarity_defect(path, w)
}

/// A concrete realisation of a representation on truncation windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum RepModel {
    /// `R_{λ,μ}` on holomorphic-type functions.
    Standard(RepnParams),
    /// The twist `R#(g) = R(g*)`; on `D⁺_λ` this is `D⁻_λ`.
    Sharp(RepnParams),
    /// `D⁻_{2−λ} ⊕ D⁺_λ` in the `g_n` basis.
    Reducible { lambda: f64 },
}

impl RepModel {
    pub fn index_set(&self) -> IndexSet {
        match self {
            RepModel::Standard(p) | RepModel::Sharp(p) => p.index_set(),
            RepModel::Reducible { .. } => IndexSet::Bilateral,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            RepModel::Standard(p) | RepModel::Sharp(p) => p.lambda(),
            RepModel::Reducible { lambda } => *lambda,
        }
    }

    /// Series tag; the sharp twist of the holomorphic series is
    /// anti-holomorphic, and the reducible coupling is reported as `r = 0`.
    pub fn series(&self) -> Result<SeriesTag> {
        match self {
            RepModel::Standard(p) => classify_series(p),
            RepModel::Sharp(p) => match classify_series(p)? {
                SeriesTag::HoloDiscrete => Ok(SeriesTag::AntiHoloDiscrete),
                other => Ok(other),
            },
            RepModel::Reducible { lambda } => Ok(SeriesTag::ReducibleSum { lambda: *lambda, r: c64(0.0, 0.0) }),
        }
    }

    /// `d R(X)` for this model.
    pub fn generator(&self, x: LieElement, w: &TruncationWindow) -> Result<OperatorMatrix> {
        match self {
            RepModel::Standard(p) => generator_matrix(p, x, w),
            RepModel::Sharp(p) => {
                // The star automorphism fixes L and negates h and M, so e and f swap.
                let (sign, y) = match x {
                    LieElement::H => (-1.0, LieElement::H),
                    LieElement::L => (1.0, LieElement::L),
                    LieElement::M => (-1.0, LieElement::M),
                    LieElement::E => (1.0, LieElement::F),
                    LieElement::F => (1.0, LieElement::E),
                };
                Ok(generator_matrix(p, y, w)?.scale(c64(sign, 0.0)))
            }
            RepModel::Reducible { lambda } => reducible_generator_matrix(*lambda, x, w),
        }
    }

    pub fn rep_matrix(&self, path: &GroupPath, w: &TruncationWindow) -> Result<OperatorMatrix> {
        match self {
            RepModel::Standard(p) => rep_matrix(p, path, w),
            RepModel::Sharp(p) => rep_matrix_sharp(p, path, w),
            RepModel::Reducible { lambda } => reducible_rep_matrix(*lambda, path, w),
        }
    }

    pub fn gram(&self, w: &TruncationWindow) -> Result<OperatorMatrix> {
        match self {
            RepModel::Standard(p) | RepModel::Sharp(p) => gram(p, w),
            RepModel::Reducible { lambda } => reducible_gram(*lambda, w),
        }
    }

    pub fn unitarity_defect(&self, path: &GroupPath, w: &TruncationWindow) -> Result<f64> {
        let r = self.rep_matrix(path, w)?;
        let g = self.gram(w)?;
        interior_norm(&(&(&r.adjoint() * &g) * &r - &g), w)
    }
}

impl fmt::Display for RepModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepModel::Standard(p) => write!(f, "{p}"),
            RepModel::Sharp(p) => write!(f, "sharp({p})"),
            RepModel::Reducible { lambda } => write!(f, "reducible lambda={lambda}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::Generator;

    fn holo(lambda: f64) -> RepnParams {
        RepnParams::holomorphic(lambda).unwrap()
    }

    fn uni(n: usize, pad: usize) -> TruncationWindow {
        TruncationWindow::unilateral(n, pad).unwrap()
    }

    fn bi(n: usize, pad: usize) -> TruncationWindow {
        TruncationWindow::bilateral(n, pad).unwrap()
    }

    #[test]
    fn generator_entries() {
        let w = uni(10, 2);
        let e = generator_matrix(&holo(2.0), LieElement::E, &w).unwrap();
        assert!(w.indices().all(|r| e.get(r, 0) == c64(0.0, 0.0)));
        let f = generator_matrix(&holo(2.0), LieElement::F, &w).unwrap();
        assert_eq!(f.get(4, 3), c64(5.0, 0.0));
        let h = generator_matrix(&holo(1.0), LieElement::H, &w).unwrap();
        assert_eq!(h.get(0, 0), c64(0.0, -1.0));
    }

    #[test]
    fn window_kind_must_match() {
        assert!(matches!(generator_matrix(&holo(1.0), LieElement::H, &bi(4, 1)), Err(Error::Mismatch(_))));
    }

    // Brackets checked entrywise against hand expansion on consecutive indices.
    fn bracket_defects(gen: impl Fn(LieElement) -> OperatorMatrix, w: &TruncationWindow) -> [f64; 3] {
        let (h, e, f) = (gen(LieElement::H), gen(LieElement::E), gen(LieElement::F));
        let i = c64(0.0, 1.0);
        [
            interior_norm(&(&h.commutator(&e) - &e.scale(2.0 * i)), w).unwrap(),
            interior_norm(&(&h.commutator(&f) + &f.scale(2.0 * i)), w).unwrap(),
            interior_norm(&(&e.commutator(&f) + &h.scale(i)), w).unwrap(),
        ]
    }

    #[test]
    fn bracket_relations() {
        let w = bi(20, 4);
        for p in [RepnParams::principal(0.3, 0.7).unwrap(), RepnParams::complementary(0.4, 0.2).unwrap()] {
            let d = bracket_defects(|x| generator_matrix(&p, x, &w).unwrap(), &w);
            assert!(d.iter().all(|v| *v < 1e-10), "{p}: {d:?}");
        }
        let d = bracket_defects(|x| reducible_generator_matrix(1.3, x, &w).unwrap(), &w);
        assert!(d.iter().all(|v| *v < 1e-10), "{d:?}");
        let wu = uni(20, 4);
        let d = bracket_defects(|x| generator_matrix(&holo(2.0), x, &wu).unwrap(), &wu);
        assert!(d.iter().all(|v| *v < 1e-10), "{d:?}");
    }

    #[test]
    fn bracket_by_hand_on_three_indices() {
        // ([e,f] + i h) f_n = ((μ−n+1)(λ+μ+n−1)... written out for n = 5.
        let (lambda, mu) = (0.4, c64(0.2, 0.0));
        let n = 5.0;
        let ef = (lambda + mu + n) * (mu - (n + 1.0));
        let fe = (mu - n) * (lambda + mu + (n - 1.0));
        let expected = ef - fe;
        assert!((expected - c64(-(2.0 * n + lambda), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_is_diagonal_and_exact() {
        let w = uni(16, 4);
        let p = holo(2.0);
        let r = rep_matrix(&p, &GroupPath::single(Generator::H, 0.3).unwrap(), &w).unwrap();
        for row in w.indices() {
            for col in w.indices() {
                let want = if row == col {
                    ComplexScalar::from_polar(1.0, -(2.0 * col as f64 + 2.0) * 0.3)
                } else {
                    c64(0.0, 0.0)
                };
                assert!((r.get(row, col) - want).norm() < 1e-15);
            }
        }
        assert_eq!(rep_matrix(&p, &GroupPath::empty(), &w).unwrap(), OperatorMatrix::identity(w, Basis::Monomial));
    }

    #[test]
    fn reducible_entries() {
        let w = bi(8, 2);
        let f = reducible_generator_matrix(1.1, LieElement::F, &w).unwrap();
        assert!(w.indices().all(|r| f.get(r, -1) == c64(0.0, 0.0)));
        let e = reducible_generator_matrix(1.3, LieElement::E, &w).unwrap();
        assert!((e.get(-3, -2) - c64(1.7, 0.0)).norm() < 1e-15);
        assert!(reducible_generator_matrix(2.5, LieElement::E, &w).is_err());
    }

    #[test]
    fn reducible_at_one_matches_r10() {
        let w = bi(10, 2);
        let r10 = RepnParams::new(IndexSet::Bilateral, 1.0, c64(0.0, 0.0)).unwrap();
        for x in [LieElement::E, LieElement::F] {
            let a = reducible_generator_matrix(1.0, x, &w).unwrap();
            let b = generator_matrix(&r10, x, &w).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gram_examples() {
        let w = uni(8, 2);
        let g = gram(&holo(2.0), &w).unwrap();
        assert!((g.get(3, 3).re - 0.25).abs() < 1e-14);
        let g1 = gram(&holo(1.0), &w).unwrap();
        assert_eq!(g1, OperatorMatrix::identity(w, Basis::Monomial));
        let wb = bi(8, 2);
        assert_eq!(gram(&RepnParams::principal(0.3, 0.7).unwrap(), &wb).unwrap(), OperatorMatrix::identity(wb, Basis::Monomial));
    }

    #[test]
    fn sharp_paths() {
        let w = uni(12, 3);
        let p = holo(2.0);
        let l = GroupPath::single(Generator::L, 0.2).unwrap();
        assert_eq!(rep_matrix_sharp(&p, &l, &w).unwrap(), rep_matrix(&p, &l, &w).unwrap());
        let h = GroupPath::single(Generator::H, 0.2).unwrap();
        let hm = GroupPath::single(Generator::H, -0.2).unwrap();
        assert_eq!(rep_matrix_sharp(&p, &h, &w).unwrap(), rep_matrix(&p, &hm, &w).unwrap());
        assert_eq!(
            rep_matrix_sharp(&p, &GroupPath::empty(), &w).unwrap(),
            OperatorMatrix::identity(w, Basis::Monomial)
        );
    }

    #[test]
    fn sharp_generator_matches_sharp_path() {
        let w = uni(12, 3);
        let model = RepModel::Sharp(holo(1.5));
        for g in Generator::ALL {
            let path = GroupPath::single(g, 0.1).unwrap();
            let via_gen = mat_exp(&model.generator(g.into(), &w).unwrap().scale(c64(0.1, 0.0))).unwrap();
            assert!(model.rep_matrix(&path, &w).unwrap().max_abs_diff(&via_gen) < 1e-13);
        }
    }

    #[test]
    fn unitarity_examples() {
        let w = uni(64, 16);
        let h = GroupPath::single(Generator::H, 0.3).unwrap();
        assert!(unitarity_defect(&holo(2.0), &h, &w).unwrap() < 1e-14);
        let l = GroupPath::single(Generator::L, 0.1).unwrap();
        assert!(unitarity_defect(&holo(2.0), &l, &w).unwrap() < 1e-8);
    }

    #[test]
    fn reducible_gram_makes_generators_skew() {
        // X* G + G X vanishes on the interior for the real generators.
        let w = bi(16, 3);
        let model = RepModel::Reducible { lambda: 0.7 };
        let g = model.gram(&w).unwrap();
        for x in [LieElement::H, LieElement::L, LieElement::M] {
            let d = model.generator(x, &w).unwrap();
            let skew = &(&d.adjoint() * &g) + &(&g * &d);
            assert!(interior_norm(&skew, &w).unwrap() < 1e-12, "{x}");
        }
    }
}
