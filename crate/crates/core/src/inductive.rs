//! Isotypic structure of operators under the rotation subgroup, the
//! coefficient maps `T ↦ [dR(e), T]`, `T ↦ [dR(f), T]`, the polynomial
//! identities behind the classification of inductive algebras, the
//! classifier for the `m = −1` component and the normalizer defect.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homogeneity::DefectReport;
use crate::mobius::{Generator, GroupPath};
use crate::numkernel::{c64, interior_norm, solve, Basis, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};
use crate::repn::{rep_matrix, rep_matrix_sharp, RepnParams};

pub const BRANCH_TOL: f64 = 1e-8;
pub const NORMALIZER_TOL: f64 = 1e-6;
pub const FLIP_TOL: f64 = 1e-12;

/// The `m`-th diagonal of an operator: `T f_n = a_n f_{n−m}`.
///
/// Under conjugation by the rotation `R(exp th)` this part of `T` is
/// multiplied by `e^{2imt}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotypicComponent {
    pub m: i64,
    pub window: TruncationWindow,
    /// Indexed by column `n`; `None` where `n − m` leaves the window.
    pub coeffs: Vec<Option<ComplexScalar>>,
}

impl IsotypicComponent {
    pub fn from_rule(window: TruncationWindow, m: i64, mut a: impl FnMut(i64) -> ComplexScalar) -> Self {
        let coeffs = window.indices().map(|n| window.contains(n - m).then(|| a(n))).collect();
        Self { m, window, coeffs }
    }

    pub fn get(&self, n: i64) -> Option<ComplexScalar> {
        self.window.position(n).and_then(|p| self.coeffs[p])
    }

    /// Coefficient with absent entries read as zero.
    pub fn get_or_zero(&self, n: i64) -> ComplexScalar {
        self.get(n).unwrap_or(c64(0.0, 0.0))
    }

    pub fn to_matrix(&self, basis: Basis) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.window, basis);
        for (n, a) in self.window.indices().zip(&self.coeffs) {
            if let Some(a) = a {
                out.set(n - self.m, n, *a);
            }
        }
        out
    }

    /// Largest coefficient over columns `n` with `n` and `n − m` interior.
    pub fn interior_max_abs(&self) -> f64 {
        self.window
            .indices()
            .zip(&self.coeffs)
            .filter(|(n, _)| self.window.is_interior(*n) && self.window.is_interior(n - self.m))
            .filter_map(|(_, a)| a.map(|a| a.norm()))
            .fold(0.0, f64::max)
    }
}

/// Exact extraction of the `m`-th diagonal.
pub fn isotypic_component(t: &OperatorMatrix, m: i64) -> IsotypicComponent {
    let w = *t.window();
    IsotypicComponent { m, window: w, coeffs: w.indices().map(|n| t.entry(n - m, n)).collect() }
}

/// All diagonals, from `m = −(d−1)` to `d−1`.
pub fn isotypic_decomposition(t: &OperatorMatrix) -> Vec<IsotypicComponent> {
    let d = t.size() as i64;
    (-(d - 1)..d).map(|m| isotypic_component(t, m)).collect()
}

/// Sum of components; reproduces the source of a full decomposition exactly.
pub fn reassemble(components: &[IsotypicComponent], window: TruncationWindow, basis: Basis) -> OperatorMatrix {
    let mut out = OperatorMatrix::zeros(window, basis);
    for c in components {
        for (n, a) in c.window.indices().zip(&c.coeffs) {
            if let Some(a) = a {
                let cur = out.get(n - c.m, n);
                out.set(n - c.m, n, cur + a);
            }
        }
    }
    out
}

/// Coefficients of `[dR(e), T]` (step `m+1`) and `[dR(f), T]` (step `m−1`)
/// for `T` in the `m`-th component:
///
/// * `te_n = (μ−n+m)a_n − (μ−n)a_{n−1}`
/// * `tf_n = (λ+μ+n−m)a_n − (λ+μ+n)a_{n+1}`
///
/// Terms whose coefficient is absent count as zero, which is exactly what
/// the truncated commutators produce.
pub fn te_tf_coefficients(a: &IsotypicComponent, p: &RepnParams) -> (IsotypicComponent, IsotypicComponent) {
    let (lambda, mu, m) = (p.lambda(), p.mu(), a.m);
    let w = a.window;
    let te = IsotypicComponent::from_rule(w, m + 1, |n| {
        let nf = n as f64;
        (mu - nf + m as f64) * a.get_or_zero(n) - (mu - nf) * a.get_or_zero(n - 1)
    });
    let tf = IsotypicComponent::from_rule(w, m - 1, |n| {
        let nf = n as f64;
        (lambda + mu + nf - m as f64) * a.get_or_zero(n) - (lambda + mu + nf) * a.get_or_zero(n + 1)
    });
    (te, tf)
}

/// `[T, T_e] f_n = −(μ−n)(a_{n−1} − a_n)² f_{n−1}` for diagonal `T`.
pub fn diagonal_bracket_prediction(a: &IsotypicComponent, p: &RepnParams) -> Result<IsotypicComponent> {
    if a.m != 0 {
        return Err(Error::InvalidArgument(format!("expected a diagonal component, got m = {}", a.m)));
    }
    let mu = p.mu();
    Ok(IsotypicComponent::from_rule(a.window, 1, |n| {
        let d = a.get_or_zero(n - 1) - a.get_or_zero(n);
        -(mu - n as f64) * d * d
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaVariant {
    Lemma32,
    Lemma33,
}

/// The second-difference combinations that collapse to `2m²`.
pub fn lemma_identity(lambda: f64, mu: ComplexScalar, m: i64, n: i64, which: LemmaVariant) -> Result<ComplexScalar> {
    if m == 0 {
        return Err(Error::InvalidArgument("lemma identity needs m != 0".into()));
    }
    let (m, n) = (m as f64, n as f64);
    let s = lambda + mu;
    Ok(match which {
        LemmaVariant::Lemma32 => {
            -(mu - n) * (s + n - 1.0) + 2.0 * (mu - n + m) * (s + n - m - 1.0)
                - (mu - n + 2.0 * m) * (s + n - 2.0 * m - 1.0)
        }
        LemmaVariant::Lemma33 => {
            -(s + n) * (mu - n - 1.0) + 2.0 * (s + n - m) * (mu - n + m - 1.0)
                - (s + n - 2.0 * m) * (mu - n + 2.0 * m - 1.0)
        }
    })
}

/// Which of the two families `a = b(μ−1)` (T2) and `a = −b(λ+μ)` (T3)
/// an `m = −1` coefficient sequence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AminusOneBranch {
    #[serde(rename = "T2branch")]
    T2Branch,
    #[serde(rename = "T3branch")]
    T3Branch,
    #[serde(rename = "neither")]
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AminusOneFit {
    pub a: ComplexScalar,
    pub b: ComplexScalar,
    /// Euclidean residual of the affine fit.
    pub residual: f64,
    pub branch: AminusOneBranch,
    /// Both branch conditions hold, which happens when T2 = T3.
    pub tie: bool,
}

/// Fit `a_n(μ−n−1) = a − bn` by least squares and decide the branch.
pub fn classify_a_minus1(coeffs: &[(i64, ComplexScalar)], p: &RepnParams) -> Result<AminusOneFit> {
    if p.index_set() != IndexSet::Bilateral {
        return Err(Error::InvalidArgument("the m = -1 classifier needs a bilateral representation".into()));
    }
    if coeffs.len() < 3 {
        return Err(Error::RankDeficient(format!("{} coefficients, at least 3 needed", coeffs.len())));
    }
    let (lambda, mu) = (p.lambda(), p.mu());
    let rows = coeffs.len();
    let design = DMatrix::from_fn(rows, 2, |i, j| if j == 0 { c64(1.0, 0.0) } else { c64(-(coeffs[i].0 as f64), 0.0) });
    let rhs = DVector::from_iterator(rows, coeffs.iter().map(|&(n, a)| a * (mu - n as f64 - 1.0)));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::RankDeficient("indices do not determine an affine fit".into()));
    }
    let x = svd.solve(&rhs, 1e-12 * smax).map_err(|e| Error::RankDeficient(e.to_string()))?;
    let (a, b) = (x[0], x[1]);
    let residual = (&design * &x - &rhs).norm();

    let scale = 1f64.max(a.norm()).max(b.norm());
    let fits = residual <= BRANCH_TOL * 1f64.max(rhs.norm());
    let t2 = (a + b * (1.0 - mu)).norm() <= BRANCH_TOL * scale;
    let t3 = (a + b * (lambda + mu)).norm() <= BRANCH_TOL * scale;
    let (branch, tie) = match (fits, t2, t3) {
        (false, _, _) | (true, false, false) => (AminusOneBranch::Neither, false),
        (true, true, true) => (AminusOneBranch::T2Branch, true),
        (true, true, false) => (AminusOneBranch::T2Branch, false),
        (true, false, true) => (AminusOneBranch::T3Branch, false),
    };
    Ok(AminusOneFit { a, b, residual, branch, tie })
}

/// Solutions of `te ≡ 0` (`Recurrence::E`) or `tf ≡ 0` (`Recurrence::F`)
/// in the `m`-th component, fixed by the value at `n = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recurrence {
    E,
    F,
}

pub fn kernel_sequence(
    which: Recurrence,
    a0: ComplexScalar,
    m: i64,
    p: &RepnParams,
    w: &TruncationWindow,
) -> Result<IsotypicComponent> {
    if !w.contains(0) || !w.contains(-m) {
        return Err(Error::IndexDomain { index: 0, what: format!("column 0 of the m = {m} component") });
    }
    let (lambda, mu, mf) = (p.lambda(), p.mu(), m as f64);
    // (upper, lower) with upper·a_n = lower·a_{n−1}.
    let step = |n: i64| -> (ComplexScalar, ComplexScalar) {
        let nf = n as f64;
        match which {
            Recurrence::E => (mu - nf + mf, mu - nf),
            // (λ+μ+(n−1)−m)a_{n−1} = (λ+μ+n−1)a_n
            Recurrence::F => (lambda + mu + nf - 1.0, lambda + mu + nf - 1.0 - mf),
        }
    };
    let pole = |n: i64| Error::Pole(format!("recurrence divides by zero at n = {n}"));
    let mut out = IsotypicComponent::from_rule(*w, m, |_| c64(0.0, 0.0));
    let valid = |n: i64| w.contains(n) && w.contains(n - m);
    let set = |out: &mut IsotypicComponent, n: i64, v: ComplexScalar| {
        let pos = w.position(n).expect("valid column");
        out.coeffs[pos] = Some(v);
    };
    set(&mut out, 0, a0);
    let mut prev = a0;
    let mut n = 1;
    while valid(n) {
        let (upper, lower) = step(n);
        if upper.norm() == 0.0 {
            return Err(pole(n));
        }
        prev = lower * prev / upper;
        set(&mut out, n, prev);
        n += 1;
    }
    let mut next = a0;
    let mut n = 0;
    while valid(n - 1) {
        let (upper, lower) = step(n);
        if lower.norm() == 0.0 {
            return Err(pole(n - 1));
        }
        next = upper * next / lower;
        set(&mut out, n - 1, next);
        n -= 1;
    }
    Ok(out)
}

/// Detect the single nonzero diagonal of a weighted shift.
pub fn shift_step(t: &OperatorMatrix) -> Result<i64> {
    let mut found = None;
    for comp in isotypic_decomposition(t) {
        if comp.coeffs.iter().flatten().any(|a| a.norm() > 0.0) {
            if found.is_some() {
                return Err(Error::InvalidArgument("operator is not a weighted shift".into()));
            }
            found = Some(comp.m);
        }
    }
    found.ok_or_else(|| Error::InvalidArgument("zero operator has no step".into()))
}

/// Coefficients of `T^k` for a shift with coefficient rule `a` and step `s`.
fn shift_power(a: &IsotypicComponent, k: i64) -> IsotypicComponent {
    let s = a.m;
    IsotypicComponent::from_rule(a.window, k * s, |n| {
        (0..k).map(|j| a.get_or_zero(n - j * s)).product()
    })
}

/// How far `S = R T R⁻¹` is from the algebra generated by `T`.
///
/// The value is `‖[S, T]‖` on the interior plus, for every diagonal of `S`,
/// the residual of its best scalar fit against the matching power of `T`
/// (the identity for `m = 0`; powers of the Gram adjoint `G⁻¹T*G` on the
/// opposite side for unilateral windows, zero for bilateral ones).
pub fn normalizer_defect(
    t: &OperatorMatrix,
    r: &OperatorMatrix,
    g: &OperatorMatrix,
    w: &TruncationWindow,
) -> Result<DefectReport> {
    t.ensure_compatible(r)?;
    t.ensure_compatible(g)?;
    let step = shift_step(t)?;
    if step == 0 {
        return Err(Error::InvalidArgument("normalizer defect needs a step shift, got a diagonal".into()));
    }
    let ident = OperatorMatrix::identity(*t.window(), t.basis());
    let r_inv = solve(r, &ident)?.x;
    let s_mat = &(r * t) * &r_inv;
    let commutator = interior_norm(&s_mat.commutator(t), w)?;

    let a = isotypic_component(t, step);
    let adjoint = if t.window().kind() == IndexSet::Unilateral {
        Some(IsotypicComponent::from_rule(*t.window(), -step, |c| {
            let n = c + step;
            let gc = g.get(c, c);
            let gn = g.get(n, n);
            a.get_or_zero(n).conj() * gc / gn
        }))
    } else {
        None
    };

    let d = t.size() as i64;
    let mut residual_sum = 0.0;
    for m in -(d - 1)..d {
        let comp = isotypic_component(&s_mat, m);
        let target = if m == 0 {
            Some(IsotypicComponent::from_rule(*t.window(), 0, |_| c64(1.0, 0.0)))
        } else if m % step == 0 && m / step > 0 {
            Some(shift_power(&a, m / step))
        } else if m % step == 0 {
            adjoint.as_ref().map(|b| shift_power(b, -m / step))
        } else {
            None
        };
        residual_sum += scalar_fit_residual(&comp, target.as_ref());
    }
    Ok(DefectReport::new("normalizer", commutator + residual_sum, NORMALIZER_TOL)
        .with_window(w)
        .with_context("commutator", commutator)
        .with_context("component_residual", residual_sum))
}

fn scalar_fit_residual(c: &IsotypicComponent, target: Option<&IsotypicComponent>) -> f64 {
    let w = c.window;
    let cols: Vec<i64> = w.indices().filter(|&n| w.is_interior(n) && w.is_interior(n - c.m)).collect();
    let cv: Vec<ComplexScalar> = cols.iter().map(|&n| c.get_or_zero(n)).collect();
    let bv: Vec<ComplexScalar> = match target {
        Some(b) => cols.iter().map(|&n| b.get_or_zero(n)).collect(),
        None => vec![c64(0.0, 0.0); cols.len()],
    };
    let bb: f64 = bv.iter().map(|z| z.norm_sqr()).sum();
    let coef = if bb > 0.0 {
        bv.iter().zip(&cv).map(|(b, c)| b.conj() * c).sum::<ComplexScalar>() / bb
    } else {
        c64(0.0, 0.0)
    };
    cv.iter().zip(&bv).map(|(c, b)| (c - coef * b).norm_sqr()).sum::<f64>().sqrt()
}

/// Outcome of comparing rotation characters under `R` and `R#`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipRecord {
    pub m: i64,
    pub t: f64,
    /// Deviation of the `m`-th component under `R` from `e^{2imt}` times itself.
    pub plain_deviation: f64,
    /// Deviation of the `m`-th component under `R#` from `e^{−2imt}` times itself.
    pub sharp_deviation: f64,
    pub pass: bool,
}

/// Under the sharp twist the `m`-th diagonal transforms with the character
/// of the `−m`-th: `A_m` and `A_{−m}` are interchanged.
pub fn sharp_isotypic_flip(t_op: &OperatorMatrix, m: i64, p: &RepnParams, t: f64) -> Result<FlipRecord> {
    let w = *t_op.window();
    let path = GroupPath::single(Generator::H, t)?;
    let plain = &(&rep_matrix(p, &path, &w)? * t_op) * &rep_matrix(p, &path.inverse(), &w)?;
    let sharp = &(&rep_matrix_sharp(p, &path, &w)? * t_op) * &rep_matrix_sharp(p, &path.inverse(), &w)?;
    let base = isotypic_component(t_op, m);
    let deviation = |img: &OperatorMatrix, chi: ComplexScalar| {
        let got = isotypic_component(img, m);
        got.coeffs
            .iter()
            .zip(&base.coeffs)
            .filter_map(|(g, b)| Some((g.as_ref()?, b.as_ref()?)))
            .map(|(g, b)| (g - chi * b).norm())
            .fold(0.0, f64::max)
    };
    let plain_deviation = deviation(&plain, ComplexScalar::from_polar(1.0, 2.0 * m as f64 * t));
    let sharp_deviation = deviation(&sharp, ComplexScalar::from_polar(1.0, -2.0 * m as f64 * t));
    Ok(FlipRecord {
        m,
        t,
        plain_deviation,
        sharp_deviation,
        pass: plain_deviation <= FLIP_TOL && sharp_deviation <= FLIP_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repn::{generator_matrix, gram, LieElement};
    use crate::shifts::{canonical_shift, ShiftKind};

    fn bi(n: usize, pad: usize) -> TruncationWindow {
        TruncationWindow::bilateral(n, pad).unwrap()
    }

    #[test]
    fn identity_and_t1_components() {
        let w = TruncationWindow::unilateral(8, 1).unwrap();
        let ident = OperatorMatrix::identity(w, Basis::Monomial);
        for c in isotypic_decomposition(&ident) {
            let nonzero = c.coeffs.iter().flatten().any(|a| a.norm() > 0.0);
            assert_eq!(nonzero, c.m == 0);
        }
        let t1 = canonical_shift(ShiftKind::T1, &RepnParams::holomorphic(2.0).unwrap(), &w).unwrap();
        assert_eq!(isotypic_component(&t1, -1).to_matrix(Basis::Monomial), t1);
        assert_eq!(shift_step(&t1).unwrap(), -1);
    }

    #[test]
    fn te_tf_match_commutators() {
        let w = bi(12, 2);
        let p = RepnParams::complementary(0.4, 0.2).unwrap();
        let e = generator_matrix(&p, LieElement::E, &w).unwrap();
        let f = generator_matrix(&p, LieElement::F, &w).unwrap();
        for kind in [ShiftKind::T2, ShiftKind::T3] {
            let t = canonical_shift(kind, &p, &w).unwrap();
            let (te, tf) = te_tf_coefficients(&isotypic_component(&t, -1), &p);
            assert!(te.to_matrix(Basis::Monomial).max_abs_diff(&e.commutator(&t)) < 1e-12);
            assert!(tf.to_matrix(Basis::Monomial).max_abs_diff(&f.commutator(&t)) < 1e-12);
        }
    }

    #[test]
    fn te_examples() {
        let w = bi(10, 2);
        let p = RepnParams::principal(0.3, 0.7).unwrap();
        let constant = IsotypicComponent::from_rule(w, 0, |_| c64(2.5, -1.0));
        let (te, tf) = te_tf_coefficients(&constant, &p);
        for n in w.interior_indices() {
            assert!(te.get_or_zero(n).norm() < 1e-14 && tf.get_or_zero(n).norm() < 1e-14);
        }
        let t3 = isotypic_component(&canonical_shift(ShiftKind::T3, &p, &w).unwrap(), -1);
        let (te, _) = te_tf_coefficients(&t3, &p);
        for n in w.interior_indices() {
            assert!((te.get(n).unwrap() + 1.0).norm() < 1e-12);
        }
        let wu = TruncationWindow::unilateral(10, 2).unwrap();
        let h = RepnParams::holomorphic(1.5).unwrap();
        let t1 = isotypic_component(&canonical_shift(ShiftKind::T1, &h, &wu).unwrap(), -1);
        let (te, _) = te_tf_coefficients(&t1, &h);
        for n in wu.interior_indices() {
            assert!((te.get(n).unwrap() + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn lemma_examples() {
        let v = lemma_identity(0.4, c64(0.2, 0.0), 3, -7, LemmaVariant::Lemma32).unwrap();
        assert!((v - 18.0).norm() < 1e-12);
        let v = lemma_identity(0.3, c64(0.35, 0.7), -2, 11, LemmaVariant::Lemma33).unwrap();
        assert!((v - 8.0).norm() < 1e-12);
        let v = lemma_identity(1.7, c64(-0.3, 2.0), 1, 40, LemmaVariant::Lemma32).unwrap();
        assert!((v - 2.0).norm() < 1e-12);
        assert!(lemma_identity(1.0, c64(0.0, 0.0), 0, 1, LemmaVariant::Lemma33).is_err());
    }

    #[test]
    fn classifier_examples() {
        let p = RepnParams::principal(0.3, 0.7).unwrap();
        let mu = p.mu();
        let ones: Vec<_> = (-20..=20).map(|n| (n, c64(1.0, 0.0))).collect();
        let fit = classify_a_minus1(&ones, &p).unwrap();
        assert_eq!(fit.branch, AminusOneBranch::T2Branch);
        assert!((fit.a - (mu - 1.0)).norm() < 1e-10 && (fit.b - 1.0).norm() < 1e-10);

        let t3: Vec<_> = (-20..=20).map(|n| (n, (0.3 + mu + n as f64) / (n as f64 + 1.0 - mu))).collect();
        let fit = classify_a_minus1(&t3, &p).unwrap();
        assert_eq!(fit.branch, AminusOneBranch::T3Branch);
        assert!((fit.a + (0.3 + mu)).norm() < 1e-10 && fit.residual < 1e-10);

        let quad: Vec<_> = (-20..=20).map(|n| (n, c64((n * n) as f64, 0.0))).collect();
        let fit = classify_a_minus1(&quad, &p).unwrap();
        assert_eq!(fit.branch, AminusOneBranch::Neither);
        assert!(fit.residual > 1e-3);

        assert!(matches!(classify_a_minus1(&ones[..2], &p), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn classifier_tie_at_the_symmetric_point() {
        let p = RepnParams::new(IndexSet::Bilateral, 0.4, c64(0.3, 0.0)).unwrap();
        let ones: Vec<_> = (-10..=10).map(|n| (n, c64(1.0, 0.0))).collect();
        let fit = classify_a_minus1(&ones, &p).unwrap();
        assert_eq!(fit.branch, AminusOneBranch::T2Branch);
        assert!(fit.tie);
    }

    #[test]
    fn kernel_sequences() {
        let w = bi(12, 2);
        let p = RepnParams::complementary(0.4, 0.2).unwrap();
        for (which, m) in [(Recurrence::E, 1), (Recurrence::E, -2), (Recurrence::F, -1), (Recurrence::F, 3)] {
            let a = kernel_sequence(which, c64(1.3, -0.4), m, &p, &w).unwrap();
            let (te, tf) = te_tf_coefficients(&a, &p);
            let image = if which == Recurrence::E { te } else { tf };
            for n in w.interior_indices() {
                if w.is_interior(n - image.m) {
                    assert!(image.get_or_zero(n).norm() < 1e-10, "{which:?} m={m} n={n}");
                }
            }
            let zero = kernel_sequence(which, c64(0.0, 0.0), m, &p, &w).unwrap();
            assert!(zero.coeffs.iter().flatten().all(|a| a.norm() == 0.0));
        }
    }

    #[test]
    fn t2_under_rotation_is_in_its_algebra() {
        let w = bi(32, 8);
        let p = RepnParams::principal(0.3, 0.7).unwrap();
        let t = canonical_shift(ShiftKind::T2, &p, &w).unwrap();
        let r = rep_matrix(&p, &GroupPath::single(Generator::H, 0.3).unwrap(), &w).unwrap();
        let rep = normalizer_defect(&t, &r, &gram(&p, &w).unwrap(), &w).unwrap();
        assert!(rep.value < 1e-12, "{}", rep.value);
    }

    #[test]
    fn t1_normalizer_converges_in_padding() {
        // Measured: about 9e-5 at padding 16, about 3e-14 at padding 24.
        let p = RepnParams::holomorphic(2.0).unwrap();
        let path = GroupPath::single(Generator::L, 0.1).unwrap();
        let mut values = Vec::new();
        for pad in [16, 24] {
            let w = TruncationWindow::unilateral(64, pad).unwrap();
            let t = canonical_shift(ShiftKind::T1, &p, &w).unwrap();
            let r = rep_matrix(&p, &path, &w).unwrap();
            values.push(normalizer_defect(&t, &r, &gram(&p, &w).unwrap(), &w).unwrap().value);
        }
        assert!(values[0] < 1e-3, "{values:?}");
        assert!(values[1] < 1e-10, "{values:?}");
    }

    #[test]
    fn non_homogeneous_shift_escapes_its_algebra() {
        let p = RepnParams::holomorphic(2.0).unwrap();
        let w = TruncationWindow::unilateral(64, 16).unwrap();
        let t = IsotypicComponent::from_rule(w, -1, |n| c64(1.0 / (n as f64 + 2.0), 0.0)).to_matrix(Basis::Monomial);
        let r = rep_matrix(&p, &GroupPath::single(Generator::L, 0.1).unwrap(), &w).unwrap();
        let rep = normalizer_defect(&t, &r, &gram(&p, &w).unwrap(), &w).unwrap();
        assert!(rep.value > 1e-2);
    }

    #[test]
    fn flip_examples() {
        let p = RepnParams::holomorphic(1.5).unwrap();
        let w = TruncationWindow::unilateral(12, 2).unwrap();
        let ts = canonical_shift(ShiftKind::T1Star, &p, &w).unwrap();
        let rec = sharp_isotypic_flip(&ts, 1, &p, 0.2).unwrap();
        assert!(rec.pass, "{rec:?}");
        let ident = OperatorMatrix::identity(w, Basis::Monomial);
        assert!(sharp_isotypic_flip(&ident, 0, &p, 0.2).unwrap().pass);
    }
}
