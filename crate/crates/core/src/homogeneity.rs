//! Möbius functional calculus on matrices and defect certificates for the
//! homogeneity relation `φ_g(T) = R(g)⁻¹ T R(g)` and its infinitesimal forms.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::mobius::{Generator, GroupPath, MobiusElement};
use crate::numkernel::{c64, interior_norm, solve, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};
use crate::repn::{LieElement, RepModel};
use crate::shifts::{reducible_shift, ReducibleShiftSpec};

pub const HOMOGENEITY_TOL: f64 = 1e-6;
pub const REDUCIBLE_LAMBDA_TOL: f64 = 1e-12;
pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const FD_STEP_RANGE: (f64, f64) = (1e-6, 1e-2);

/// One named numerical certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: Map<String, Value>,
}

impl DefectReport {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value <= tolerance, context: Map::new() }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.value <= tolerance;
        self
    }

    pub fn with_context(mut self, key: &str, value: impl Serialize) -> Self {
        self.context.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn with_window(self, w: &TruncationWindow) -> Self {
        self.with_context("index_set", w.kind()).with_context("N", w.n()).with_context("padding", w.padding())
    }
}

/// `φ(T) = α(I − β̄T)⁻¹(T − βI)`.
pub fn mobius_of_operator(phi: &MobiusElement, t: &OperatorMatrix) -> Result<OperatorMatrix> {
    let ident = OperatorMatrix::identity(*t.window(), t.basis());
    let (alpha, beta) = (phi.alpha(), phi.beta());
    let resolvent = &ident - &t.scale(beta.conj());
    let numerator = t - &ident.scale(beta);
    Ok(solve(&resolvent, &numerator)?.x.scale(alpha))
}

/// `R⁻¹ T R` by a linear solve.
pub fn conjugate_inverse_first(t: &OperatorMatrix, r: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(solve(r, &(t * r))?.x)
}

/// `‖φ(T) − R⁻¹TR‖` on the interior of `w`.
pub fn homogeneity_defect(
    t: &OperatorMatrix,
    r: &OperatorMatrix,
    phi: &MobiusElement,
    w: &TruncationWindow,
) -> Result<DefectReport> {
    t.ensure_compatible(r)?;
    let lhs = mobius_of_operator(phi, t)?;
    let rhs = conjugate_inverse_first(t, r)?;
    let value = interior_norm(&(&lhs - &rhs), w)?;
    Ok(DefectReport::new("homogeneity", value, HOMOGENEITY_TOL).with_window(w))
}

/// `‖R·φ(T) − T·R‖` on the interior of `w`.
///
/// Equivalent to the homogeneity relation in infinite dimensions, but
/// avoids inverting the truncated `R`, whose inverse carries the boundary
/// error of the truncation into the interior.
pub fn intertwining_defect(
    t: &OperatorMatrix,
    r: &OperatorMatrix,
    phi: &MobiusElement,
    w: &TruncationWindow,
) -> Result<DefectReport> {
    t.ensure_compatible(r)?;
    let lhs = r * &mobius_of_operator(phi, t)?;
    let value = interior_norm(&(&lhs - &(t * r)), w)?;
    Ok(DefectReport::new("intertwining", value, HOMOGENEITY_TOL).with_window(w))
}

/// Both routes to the derivative of `κ(exp sX)T = R T R⁻¹` at `s = 0`.
#[derive(Debug, Clone)]
pub struct KappaDerivative {
    pub finite_difference: OperatorMatrix,
    pub commutator: OperatorMatrix,
    /// Interior norm of the difference between the two routes.
    pub route_gap: f64,
}

fn kappa_real(t: &OperatorMatrix, g: Generator, model: &RepModel, w: &TruncationWindow, s: f64) -> Result<OperatorMatrix> {
    let path = GroupPath::single(g, s)?;
    let r = model.rep_matrix(&path, w)?;
    let r_inv = model.rep_matrix(&path.inverse(), w)?;
    Ok(&(&r * t) * &r_inv)
}

fn central_difference(
    t: &OperatorMatrix,
    g: Generator,
    model: &RepModel,
    w: &TruncationWindow,
    step: f64,
) -> Result<OperatorMatrix> {
    let plus = kappa_real(t, g, model, w, step)?;
    let minus = kappa_real(t, g, model, w, -step)?;
    Ok((&plus - &minus).scale(c64(0.5 / step, 0.0)))
}

/// `κ(X)T` by central differences along the flow and by `[dR(X), T]`.
///
/// For `e` and `f` the difference quotients of `L` and `M` are combined as
/// `½(L ∓ iM)`.
pub fn kappa_flow_derivative(
    t: &OperatorMatrix,
    x: LieElement,
    model: &RepModel,
    w: &TruncationWindow,
    step: f64,
) -> Result<KappaDerivative> {
    if !(step >= FD_STEP_RANGE.0 && step <= FD_STEP_RANGE.1) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {step} outside [{}, {}]",
            FD_STEP_RANGE.0, FD_STEP_RANGE.1
        )));
    }
    let finite_difference = match x {
        LieElement::H => central_difference(t, Generator::H, model, w, step)?,
        LieElement::L => central_difference(t, Generator::L, model, w, step)?,
        LieElement::M => central_difference(t, Generator::M, model, w, step)?,
        LieElement::E | LieElement::F => {
            let dl = central_difference(t, Generator::L, model, w, step)?;
            let dm = central_difference(t, Generator::M, model, w, step)?;
            let sign = if x == LieElement::E { -1.0 } else { 1.0 };
            (&dl + &dm.scale(c64(0.0, sign))).scale(c64(0.5, 0.0))
        }
    };
    let commutator = model.generator(x, w)?.commutator(t);
    let route_gap = interior_norm(&(&finite_difference - &commutator), w)?;
    Ok(KappaDerivative { finite_difference, commutator, route_gap })
}

/// The value `κ(X)T` must take for a homogeneous shift: `T² − I`,
/// `−i(T² + I)`, `−I`, `T²` for `L, M, e, f`.
pub fn expected_kappa(t: &OperatorMatrix, x: LieElement) -> Option<OperatorMatrix> {
    let ident = OperatorMatrix::identity(*t.window(), t.basis());
    let t2 = t * t;
    match x {
        LieElement::L => Some(&t2 - &ident),
        LieElement::M => Some((&t2 + &ident).scale(c64(0.0, -1.0))),
        LieElement::E => Some(-&ident),
        LieElement::F => Some(t2),
        LieElement::H => None,
    }
}

/// `|([dR(f), T] − T²)(g₁, g₋₁)|` for the reducible shift, which is `|r|·|λ − 1|`.
pub fn reducible_lambda_check(lambda: f64, r: ComplexScalar, w: &TruncationWindow) -> Result<DefectReport> {
    if w.kind() != IndexSet::Bilateral || w.n() < 4 {
        return Err(Error::InvalidWindow("reducible check needs a bilateral window with N >= 4".into()));
    }
    let t = reducible_shift(&ReducibleShiftSpec::new(lambda, r)?, w)?;
    let model = RepModel::Reducible { lambda };
    let d = &model.generator(LieElement::F, w)?.commutator(&t) - &(&t * &t);
    let value = d.get(1, -1).norm();
    Ok(DefectReport::new("reducible-lambda", value, REDUCIBLE_LAMBDA_TOL)
        .with_window(w)
        .with_context("lambda", lambda)
        .with_context("r", r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::{path_to_mobius, GroupPath};
    use crate::numkernel::{interior_max_abs, mat_exp, Basis};
    use crate::repn::RepnParams;
    use crate::shifts::{canonical_shift, ShiftKind};

    fn holo2() -> (RepnParams, TruncationWindow, OperatorMatrix) {
        let p = RepnParams::holomorphic(2.0).unwrap();
        let w = TruncationWindow::unilateral(64, 16).unwrap();
        let t = canonical_shift(ShiftKind::T1, &p, &w).unwrap();
        (p, w, t)
    }

    #[test]
    fn identity_and_rotation_calculus() {
        let (_, w, t) = holo2();
        assert_eq!(mobius_of_operator(&MobiusElement::identity(), &t).unwrap(), t);
        let a = ComplexScalar::from_polar(1.0, 0.4);
        let rot = mobius_of_operator(&MobiusElement::rotation(a).unwrap(), &t).unwrap();
        assert!(rot.max_abs_diff(&t.scale(a)) < 1e-15);
        let _ = w;
    }

    #[test]
    fn circulant_eigenvalue_oracle() {
        // C e_k = e_{k+1} cyclically has eigenvectors v_j = (ω^{-jk})_k with eigenvalue ω^j.
        let w = TruncationWindow::bilateral(7, 0).unwrap();
        let d = w.size();
        let mut c = OperatorMatrix::zeros(w, Basis::Monomial);
        for n in w.indices() {
            let next = if n == w.last() { w.first() } else { n + 1 };
            c.set(next, n, c64(1.0, 0.0));
        }
        let phi = MobiusElement::new(ComplexScalar::from_polar(1.0, 0.7), c64(0.2, -0.1)).unwrap();
        let fc = mobius_of_operator(&phi, &c).unwrap();
        for j in 0..d {
            let omega = ComplexScalar::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / d as f64);
            let v: Vec<_> = (0..d).map(|k| omega.powi(-(k as i32))).collect();
            let want = crate::mobius::apply(&phi, omega);
            for r in 0..d {
                let got: ComplexScalar = (0..d).map(|k| fc.data()[(r, k)] * v[k]).sum();
                assert!((got - want * v[r]).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn empty_path_has_zero_defect() {
        let (p, w, t) = holo2();
        let r = crate::repn::rep_matrix(&p, &GroupPath::empty(), &w).unwrap();
        let rep = homogeneity_defect(&t, &r, &MobiusElement::identity(), &w).unwrap();
        assert_eq!(rep.value, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn t1_homogeneity_converges_in_padding() {
        // Measured: about 2e-5 at padding 16, below 1e-9 at padding 24.
        let p = RepnParams::holomorphic(2.0).unwrap();
        let path = GroupPath::single(Generator::L, 0.1).unwrap();
        let phi = path_to_mobius(&path).unwrap();
        let mut values = Vec::new();
        for pad in [16, 24] {
            let w = TruncationWindow::unilateral(64, pad).unwrap();
            let t = canonical_shift(ShiftKind::T1, &p, &w).unwrap();
            let r = crate::repn::rep_matrix(&p, &path, &w).unwrap();
            values.push(homogeneity_defect(&t, &r, &phi, &w).unwrap().value);
        }
        assert!(values[0] < 1e-4, "{values:?}");
        assert!(values[1] < 1e-9, "{values:?}");
        let w = TruncationWindow::unilateral(64, 16).unwrap();
        let t = canonical_shift(ShiftKind::T1, &p, &w).unwrap();
        let r = crate::repn::rep_matrix(&p, &path, &w).unwrap();
        assert!(intertwining_defect(&t, &r, &phi, &w).unwrap().value < 1e-10);
    }

    #[test]
    fn scaled_shift_is_not_homogeneous() {
        let p = RepnParams::principal(0.3, 0.7).unwrap();
        let w = TruncationWindow::bilateral(64, 16).unwrap();
        let t = canonical_shift(ShiftKind::T2, &p, &w).unwrap().scale(c64(2.0, 0.0));
        let path = GroupPath::single(Generator::L, 0.1).unwrap();
        let r = crate::repn::rep_matrix(&p, &path, &w).unwrap();
        let rep = homogeneity_defect(&t, &r, &path_to_mobius(&path).unwrap(), &w).unwrap();
        assert!(rep.value > 1e-2 && !rep.pass);
    }

    #[test]
    fn infinitesimal_relations_for_t1() {
        let (p, w, t) = holo2();
        let model = RepModel::Standard(p);
        for x in [LieElement::L, LieElement::M, LieElement::E, LieElement::F] {
            let k = kappa_flow_derivative(&t, x, &model, &w, DEFAULT_FD_STEP).unwrap();
            let want = expected_kappa(&t, x).unwrap();
            assert!(interior_norm(&(&k.finite_difference - &want), &w).unwrap() < 1e-6, "{x}");
            assert!(interior_norm(&(&k.commutator - &want), &w).unwrap() < 1e-12, "{x}");
            assert!(k.route_gap < 1e-7, "{x}: {}", k.route_gap);
        }
        assert!(kappa_flow_derivative(&t, LieElement::L, &model, &w, 0.1).is_err());
    }

    #[test]
    fn reducible_lambda_examples() {
        let w = TruncationWindow::bilateral(8, 2).unwrap();
        let a = reducible_lambda_check(1.0, c64(0.5, 0.0), &w).unwrap();
        assert!(a.value <= 1e-12 && a.pass);
        let b = reducible_lambda_check(1.5, c64(1.0, 0.0), &w).unwrap();
        assert!((b.value - 0.5).abs() <= 1e-12 && !b.pass);
        assert_eq!(reducible_lambda_check(0.3, c64(0.0, 0.0), &w).unwrap().value, 0.0);
        let small = TruncationWindow::bilateral(3, 0).unwrap();
        assert!(reducible_lambda_check(1.0, c64(1.0, 0.0), &small).is_err());
    }

    #[test]
    fn report_pass_tracks_tolerance() {
        let r = DefectReport::new("x", 1e-7, 1e-6);
        assert!(r.pass);
        assert!(!r.clone().with_tolerance(1e-8).pass);
        let json = serde_json::to_string(&r.with_context("lambda", 2.0)).unwrap();
        assert!(json.contains("\"context\":{\"lambda\":2.0}"));
    }

    #[test]
    fn calculus_matches_exponential_flow_for_h() {
        let (p, w, t) = holo2();
        let path = GroupPath::single(Generator::H, 0.3).unwrap();
        let r = mat_exp(&crate::repn::generator_matrix(&p, LieElement::H, &w).unwrap().scale(c64(0.3, 0.0))).unwrap();
        let lhs = mobius_of_operator(&path_to_mobius(&path).unwrap(), &t).unwrap();
        let rhs = conjugate_inverse_first(&t, &r).unwrap();
        assert!(interior_max_abs(&(&lhs - &rhs), &w).unwrap() < 1e-13);
    }
}
