//! Disc automorphisms `φ_{α,β}(z) = α(z − β)/(1 − β̄z)`, flow paths that
//! stand for elements of the universal cover, and the star automorphism
//! `φ*(z) = conj(φ(conj z))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c64, ComplexScalar};

/// Largest `|t|` allowed in one flow segment.
pub const SEGMENT_TIME_CAP: f64 = 0.5;

const UNIT_TOL: f64 = 1e-12;
const RECOVERY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusElement {
    alpha: ComplexScalar,
    beta: ComplexScalar,
}

impl MobiusElement {
    pub fn new(alpha: ComplexScalar, beta: ComplexScalar) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::InvalidMobius("non-finite parameter".into()));
        }
        if (alpha.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidMobius(format!("|alpha| = {} is not 1", alpha.norm())));
        }
        if beta.norm() > 1.0 - UNIT_TOL {
            return Err(Error::InvalidMobius(format!("|beta| = {} is not inside the disc", beta.norm())));
        }
        Ok(Self { alpha, beta })
    }

    pub fn identity() -> Self {
        Self { alpha: c64(1.0, 0.0), beta: c64(0.0, 0.0) }
    }

    /// Rotation `z ↦ αz`.
    pub fn rotation(alpha: ComplexScalar) -> Result<Self> {
        Self::new(alpha, c64(0.0, 0.0))
    }

    pub fn alpha(&self) -> ComplexScalar {
        self.alpha
    }

    pub fn beta(&self) -> ComplexScalar {
        self.beta
    }

    /// Largest parameter difference against `other`.
    pub fn distance(&self, other: &MobiusElement) -> f64 {
        (self.alpha - other.alpha).norm().max((self.beta - other.beta).norm())
    }
}

impl fmt::Display for MobiusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi[alpha={}, beta={}]", self.alpha, self.beta)
    }
}

pub fn apply(phi: &MobiusElement, z: ComplexScalar) -> ComplexScalar {
    phi.alpha * (z - phi.beta) / (1.0 - phi.beta.conj() * z)
}

/// `φ′(z) = α(1 − |β|²)/(1 − β̄z)²`
pub fn derivative(phi: &MobiusElement, z: ComplexScalar) -> ComplexScalar {
    let d = 1.0 - phi.beta.conj() * z;
    phi.alpha * (1.0 - phi.beta.norm_sqr()) / (d * d)
}

/// Principal-branch `log φ′(z) = log α + log(1 − |β|²) − 2 log(1 − β̄z)`.
///
/// For `|z| ≤ 1` the factor `1 − β̄z` lies in the right half-plane, so the
/// branch is continuous in `z`; the only ambiguity is in `log α`.
pub fn log_derivative(phi: &MobiusElement, z: ComplexScalar) -> ComplexScalar {
    phi.alpha.ln() + (1.0 - phi.beta.norm_sqr()).ln() - 2.0 * (1.0 - phi.beta.conj() * z).ln()
}

/// The element `z ↦ phi(psi(z))`.
///
/// `β` is the preimage of 0 under the composite and `α` is read off the
/// image of one further point.
pub fn compose(phi: &MobiusElement, psi: &MobiusElement) -> Result<MobiusElement> {
    let beta = apply(&inverse(psi), apply(&inverse(phi), c64(0.0, 0.0)));
    let probe = if beta.norm() > 1e-3 { -beta / beta.norm() * 0.5 } else { c64(0.5, 0.0) };
    let image = apply(phi, apply(psi, probe));
    let alpha = image * (1.0 - beta.conj() * probe) / (probe - beta);
    if (alpha.norm() - 1.0).abs() > RECOVERY_TOL {
        return Err(Error::InvalidMobius(format!(
            "composite recovery gave |alpha| = {}",
            alpha.norm()
        )));
    }
    MobiusElement::new(alpha / alpha.norm(), beta)
}

/// `φ_{α,β}⁻¹ = φ_{ᾱ, −αβ}`
pub fn inverse(phi: &MobiusElement) -> MobiusElement {
    MobiusElement { alpha: phi.alpha.conj(), beta: -phi.alpha * phi.beta }
}

/// `φ*` acts as `z ↦ conj(φ(conj z))`, which is `φ_{ᾱ, β̄}`.
pub fn star(phi: &MobiusElement) -> MobiusElement {
    MobiusElement { alpha: phi.alpha.conj(), beta: phi.beta.conj() }
}

/// The three real generators of the Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "h")]
    H,
    L,
    M,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::H, Generator::L, Generator::M];
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::H => "h",
            Generator::L => "L",
            Generator::M => "M",
        })
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "H" => Ok(Generator::H),
            "L" | "l" => Ok(Generator::L),
            "M" | "m" => Ok(Generator::M),
            other => Err(Error::PathSyntax(format!("unknown generator {other:?}"))),
        }
    }
}

/// One-parameter subgroups: `exp th = φ_{e^{2it},0}`, `exp tL = φ_{1,−tanh t}`,
/// `exp tM = φ_{1,−i tanh t}`.
pub fn flow(gen: Generator, t: f64) -> Result<MobiusElement> {
    check_time(t)?;
    Ok(match gen {
        Generator::H => MobiusElement { alpha: c64(0.0, 2.0 * t).exp(), beta: c64(0.0, 0.0) },
        Generator::L => MobiusElement { alpha: c64(1.0, 0.0), beta: c64(-t.tanh(), 0.0) },
        Generator::M => MobiusElement { alpha: c64(1.0, 0.0), beta: c64(0.0, -t.tanh()) },
    })
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t.abs() > SEGMENT_TIME_CAP {
        return Err(Error::FlowTimeCap { time: t, cap: SEGMENT_TIME_CAP });
    }
    Ok(())
}

/// Element of the universal cover, written as a product of short flows
/// `exp(t₁X₁)·exp(t₂X₂)···` starting at the identity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupPath {
    segments: Vec<(Generator, f64)>,
}

impl GroupPath {
    pub fn new(segments: Vec<(Generator, f64)>) -> Result<Self> {
        for &(_, t) in &segments {
            check_time(t)?;
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(gen: Generator, t: f64) -> Result<Self> {
        Self::new(vec![(gen, t)])
    }

    pub fn segments(&self) -> &[(Generator, f64)] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &GroupPath) -> GroupPath {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        GroupPath { segments }
    }

    /// Group inverse: segments reversed with negated times.
    pub fn inverse(&self) -> GroupPath {
        GroupPath { segments: self.segments.iter().rev().map(|&(g, t)| (g, -t)).collect() }
    }
}

impl fmt::Display for GroupPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(|(g, t)| format!("{g}:{t}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `gen:time` tokens separated by commas, e.g. `L:0.1,M:-0.05,h:0.3`.
/// The empty string is the empty path.
impl FromStr for GroupPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GroupPath::empty());
        }
        let mut segments = Vec::new();
        for token in s.split(',') {
            let (g, t) = token
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::PathSyntax(format!("token {token:?} is not gen:time")))?;
            let gen: Generator = g.trim().parse()?;
            let t: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::PathSyntax(format!("bad time in token {token:?}")))?;
            segments.push((gen, t));
        }
        GroupPath::new(segments)
    }
}

/// Covering map: `[(X₁,t₁),(X₂,t₂)] ↦ flow(X₁,t₁) ∘ flow(X₂,t₂)`.
pub fn path_to_mobius(p: &GroupPath) -> Result<MobiusElement> {
    let mut acc = MobiusElement::identity();
    for &(gen, t) in &p.segments {
        acc = compose(&acc, &flow(gen, t)?)?;
    }
    Ok(acc)
}

/// Lift of the star automorphism: `h` and `M` flows reverse, `L` is fixed.
pub fn star_path(p: &GroupPath) -> GroupPath {
    GroupPath {
        segments: p
            .segments
            .iter()
            .map(|&(g, t)| match g {
                Generator::H | Generator::M => (g, -t),
                Generator::L => (g, t),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ComplexScalar, b: ComplexScalar, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_and_zero_of_beta() {
        let z = c64(0.3, 0.1);
        assert_eq!(apply(&MobiusElement::identity(), z), z);
        let phi = MobiusElement::new(c64(1.0, 0.0), c64(0.5, 0.0)).unwrap();
        assert_eq!(apply(&phi, c64(0.5, 0.0)), c64(0.0, 0.0));
    }

    #[test]
    fn apply_agrees_with_reordered_formula() {
        let phi = MobiusElement::new(c64(0.0, 1.0), c64(0.2, 0.0)).unwrap();
        let z = c64(0.7, 0.0);
        let direct = apply(&phi, z);
        let reordered = (z - phi.beta()) * phi.alpha() * (1.0 - z * phi.beta().conj()).inv();
        assert!(close(direct, reordered, 1e-15));
    }

    #[test]
    fn validation() {
        assert!(MobiusElement::new(c64(2.0, 0.0), c64(0.0, 0.0)).is_err());
        assert!(MobiusElement::new(c64(1.0, 0.0), c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let phi = MobiusElement::new(c64(0.6, 0.8), c64(0.3, -0.2)).unwrap();
        let id = compose(&phi, &inverse(&phi)).unwrap();
        assert!(id.distance(&MobiusElement::identity()) < 1e-14);
    }

    #[test]
    fn rotations_multiply() {
        let a = c64(0.3f64.cos(), 0.3f64.sin());
        let b = c64((-1.1f64).cos(), (-1.1f64).sin());
        let ab = compose(&MobiusElement::rotation(a).unwrap(), &MobiusElement::rotation(b).unwrap()).unwrap();
        assert!(ab.distance(&MobiusElement::rotation(a * b).unwrap()) < 1e-15);
    }

    #[test]
    fn inverse_is_an_involution() {
        let phi = MobiusElement::new(c64(0.0, -1.0), c64(-0.4, 0.5)).unwrap();
        assert!(inverse(&inverse(&phi)).distance(&phi) < 1e-13);
        assert_eq!(inverse(&MobiusElement::identity()).distance(&MobiusElement::identity()), 0.0);
    }

    #[test]
    fn star_examples() {
        let phi = MobiusElement::new(c64(0.6, -0.8), c64(0.1, 0.7)).unwrap();
        assert_eq!(star(&star(&phi)), phi);
        let l = flow(Generator::L, 0.2).unwrap();
        assert!(star(&l).distance(&l) == 0.0);
        let m = flow(Generator::M, 0.2).unwrap();
        assert!(star(&m).distance(&flow(Generator::M, -0.2).unwrap()) < 1e-16);
        // pointwise definition
        for &z in &[c64(0.3, 0.4), c64(-0.9, 0.1)] {
            assert!(close(apply(&star(&phi), z), apply(&phi, z.conj()).conj(), 1e-15));
        }
    }

    #[test]
    fn flows() {
        assert_eq!(flow(Generator::H, 0.0).unwrap(), MobiusElement::identity());
        let h = flow(Generator::H, 0.3).unwrap();
        assert!(close(h.alpha(), c64(0.0, 0.6).exp(), 1e-16));
        let l = flow(Generator::L, 0.1).unwrap();
        assert!((l.beta().re + 0.099_667_994_624_955_8).abs() < 1e-15);
        assert!(matches!(flow(Generator::L, 0.6), Err(Error::FlowTimeCap { .. })));
    }

    #[test]
    fn derivative_of_rotation_is_alpha() {
        let a = c64(0.8, 0.6);
        let rot = MobiusElement::rotation(a).unwrap();
        assert_eq!(derivative(&rot, c64(0.4, -0.2)), a);
        assert_eq!(derivative(&MobiusElement::identity(), c64(0.1, 0.2)), c64(1.0, 0.0));
    }

    #[test]
    fn paths() {
        assert_eq!(path_to_mobius(&GroupPath::empty()).unwrap(), MobiusElement::identity());
        let h = path_to_mobius(&GroupPath::single(Generator::H, 0.25).unwrap()).unwrap();
        assert!(close(h.alpha(), c64(0.0, 0.5).exp(), 1e-15) && h.beta().norm() == 0.0);
        let two = GroupPath::new(vec![(Generator::L, 0.1), (Generator::L, 0.1)]).unwrap();
        let want = MobiusElement::new(c64(1.0, 0.0), c64(-(0.2f64).tanh(), 0.0)).unwrap();
        assert!(path_to_mobius(&two).unwrap().distance(&want) < 1e-15);
    }

    #[test]
    fn star_path_examples() {
        let p: GroupPath = "L:0.2".parse().unwrap();
        assert_eq!(star_path(&p), p);
        let p: GroupPath = "h:0.3".parse().unwrap();
        assert_eq!(star_path(&p), "h:-0.3".parse().unwrap());
        assert!(star_path(&GroupPath::empty()).is_empty());
    }

    #[test]
    fn path_literals() {
        let p: GroupPath = "L:0.1, M:-0.05,h:0.3".parse().unwrap();
        assert_eq!(p.segments(), &[(Generator::L, 0.1), (Generator::M, -0.05), (Generator::H, 0.3)]);
        assert_eq!(p.to_string(), "L:0.1,M:-0.05,h:0.3");
        assert!("Q:0.1".parse::<GroupPath>().is_err());
        assert!("L0.1".parse::<GroupPath>().is_err());
        assert!("L:0.9".parse::<GroupPath>().is_err());
        assert!("".parse::<GroupPath>().unwrap().is_empty());
    }
}
