use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c64, ComplexScalar, IndexSet};

/// Tolerance on the equality constraints of the taxonomy.
pub const SERIES_TOL: f64 = 1e-12;

/// `(I, λ, μ)` for `R_{λ,μ}`; `μ = 0` whenever `I = Z⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepnParams {
    index_set: IndexSet,
    lambda: f64,
    mu: ComplexScalar,
}

impl RepnParams {
    pub fn new(index_set: IndexSet, lambda: f64, mu: ComplexScalar) -> Result<Self> {
        if !lambda.is_finite() || !mu.re.is_finite() || !mu.im.is_finite() {
            return Err(Error::InvalidArgument("non-finite series parameter".into()));
        }
        if index_set == IndexSet::Unilateral && mu != c64(0.0, 0.0) {
            return Err(Error::Classification(format!("unilateral index set requires mu = 0, got {mu}")));
        }
        Ok(Self { index_set, lambda, mu })
    }

    /// `D⁺_λ`, λ > 0.
    pub fn holomorphic(lambda: f64) -> Result<Self> {
        let p = Self::new(IndexSet::Unilateral, lambda, c64(0.0, 0.0))?;
        classify_series(&p)?;
        Ok(p)
    }

    /// Principal series with `Re μ = (1−λ)/2` forced.
    pub fn principal(lambda: f64, mu_im: f64) -> Result<Self> {
        let p = Self::new(IndexSet::Bilateral, lambda, c64((1.0 - lambda) / 2.0, mu_im))?;
        match classify_series(&p)? {
            SeriesTag::Principal => Ok(p),
            other => Err(Error::Classification(format!("expected principal series, got {other}"))),
        }
    }

    pub fn complementary(lambda: f64, mu: f64) -> Result<Self> {
        let p = Self::new(IndexSet::Bilateral, lambda, c64(mu, 0.0))?;
        match classify_series(&p)? {
            SeriesTag::Complementary => Ok(p),
            other => Err(Error::Classification(format!("expected complementary series, got {other}"))),
        }
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> ComplexScalar {
        self.mu
    }
}

impl fmt::Display for RepnParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lambda={} mu={}", self.index_set, self.lambda, self.mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "series")]
pub enum SeriesTag {
    HoloDiscrete,
    AntiHoloDiscrete,
    Principal,
    Complementary,
    ReducibleSum { lambda: f64, r: ComplexScalar },
}

impl fmt::Display for SeriesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesTag::HoloDiscrete => f.write_str("holo"),
            SeriesTag::AntiHoloDiscrete => f.write_str("antiholo"),
            SeriesTag::Principal => f.write_str("principal"),
            SeriesTag::Complementary => f.write_str("complementary"),
            SeriesTag::ReducibleSum { .. } => f.write_str("reducible"),
        }
    }
}

/// Place `p` in the taxonomy of irreducible unitary representations.
///
/// The anti-holomorphic series is never returned here: it is the sharp
/// twist of the holomorphic one and is requested explicitly.
pub fn classify_series(p: &RepnParams) -> Result<SeriesTag> {
    let (lambda, mu) = (p.lambda, p.mu);
    match p.index_set {
        IndexSet::Unilateral => {
            if lambda > 0.0 {
                Ok(SeriesTag::HoloDiscrete)
            } else {
                Err(Error::Classification(format!("holomorphic discrete series needs lambda > 0, got {lambda}")))
            }
        }
        IndexSet::Bilateral => {
            let principal_re = (1.0 - lambda) / 2.0;
            if (mu.re - principal_re).abs() <= SERIES_TOL {
                if !(lambda > -1.0 && lambda <= 1.0) {
                    return Err(Error::Classification(format!(
                        "Re mu = (1-lambda)/2 but lambda = {lambda} is outside (-1, 1]"
                    )));
                }
                if mu.im.abs() <= SERIES_TOL && (mu.re - mu.re.round()).abs() <= SERIES_TOL {
                    return Err(Error::Classification(format!(
                        "mu = {mu} is an integer (reducible R_{{1,0}})"
                    )));
                }
                return Ok(SeriesTag::Principal);
            }
            if mu.im.abs() > SERIES_TOL {
                return Err(Error::Classification(format!(
                    "Re mu = {} differs from (1-lambda)/2 = {principal_re} and mu is not real",
                    mu.re
                )));
            }
            if !(lambda > -1.0 && lambda < 1.0) {
                return Err(Error::Classification(format!(
                    "complementary series needs lambda in (-1, 1), got {lambda}"
                )));
            }
            let lo = 0f64.max(-lambda);
            let hi = 1f64.min(1.0 - lambda);
            if mu.re > lo && mu.re < hi {
                Ok(SeriesTag::Complementary)
            } else {
                Err(Error::Classification(format!(
                    "complementary series needs mu in ({lo}, {hi}), got {}",
                    mu.re
                )))
            }
        }
    }
}
