use clap::ValueEnum;
use serde::Serialize;

use super::SeriesArgs;
use crate::error::{Error, Result};
use crate::numkernel::{c64, Basis, ComplexScalar, OperatorMatrix, TruncationWindow};
use crate::repn::{RepModel, RepnParams, SeriesTag};
use crate::shifts::{canonical_shift, reducible_shift, ReducibleShiftSpec, ShiftKind, WeightedShiftSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Holo,
    Antiholo,
    Principal,
    Complementary,
    Reducible,
}

/// Operators the verification suites can be run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OpKind {
    #[value(name = "T1")]
    T1,
    #[value(name = "T1star")]
    #[serde(rename = "T1star")]
    T1Star,
    #[value(name = "T2")]
    T2,
    #[value(name = "T3")]
    T3,
    /// The shift on the reducible sum.
    #[value(name = "reducible")]
    #[serde(rename = "reducible")]
    Reducible,
    /// Forward shift with weights 1/(n+2): not homogeneous.
    #[value(name = "recip")]
    #[serde(rename = "recip")]
    Recip,
}

/// Validated series parameters with the model they induce.
#[derive(Debug, Clone)]
pub struct Setup {
    pub series: Series,
    pub params: RepnParams,
    pub model: RepModel,
    pub tag: SeriesTag,
    pub r: ComplexScalar,
}

impl Setup {
    pub fn from_args(a: &SeriesArgs) -> Result<Self> {
        let r = c64(a.r, a.r_im);
        let (params, model, tag) = match a.series {
            Series::Holo => {
                let p = RepnParams::holomorphic(a.lambda)?;
                (p, RepModel::Standard(p), SeriesTag::HoloDiscrete)
            }
            Series::Antiholo => {
                let p = RepnParams::holomorphic(a.lambda)?;
                (p, RepModel::Sharp(p), SeriesTag::AntiHoloDiscrete)
            }
            Series::Principal => {
                let p = RepnParams::principal(a.lambda, a.mu_im)?;
                (p, RepModel::Standard(p), SeriesTag::Principal)
            }
            Series::Complementary => {
                let mu = a
                    .mu
                    .ok_or_else(|| Error::InvalidArgument("complementary series needs --mu".into()))?;
                let p = RepnParams::complementary(a.lambda, mu)?;
                (p, RepModel::Standard(p), SeriesTag::Complementary)
            }
            Series::Reducible => {
                let spec = ReducibleShiftSpec::new(a.lambda, r)?;
                let p = RepnParams::new(crate::numkernel::IndexSet::Bilateral, a.lambda, c64(0.0, 0.0))?;
                (
                    p,
                    RepModel::Reducible { lambda: spec.lambda() },
                    SeriesTag::ReducibleSum { lambda: spec.lambda(), r },
                )
            }
        };
        Ok(Self { series: a.series, params, model, tag, r })
    }

    pub fn window(&self, n: usize, pad: usize) -> Result<TruncationWindow> {
        TruncationWindow::new(self.model.index_set(), n, pad)
    }

    pub fn default_op(&self) -> OpKind {
        match self.series {
            Series::Holo => OpKind::T1,
            Series::Antiholo => OpKind::T1Star,
            Series::Principal | Series::Complementary => OpKind::T2,
            Series::Reducible => OpKind::Reducible,
        }
    }

    pub fn operator(&self, op: OpKind, w: &TruncationWindow) -> Result<OperatorMatrix> {
        match op {
            OpKind::T1 => canonical_shift(ShiftKind::T1, &self.params, w),
            OpKind::T1Star => canonical_shift(ShiftKind::T1Star, &self.params, w),
            OpKind::T2 => canonical_shift(ShiftKind::T2, &self.params, w),
            OpKind::T3 => canonical_shift(ShiftKind::T3, &self.params, w),
            OpKind::Reducible => {
                if self.series != Series::Reducible {
                    return Err(Error::IncompatibleShift("the reducible shift needs --series reducible".into()));
                }
                reducible_shift(&ReducibleShiftSpec::new(self.params.lambda(), self.r)?, w)
            }
            OpKind::Recip => Ok(WeightedShiftSpec::from_rule(*w, -1, Basis::Monomial, |n| {
                Some(c64(1.0 / (n as f64 + 2.0), 0.0))
            })?
            .to_matrix()),
        }
    }

    /// Parameter echo for reports.
    pub fn echo(&self) -> Vec<(&'static str, serde_json::Value)> {
        let mu = self.params.mu();
        let mut v = vec![
            ("series", serde_json::json!(self.series)),
            ("lambda", serde_json::json!(self.params.lambda())),
            ("mu_re", serde_json::json!(mu.re)),
            ("mu_im", serde_json::json!(mu.im)),
        ];
        if self.series == Series::Reducible {
            v.push(("r_re", serde_json::json!(self.r.re)));
            v.push(("r_im", serde_json::json!(self.r.im)));
        }
        v
    }
}

impl Setup {
    /// Classify a bilateral `(λ, μ)` and build the matching setup; used by
    /// sweeps, where a requested complementary point may fall on the
    /// principal line.
    pub fn bilateral(lambda: f64, mu: ComplexScalar) -> Result<Self> {
        let params = RepnParams::new(crate::numkernel::IndexSet::Bilateral, lambda, mu)?;
        let tag = crate::repn::classify_series(&params)?;
        let series = match tag {
            SeriesTag::Principal => Series::Principal,
            SeriesTag::Complementary => Series::Complementary,
            other => return Err(Error::Classification(format!("unexpected bilateral series {other}"))),
        };
        Ok(Self { series, params, model: RepModel::Standard(params), tag, r: c64(0.0, 0.0) })
    }
}
