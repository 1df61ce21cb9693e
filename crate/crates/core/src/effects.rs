//! Controlled direct, natural direct and natural indirect effects from the
//! fitted mediator and outcome mechanisms.
//!
//! The controlled mediator level `m` uses indicator coding: 1 means latent
//! class 1 is present, 0 means it is absent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::{dot, expit, Family};
use crate::model::ParameterSet;
use crate::report::FitReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Difference,
    OddsRatio,
    RiskRatio,
}

impl Scale {
    /// The scale matching an outcome family.
    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Normal => Scale::Difference,
            Family::Bernoulli => Scale::OddsRatio,
            Family::Poisson => Scale::RiskRatio,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Difference => "difference",
            Scale::OddsRatio => "odds_ratio",
            Scale::RiskRatio => "risk_ratio",
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "difference" | "diff" => Ok(Scale::Difference),
            "odds_ratio" | "or" => Ok(Scale::OddsRatio),
            "risk_ratio" | "rr" => Ok(Scale::RiskRatio),
            other => Err(Error::Config(format!("unknown effect scale '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectQuery {
    pub x: f64,
    pub x_ref: f64,
    pub c: Vec<f64>,
    /// Controlled mediator level, 0 or 1.
    pub m: u8,
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectEstimates {
    pub cde: f64,
    pub nde: f64,
    pub nie: f64,
    pub scale: Scale,
}

/// The `beta` and `theta` vectors the effect formulas need.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectModel {
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
}

impl From<&ParameterSet> for EffectModel {
    fn from(p: &ParameterSet) -> Self {
        Self {
            beta: p.beta.clone(),
            theta: p.theta.clone(),
        }
    }
}

impl From<&FitReport> for EffectModel {
    fn from(r: &FitReport) -> Self {
        Self {
            beta: r.beta.clone(),
            theta: r.theta.clone(),
        }
    }
}

struct Terms {
    theta_x: f64,
    theta_m: f64,
    theta_xm: f64,
    /// `beta_0 + beta_C c`, the mediator predictor without the exposure.
    base: f64,
    beta_x: f64,
}

impl EffectModel {
    fn terms(&self, query: &EffectQuery) -> Result<Terms> {
        let p = self.beta.len().checked_sub(2).ok_or_else(|| {
            Error::Shape(format!("beta has {} entries", self.beta.len()))
        })?;
        if self.theta.len() != p + 3 && self.theta.len() != p + 4 {
            return Err(Error::Shape(format!(
                "theta has {} entries for {p} confounders",
                self.theta.len()
            )));
        }
        if query.c.len() != p {
            return Err(Error::Shape(format!(
                "query gives {} confounder values, model has {p}",
                query.c.len()
            )));
        }
        if query.m > 1 {
            return Err(Error::InvalidInput(format!(
                "controlled mediator level must be 0 or 1, got {}",
                query.m
            )));
        }
        if !(query.x.is_finite() && query.x_ref.is_finite() && query.c.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidInput("non-finite query value".into()));
        }
        Ok(Terms {
            theta_x: self.theta[1],
            theta_m: self.theta[2 + p],
            theta_xm: self.theta.get(3 + p).copied().unwrap_or(0.0),
            base: self.beta[0] + dot(&self.beta[2..], &query.c),
            beta_x: self.beta[1],
        })
    }
}

fn finite(e: EffectEstimates) -> Result<EffectEstimates> {
    if [e.cde, e.nde, e.nie].iter().all(|v| v.is_finite()) {
        Ok(e)
    } else {
        Err(Error::Evaluation("non-finite effect estimate".into()))
    }
}

/// Effects on the mean-difference scale for an identity-link outcome.
pub fn effects_difference(model: &EffectModel, query: &EffectQuery) -> Result<EffectEstimates> {
    let t = model.terms(query)?;
    let dx = query.x - query.x_ref;
    let m = f64::from(query.m);
    let p_ref = expit(t.base + t.beta_x * query.x_ref);
    let p_new = expit(t.base + t.beta_x * query.x);
    finite(EffectEstimates {
        cde: (t.theta_x + t.theta_xm * m) * dx,
        nde: t.theta_x * dx + t.theta_xm * dx * p_ref,
        nie: (t.theta_m + t.theta_xm * query.x) * (p_new - p_ref),
        scale: Scale::Difference,
    })
}

/// Ratio-scale effects shared by the odds-ratio (rare binary outcome) and
/// risk-ratio (log-linear outcome) cases.
fn ratio_effects(model: &EffectModel, query: &EffectQuery, scale: Scale) -> Result<EffectEstimates> {
    let t = model.terms(query)?;
    let (x, xr) = (query.x, query.x_ref);
    let m = f64::from(query.m);
    let a_ref = t.base + t.beta_x * xr;
    let a_new = t.base + t.beta_x * x;
    let cde = ((t.theta_x + t.theta_xm * m) * (x - xr)).exp();
    let nde = (t.theta_x * (x - xr)).exp() * (1.0 + (t.theta_m + t.theta_xm * x + a_ref).exp())
        / (1.0 + (t.theta_m + t.theta_xm * xr + a_ref).exp());
    let nie = (1.0 + a_ref.exp()) * (1.0 + (t.theta_m + t.theta_xm * x + a_new).exp())
        / ((1.0 + a_new.exp()) * (1.0 + (t.theta_m + t.theta_xm * x + a_ref).exp()));
    finite(EffectEstimates {
        cde,
        nde,
        nie,
        scale,
    })
}

/// Odds-ratio effects for a logit-link binary outcome. The NDE and NIE use
/// the rare-outcome approximation.
pub fn effects_odds_ratio(model: &EffectModel, query: &EffectQuery) -> Result<EffectEstimates> {
    ratio_effects(model, query, Scale::OddsRatio)
}

/// Risk-ratio effects for a log-link count outcome.
pub fn effects_risk_ratio(model: &EffectModel, query: &EffectQuery) -> Result<EffectEstimates> {
    ratio_effects(model, query, Scale::RiskRatio)
}

/// Dispatches on `query.scale`.
pub fn effects(model: &EffectModel, query: &EffectQuery) -> Result<EffectEstimates> {
    match query.scale {
        Scale::Difference => effects_difference(model, query),
        Scale::OddsRatio => effects_odds_ratio(model, query),
        Scale::RiskRatio => effects_risk_ratio(model, query),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn setting1() -> EffectModel {
        EffectModel {
            beta: vec![1.0, -2.0, -2.5],
            theta: vec![1.0, 1.5, -0.2, -2.0, 0.0],
        }
    }

    fn query(x: f64, x_ref: f64, m: u8, scale: Scale) -> EffectQuery {
        EffectQuery {
            x,
            x_ref,
            c: vec![0.0],
            m,
            scale,
        }
    }

    #[test]
    fn no_change_gives_null_effects() {
        let q = query(0.7, 0.7, 1, Scale::Difference);
        let e = effects_difference(&setting1(), &q).unwrap();
        assert_eq!((e.cde, e.nde, e.nie), (0.0, 0.0, 0.0));
        for scale in [Scale::OddsRatio, Scale::RiskRatio] {
            let e = effects(&setting1(), &query(0.7, 0.7, 0, scale)).unwrap();
            assert_abs_diff_eq!(e.cde, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(e.nde, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(e.nie, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn interaction_free_direct_effects_collapse() {
        for m in [0, 1] {
            let mut q = query(1.0, 0.0, m, Scale::Difference);
            q.c = vec![3.0];
            let e = effects_difference(&setting1(), &q).unwrap();
            assert_abs_diff_eq!(e.cde, 1.5, epsilon = 1e-15);
            assert_abs_diff_eq!(e.nde, 1.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn setting1_indirect_effect() {
        let e = effects_difference(&setting1(), &query(1.0, 0.0, 0, Scale::Difference)).unwrap();
        let expected = -2.0 * (expit(-1.0) - expit(1.0));
        assert_abs_diff_eq!(e.nie, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(e.nie, 0.9242, epsilon = 5e-5);
    }

    #[test]
    fn setting5_controlled_risk_ratio() {
        let model = EffectModel {
            beta: vec![1.0, -2.0, -2.5],
            theta: vec![-3.0, 1.0, -0.2, -1.0, 0.5],
        };
        let e = effects_risk_ratio(&model, &query(1.0, 0.0, 1, Scale::RiskRatio)).unwrap();
        assert_abs_diff_eq!(e.cde, 1.5f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.cde, 4.4817, epsilon = 5e-5);
    }

    #[test]
    fn odds_and_risk_ratio_expressions_coincide() {
        let model = EffectModel {
            beta: vec![0.3, -0.7, 0.4],
            theta: vec![-2.0, 0.8, 0.1, -0.6, 0.3],
        };
        let q = query(1.3, -0.2, 1, Scale::OddsRatio);
        let or = effects_odds_ratio(&model, &q).unwrap();
        let rr = effects_risk_ratio(&model, &q).unwrap();
        assert_eq!((or.cde, or.nde, or.nie), (rr.cde, rr.nde, rr.nie));
    }

    #[test]
    fn missing_interaction_is_zero() {
        let with = setting1();
        let without = EffectModel {
            theta: with.theta[..4].to_vec(),
            ..with.clone()
        };
        let q = query(0.4, -1.0, 1, Scale::Difference);
        assert_eq!(
            effects_difference(&with, &q).unwrap(),
            effects_difference(&without, &q).unwrap()
        );
    }

    #[test]
    fn rejects_bad_queries() {
        let mut q = query(1.0, 0.0, 2, Scale::Difference);
        assert!(effects_difference(&setting1(), &q).is_err());
        q.m = 1;
        q.c = vec![];
        assert!(effects_difference(&setting1(), &q).is_err());
    }
}
