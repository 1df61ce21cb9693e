use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::Family;
use crate::model::{MediationDataset, NaiveFit, ParameterSet};

/// Version of the serialized report and summary layouts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Em,
    Pvw,
    Ols,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Naive, Method::Em, Method::Pvw, Method::Ols];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Em => "em",
            Method::Pvw => "pvw",
            Method::Ols => "ols",
        }
    }

    /// Families the method can be fitted with.
    pub fn supports(self, family: Family) -> bool {
        match self {
            Method::Ols => family == Family::Normal,
            _ => true,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Method::Naive),
            "em" => Ok(Method::Em),
            "pvw" => Ok(Method::Pvw),
            "ols" => Ok(Method::Ols),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub name: String,
    pub value: f64,
}

/// Result of any estimation method.
///
/// `gamma` is absent for the naive fit, which does not model the
/// observation mechanism; `sensitivity`/`specificity` are absent likewise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub method: Method,
    pub family: Family,
    pub interaction: bool,
    pub beta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<[Vec<f64>; 2]>,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(default)]
    pub perfect_specificity: bool,
    pub estimates: Vec<NamedEstimate>,
    pub loglik_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensitivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specificity: Option<f64>,
    pub label_swap_applied: bool,
    /// Free-form diagnostics such as GLM warnings or fallback notes.
    #[serde(default)]
    pub diagnostics: Vec<String>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl FitReport {
    pub(crate) fn from_params(
        method: Method,
        family: Family,
        params: &ParameterSet,
        dataset: &MediationDataset,
    ) -> Self {
        let names = params.parameter_names(dataset);
        let mut estimates = Vec::new();
        let mut push = |names: &[String], values: &[f64]| {
            estimates.extend(names.iter().zip(values).map(|(n, v)| NamedEstimate {
                name: n.clone(),
                value: *v,
            }));
        };
        push(&names.beta, &params.beta);
        push(&names.gamma[0], &params.gamma[0]);
        if !params.perfect_specificity {
            push(&names.gamma[1], &params.gamma[1]);
        }
        push(&names.theta, &params.theta);
        if let Some(s) = params.sigma2 {
            estimates.push(NamedEstimate {
                name: "sigma2".into(),
                value: s,
            });
        }
        Self {
            schema_version: SCHEMA_VERSION,
            method,
            family,
            interaction: params.interaction(),
            beta: params.beta.clone(),
            gamma: Some(params.gamma.clone()),
            theta: params.theta.clone(),
            sigma2: params.sigma2,
            perfect_specificity: params.perfect_specificity,
            estimates,
            loglik_trace: Vec::new(),
            iterations: 0,
            converged: true,
            sensitivity: None,
            specificity: None,
            label_swap_applied: false,
            diagnostics: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_naive(
        fit: &NaiveFit,
        family: Family,
        interaction: bool,
        dataset: &MediationDataset,
    ) -> Self {
        let shell = ParameterSet {
            beta: fit.beta_star.clone(),
            gamma: [Vec::new(), Vec::new()],
            theta: fit.theta_star.clone(),
            sigma2: fit.sigma2,
            perfect_specificity: false,
        };
        let names = shell.parameter_names(dataset);
        let estimates = names
            .beta
            .iter()
            .zip(&fit.beta_star)
            .chain(names.theta.iter().zip(&fit.theta_star))
            .map(|(n, v)| NamedEstimate {
                name: n.clone(),
                value: *v,
            })
            .chain(fit.sigma2.map(|s| NamedEstimate {
                name: "sigma2".into(),
                value: s,
            }))
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            method: Method::Naive,
            family,
            interaction,
            beta: fit.beta_star.clone(),
            gamma: None,
            theta: fit.theta_star.clone(),
            sigma2: fit.sigma2,
            perfect_specificity: false,
            estimates,
            loglik_trace: Vec::new(),
            iterations: 1,
            converged: true,
            sensitivity: None,
            specificity: None,
            label_swap_applied: false,
            diagnostics: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    /// The fitted `(beta, gamma, theta)` as a parameter set. Naive reports
    /// carry no `gamma` and yield `None`.
    pub fn parameter_set(&self) -> Option<ParameterSet> {
        self.gamma.as_ref().map(|gamma| ParameterSet {
            beta: self.beta.clone(),
            gamma: gamma.clone(),
            theta: self.theta.clone(),
            sigma2: self.sigma2,
            perfect_specificity: self.perfect_specificity,
        })
    }

    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.estimates.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn theta_m(&self) -> f64 {
        self.theta[self.beta.len()]
    }

    pub fn theta_xm(&self) -> Option<f64> {
        self.theta.get(self.beta.len() + 1).copied()
    }

    pub fn final_loglik(&self) -> Option<f64> {
        self.loglik_trace.last().copied()
    }
}
