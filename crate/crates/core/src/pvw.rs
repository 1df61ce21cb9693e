//! Two-step predictive value weighting.
//!
//! Step 1 fits the mediator and observation mechanisms by EM on `M*` alone.
//! Step 2 turns those estimates into subject-level predictive values
//! `P(M_i = 1 | M*_i, X_i, C_i, Z_i, Y_i)` by Bayes' rule, using a provisional
//! outcome fit, and refits the outcome model on the weighted duplicated
//! data set. The predictive-value/refit cycle is repeated with `beta` and
//! `gamma` held fixed until the outcome coefficients settle.

use serde::{Deserialize, Serialize};

use crate::em::{correct_label_switching, EmConfig, EmProblem};
use crate::error::{Error, Result};
use crate::glm::{fit_weighted_glm_with, DesignMatrix, Family, GlmFit, GlmOptions};
use crate::model::{
    average_sens_spec, class_log_joint, fit_naive, posterior_from_joint, MediationDataset,
    ParameterSet,
};
use crate::report::{FitReport, Method};

/// Output of the mediator-only EM shared by the two-step methods.
#[derive(Debug, Clone, PartialEq)]
pub struct MisclassificationFit {
    /// `beta` and `gamma`; `theta` is empty.
    pub params: ParameterSet,
    pub loglik_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub sensitivity: f64,
    pub specificity: f64,
    pub label_swap_applied: bool,
}

/// Fits `M*` given `(X, C, Z)` as a two-class mixture, without the outcome.
pub fn estimate_misclassification_model(
    dataset: &MediationDataset,
    config: &EmConfig,
) -> Result<MisclassificationFit> {
    let problem = EmProblem::new(dataset, None, false, config.perfect_specificity)?;
    let outcome = problem.run(config)?;
    let (params, swapped) = correct_label_switching(&outcome.params, dataset)?;
    let (sensitivity, specificity) = average_sens_spec(&params, dataset)?;
    Ok(MisclassificationFit {
        params,
        loglik_trace: outcome.trace,
        iterations: outcome.iterations,
        converged: outcome.converged,
        sensitivity,
        specificity,
        label_swap_applied: swapped,
    })
}

/// `lambda_i = P(M_i = 1 | M*_i, X_i, C_i, Z_i, Y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictiveValues(Vec<f64>);

impl PredictiveValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput(format!(
                "predictive value {} at row {i} is outside [0, 1]",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Predictive values by Bayes' rule over the two latent classes. `params`
/// carries the step-1 `beta`, `gamma` and the provisional `theta` (and
/// `sigma2` for Normal outcomes).
pub fn compute_predictive_values(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Family,
) -> Result<PredictiveValues> {
    let joint = class_log_joint(params, dataset, Some(family))?;
    let (resp, _) = posterior_from_joint(&joint)?;
    PredictiveValues::new(resp.class1())
}

/// Each subject twice: once with `m = 1` and weight `lambda_i`, once with
/// `m = 0` (class 2) and weight `1 - lambda_i`.
#[derive(Debug, Clone)]
pub struct WeightedExpansion {
    pub design: DesignMatrix,
    pub response: Vec<f64>,
    pub weights: Vec<f64>,
}

impl WeightedExpansion {
    pub fn new(
        values: &PredictiveValues,
        dataset: &MediationDataset,
        interaction: bool,
    ) -> Result<Self> {
        let n = dataset.len();
        if values.len() != n {
            return Err(Error::Shape(format!(
                "{} predictive values for {n} subjects",
                values.len()
            )));
        }
        let ones = dataset.outcome_design(&vec![1.0; n], interaction)?;
        let zeros = dataset.outcome_design(&vec![0.0; n], interaction)?;
        let mut response = dataset.y().to_vec();
        response.extend_from_slice(dataset.y());
        let mut weights = values.values().to_vec();
        weights.extend(values.values().iter().map(|l| 1.0 - l));
        Ok(Self {
            design: ones.vstack(&zeros)?,
            response,
            weights,
        })
    }

    pub fn rows(&self) -> usize {
        self.design.nrows()
    }
}

/// Fits the outcome model on the weighted expansion.
pub fn fit_outcome_weighted(
    values: &PredictiveValues,
    dataset: &MediationDataset,
    family: Family,
    interaction: bool,
) -> Result<GlmFit> {
    fit_outcome_from(values, dataset, family, interaction, None)
}

fn fit_outcome_from(
    values: &PredictiveValues,
    dataset: &MediationDataset,
    family: Family,
    interaction: bool,
    start: Option<Vec<f64>>,
) -> Result<GlmFit> {
    let expansion = WeightedExpansion::new(values, dataset, interaction)?;
    let options = GlmOptions {
        start,
        ..GlmOptions::default()
    };
    fit_weighted_glm_with(
        &expansion.design,
        &expansion.response,
        &expansion.weights,
        family,
        &options,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvwConfig {
    pub em: EmConfig,
    /// Maximum number of predictive-value/refit cycles. `1` gives the
    /// single-pass estimator built on the naive provisional fit.
    pub max_passes: usize,
    /// Stop once no outcome coefficient moves by more than this.
    pub tolerance: f64,
}

impl Default for PvwConfig {
    fn default() -> Self {
        Self {
            em: EmConfig::default(),
            max_passes: 500,
            tolerance: 1e-8,
        }
    }
}

/// Full two-step predictive value weighting.
pub fn run_pvw(
    dataset: &MediationDataset,
    family: Family,
    config: &PvwConfig,
    interaction: bool,
) -> Result<FitReport> {
    let step1 = estimate_misclassification_model(dataset, &config.em)?;
    run_pvw_with(dataset, family, config, interaction, &step1)
}

/// Step 2 given an existing step-1 fit.
pub fn run_pvw_with(
    dataset: &MediationDataset,
    family: Family,
    config: &PvwConfig,
    interaction: bool,
    step1: &MisclassificationFit,
) -> Result<FitReport> {
    if config.max_passes == 0 {
        return Err(Error::Config("PVW needs at least one pass".into()));
    }
    let naive = fit_naive(dataset, family, interaction)?;
    let mut params = ParameterSet {
        theta: naive.theta_star,
        sigma2: naive.sigma2,
        ..step1.params.clone()
    };
    let mut passes = 0;
    let mut settled = false;
    while passes < config.max_passes {
        passes += 1;
        let values = compute_predictive_values(&params, dataset, family)?;
        let fit = fit_outcome_from(&values, dataset, family, interaction, Some(params.theta.clone()))?;
        let change = fit
            .coefficients
            .iter()
            .zip(&params.theta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        params.theta = fit.coefficients;
        params.sigma2 = fit.sigma2;
        if change < config.tolerance {
            settled = true;
            break;
        }
    }

    let mut report = FitReport::from_params(Method::Pvw, family, &params, dataset);
    report.loglik_trace = step1.loglik_trace.clone();
    report.iterations = step1.iterations;
    report.converged = step1.converged && (settled || config.max_passes == 1);
    report.sensitivity = Some(step1.sensitivity);
    report.specificity = Some(step1.specificity);
    report.label_swap_applied = step1.label_swap_applied;
    report.metadata.insert("pvw_passes".into(), passes.to_string());
    report.metadata.insert("provisional_outcome_fit".into(), "naive".into());
    if !step1.converged {
        report.diagnostics.push("step-1 EM hit the iteration cap".into());
    }
    if !settled && config.max_passes > 1 {
        report
            .diagnostics
            .push("predictive-value refinement hit its pass cap".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fixture() -> MediationDataset {
        MediationDataset::new(
            vec![0.2, -1.0, 0.5, 1.4, -0.3, 0.9, -1.7, 0.0],
            vec![("c1".into(), vec![0.1, 0.8, 1.5, 0.2, 0.4, 2.1, 0.3, 0.9])],
            vec![("z1".into(), vec![1.2, 0.2, 0.7, 0.3, 2.5, 0.1, 0.6, 1.0])],
            vec![1, 2, 2, 1, 1, 2, 1, 2],
            vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn expansion_weights_sum_to_one() {
        let d = fixture();
        let pv = PredictiveValues::new(vec![0.1, 0.9, 0.35, 0.5, 0.0, 1.0, 0.77, 0.2]).unwrap();
        let e = WeightedExpansion::new(&pv, &d, true).unwrap();
        assert_eq!(e.rows(), 16);
        for i in 0..8 {
            assert_eq!(e.weights[i] + e.weights[i + 8], 1.0);
        }
    }

    #[test]
    fn half_weights_zero_the_mediator_coefficient() {
        let d = fixture();
        let pv = PredictiveValues::new(vec![0.5; 8]).unwrap();
        let fit = fit_outcome_weighted(&pv, &d, Family::Bernoulli, false).unwrap();
        assert_abs_diff_eq!(fit.coefficients[3], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn perfect_classification_pins_predictive_values() {
        let d = fixture();
        let p = ParameterSet {
            beta: vec![0.3, 0.1, -0.2],
            gamma: [vec![30.0, 0.0], vec![-30.0, 0.0]],
            theta: vec![0.1, 0.4, 0.2, -0.5],
            sigma2: None,
            perfect_specificity: false,
        };
        let pv = compute_predictive_values(&p, &d, Family::Bernoulli).unwrap();
        for (l, &m) in pv.values().iter().zip(d.m_star()) {
            let expected = if m == 1 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(*l, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(PredictiveValues::new(vec![0.5, 1.2]).is_err());
    }
}
