//! Two-step least-squares correction for Normal outcomes.
//!
//! With a linear outcome mechanism,
//!
//! ```text
//! E[Y | X, C, Z, M*] = theta_0 + theta_X X + theta_C C + (theta_M + theta_XM X) P(M = 1 | X, C, Z, M*)
//! ```
//!
//! so replacing the misclassified regressor `1{M* = 1}` in the least-squares
//! normal equations by its conditional expectation given the observed data
//! yields consistent outcome coefficients. The conditional expectation is
//! built from the step-1 estimates of the mediator mechanism and of the
//! subject-level false-positive and false-negative rates. When those rates
//! are zero it equals `1{M* = 1}` and the correction is the identity.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::em::EmConfig;
use crate::error::{Error, Result};
use crate::glm::{fit_weighted_glm, weighted_least_squares, Family};
use crate::model::{
    class_log_joint, fit_naive, observed_mediator_prob, posterior_from_joint,
    true_mediator_prob, MediationDataset, NaiveFit, ParameterSet,
};
use crate::pvw::{estimate_misclassification_model, MisclassificationFit};
use crate::report::{FitReport, Method};

/// Smallest eigenvalue, relative to the largest, accepted for the corrected
/// second-moment matrix.
const MIN_RELATIVE_EIGENVALUE: f64 = 1e-12;

/// Quantities entering the corrected normal equations.
#[derive(Debug, Clone)]
pub struct OlsCorrectionInputs {
    pub naive: NaiveFit,
    /// Step-1 `beta` and `gamma`.
    pub misclassification: ParameterSet,
    /// `P(M*_i = 1 | M_i = 1, Z_i)`.
    pub sensitivity: Vec<f64>,
    /// `P(M*_i = 2 | M_i = 2, Z_i)`.
    pub specificity: Vec<f64>,
    /// `P(M_i = 1 | X_i, C_i)`.
    pub mediator_prob: Vec<f64>,
}

impl OlsCorrectionInputs {
    pub fn new(
        dataset: &MediationDataset,
        step1: &MisclassificationFit,
        interaction: bool,
    ) -> Result<Self> {
        let params = &step1.params;
        Ok(Self {
            naive: fit_naive(dataset, Family::Normal, interaction)?,
            misclassification: params.clone(),
            sensitivity: observed_mediator_prob(params, dataset, 1)?,
            specificity: observed_mediator_prob(params, dataset, 2)?
                .into_iter()
                .map(|p| 1.0 - p)
                .collect(),
            mediator_prob: true_mediator_prob(params, dataset)?,
        })
    }

    /// `E[1{M_i = 1} | X_i, C_i, Z_i, M*_i]`, the corrected regressor.
    pub fn corrected_mediator(&self, dataset: &MediationDataset) -> Result<Vec<f64>> {
        let joint = class_log_joint(&self.misclassification, dataset, None)?;
        Ok(posterior_from_joint(&joint)?.0.class1())
    }
}

/// Runs step 1 and the least-squares correction.
pub fn run_ols_correction(
    dataset: &MediationDataset,
    config: &EmConfig,
    interaction: bool,
) -> Result<FitReport> {
    let step1 = estimate_misclassification_model(dataset, config)?;
    run_ols_correction_with(dataset, interaction, &step1)
}

/// Least-squares correction given an existing step-1 fit.
pub fn run_ols_correction_with(
    dataset: &MediationDataset,
    interaction: bool,
    step1: &MisclassificationFit,
) -> Result<FitReport> {
    // Y must be a valid Normal response; the naive fit checks shapes too.
    let inputs = OlsCorrectionInputs::new(dataset, step1, interaction)?;
    let lambda = inputs.corrected_mediator(dataset)?;
    let (theta, sigma2) = corrected_fit(dataset, &lambda, interaction)?;

    let params = ParameterSet {
        theta,
        sigma2: Some(sigma2),
        ..step1.params.clone()
    };
    let mut report = FitReport::from_params(Method::Ols, Family::Normal, &params, dataset);
    report.loglik_trace = step1.loglik_trace.clone();
    report.iterations = step1.iterations;
    report.converged = step1.converged;
    report.sensitivity = Some(step1.sensitivity);
    report.specificity = Some(step1.specificity);
    report.label_swap_applied = step1.label_swap_applied;
    report
        .metadata
        .insert("misclassification_rates".into(), "subject-level".into());
    if !step1.converged {
        report.diagnostics.push("step-1 EM hit the iteration cap".into());
    }
    Ok(report)
}

/// Solves the corrected normal equations for `theta` and recovers the
/// residual variance of the outcome mechanism.
pub(crate) fn corrected_fit(
    dataset: &MediationDataset,
    lambda: &[f64],
    interaction: bool,
) -> Result<(Vec<f64>, f64)> {
    let design = dataset.outcome_design(lambda, interaction)?;
    let k = design.ncols();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for i in 0..design.nrows() {
        let row = design.row(i);
        for a in 0..k {
            for b in 0..k {
                gram[(a, b)] += row[a] * row[b];
            }
        }
    }
    let eig = SymmetricEigen::new(gram).eigenvalues;
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > MIN_RELATIVE_EIGENVALUE * max) {
        return Err(Error::CorrectionInfeasible { eigenvalue: min });
    }
    let ones = vec![1.0; dataset.len()];
    let theta = weighted_least_squares(&design, dataset.y(), &ones)?;

    // Var(Y | observed) = sigma^2 + (theta_M + theta_XM x)^2 lambda (1 - lambda).
    let p = dataset.n_confounders();
    let theta_m = theta[2 + p];
    let theta_xm = if interaction { theta[3 + p] } else { 0.0 };
    let n = dataset.len() as f64;
    let sigma2 = (0..dataset.len())
        .map(|i| {
            let r = dataset.y()[i] - crate::glm::dot(design.row(i), &theta);
            let shift = theta_m + theta_xm * dataset.x()[i];
            r * r - shift * shift * lambda[i] * (1.0 - lambda[i])
        })
        .sum::<f64>()
        / n;
    let sigma2 = if sigma2 > 0.0 {
        sigma2
    } else {
        // Fall back to the plain residual variance.
        fit_weighted_glm(&design, dataset.y(), &ones, Family::Normal)?
            .sigma2
            .unwrap_or(f64::MIN_POSITIVE)
    };
    Ok((theta, sigma2))
}
