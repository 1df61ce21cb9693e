//! Seamless EM estimation of the mediator, observation and outcome
//! mechanisms, with SQUAREM acceleration and label-switching correction.
//!
//! The E-step computes per-subject posterior class probabilities. The
//! M-step is three weighted GLM fits:
//!
//! * `beta`: logistic regression of class-1 membership on `(1, X, C)`,
//!   each subject contributing a `M = 1` row with weight `r_i1` and a `M = 2`
//!   row with weight `r_i2` (collapsed to one fractional-response row);
//! * `gamma` row `j`: logistic regression of `1{M* = 1}` on `(1, Z)` with
//!   weights `r_ij`;
//! * `theta`: outcome regression on the duplicated data set in which every
//!   subject appears once per latent class with weight `r_ij`.
//!
//! The same engine runs the mediator-only mixture (no outcome factor)
//! used as the first step of the two-step corrections.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::{fit_weighted_glm_with, DesignMatrix, Family, GlmOptions, GlmWarning};
use crate::model::{
    average_sens_spec, class_log_joint, fit_naive, posterior_from_joint, MediationDataset,
    ParameterSet, Responsibilities,
};
use crate::report::{FitReport, Method};

/// Responsibilities are clamped to `[RESP_FLOOR, 1 - RESP_FLOOR]` before
/// they are used as weights.
pub const RESP_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Acceleration {
    None,
    Squarem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartStrategy {
    /// Naive analysis-model fit with gamma intercepts `(+2, -2)`.
    Naive,
    /// User-supplied parameters.
    Given { params: ParameterSet },
    /// Naive start plus Gaussian noise of the given scale on every entry.
    Perturbed { seed: u64, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    pub loglik_tolerance: f64,
    pub max_iterations: usize,
    pub acceleration: Acceleration,
    pub start: StartStrategy,
    /// Fix `P(M* = 1 | M = 2) = 0`.
    pub perfect_specificity: bool,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            loglik_tolerance: 1e-7,
            max_iterations: 1500,
            acceleration: Acceleration::Squarem,
            start: StartStrategy::Naive,
            perfect_specificity: false,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.loglik_tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.loglik_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Posterior class probabilities under `params`.
pub fn e_step(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Family,
) -> Result<Responsibilities> {
    let joint = class_log_joint(params, dataset, Some(family))?;
    Ok(posterior_from_joint(&joint)?.0)
}

/// Weighted fits of all three mechanisms from cold starts.
pub fn m_step(
    responsibilities: &Responsibilities,
    dataset: &MediationDataset,
    family: Family,
    interaction: bool,
) -> Result<ParameterSet> {
    let problem = EmProblem::new(dataset, Some(family), interaction, false)?;
    problem.maximize(responsibilities, None).map(|(p, _)| p)
}

/// Cached designs and responses for repeated E/M steps on one dataset.
pub(crate) struct EmProblem<'a> {
    pub(crate) dataset: &'a MediationDataset,
    pub(crate) family: Option<Family>,
    interaction: bool,
    perfect_specificity: bool,
    mediator: DesignMatrix,
    observation: DesignMatrix,
    m_star: Vec<f64>,
    duplicated: Option<DesignMatrix>,
    duplicated_y: Vec<f64>,
}

impl<'a> EmProblem<'a> {
    pub(crate) fn new(
        dataset: &'a MediationDataset,
        family: Option<Family>,
        interaction: bool,
        perfect_specificity: bool,
    ) -> Result<Self> {
        let n = dataset.len();
        let (duplicated, duplicated_y) = match family {
            Some(_) => {
                let ones = dataset.outcome_design(&vec![1.0; n], interaction)?;
                let zeros = dataset.outcome_design(&vec![0.0; n], interaction)?;
                let mut y = dataset.y().to_vec();
                y.extend_from_slice(dataset.y());
                (Some(ones.vstack(&zeros)?), y)
            }
            None => (None, Vec::new()),
        };
        Ok(Self {
            dataset,
            family,
            interaction,
            perfect_specificity,
            mediator: dataset.mediator_design()?,
            observation: dataset.observation_design()?,
            m_star: dataset.m_star_indicator(),
            duplicated,
            duplicated_y,
        })
    }

    pub(crate) fn posterior(&self, params: &ParameterSet) -> Result<(Responsibilities, f64)> {
        posterior_from_joint(&class_log_joint(params, self.dataset, self.family)?)
    }

    pub(crate) fn loglik(&self, params: &ParameterSet) -> Result<f64> {
        Ok(self.posterior(params)?.1)
    }

    /// M-step. `current` provides warm starts and the fixed entries.
    pub(crate) fn maximize(
        &self,
        resp: &Responsibilities,
        current: Option<&ParameterSet>,
    ) -> Result<(ParameterSet, Vec<GlmWarning>)> {
        let n = self.dataset.len();
        if resp.len() != n {
            return Err(Error::Shape(format!(
                "{} responsibility rows for {n} subjects",
                resp.len()
            )));
        }
        let r1: Vec<f64> = resp
            .rows()
            .iter()
            .map(|r| r[0].clamp(RESP_FLOOR, 1.0 - RESP_FLOOR))
            .collect();
        let r2: Vec<f64> = r1.iter().map(|r| 1.0 - r).collect();
        let mut warnings = Vec::new();
        let opts = |start: Option<&Vec<f64>>, fractional: bool| GlmOptions {
            start: start.cloned(),
            fractional_response: fractional,
            ..GlmOptions::default()
        };

        let ones = vec![1.0; n];
        let beta = fit_weighted_glm_with(
            &self.mediator,
            &r1,
            &ones,
            Family::Bernoulli,
            &opts(current.map(|c| &c.beta), true),
        )?;
        warnings.extend(beta.warnings);

        let gamma1 = fit_weighted_glm_with(
            &self.observation,
            &self.m_star,
            &r1,
            Family::Bernoulli,
            &opts(current.map(|c| &c.gamma[0]), false),
        )?;
        warnings.extend(gamma1.warnings);

        let gamma2 = if self.perfect_specificity {
            current
                .map(|c| c.gamma[1].clone())
                .unwrap_or_else(|| vec![0.0; self.observation.ncols()])
        } else {
            let fit = fit_weighted_glm_with(
                &self.observation,
                &self.m_star,
                &r2,
                Family::Bernoulli,
                &opts(current.map(|c| &c.gamma[1]), false),
            )?;
            warnings.extend(fit.warnings);
            fit.coefficients
        };

        let (theta, sigma2) = match (self.family, &self.duplicated) {
            (Some(family), Some(design)) => {
                let mut w = r1.clone();
                w.extend_from_slice(&r2);
                let start = current.filter(|c| c.has_outcome()).map(|c| &c.theta);
                let fit = fit_weighted_glm_with(
                    design,
                    &self.duplicated_y,
                    &w,
                    family,
                    &opts(start, false),
                )?;
                warnings.extend(fit.warnings);
                (fit.coefficients, fit.sigma2)
            }
            _ => (Vec::new(), None),
        };

        Ok((
            ParameterSet {
                beta: beta.coefficients,
                gamma: [gamma1.coefficients, gamma2],
                theta,
                sigma2,
                perfect_specificity: self.perfect_specificity,
            },
            warnings,
        ))
    }

    /// One EM update. Returns the new parameters and `loglik(params)`.
    fn step(&self, params: &ParameterSet) -> Result<(ParameterSet, f64, Vec<GlmWarning>)> {
        let (resp, ll) = self.posterior(params)?;
        let (next, warnings) = self.maximize(&resp, Some(params))?;
        Ok((next, ll, warnings))
    }

    /// Default start: naive fit, gamma intercepts `(+2, -2)` and zero slopes.
    pub(crate) fn naive_start(&self) -> Result<ParameterSet> {
        let q = self.observation.ncols() - 1;
        let mut g1 = vec![0.0; q + 1];
        let mut g2 = vec![0.0; q + 1];
        g1[0] = 2.0;
        g2[0] = -2.0;
        let (beta, theta, sigma2) = match self.family {
            Some(family) => {
                let naive = fit_naive(self.dataset, family, self.interaction)?;
                (naive.beta_star, naive.theta_star, naive.sigma2)
            }
            None => {
                let ones = vec![1.0; self.dataset.len()];
                let fit = fit_weighted_glm_with(
                    &self.mediator,
                    &self.m_star,
                    &ones,
                    Family::Bernoulli,
                    &GlmOptions::default(),
                )?;
                (fit.coefficients, Vec::new(), None)
            }
        };
        Ok(ParameterSet {
            beta,
            gamma: [g1, g2],
            theta,
            sigma2,
            perfect_specificity: self.perfect_specificity,
        })
    }

    pub(crate) fn initialize(&self, strategy: &StartStrategy) -> Result<ParameterSet> {
        match strategy {
            StartStrategy::Naive => self.naive_start(),
            StartStrategy::Given { params } => {
                params.validate(self.dataset)?;
                if self.family.is_some() != params.has_outcome() {
                    return Err(Error::Config(
                        "start parameters do not match the modelled mechanisms".into(),
                    ));
                }
                if self.family.is_some() && params.interaction() != self.interaction {
                    return Err(Error::Config(
                        "start parameters disagree with the interaction flag".into(),
                    ));
                }
                if self.family == Some(Family::Normal) && params.sigma2.is_none() {
                    return Err(Error::Config("Normal start requires sigma2".into()));
                }
                let mut p = params.clone();
                p.perfect_specificity = self.perfect_specificity;
                Ok(p)
            }
            StartStrategy::Perturbed { seed, scale } => {
                let base = self.naive_start()?;
                let mut rng = ChaCha20Rng::seed_from_u64(*seed);
                let v: Vec<f64> = base
                    .to_vector()
                    .into_iter()
                    .map(|x| {
                        let e: f64 = StandardNormal.sample(&mut rng);
                        x + scale * e
                    })
                    .collect();
                Ok(base.from_vector(&v))
            }
        }
    }

    pub(crate) fn run(&self, config: &EmConfig) -> Result<EmOutcome> {
        config.validate()?;
        let start = self.initialize(&config.start)?;
        match config.acceleration {
            Acceleration::None => self.run_plain(start, config),
            Acceleration::Squarem => self.run_squarem(start, config),
        }
    }

    fn run_plain(&self, start: ParameterSet, config: &EmConfig) -> Result<EmOutcome> {
        let mut current = start;
        let (mut next, mut ll, mut warnings) = self.step(&current)?;
        let mut trace = vec![ll];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < config.max_iterations {
            iterations += 1;
            current = next;
            let (n2, ll_new, w) = self.step(&current)?;
            next = n2;
            warnings = w;
            trace.push(ll_new);
            let delta = (ll_new - ll).abs();
            ll = ll_new;
            if delta < config.loglik_tolerance {
                converged = true;
                break;
            }
        }
        Ok(EmOutcome {
            params: current,
            trace,
            iterations,
            converged,
            extrapolations_accepted: 0,
            warnings,
        })
    }

    /// SQUAREM with the S3 step length `alpha = -|r| / |v|` and a
    /// stabilizing EM step. `|alpha|` is kept within `[1, step_max]`, where
    /// `step_max` starts at 1, grows fourfold after an accepted step at the
    /// bound and shrinks fourfold after a rejected one. Whenever the
    /// extrapolated cycle ends below the plain two-step value, the plain
    /// value is kept instead.
    fn run_squarem(&self, start: ParameterSet, config: &EmConfig) -> Result<EmOutcome> {
        let mut current = start;
        let mut ll = self.loglik(&current)?;
        let mut trace = vec![ll];
        let mut iterations = 0;
        let mut accepted = 0;
        let mut converged = false;
        let mut warnings = Vec::new();
        let mut step_max = 1.0;
        while iterations < config.max_iterations {
            iterations += 1;
            let (p1, _, _) = self.step(&current)?;
            let (p2, _, w2) = self.step(&p1)?;
            let ll2 = self.loglik(&p2)?;
            warnings = w2;

            let mut best = (p2.clone(), ll2);
            if let Some((candidate, at_bound)) = extrapolate(&current, &p1, &p2, step_max) {
                let mut ok = false;
                if candidate.validate(self.dataset).is_ok() {
                    // Extrapolated points may be wild; any failure keeps p2.
                    if let Ok((stabilized, _, w)) = self.step(&candidate) {
                        if let Ok(ll_s) = self.loglik(&stabilized) {
                            if ll_s >= ll2 {
                                best = (stabilized, ll_s);
                                warnings = w;
                                accepted += 1;
                                ok = true;
                            }
                        }
                    }
                }
                if ok && at_bound {
                    step_max *= STEP_FACTOR;
                } else if !ok {
                    step_max = (step_max / STEP_FACTOR).max(1.0);
                }
            }
            let (next, ll_new) = best;
            current = next;
            trace.push(ll_new);
            let delta = (ll_new - ll).abs();
            ll = ll_new;
            if delta < config.loglik_tolerance {
                converged = true;
                break;
            }
        }
        Ok(EmOutcome {
            params: current,
            trace,
            iterations,
            converged,
            extrapolations_accepted: accepted,
            warnings,
        })
    }
}

const STEP_FACTOR: f64 = 4.0;

/// The extrapolated point and whether `|alpha|` was clipped at `step_max`.
fn extrapolate(
    p0: &ParameterSet,
    p1: &ParameterSet,
    p2: &ParameterSet,
    step_max: f64,
) -> Option<(ParameterSet, bool)> {
    let v0 = p0.to_vector();
    let v1 = p1.to_vector();
    let v2 = p2.to_vector();
    let r: Vec<f64> = v1.iter().zip(&v0).map(|(a, b)| a - b).collect();
    let v: Vec<f64> = (0..v0.len()).map(|i| v2[i] - 2.0 * v1[i] + v0[i]).collect();
    let r_norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let v_norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(v_norm > 0.0) || !r_norm.is_finite() {
        return None;
    }
    let raw = r_norm / v_norm;
    let at_bound = raw >= step_max;
    let alpha = -raw.clamp(1.0, step_max);
    let out: Vec<f64> = (0..v0.len())
        .map(|i| v0[i] - 2.0 * alpha * r[i] + alpha * alpha * v[i])
        .collect();
    if out.iter().all(|x| x.is_finite()) {
        Some((p0.from_vector(&out), at_bound))
    } else {
        None
    }
}

pub(crate) struct EmOutcome {
    pub(crate) params: ParameterSet,
    pub(crate) trace: Vec<f64>,
    pub(crate) iterations: usize,
    pub(crate) converged: bool,
    pub(crate) extrapolations_accepted: usize,
    pub(crate) warnings: Vec<GlmWarning>,
}

/// Relabels the latent classes when average sensitivity plus specificity
/// is below 1. Returns the (possibly swapped) parameters and whether a swap
/// happened.
pub fn correct_label_switching(
    params: &ParameterSet,
    dataset: &MediationDataset,
) -> Result<(ParameterSet, bool)> {
    let (sens, spec) = average_sens_spec(params, dataset)?;
    let total = sens + spec;
    if total == 1.0 {
        return Err(Error::Unidentifiable);
    }
    if total < 1.0 {
        if params.perfect_specificity {
            // Cannot happen for finite gamma: sens > 0 and spec = 1.
            return Err(Error::Unidentifiable);
        }
        Ok((params.label_swapped(), true))
    } else {
        Ok((params.clone(), false))
    }
}

/// Starting values for [`run_em`].
pub fn initialize(
    dataset: &MediationDataset,
    family: Family,
    strategy: &StartStrategy,
    interaction: bool,
) -> Result<ParameterSet> {
    EmProblem::new(dataset, Some(family), interaction, false)?.initialize(strategy)
}

fn warning_notes(warnings: &[GlmWarning]) -> Vec<String> {
    warnings
        .iter()
        .map(|w| match w {
            GlmWarning::Separation { columns } => format!(
                "separation in a final M-step fit: coefficients for {columns:?} exceed the bound"
            ),
        })
        .collect()
}

pub(crate) fn finish_report(
    method: Method,
    family: Family,
    dataset: &MediationDataset,
    outcome: EmOutcome,
) -> Result<FitReport> {
    let (params, swapped) = correct_label_switching(&outcome.params, dataset)?;
    let (sens, spec) = average_sens_spec(&params, dataset)?;
    let mut report = FitReport::from_params(method, family, &params, dataset);
    report.loglik_trace = outcome.trace;
    report.iterations = outcome.iterations;
    report.converged = outcome.converged;
    report.sensitivity = Some(sens);
    report.specificity = Some(spec);
    report.label_swap_applied = swapped;
    report.diagnostics = warning_notes(&outcome.warnings);
    if !outcome.converged {
        report
            .diagnostics
            .push("iteration cap reached before the log-likelihood tolerance".into());
    }
    report.metadata.insert(
        "extrapolations_accepted".into(),
        outcome.extrapolations_accepted.to_string(),
    );
    Ok(report)
}

/// Runs the seamless EM algorithm and applies label-switching correction.
pub fn run_em(
    dataset: &MediationDataset,
    family: Family,
    config: &EmConfig,
    interaction: bool,
) -> Result<FitReport> {
    let problem = EmProblem::new(dataset, Some(family), interaction, config.perfect_specificity)?;
    let outcome = problem.run(config)?;
    let mut report = finish_report(Method::Em, family, dataset, outcome)?;
    report.metadata.insert(
        "acceleration".into(),
        match config.acceleration {
            Acceleration::None => "none",
            Acceleration::Squarem => "squarem-s3",
        }
        .into(),
    );
    Ok(report)
}
