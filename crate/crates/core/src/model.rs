//! Data model and probability computations for the three mechanisms:
//! the true mediator given exposure and confounders, the observed mediator
//! given the true class and misclassification covariates, and the outcome.
//!
//! Latent and observed mediator classes are coded 1 and 2, with 2 the
//! reference. Inside every linear predictor the mediator enters as the
//! indicator `1{M = 1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glm::{
    self, dot, expit, fit_weighted_glm, log_expit, DesignMatrix, Family, OutcomeFamily,
};

/// Per-subject records `(X, C, Z, M*, Y)`. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MediationDataset {
    x: Vec<f64>,
    c_names: Vec<String>,
    c: Vec<Vec<f64>>,
    z_names: Vec<String>,
    z: Vec<Vec<f64>>,
    m_star: Vec<u8>,
    y: Vec<f64>,
}

impl MediationDataset {
    /// `c` and `z` are given column-wise with their names. `m_star` must be
    /// coded in {1, 2}.
    pub fn new(
        x: Vec<f64>,
        c: Vec<(String, Vec<f64>)>,
        z: Vec<(String, Vec<f64>)>,
        m_star: Vec<u8>,
        y: Vec<f64>,
    ) -> Result<Self> {
        let n = x.len();
        let (c_names, c): (Vec<_>, Vec<_>) = c.into_iter().unzip();
        let (z_names, z): (Vec<_>, Vec<_>) = z.into_iter().unzip();
        let check = |name: &str, len: usize| -> Result<()> {
            if len != n {
                Err(Error::Shape(format!("column '{name}' has length {len}, expected {n}")))
            } else {
                Ok(())
            }
        };
        for (name, col) in c_names.iter().zip(&c).chain(z_names.iter().zip(&z)) {
            check(name, col.len())?;
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite value in column '{name}' at row {i}"
                )));
            }
        }
        check("m_star", m_star.len())?;
        check("y", y.len())?;
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite exposure at row {i}")));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite outcome at row {i}")));
        }
        if let Some(i) = m_star.iter().position(|&m| m != 1 && m != 2) {
            return Err(Error::MediatorCode {
                row: i,
                value: m_star[i].to_string(),
            });
        }
        Ok(Self {
            x,
            c_names,
            c,
            z_names,
            z,
            m_star,
            y,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Number of confounders `p`.
    pub fn n_confounders(&self) -> usize {
        self.c.len()
    }

    /// Number of misclassification covariates `q`.
    pub fn n_misclass_covariates(&self) -> usize {
        self.z.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn m_star(&self) -> &[u8] {
        &self.m_star
    }

    pub fn confounder(&self, k: usize) -> &[f64] {
        &self.c[k]
    }

    pub fn misclass_covariate(&self, k: usize) -> &[f64] {
        &self.z[k]
    }

    pub fn confounder_names(&self) -> &[String] {
        &self.c_names
    }

    pub fn misclass_covariate_names(&self) -> &[String] {
        &self.z_names
    }

    /// The same subjects with the observed mediator replaced, e.g. by the
    /// true class when scoring simulations.
    pub fn with_mediator(&self, m: Vec<u8>) -> Result<Self> {
        Self::new(
            self.x.clone(),
            self.c_names.iter().cloned().zip(self.c.iter().cloned()).collect(),
            self.z_names.iter().cloned().zip(self.z.iter().cloned()).collect(),
            m,
            self.y.clone(),
        )
    }

    /// The same subjects with a different outcome vector.
    pub fn with_outcome(&self, y: Vec<f64>) -> Result<Self> {
        Self::new(
            self.x.clone(),
            self.c_names.iter().cloned().zip(self.c.iter().cloned()).collect(),
            self.z_names.iter().cloned().zip(self.z.iter().cloned()).collect(),
            self.m_star.clone(),
            y,
        )
    }

    /// Subset of rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let pick = |v: &[f64]| rows.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(
            pick(&self.x),
            self.c_names.iter().cloned().zip(self.c.iter().map(|c| pick(c))).collect(),
            self.z_names.iter().cloned().zip(self.z.iter().map(|z| pick(z))).collect(),
            rows.iter().map(|&i| self.m_star[i]).collect(),
            pick(&self.y),
        )
    }

    /// `1{M* = 1}` as a real vector.
    pub fn m_star_indicator(&self) -> Vec<f64> {
        self.m_star.iter().map(|&m| if m == 1 { 1.0 } else { 0.0 }).collect()
    }

    /// Design `(1, X, C)` of the true-mediator mechanism.
    pub fn mediator_design(&self) -> Result<DesignMatrix> {
        let mut names = vec!["x"];
        names.extend(self.c_names.iter().map(String::as_str));
        let mut cols: Vec<&[f64]> = vec![&self.x];
        cols.extend(self.c.iter().map(Vec::as_slice));
        DesignMatrix::with_intercept(&names, &cols)
    }

    /// Design `(1, Z)` of the observation mechanisms.
    pub fn observation_design(&self) -> Result<DesignMatrix> {
        let names: Vec<&str> = self.z_names.iter().map(String::as_str).collect();
        let cols: Vec<&[f64]> = self.z.iter().map(Vec::as_slice).collect();
        DesignMatrix::with_intercept(&names, &cols)
    }

    /// Outcome design `(1, X, C, m, X m)` with the mediator indicator given
    /// per subject.
    pub fn outcome_design(&self, indicator: &[f64], interaction: bool) -> Result<DesignMatrix> {
        let xm: Vec<f64> = self.x.iter().zip(indicator).map(|(x, m)| x * m).collect();
        let mut names = vec!["x"];
        names.extend(self.c_names.iter().map(String::as_str));
        names.push("m");
        let mut cols: Vec<&[f64]> = vec![&self.x];
        cols.extend(self.c.iter().map(Vec::as_slice));
        cols.push(indicator);
        if interaction {
            names.push("x:m");
            cols.push(&xm);
        }
        DesignMatrix::with_intercept(&names, &cols)
    }

    /// `beta_0 + beta_X x_i + beta_C C_i` per subject.
    pub(crate) fn mediator_eta(&self, beta: &[f64]) -> Vec<f64> {
        let mut eta: Vec<f64> = self.x.iter().map(|x| beta[0] + beta[1] * x).collect();
        for (k, col) in self.c.iter().enumerate() {
            let b = beta[2 + k];
            eta.iter_mut().zip(col).for_each(|(e, v)| *e += b * v);
        }
        eta
    }

    /// `gamma_{1j0} + gamma_{1jZ} Z_i` per subject.
    pub(crate) fn observation_eta(&self, gamma_row: &[f64]) -> Vec<f64> {
        let mut eta = vec![gamma_row[0]; self.len()];
        for (k, col) in self.z.iter().enumerate() {
            let g = gamma_row[1 + k];
            eta.iter_mut().zip(col).for_each(|(e, v)| *e += g * v);
        }
        eta
    }

    /// Outcome linear predictor with every subject placed in `class`.
    pub(crate) fn outcome_eta(&self, theta: &[f64], class: u8) -> Vec<f64> {
        let p = self.c.len();
        let ind = if class == 1 { 1.0 } else { 0.0 };
        let theta_m = theta[2 + p];
        let theta_xm = theta.get(3 + p).copied().unwrap_or(0.0);
        let mut eta: Vec<f64> = self
            .x
            .iter()
            .map(|x| theta[0] + theta[1] * x + ind * (theta_m + theta_xm * x))
            .collect();
        for (k, col) in self.c.iter().enumerate() {
            let t = theta[2 + k];
            eta.iter_mut().zip(col).for_each(|(e, v)| *e += t * v);
        }
        eta
    }
}

/// Parameters of the three mechanisms plus the Normal residual variance.
///
/// `theta` is laid out as `(theta_0, theta_X, theta_C.., theta_M[, theta_XM])`
/// and is empty when only the mediator and observation mechanisms are
/// modelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub beta: Vec<f64>,
    /// Row 0 governs sensitivity (`M = 1`), row 1 governs specificity.
    pub gamma: [Vec<f64>; 2],
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    /// Fixes `P(M* = 1 | M = 2) = 0`; `gamma[1]` is then ignored.
    #[serde(default)]
    pub perfect_specificity: bool,
}

impl ParameterSet {
    /// Number of confounders implied by `beta`.
    pub fn n_confounders(&self) -> usize {
        self.beta.len().saturating_sub(2)
    }

    pub fn has_outcome(&self) -> bool {
        !self.theta.is_empty()
    }

    pub fn interaction(&self) -> bool {
        self.theta.len() == self.beta.len() + 2
    }

    pub fn theta_x(&self) -> f64 {
        self.theta[1]
    }

    pub fn theta_m(&self) -> f64 {
        self.theta[self.beta.len()]
    }

    pub fn theta_xm(&self) -> f64 {
        self.theta.get(self.beta.len() + 1).copied().unwrap_or(0.0)
    }

    /// Checks shapes against `dataset` and finiteness of every entry.
    pub fn validate(&self, dataset: &MediationDataset) -> Result<()> {
        let p = dataset.n_confounders();
        let q = dataset.n_misclass_covariates();
        if self.beta.len() != 2 + p {
            return Err(Error::Shape(format!(
                "beta has {} entries, expected {}",
                self.beta.len(),
                2 + p
            )));
        }
        for row in &self.gamma {
            if row.len() != 1 + q {
                return Err(Error::Shape(format!(
                    "gamma row has {} entries, expected {}",
                    row.len(),
                    1 + q
                )));
            }
        }
        if !self.theta.is_empty() && self.theta.len() != 3 + p && self.theta.len() != 4 + p {
            return Err(Error::Shape(format!(
                "theta has {} entries, expected {} or {}",
                self.theta.len(),
                3 + p,
                4 + p
            )));
        }
        let all = self
            .beta
            .iter()
            .chain(&self.gamma[0])
            .chain(&self.gamma[1])
            .chain(&self.theta)
            .chain(self.sigma2.iter());
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite parameter".into()));
        }
        if let Some(s) = self.sigma2 {
            if s <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "residual variance must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// The parameterization obtained by exchanging the two latent class
    /// labels. The observed-data likelihood is unchanged.
    pub fn label_swapped(&self) -> Self {
        let beta = self.beta.iter().map(|b| -b).collect();
        let gamma = [self.gamma[1].clone(), self.gamma[0].clone()];
        let mut theta = self.theta.clone();
        if self.has_outcome() {
            let im = self.beta.len();
            let tm = theta[im];
            let txm = self.theta_xm();
            theta[0] += tm;
            theta[1] += txm;
            theta[im] = -tm;
            if self.interaction() {
                theta[im + 1] = -txm;
            }
        }
        Self {
            beta,
            gamma,
            theta,
            sigma2: self.sigma2,
            perfect_specificity: self.perfect_specificity,
        }
    }

    /// Flattens the free parameters. Normal variance enters on the log
    /// scale so that extrapolation keeps it positive.
    pub(crate) fn to_vector(&self) -> Vec<f64> {
        let mut v = self.beta.clone();
        v.extend_from_slice(&self.gamma[0]);
        if !self.perfect_specificity {
            v.extend_from_slice(&self.gamma[1]);
        }
        v.extend_from_slice(&self.theta);
        if let Some(s) = self.sigma2 {
            v.push(s.ln());
        }
        v
    }

    pub(crate) fn from_vector(&self, v: &[f64]) -> Self {
        let mut out = self.clone();
        let mut at = 0;
        let mut take = |dst: &mut Vec<f64>| {
            let len = dst.len();
            dst.copy_from_slice(&v[at..at + len]);
            at += len;
        };
        take(&mut out.beta);
        take(&mut out.gamma[0]);
        if !out.perfect_specificity {
            take(&mut out.gamma[1]);
        }
        take(&mut out.theta);
        if out.sigma2.is_some() {
            out.sigma2 = Some(v[at].exp());
        }
        out
    }

    /// Names aligned with `beta`, `gamma` rows and `theta`.
    pub fn parameter_names(&self, dataset: &MediationDataset) -> ParameterNames {
        let c = dataset.confounder_names();
        let z = dataset.misclass_covariate_names();
        let mut beta = vec!["beta_0".to_string(), "beta_x".to_string()];
        beta.extend(c.iter().map(|n| format!("beta_{n}")));
        let gamma_row = |j: usize| {
            let mut row = vec![format!("gamma{j}_0")];
            row.extend(z.iter().map(|n| format!("gamma{j}_{n}")));
            row
        };
        let mut theta = Vec::new();
        if self.has_outcome() {
            theta.push("theta_0".to_string());
            theta.push("theta_x".to_string());
            theta.extend(c.iter().map(|n| format!("theta_{n}")));
            theta.push("theta_m".to_string());
            if self.interaction() {
                theta.push("theta_xm".to_string());
            }
        }
        ParameterNames {
            beta,
            gamma: [gamma_row(1), gamma_row(2)],
            theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterNames {
    pub beta: Vec<String>,
    pub gamma: [Vec<String>; 2],
    pub theta: Vec<String>,
}

/// Coefficients of the naive analysis model that uses `M*` in place of `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveFit {
    pub beta_star: Vec<f64>,
    pub theta_star: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
}

impl NaiveFit {
    pub fn theta_m(&self) -> f64 {
        self.theta_star[self.beta_star.len()]
    }
}

/// Posterior class-membership probabilities, one `[r_1, r_2]` row per subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Responsibilities {
    rows: Vec<[f64; 2]>,
}

impl Responsibilities {
    pub fn from_rows(rows: Vec<[f64; 2]>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            let ok = r.iter().all(|v| (0.0..=1.0).contains(v)) && (r[0] + r[1] - 1.0).abs() <= 1e-12;
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "responsibility row {i} = {r:?} is not a probability vector"
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Rows from class-1 probabilities.
    pub fn from_class1(r1: &[f64]) -> Result<Self> {
        Self::from_rows(r1.iter().map(|&r| [r, 1.0 - r]).collect())
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn class1(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

fn check_shapes(params: &ParameterSet, dataset: &MediationDataset) -> Result<()> {
    params.validate(dataset)
}

/// `pi_{i1} = P(M_i = 1 | X_i, C_i)` per subject.
pub fn true_mediator_prob(params: &ParameterSet, dataset: &MediationDataset) -> Result<Vec<f64>> {
    check_shapes(params, dataset)?;
    Ok(dataset.mediator_eta(&params.beta).into_iter().map(expit).collect())
}

/// `pi*_{i1j} = P(M*_i = 1 | M_i = j, Z_i)` per subject.
pub fn observed_mediator_prob(
    params: &ParameterSet,
    dataset: &MediationDataset,
    latent_class: u8,
) -> Result<Vec<f64>> {
    check_shapes(params, dataset)?;
    match latent_class {
        1 => Ok(dataset.observation_eta(&params.gamma[0]).into_iter().map(expit).collect()),
        2 if params.perfect_specificity => Ok(vec![0.0; dataset.len()]),
        2 => Ok(dataset.observation_eta(&params.gamma[1]).into_iter().map(expit).collect()),
        other => Err(Error::InvalidInput(format!("latent class {other} is not 1 or 2"))),
    }
}

/// Average sensitivity and average specificity over the sample.
pub fn average_sens_spec(params: &ParameterSet, dataset: &MediationDataset) -> Result<(f64, f64)> {
    let n = dataset.len() as f64;
    let sens = observed_mediator_prob(params, dataset, 1)?.iter().sum::<f64>() / n;
    let spec = observed_mediator_prob(params, dataset, 2)?
        .iter()
        .map(|p| 1.0 - p)
        .sum::<f64>()
        / n;
    Ok((sens, spec))
}

pub(crate) fn outcome_family(params: &ParameterSet, family: Family) -> Result<OutcomeFamily> {
    match family {
        Family::Normal => params
            .sigma2
            .ok_or_else(|| Error::Config("Normal outcome requires sigma2 in the parameter set".into()))
            .and_then(|s| OutcomeFamily::new(Family::Normal, Some(s))),
        f => OutcomeFamily::new(f, None),
    }
}

/// `f(y_i | x_i, c_i, m_i; theta)` per subject for latent classes `m`.
pub fn outcome_density(
    params: &ParameterSet,
    dataset: &MediationDataset,
    m: &[u8],
    family: Family,
) -> Result<Vec<f64>> {
    check_shapes(params, dataset)?;
    if !params.has_outcome() {
        return Err(Error::Config("parameter set has no outcome coefficients".into()));
    }
    if m.len() != dataset.len() {
        return Err(Error::Shape(format!(
            "{} latent classes for {} subjects",
            m.len(),
            dataset.len()
        )));
    }
    if let Some(i) = m.iter().position(|&v| v != 1 && v != 2) {
        return Err(Error::InvalidInput(format!("latent class {} at row {i}", m[i])));
    }
    let of = outcome_family(params, family)?;
    let eta1 = dataset.outcome_eta(&params.theta, 1);
    let eta2 = dataset.outcome_eta(&params.theta, 2);
    Ok((0..dataset.len())
        .map(|i| {
            let eta = if m[i] == 1 { eta1[i] } else { eta2[i] };
            of.log_density(dataset.y[i], eta).exp()
        })
        .collect())
}

/// Per-subject log joint mass `log P(M = j, M*_i, y_i | ...)` for j = 1, 2.
/// The outcome factor is skipped when `family` is `None`.
pub(crate) fn class_log_joint(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Option<Family>,
) -> Result<Vec<[f64; 2]>> {
    check_shapes(params, dataset)?;
    let n = dataset.len();
    let med = dataset.mediator_eta(&params.beta);
    let obs1 = dataset.observation_eta(&params.gamma[0]);
    let obs2 = if params.perfect_specificity {
        None
    } else {
        Some(dataset.observation_eta(&params.gamma[1]))
    };
    let mut out: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let mut l1 = log_expit(med[i]);
            let mut l2 = log_expit(-med[i]);
            let observed_one = dataset.m_star[i] == 1;
            l1 += if observed_one { log_expit(obs1[i]) } else { log_expit(-obs1[i]) };
            l2 += match &obs2 {
                Some(o) if observed_one => log_expit(o[i]),
                Some(o) => log_expit(-o[i]),
                None if observed_one => f64::NEG_INFINITY,
                None => 0.0,
            };
            [l1, l2]
        })
        .collect();
    if let Some(family) = family {
        if !params.has_outcome() {
            return Err(Error::Config("parameter set has no outcome coefficients".into()));
        }
        let of = outcome_family(params, family)?;
        let eta1 = dataset.outcome_eta(&params.theta, 1);
        let eta2 = dataset.outcome_eta(&params.theta, 2);
        for (i, row) in out.iter_mut().enumerate() {
            row[0] += of.log_density(dataset.y[i], eta1[i]);
            row[1] += of.log_density(dataset.y[i], eta2[i]);
        }
    }
    for (i, row) in out.iter().enumerate() {
        if row.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::Evaluation(format!("non-finite class mass at row {i}")));
        }
        if row[0] == f64::NEG_INFINITY && row[1] == f64::NEG_INFINITY {
            return Err(Error::DegenerateSubject { row: i });
        }
    }
    Ok(out)
}

#[inline]
pub(crate) fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn loglik_from_joint(joint: &[[f64; 2]]) -> Result<f64> {
    let ll: f64 = joint.iter().map(|r| log_sum_exp2(r[0], r[1])).sum();
    if ll.is_finite() {
        Ok(ll)
    } else {
        Err(Error::Evaluation("non-finite observed-data log-likelihood".into()))
    }
}

/// Observed-data log-likelihood with the latent mediator marginalized out.
pub fn observed_data_loglik(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Family,
) -> Result<f64> {
    loglik_from_joint(&class_log_joint(params, dataset, Some(family))?)
}

/// Log-likelihood of `M*` given `(X, C, Z)` alone, marginalizing `M`.
pub fn mediator_only_loglik(params: &ParameterSet, dataset: &MediationDataset) -> Result<f64> {
    loglik_from_joint(&class_log_joint(params, dataset, None)?)
}

/// Responsibilities and log-likelihood from log joint masses.
pub(crate) fn posterior_from_joint(joint: &[[f64; 2]]) -> Result<(Responsibilities, f64)> {
    let ll = loglik_from_joint(joint)?;
    let rows = joint
        .iter()
        .map(|&[l1, l2]| {
            let r1 = expit(l1 - l2);
            [r1, 1.0 - r1]
        })
        .collect();
    Ok((Responsibilities { rows }, ll))
}

/// Fits the naive analysis model, treating `M*` as if it were `M`.
pub fn fit_naive(dataset: &MediationDataset, family: Family, interaction: bool) -> Result<NaiveFit> {
    let ones = vec![1.0; dataset.len()];
    let ind = dataset.m_star_indicator();
    let beta = fit_weighted_glm(&dataset.mediator_design()?, &ind, &ones, Family::Bernoulli)?;
    let design = dataset.outcome_design(&ind, interaction)?;
    let theta = fit_weighted_glm(&design, dataset.y(), &ones, family)?;
    Ok(NaiveFit {
        beta_star: beta.coefficients,
        theta_star: theta.coefficients,
        sigma2: theta.sigma2,
    })
}

/// Log-likelihood of the complete data when `m` holds the true classes.
pub fn complete_data_loglik(
    params: &ParameterSet,
    dataset: &MediationDataset,
    m: &[u8],
    family: Family,
) -> Result<f64> {
    let joint = class_log_joint(params, dataset, Some(family))?;
    if m.len() != joint.len() {
        return Err(Error::Shape("latent class vector length mismatch".into()));
    }
    Ok(joint.iter().zip(m).map(|(r, &j)| r[(j - 1) as usize]).sum())
}

/// Marginal mean `E[Y | x, c, m]` helper for effect oracles and tests.
pub fn outcome_mean(theta: &[f64], family: Family, x: f64, c: &[f64], m_indicator: f64) -> f64 {
    let p = c.len();
    let eta = theta[0]
        + theta[1] * x
        + dot(&theta[2..2 + p], c)
        + m_indicator * (theta[2 + p] + theta.get(3 + p).copied().unwrap_or(0.0) * x);
    glm::Family::inverse_link(family, eta)
}
