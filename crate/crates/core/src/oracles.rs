//! Independent reference computations for verifying the estimators.
//!
//! Nothing here calls the likelihood, GLM or effect code it is compared
//! against: posteriors are enumerated with plain (non-log) arithmetic, GLMs
//! are fitted by undamped Newton iterations on the analytic score and
//! Hessian with a dense LU solve, and causal effects are estimated by
//! simulating potential outcomes. Everything is slow and deterministic.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::effects::{EffectEstimates, EffectQuery, Scale};
use crate::error::{Error, Result};
use crate::glm::{DesignMatrix, Family};
use crate::model::{MediationDataset, ParameterSet, Responsibilities};

/// Largest data set the enumeration oracles accept.
pub const MAX_ORACLE_ROWS: usize = 1_000;
/// Smallest Monte-Carlo sample accepted.
pub const MIN_DRAWS: usize = 100_000;
const BLOCK: usize = 100_000;

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub oracle: String,
    pub reference: Vec<f64>,
    pub observed: Vec<f64>,
    /// Allowed absolute deviation per component.
    pub tolerance: Vec<f64>,
    pub passed: bool,
}

impl OracleReport {
    /// Compares componentwise; every tolerance must be positive.
    pub fn compare(
        oracle: impl Into<String>,
        reference: Vec<f64>,
        observed: Vec<f64>,
        tolerance: Vec<f64>,
    ) -> Result<Self> {
        if reference.len() != observed.len() || reference.len() != tolerance.len() {
            return Err(Error::Shape("oracle comparison lengths differ".into()));
        }
        if tolerance.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::InvalidInput("oracle tolerance must be positive".into()));
        }
        let passed = reference
            .iter()
            .zip(&observed)
            .zip(&tolerance)
            .all(|((r, o), t)| (r - o).abs() <= *t);
        Ok(Self {
            oracle: oracle.into(),
            reference,
            observed,
            tolerance,
            passed,
        })
    }

    pub fn uniform(
        oracle: impl Into<String>,
        reference: Vec<f64>,
        observed: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        let n = reference.len();
        Self::compare(oracle, reference, observed, vec![tolerance; n])
    }
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn linear(coefs: &[f64], values: &[f64]) -> f64 {
    coefs.iter().zip(values).map(|(a, b)| a * b).sum()
}

struct Subject {
    x: f64,
    c: Vec<f64>,
    z: Vec<f64>,
    m_star: u8,
    y: f64,
}

fn subject(dataset: &MediationDataset, i: usize) -> Subject {
    Subject {
        x: dataset.x()[i],
        c: (0..dataset.n_confounders()).map(|k| dataset.confounder(k)[i]).collect(),
        z: (0..dataset.n_misclass_covariates())
            .map(|k| dataset.misclass_covariate(k)[i])
            .collect(),
        m_star: dataset.m_star()[i],
        y: dataset.y()[i],
    }
}

fn factorial(k: f64) -> f64 {
    let mut out = 1.0;
    let mut j = 2.0;
    while j <= k {
        out *= j;
        j += 1.0;
    }
    out
}

fn outcome_pdf(family: Family, y: f64, eta: f64, sigma2: f64) -> f64 {
    match family {
        Family::Normal => {
            (-(y - eta) * (y - eta) / (2.0 * sigma2)).exp()
                / (2.0 * std::f64::consts::PI * sigma2).sqrt()
        }
        Family::Bernoulli => {
            let p = sigmoid(eta);
            if y == 1.0 {
                p
            } else {
                1.0 - p
            }
        }
        Family::Poisson => {
            let mu = eta.exp();
            mu.powf(y) * (-mu).exp() / factorial(y)
        }
    }
}

/// Joint mass of the observed data and each latent class, by direct
/// multiplication of the three mechanisms.
fn joint_masses(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Option<Family>,
) -> Result<Vec<[f64; 2]>> {
    if dataset.len() > MAX_ORACLE_ROWS {
        return Err(Error::InvalidInput(format!(
            "enumeration oracle limited to {MAX_ORACLE_ROWS} rows"
        )));
    }
    let p = dataset.n_confounders();
    let sigma2 = match family {
        Some(Family::Normal) => params
            .sigma2
            .ok_or_else(|| Error::InvalidInput("Normal outcome needs sigma2".into()))?,
        _ => 1.0,
    };
    let mut out = Vec::with_capacity(dataset.len());
    for i in 0..dataset.len() {
        let s = subject(dataset, i);
        let mut covs = vec![1.0, s.x];
        covs.extend(&s.c);
        let prior1 = sigmoid(linear(&params.beta, &covs));
        let mut zcovs = vec![1.0];
        zcovs.extend(&s.z);
        let mut masses = [0.0; 2];
        for (j, mass) in masses.iter_mut().enumerate() {
            let prior = if j == 0 { prior1 } else { 1.0 - prior1 };
            let q = if j == 1 && params.perfect_specificity {
                0.0
            } else {
                sigmoid(linear(&params.gamma[j], &zcovs))
            };
            let obs = if s.m_star == 1 { q } else { 1.0 - q };
            let out_term = match family {
                None => 1.0,
                Some(f) => {
                    let ind = if j == 0 { 1.0 } else { 0.0 };
                    let t = &params.theta;
                    let mut eta = t[0] + t[1] * s.x + linear(&t[2..2 + p], &s.c) + t[2 + p] * ind;
                    if t.len() == p + 4 {
                        eta += t[3 + p] * s.x * ind;
                    }
                    outcome_pdf(f, s.y, eta, sigma2)
                }
            };
            *mass = prior * obs * out_term;
        }
        if !(masses[0] + masses[1] > 0.0) || !(masses[0] + masses[1]).is_finite() {
            return Err(Error::Evaluation(format!(
                "joint mass underflows (or is not finite) at row {i}"
            )));
        }
        out.push(masses);
    }
    Ok(out)
}

/// Posterior class probabilities by Bayes' rule on the raw joint masses.
/// `family = None` ignores the outcome.
pub fn brute_force_posterior(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Option<Family>,
) -> Result<Responsibilities> {
    let rows = joint_masses(params, dataset, family)?
        .into_iter()
        .map(|[a, b]| [a / (a + b), b / (a + b)])
        .collect();
    Responsibilities::from_rows(rows)
}

/// Observed-data log-likelihood as the sum of log total masses.
pub fn brute_force_loglik(
    params: &ParameterSet,
    dataset: &MediationDataset,
    family: Option<Family>,
) -> Result<f64> {
    Ok(joint_masses(params, dataset, family)?
        .into_iter()
        .map(|[a, b]| (a + b).ln())
        .sum())
}

fn check_glm_inputs(design: &DesignMatrix, response: &[f64], weights: &[f64]) -> Result<()> {
    if response.len() != design.nrows() || weights.len() != design.nrows() {
        return Err(Error::Shape("response/weights do not match the design".into()));
    }
    if design.nrows() > 100 * MAX_ORACLE_ROWS {
        return Err(Error::InvalidInput("GLM oracle is for test-scale inputs".into()));
    }
    Ok(())
}

fn mean_and_variance_fn(family: Family, eta: f64) -> (f64, f64) {
    match family {
        Family::Normal => (eta, 1.0),
        Family::Bernoulli => {
            let p = sigmoid(eta);
            (p, p * (1.0 - p))
        }
        Family::Poisson => {
            let mu = eta.exp();
            (mu, mu)
        }
    }
}

/// Score of the weighted canonical-link log-likelihood.
pub fn glm_score(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
    coefficients: &[f64],
) -> Result<Vec<f64>> {
    check_glm_inputs(design, response, weights)?;
    let k = design.ncols();
    let mut g = vec![0.0; k];
    for i in 0..design.nrows() {
        let row = design.row(i);
        let (mu, _) = mean_and_variance_fn(family, linear(coefficients, row));
        for a in 0..k {
            g[a] += weights[i] * (response[i] - mu) * row[a];
        }
    }
    Ok(g)
}

fn information(design: &DesignMatrix, weights: &[f64], family: Family, beta: &[f64]) -> DMatrix<f64> {
    let k = design.ncols();
    let mut h = DMatrix::<f64>::zeros(k, k);
    for i in 0..design.nrows() {
        let row = design.row(i);
        let (_, v) = mean_and_variance_fn(family, linear(beta, row));
        for a in 0..k {
            for b in 0..k {
                h[(a, b)] += weights[i] * v * row[a] * row[b];
            }
        }
    }
    h
}

/// Maximum-likelihood coefficients by plain Newton-Raphson from zero (the
/// log of the weighted mean for a Poisson intercept).
pub fn independent_newton_glm(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
) -> Result<Vec<f64>> {
    check_glm_inputs(design, response, weights)?;
    let k = design.ncols();
    let mut beta = vec![0.0; k];
    if family == Family::Poisson {
        let wsum: f64 = weights.iter().sum();
        let ybar = response.iter().zip(weights).map(|(y, w)| y * w).sum::<f64>() / wsum;
        beta[0] = ybar.max(1e-8).ln();
    }
    for _ in 0..200 {
        let g = glm_score(design, response, weights, family, &beta)?;
        let h = information(design, weights, family, &beta);
        let step = h
            .lu()
            .solve(&DVector::from_vec(g))
            .ok_or_else(|| Error::Evaluation("singular information matrix in Newton oracle".into()))?;
        let mut size: f64 = 0.0;
        for a in 0..k {
            beta[a] += step[a];
            size = size.max(step[a].abs() / (1.0 + beta[a].abs()));
        }
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Evaluation("Newton oracle diverged".into()));
        }
        if size < 1e-14 {
            return Ok(beta);
        }
    }
    let g = glm_score(design, response, weights, family, &beta)?;
    if g.iter().all(|v| v.abs() < 1e-9) {
        Ok(beta)
    } else {
        Err(Error::Evaluation("Newton oracle did not converge in 200 steps".into()))
    }
}

/// `(X'WX)^{-1} X'Wy` through a dense LU factorization.
pub fn closed_form_wls(design: &DesignMatrix, response: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    check_glm_inputs(design, response, weights)?;
    let k = design.ncols();
    let h = information(design, weights, Family::Normal, &vec![0.0; k]);
    let mut rhs = DVector::<f64>::zeros(k);
    for i in 0..design.nrows() {
        for (a, v) in design.row(i).iter().enumerate() {
            rhs[a] += weights[i] * v * response[i];
        }
    }
    let sol = h
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Evaluation("singular cross-product matrix".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Monte-Carlo effect estimates with delta-method standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEffects {
    pub estimates: EffectEstimates,
    /// Standard errors of `cde`, `nde`, `nie` on the reported scale.
    pub se: [f64; 3],
    pub draws: usize,
}

/// Counterfactual means: Y(x, m), Y(x_ref, m), Y(x, M(x_ref)),
/// Y(x_ref, M(x_ref)), Y(x, M(x)).
const TERMS: usize = 5;

/// Simulates the mediator under both exposure levels and the potential
/// outcomes. The outcome family follows the scale: Normal (with `sigma2`,
/// default 1) for differences, Bernoulli for odds ratios, Poisson for
/// risk ratios. Draws are split into blocks of 100,000, block `b` using
/// stream `b` of the seeded generator.
pub fn monte_carlo_effects(
    params: &ParameterSet,
    query: &EffectQuery,
    draws: usize,
    seed: u64,
) -> Result<McEffects> {
    if draws < MIN_DRAWS {
        return Err(Error::Config(format!("need at least {MIN_DRAWS} draws")));
    }
    let p = params.beta.len().saturating_sub(2);
    if query.c.len() != p || params.theta.len() < p + 3 {
        return Err(Error::Shape("query/parameter dimensions disagree".into()));
    }
    let family = match query.scale {
        Scale::Difference => Family::Normal,
        Scale::OddsRatio => Family::Bernoulli,
        Scale::RiskRatio => Family::Poisson,
    };
    let sd = params.sigma2.unwrap_or(1.0).sqrt();
    let t = &params.theta;
    let txm = if t.len() == p + 4 { t[3 + p] } else { 0.0 };
    let eta_y = |x: f64, m: f64| t[0] + t[1] * x + linear(&t[2..2 + p], &query.c) + m * (t[2 + p] + txm * x);
    let mut covs = vec![1.0, query.x_ref];
    covs.extend(&query.c);
    let pm_ref = sigmoid(linear(&params.beta, &covs));
    covs[1] = query.x;
    let pm_new = sigmoid(linear(&params.beta, &covs));
    let m_ctrl = f64::from(query.m);

    let mut sum = [0.0; TERMS];
    let mut cross = [[0.0; TERMS]; TERMS];
    let blocks = draws.div_ceil(BLOCK);
    for b in 0..blocks {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let size = BLOCK.min(draws - b * BLOCK);
        for _ in 0..size {
            let m_ref = f64::from(u8::from(rng.random::<f64>() < pm_ref));
            let m_new = f64::from(u8::from(rng.random::<f64>() < pm_new));
            let etas = [
                eta_y(query.x, m_ctrl),
                eta_y(query.x_ref, m_ctrl),
                eta_y(query.x, m_ref),
                eta_y(query.x_ref, m_ref),
                eta_y(query.x, m_new),
            ];
            let mut v = [0.0; TERMS];
            for (out, eta) in v.iter_mut().zip(etas) {
                *out = match family {
                    Family::Normal => eta + sd * rng.sample::<f64, _>(StandardNormal),
                    Family::Bernoulli => f64::from(u8::from(rng.random::<f64>() < sigmoid(eta))),
                    Family::Poisson => Poisson::new(eta.exp())
                        .map_err(|e| Error::Evaluation(format!("Poisson mean: {e}")))?
                        .sample(&mut rng),
                };
            }
            for a in 0..TERMS {
                sum[a] += v[a];
                for bb in 0..TERMS {
                    cross[a][bb] += v[a] * v[bb];
                }
            }
        }
    }
    let n = draws as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let cov = |a: usize, b: usize| (cross[a][b] / n - mean[a] * mean[b]) * n / (n - 1.0);

    // Contrast of terms (i, j) and its standard error on the natural scale.
    let contrast = |i: usize, j: usize| -> (f64, f64) {
        let (m1, m0) = (mean[i], mean[j]);
        match query.scale {
            Scale::Difference => {
                let var = cov(i, i) + cov(j, j) - 2.0 * cov(i, j);
                (m1 - m0, (var / n).sqrt())
            }
            Scale::RiskRatio => {
                let (g1, g0) = (1.0 / m1, -1.0 / m0);
                let var = g1 * g1 * cov(i, i) + g0 * g0 * cov(j, j) + 2.0 * g1 * g0 * cov(i, j);
                let rr = m1 / m0;
                (rr, rr * (var / n).sqrt())
            }
            Scale::OddsRatio => {
                let (g1, g0) = (1.0 / (m1 * (1.0 - m1)), -1.0 / (m0 * (1.0 - m0)));
                let var = g1 * g1 * cov(i, i) + g0 * g0 * cov(j, j) + 2.0 * g1 * g0 * cov(i, j);
                let or = (m1 / (1.0 - m1)) / (m0 / (1.0 - m0));
                (or, or * (var / n).sqrt())
            }
        }
    };
    let (cde, se_cde) = contrast(0, 1);
    let (nde, se_nde) = contrast(2, 3);
    let (nie, se_nie) = contrast(4, 2);
    let estimates = EffectEstimates {
        cde,
        nde,
        nie,
        scale: query.scale,
    };
    if [cde, nde, nie, se_cde, se_nde, se_nie].iter().any(|v| !v.is_finite()) {
        return Err(Error::Evaluation(
            "Monte-Carlo contrast is not finite (no events simulated?)".into(),
        ));
    }
    Ok(McEffects {
        estimates,
        se: [se_cde, se_nde, se_nie],
        draws,
    })
}

/// A small random GLM problem: intercept plus `k - 1` covariates, response
/// drawn from the family, weights in [0.5, 2).
pub fn glm_fixture(family: Family, n: usize, k: usize, seed: u64) -> Result<(DesignMatrix, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let coefs: Vec<f64> = (0..k).map(|_| rng.random_range(-0.8..0.8)).collect();
    let mut data = Vec::with_capacity(n * k);
    let mut y = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = vec![1.0];
        row.extend((1..k).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let eta = linear(&coefs, &row);
        y.push(match family {
            Family::Normal => eta + rng.sample::<f64, _>(StandardNormal),
            Family::Bernoulli => f64::from(u8::from(rng.random::<f64>() < sigmoid(eta))),
            Family::Poisson => Poisson::new(eta.exp()).expect("finite mean").sample(&mut rng),
        });
        w.push(rng.random_range(0.5..2.0));
        data.extend(row);
    }
    let names = (0..k)
        .map(|j| if j == 0 { "(Intercept)".to_string() } else { format!("v{j}") })
        .collect();
    Ok((DesignMatrix::from_row_major(names, n, data)?, y, w))
}

/// A small mediation data set with arbitrary (not necessarily fitted)
/// parameters of matching shape.
pub fn mediation_fixture(
    family: Family,
    n: usize,
    interaction: bool,
    seed: u64,
) -> Result<(MediationDataset, ParameterSet)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let mut x = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    let mut m_star = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        x.push(u(-1.5, 1.5));
        c.push(u(0.0, 2.0));
        z.push(u(0.0, 2.0));
        // Alternate so neither class is empty.
        m_star.push(if i % 2 == 0 || u(0.0, 1.0) < 0.3 { 1 } else { 2 });
        y.push(match family {
            Family::Normal => u(-2.0, 3.0),
            Family::Bernoulli => f64::from(u8::from(u(0.0, 1.0) < 0.4)),
            Family::Poisson => u(0.0, 4.0).floor(),
        });
    }
    let mut theta = vec![u(-0.5, 0.5), u(-1.0, 1.0), u(-0.5, 0.5), u(-1.5, 1.5)];
    if interaction {
        theta.push(u(-0.5, 0.5));
    }
    let params = ParameterSet {
        beta: vec![u(-1.0, 1.0), u(-1.0, 1.0), u(-1.0, 1.0)],
        gamma: [vec![u(0.5, 2.0), u(-1.0, 1.0)], vec![u(-2.0, -0.5), u(-1.0, 1.0)]],
        theta,
        sigma2: (family == Family::Normal).then(|| u(0.5, 2.0)),
        perfect_specificity: false,
    };
    let dataset = MediationDataset::new(
        x,
        vec![("c1".into(), c)],
        vec![("z1".into(), z)],
        m_star,
        y,
    )?;
    Ok((dataset, params))
}

const FAMILIES: [Family; 3] = [Family::Normal, Family::Bernoulli, Family::Poisson];

/// The fixed oracle suite behind `--self-check`.
pub fn run_self_check() -> Result<Vec<OracleReport>> {
    use crate::effects::{effects, EffectModel};
    use crate::em::e_step;
    use crate::glm::fit_weighted_glm;
    use crate::model::observed_data_loglik;

    let mut reports = Vec::new();
    for (s, family) in FAMILIES.into_iter().enumerate() {
        let (d, p) = mediation_fixture(family, 5, s == 2, 100 + s as u64)?;
        let reference = brute_force_posterior(&p, &d, Some(family))?.class1();
        let observed = e_step(&p, &d, family)?.class1();
        reports.push(OracleReport::uniform(
            format!("posterior/{family}"),
            reference,
            observed,
            1e-12,
        )?);
        let (d, p) = mediation_fixture(family, 6, false, 200 + s as u64)?;
        reports.push(OracleReport::uniform(
            format!("loglik/{family}"),
            vec![brute_force_loglik(&p, &d, Some(family))?],
            vec![observed_data_loglik(&p, &d, family)?],
            1e-10,
        )?);
        let (design, y, w) = glm_fixture(family, 60, 3, 300 + s as u64)?;
        reports.push(OracleReport::uniform(
            format!("glm/{family}"),
            independent_newton_glm(&design, &y, &w, family)?,
            fit_weighted_glm(&design, &y, &w, family)?.coefficients,
            1e-8,
        )?);
    }
    let (design, y, w) = glm_fixture(Family::Normal, 40, 4, 400)?;
    reports.push(OracleReport::uniform(
        "wls/closed-form",
        closed_form_wls(&design, &y, &w)?,
        fit_weighted_glm(&design, &y, &w, Family::Normal)?.coefficients,
        1e-10,
    )?);

    for (s, scale) in [Scale::Difference, Scale::OddsRatio, Scale::RiskRatio].into_iter().enumerate() {
        let theta0 = if scale == Scale::Difference { 1.0 } else { -6.0 };
        let params = ParameterSet {
            beta: vec![1.0, -2.0, -2.5],
            gamma: [vec![0.0], vec![0.0]],
            theta: vec![theta0, 1.5, -0.2, -2.0, 0.5],
            sigma2: Some(1.0),
            perfect_specificity: false,
        };
        let query = EffectQuery {
            x: 1.0,
            x_ref: 0.0,
            c: vec![0.0],
            m: 1,
            scale,
        };
        let mc = monte_carlo_effects(&params, &query, 200_000, 500 + s as u64)?;
        let formula = effects(&EffectModel::from(&params), &query)?;
        reports.push(OracleReport::compare(
            format!("effects/{}", scale.as_str()),
            vec![mc.estimates.cde, mc.estimates.nde, mc.estimates.nie],
            vec![formula.cde, formula.nde, formula.nie],
            mc.se.iter().map(|s| 3.0 * s).collect(),
        )?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_fixture_gives_half() {
        let (d, mut p) = mediation_fixture(Family::Bernoulli, 5, false, 1).unwrap();
        p.beta = vec![0.0; 3];
        p.gamma = [vec![0.0, 0.0], vec![0.0, 0.0]];
        p.theta = vec![0.2, 0.1, 0.3, 0.0];
        for r in brute_force_posterior(&p, &d, Some(Family::Bernoulli)).unwrap().rows() {
            assert_eq!(r[0], 0.5);
        }
    }

    #[test]
    fn degenerate_class_gives_hard_assignment() {
        let (d, mut p) = mediation_fixture(Family::Bernoulli, 5, false, 2).unwrap();
        p.perfect_specificity = true;
        let r = brute_force_posterior(&p, &d, None).unwrap();
        for (row, &m) in r.rows().iter().zip(d.m_star()) {
            if m == 1 {
                assert_eq!(row[0], 1.0);
            }
        }
    }

    #[test]
    fn underflow_is_reported() {
        let (d, mut p) = mediation_fixture(Family::Normal, 5, false, 3).unwrap();
        p.sigma2 = Some(1e-300);
        assert!(brute_force_posterior(&p, &d, Some(Family::Normal)).is_err());
    }

    #[test]
    fn newton_recovers_exact_linear_fit() {
        let design = DesignMatrix::with_intercept(&["a"], &[&[0.0, 1.0, 2.0, 3.0]]).unwrap();
        let y = [1.0, 3.0, 5.0, 7.0];
        let beta = independent_newton_glm(&design, &y, &[1.0; 4], Family::Normal).unwrap();
        assert!((beta[0] - 1.0).abs() < 1e-12 && (beta[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(OracleReport::uniform("x", vec![1.0], vec![1.0], 0.0).is_err());
    }

    #[test]
    fn too_few_draws_rejected() {
        let params = ParameterSet {
            beta: vec![0.0, 0.0, 0.0],
            gamma: [vec![0.0], vec![0.0]],
            theta: vec![0.0, 0.0, 0.0, 0.0],
            sigma2: None,
            perfect_specificity: false,
        };
        let q = EffectQuery {
            x: 1.0,
            x_ref: 0.0,
            c: vec![0.0],
            m: 0,
            scale: Scale::Difference,
        };
        assert!(monte_carlo_effects(&params, &q, 10, 1).is_err());
    }
}
