//! Weighted GLM fitting by iteratively reweighted least squares.
//!
//! Three families are supported: Normal with identity link, Bernoulli with
//! logit link, and Poisson with log link. Every estimation method in the
//! crate reduces its maximization steps to calls into this module.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Logistic coefficients beyond this magnitude are reported as separation.
pub const SEPARATION_BOUND: f64 = 30.0;

/// Relative pivot below which a design column is declared aliased.
const ALIAS_TOLERANCE: f64 = 1e-10;

/// Dense row-major design matrix whose first column is the intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DesignMatrix {
    /// Builds a design from covariate columns, prepending an intercept
    /// column named `(Intercept)`.
    pub fn with_intercept(names: &[&str], columns: &[&[f64]]) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::Shape(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let nrows = columns.first().map_or(0, |c| c.len());
        if let Some(bad) = columns.iter().position(|c| c.len() != nrows) {
            return Err(Error::Shape(format!(
                "column '{}' has length {}, expected {nrows}",
                names[bad],
                columns[bad].len()
            )));
        }
        let mut all_names = Vec::with_capacity(names.len() + 1);
        all_names.push("(Intercept)".to_string());
        all_names.extend(names.iter().map(|s| s.to_string()));
        let ncols = columns.len() + 1;
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            data.push(1.0);
            data.extend(columns.iter().map(|c| c[i]));
        }
        Self::from_row_major(all_names, nrows, data)
    }

    /// Wraps row-major data. The first column must be all ones.
    pub fn from_row_major(names: Vec<String>, nrows: usize, data: Vec<f64>) -> Result<Self> {
        let ncols = names.len();
        if ncols == 0 {
            return Err(Error::Shape("design needs at least one column".into()));
        }
        if data.len() != nrows * ncols {
            return Err(Error::Shape(format!(
                "data length {} is not {nrows} x {ncols}",
                data.len()
            )));
        }
        if nrows < ncols {
            return Err(Error::Shape(format!(
                "{nrows} rows cannot identify {ncols} coefficients"
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite design entry at row {}, column '{}'",
                pos / ncols,
                names[pos % ncols]
            )));
        }
        if (0..nrows).any(|i| data[i * ncols] != 1.0) {
            return Err(Error::InvalidInput(
                "first design column must be the all-ones intercept".into(),
            ));
        }
        Ok(Self {
            names,
            nrows,
            ncols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.nrows).map(|i| self.data[i * self.ncols + j]).collect()
    }

    /// Linear predictor `X b`.
    pub fn linear_predictor(&self, coefficients: &[f64]) -> Vec<f64> {
        debug_assert_eq!(coefficients.len(), self.ncols);
        self.data
            .chunks_exact(self.ncols)
            .map(|row| dot(row, coefficients))
            .collect()
    }

    /// Keeps only the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * self.ncols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self::from_row_major(self.names.clone(), rows.len(), data)
    }

    /// Stacks `other` underneath `self`. Column names must agree.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.names != other.names {
            return Err(Error::Shape("cannot stack designs with different columns".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::from_row_major(self.names.clone(), self.nrows + other.nrows, data)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Family tag used for fitting. Normal variance is profiled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Normal,
    Bernoulli,
    Poisson,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::Bernoulli => "bernoulli",
            Family::Poisson => "poisson",
        }
    }

    #[inline]
    pub fn inverse_link(self, eta: f64) -> f64 {
        match self {
            Family::Normal => eta,
            Family::Bernoulli => expit(eta),
            Family::Poisson => eta.exp(),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "gaussian" => Ok(Family::Normal),
            "bernoulli" | "binomial" | "binary" => Ok(Family::Bernoulli),
            "poisson" => Ok(Family::Poisson),
            other => Err(Error::Config(format!("unknown family '{other}'"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fully specified outcome distribution, carrying the Normal variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum OutcomeFamily {
    Normal { sigma2: f64 },
    Bernoulli,
    Poisson,
}

impl OutcomeFamily {
    pub fn new(family: Family, sigma2: Option<f64>) -> Result<Self> {
        match (family, sigma2) {
            (Family::Normal, Some(s)) if s.is_finite() && s > 0.0 => {
                Ok(OutcomeFamily::Normal { sigma2: s })
            }
            (Family::Normal, Some(s)) => Err(Error::Config(format!(
                "Normal residual variance must be finite and positive, got {s}"
            ))),
            (Family::Normal, None) => {
                Err(Error::Config("Normal family requires a residual variance".into()))
            }
            (Family::Bernoulli, None) => Ok(OutcomeFamily::Bernoulli),
            (Family::Poisson, None) => Ok(OutcomeFamily::Poisson),
            (f, Some(_)) => Err(Error::Config(format!(
                "residual variance given for the {f} family"
            ))),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            OutcomeFamily::Normal { .. } => Family::Normal,
            OutcomeFamily::Bernoulli => Family::Bernoulli,
            OutcomeFamily::Poisson => Family::Poisson,
        }
    }

    /// `log f(y | eta)` for one observation.
    #[inline]
    pub fn log_density(&self, y: f64, eta: f64) -> f64 {
        match *self {
            OutcomeFamily::Normal { sigma2 } => {
                let r = y - eta;
                -0.5 * (LN_2PI + sigma2.ln()) - r * r / (2.0 * sigma2)
            }
            OutcomeFamily::Bernoulli => y * eta - softplus(eta),
            OutcomeFamily::Poisson => y * eta - eta.exp() - ln_gamma(y + 1.0),
        }
    }
}

/// `log(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[inline]
pub fn expit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `log(expit(x))` without overflow.
#[inline]
pub fn log_expit(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlmWarning {
    /// Logistic coefficients exceeded [`SEPARATION_BOUND`] in magnitude.
    Separation { columns: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlmFit {
    pub coefficients: Vec<f64>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Profiled residual variance (Normal family only).
    pub sigma2: Option<f64>,
    pub warnings: Vec<GlmWarning>,
}

#[derive(Debug, Clone)]
pub struct GlmOptions {
    pub max_iterations: usize,
    pub coefficient_tolerance: f64,
    pub relative_loglik_tolerance: f64,
    /// Warm start for the coefficient vector.
    pub start: Option<Vec<f64>>,
    /// Accept Bernoulli responses in [0, 1] rather than {0, 1}. Collapsed
    /// duplicated-row fits use this.
    pub fractional_response: bool,
}

impl Default for GlmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            coefficient_tolerance: 1e-8,
            relative_loglik_tolerance: 1e-10,
            start: None,
            fractional_response: false,
        }
    }
}

/// Maximizes the weighted log-likelihood with default options.
pub fn fit_weighted_glm(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
) -> Result<GlmFit> {
    fit_weighted_glm_with(design, response, weights, family, &GlmOptions::default())
}

pub fn fit_weighted_glm_with(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
    options: &GlmOptions,
) -> Result<GlmFit> {
    validate(design, response, weights, family, options.fractional_response)?;
    if let Some(start) = &options.start {
        if start.len() != design.ncols() {
            return Err(Error::Shape(format!(
                "start has {} coefficients, design has {} columns",
                start.len(),
                design.ncols()
            )));
        }
    }
    match family {
        Family::Normal => fit_normal(design, response, weights),
        Family::Bernoulli | Family::Poisson => irls(design, response, weights, family, options),
    }
}

fn validate(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
    fractional: bool,
) -> Result<()> {
    let n = design.nrows();
    if response.len() != n || weights.len() != n {
        return Err(Error::Shape(format!(
            "design has {n} rows but response has {} and weights {}",
            response.len(),
            weights.len()
        )));
    }
    if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "weight at row {i} is {} (must be finite and nonnegative)",
            weights[i]
        )));
    }
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::InvalidInput("all weights are zero".into()));
    }
    for (i, &y) in response.iter().enumerate() {
        let ok = match family {
            Family::Normal => y.is_finite(),
            Family::Bernoulli if fractional => (0.0..=1.0).contains(&y),
            Family::Bernoulli => y == 0.0 || y == 1.0,
            Family::Poisson => y.is_finite() && y >= 0.0 && y.fract() == 0.0,
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "response {y} at row {i} is invalid for the {family} family"
            )));
        }
    }
    Ok(())
}

fn fit_normal(design: &DesignMatrix, response: &[f64], weights: &[f64]) -> Result<GlmFit> {
    let coefficients = weighted_least_squares(design, response, weights)?;
    let total: f64 = weights.iter().sum();
    let rss: f64 = (0..design.nrows())
        .map(|i| {
            let r = response[i] - dot(design.row(i), &coefficients);
            weights[i] * r * r
        })
        .sum();
    // Exact fits have zero RSS; keep the variance strictly positive.
    let sigma2 = (rss / total).max(f64::MIN_POSITIVE);
    let log_likelihood = -0.5 * total * (LN_2PI + sigma2.ln()) - 0.5 * rss / sigma2;
    Ok(GlmFit {
        coefficients,
        log_likelihood,
        iterations: 1,
        converged: true,
        sigma2: Some(sigma2),
        warnings: Vec::new(),
    })
}

/// Solves the weighted normal equations `X'WX b = X'Wy`.
pub fn weighted_least_squares(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
) -> Result<Vec<f64>> {
    let k = design.ncols();
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for i in 0..design.nrows() {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        accumulate(&mut gram, &mut rhs, design.row(i), w, w * response[i]);
    }
    symmetrize(&mut gram, k);
    solve_spd(&gram, &rhs, design.names())
}

#[inline]
fn accumulate(gram: &mut [f64], rhs: &mut [f64], row: &[f64], w: f64, wz: f64) {
    let k = row.len();
    for a in 0..k {
        let wa = w * row[a];
        rhs[a] += wz * row[a];
        let base = a * k;
        for b in 0..=a {
            gram[base + b] += wa * row[b];
        }
    }
}

fn symmetrize(gram: &mut [f64], k: usize) {
    for a in 0..k {
        for b in 0..a {
            gram[b * k + a] = gram[a * k + b];
        }
    }
}

/// Cholesky solve of a symmetric positive-definite system. Columns whose
/// scaled pivot drops below [`ALIAS_TOLERANCE`] are collected and reported.
pub(crate) fn solve_spd(gram: &[f64], rhs: &[f64], names: &[String]) -> Result<Vec<f64>> {
    let k = rhs.len();
    let scale: Vec<f64> = (0..k)
        .map(|j| {
            let d = gram[j * k + j];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut l = vec![0.0; k * k];
    let mut aliased = Vec::new();
    for j in 0..k {
        let mut diag = if scale[j] > 0.0 {
            gram[j * k + j] * scale[j] * scale[j]
        } else {
            0.0
        };
        for p in 0..j {
            diag -= l[j * k + p] * l[j * k + p];
        }
        if diag <= ALIAS_TOLERANCE {
            aliased.push(names[j].clone());
            continue;
        }
        let ljj = diag.sqrt();
        l[j * k + j] = ljj;
        for i in (j + 1)..k {
            let mut s = gram[i * k + j] * scale[i] * scale[j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            l[i * k + j] = s / ljj;
        }
    }
    if !aliased.is_empty() {
        return Err(Error::RankDeficient { columns: aliased });
    }
    // Solve (D A D) u = D rhs, then b = D u.
    let mut u: Vec<f64> = (0..k).map(|j| rhs[j] * scale[j]).collect();
    for i in 0..k {
        let mut s = u[i];
        for p in 0..i {
            s -= l[i * k + p] * u[p];
        }
        u[i] = s / l[i * k + i];
    }
    for i in (0..k).rev() {
        let mut s = u[i];
        for p in (i + 1)..k {
            s -= l[p * k + i] * u[p];
        }
        u[i] = s / l[i * k + i];
    }
    Ok(u.iter().zip(&scale).map(|(v, s)| v * s).collect())
}

fn irls(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: Family,
    options: &GlmOptions,
) -> Result<GlmFit> {
    let n = design.nrows();
    let k = design.ncols();
    let mut beta = match &options.start {
        Some(start) => start.clone(),
        None => {
            let mut b = vec![0.0; k];
            let total: f64 = weights.iter().sum();
            let mean = weights.iter().zip(response).map(|(w, y)| w * y).sum::<f64>() / total;
            b[0] = match family {
                Family::Bernoulli => logit(mean.clamp(1e-6, 1.0 - 1e-6)),
                Family::Poisson => mean.max(1e-6).ln(),
                Family::Normal => mean,
            };
            b
        }
    };
    // Poisson normalizing constants do not depend on the coefficients.
    let constant: f64 = match family {
        Family::Poisson => response
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(&y, &w)| w * ln_gamma(y + 1.0))
            .sum(),
        _ => 0.0,
    };
    let mut mu = vec![0.0; n];
    let mut eta = design.linear_predictor(&beta);
    let mut ll = evaluate(&eta, response, weights, family, &mut mu) - constant;
    if !ll.is_finite() {
        // Fall back to the null start when a warm start is unusable.
        beta = vec![0.0; k];
        eta = vec![0.0; n];
        ll = evaluate(&eta, response, weights, family, &mut mu) - constant;
    }

    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    let mut cand_mu = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        gram.iter_mut().for_each(|v| *v = 0.0);
        rhs.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let w = weights[i];
            if w == 0.0 {
                continue;
            }
            // Working weight and working response for the canonical links.
            let m = mu[i];
            let v = match family {
                Family::Bernoulli => (m * (1.0 - m)).max(1e-12),
                _ => m.max(1e-12),
            };
            let ww = w * v;
            accumulate(&mut gram, &mut rhs, design.row(i), ww, ww * eta[i] + w * (response[i] - m));
        }
        symmetrize(&mut gram, k);
        let target = solve_spd(&gram, &rhs, design.names())?;

        // Step-halving until the likelihood does not decrease.
        let mut step = 1.0;
        let mut candidate = target.clone();
        let mut cand_eta = design.linear_predictor(&candidate);
        let mut cand_ll = evaluate(&cand_eta, response, weights, family, &mut cand_mu) - constant;
        let mut halvings = 0;
        while !(cand_ll.is_finite() && cand_ll >= ll - 1e-12 * ll.abs().max(1.0)) && halvings < 40 {
            step *= 0.5;
            halvings += 1;
            for j in 0..k {
                candidate[j] = beta[j] + step * (target[j] - beta[j]);
            }
            cand_eta = design.linear_predictor(&candidate);
            cand_ll = evaluate(&cand_eta, response, weights, family, &mut cand_mu) - constant;
        }
        if !cand_ll.is_finite() {
            return Err(Error::Evaluation(
                "IRLS produced a non-finite log-likelihood".into(),
            ));
        }
        let max_change = candidate
            .iter()
            .zip(&beta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let rel_change = (cand_ll - ll).abs() / (ll.abs() + 0.1);
        beta = candidate;
        eta = cand_eta;
        ll = cand_ll;
        std::mem::swap(&mut mu, &mut cand_mu);
        if max_change < options.coefficient_tolerance
            || rel_change < options.relative_loglik_tolerance
        {
            converged = true;
            break;
        }
    }

    let mut warnings = Vec::new();
    if family == Family::Bernoulli {
        let columns: Vec<String> = beta
            .iter()
            .zip(design.names())
            .filter(|(b, _)| b.abs() > SEPARATION_BOUND)
            .map(|(_, name)| name.clone())
            .collect();
        if !columns.is_empty() {
            warnings.push(GlmWarning::Separation { columns });
        }
    }
    Ok(GlmFit {
        coefficients: beta,
        log_likelihood: ll,
        iterations,
        converged,
        sigma2: None,
        warnings,
    })
}

/// Weighted log-likelihood without Poisson normalizing constants; fills
/// `mu` with the fitted means.
fn evaluate(eta: &[f64], response: &[f64], weights: &[f64], family: Family, mu: &mut [f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..eta.len() {
        let t = eta[i];
        let term = match family {
            Family::Bernoulli => {
                let e = (-t.abs()).exp();
                mu[i] = if t >= 0.0 { 1.0 / (1.0 + e) } else { e / (1.0 + e) };
                response[i] * t - (t.max(0.0) + e.ln_1p())
            }
            _ => {
                mu[i] = t.exp();
                response[i] * t - mu[i]
            }
        };
        let w = weights[i];
        if w != 0.0 {
            total += w * term;
        }
    }
    total
}

fn loglik_from_eta(eta: &[f64], response: &[f64], weights: &[f64], family: &OutcomeFamily) -> f64 {
    let mut total = 0.0;
    for i in 0..eta.len() {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        total += w * family.log_density(response[i], eta[i]);
    }
    total
}

/// `sum_i w_i log f(y_i | eta_i)` at the given coefficients.
pub fn log_likelihood(
    design: &DesignMatrix,
    response: &[f64],
    weights: &[f64],
    family: &OutcomeFamily,
    coefficients: &[f64],
) -> Result<f64> {
    validate(design, response, weights, family.family(), true)?;
    if coefficients.len() != design.ncols() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} design columns",
            coefficients.len(),
            design.ncols()
        )));
    }
    let eta = design.linear_predictor(coefficients);
    if let Some(i) = eta.iter().position(|e| !e.is_finite()) {
        return Err(Error::Evaluation(format!(
            "non-finite linear predictor at row {i}"
        )));
    }
    let ll = loglik_from_eta(&eta, response, weights, family);
    if ll.is_finite() {
        Ok(ll)
    } else {
        Err(Error::Evaluation("non-finite log-likelihood".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line_design(x: &[f64]) -> DesignMatrix {
        DesignMatrix::with_intercept(&["x"], &[x]).unwrap()
    }

    #[test]
    fn exact_linear_data_recovers_coefficients() {
        let x: Vec<f64> = (0..12).map(|i| i as f64 * 0.5 - 2.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
        let fit = fit_weighted_glm(&line_design(&x), &y, &vec![1.0; x.len()], Family::Normal)
            .unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.coefficients[1], 3.0, epsilon = 1e-10);
    }

    #[test]
    fn single_row_log_likelihoods() {
        let design = DesignMatrix::from_row_major(vec!["(Intercept)".into()], 1, vec![1.0]).unwrap();
        let ll = log_likelihood(&design, &[1.0], &[1.0], &OutcomeFamily::Bernoulli, &[0.0]).unwrap();
        assert_abs_diff_eq!(ll, 0.5f64.ln(), epsilon = 1e-15);

        let ll = log_likelihood(
            &design,
            &[0.7],
            &[1.0],
            &OutcomeFamily::Normal { sigma2: 1.0 },
            &[0.7],
        )
        .unwrap();
        assert_abs_diff_eq!(ll, -0.5 * (2.0 * std::f64::consts::PI).ln(), epsilon = 1e-15);

        let ll = log_likelihood(&design, &[2.0], &[1.0], &OutcomeFamily::Poisson, &[0.0]).unwrap();
        assert_abs_diff_eq!(ll, -1.0 - 2.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn zero_weights_are_inert() {
        let x = [0.1, -1.2, 0.8, 2.0, -0.4, 1.1, 0.3, -2.2, 0.9, -0.7];
        let y = [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0];
        let mut w = vec![1.0; 10];
        w[7..].iter_mut().for_each(|v| *v = 0.0);
        let full = fit_weighted_glm(&line_design(&x), &y, &w, Family::Bernoulli).unwrap();
        let cut = fit_weighted_glm(&line_design(&x[..7]), &y[..7], &[1.0; 7], Family::Bernoulli)
            .unwrap();
        for (a, b) in full.coefficients.iter().zip(&cut.coefficients) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn constant_column_is_reported_as_aliased() {
        let x = [1.0; 6];
        let y = [0.0, 1.0, 2.0, 1.0, 0.0, 3.0];
        let err = fit_weighted_glm(&line_design(&x), &y, &[1.0; 6], Family::Poisson).unwrap_err();
        match err {
            Error::RankDeficient { columns } => assert_eq!(columns, vec!["x".to_string()]),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn separated_logit_attaches_warning() {
        let x = [-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0];
        let y = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        let fit = fit_weighted_glm(&line_design(&x), &y, &[1.0; 8], Family::Bernoulli).unwrap();
        assert!(matches!(fit.warnings.as_slice(), [GlmWarning::Separation { .. }]));
    }

    #[test]
    fn rejects_bad_responses_and_weights() {
        let d = line_design(&[0.0, 1.0, 2.0]);
        assert!(fit_weighted_glm(&d, &[0.0, 0.5, 1.0], &[1.0; 3], Family::Bernoulli).is_err());
        assert!(fit_weighted_glm(&d, &[0.0, 1.5, 1.0], &[1.0; 3], Family::Poisson).is_err());
        assert!(fit_weighted_glm(&d, &[0.0, 1.0, 1.0], &[1.0, -1.0, 1.0], Family::Normal).is_err());
        assert!(fit_weighted_glm(&d, &[0.0, 1.0, 1.0], &[0.0; 3], Family::Normal).is_err());
        assert!(fit_weighted_glm(&d, &[0.0, 1.0], &[1.0; 2], Family::Normal).is_err());
    }

    #[test]
    fn log_expit_is_stable() {
        assert_abs_diff_eq!(log_expit(0.0), 0.5f64.ln(), epsilon = 1e-15);
        assert!(log_expit(-800.0).is_finite());
        assert_abs_diff_eq!(log_expit(800.0), 0.0, epsilon = 1e-300);
    }
}
