//! Simulation settings 1-5 and multi-replicate estimator comparisons.
//!
//! Random numbers come from ChaCha20 seeded with the study seed; replicate
//! `r` draws from stream `r` of that key, so any replicate can be regenerated
//! on its own and results do not depend on the execution order.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::em::{run_em, EmConfig};
use crate::error::{Error, Result};
use crate::glm::{expit, Family};
use crate::model::{fit_naive, MediationDataset, ParameterSet};
use crate::ols::run_ols_correction_with;
use crate::parallel::{map_indexed, Execution};
use crate::pvw::{estimate_misclassification_model, run_pvw_with, MisclassificationFit, PvwConfig};
use crate::report::{Method, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Medium => "medium",
            Level::High => "high",
        }
    }
}

impl std::str::FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Level::Low),
            "medium" | "med" => Ok(Level::Medium),
            "high" => Ok(Level::High),
            other => Err(Error::Config(format!("unknown level '{other}'"))),
        }
    }
}

/// One simulation scenario. For setting 4 `level` is the mediator
/// prevalence level; otherwise it is the misclassification level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub setting: u8,
    pub level: Level,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Defaults: n = 10,000 (20,000 for setting 4), 500 replicates.
    pub fn new(setting: u8, level: Level, seed: u64) -> Result<Self> {
        let spec = Self {
            setting,
            level,
            n: if setting == 4 { 20_000 } else { 10_000 },
            replicates: 500,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.setting) {
            return Err(Error::Config(format!(
                "setting must be 1-5, got {}",
                self.setting
            )));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self.setting {
            1 => Family::Normal,
            5 => Family::Poisson,
            _ => Family::Bernoulli,
        }
    }

    pub fn interaction(&self) -> bool {
        matches!(self.setting, 3 | 5)
    }

    /// Setting 4 generates data with perfect specificity.
    pub fn perfect_specificity(&self) -> bool {
        self.setting == 4
    }

    /// Generating parameter values.
    pub fn truth(&self) -> ParameterSet {
        if self.setting == 4 {
            let beta0 = match self.level {
                Level::Low => -4.0,
                Level::Medium => -2.5,
                Level::High => -1.0,
            };
            return ParameterSet {
                beta: vec![beta0, -2.0, 0.5, 0.0, -2.5, -0.5, 1.0],
                gamma: [vec![1.0, 0.5, 0.1], vec![0.0, 0.0, 0.0]],
                theta: vec![-4.0, 1.5, 1.0, 0.0, 0.5, -0.5, -2.0, 0.2],
                sigma2: None,
                perfect_specificity: true,
            };
        }
        let gamma = match self.level {
            Level::Low => [vec![3.0, 2.0], vec![-2.0, -2.5]],
            Level::Medium => [vec![1.8, 1.0], vec![-1.5, -1.0]],
            Level::High => [vec![1.0, 1.0], vec![-0.5, -1.5]],
        };
        let theta = match self.setting {
            1 | 2 => vec![1.0, 1.5, -0.2, -2.0],
            3 => vec![1.0, 1.5, -0.2, -2.0, 0.5],
            _ => vec![-3.0, 1.0, -0.2, -1.0, 0.5],
        };
        ParameterSet {
            beta: vec![1.0, -2.0, -2.5],
            gamma,
            theta,
            sigma2: (self.setting == 1).then_some(1.0),
            perfect_specificity: false,
        }
    }
}

/// A generated data set. The true mediator is kept apart from the
/// estimator-facing [`MediationDataset`] and is used only for scoring.
#[derive(Debug, Clone)]
pub struct SimulatedData {
    pub dataset: MediationDataset,
    true_m: Vec<u8>,
}

impl SimulatedData {
    pub fn true_mediator(&self) -> &[u8] {
        &self.true_m
    }
}

/// The random stream used for replicate `replicate` of a study.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

fn bernoulli<R: Rng>(rng: &mut R, p: f64) -> bool {
    rng.random::<f64>() < p
}

/// Draws replicate `replicate` of the scenario.
pub fn generate_dataset(spec: &ScenarioSpec, replicate: u64) -> Result<SimulatedData> {
    spec.validate()?;
    let mut rng = replicate_rng(spec.seed, replicate);
    if spec.setting == 4 {
        generate_setting4(spec, &mut rng)
    } else {
        generate_standard(spec, &mut rng)
    }
}

fn generate_standard(spec: &ScenarioSpec, rng: &mut ChaCha20Rng) -> Result<SimulatedData> {
    let n = spec.n;
    let truth = spec.truth();
    let gamma = Gamma::new(1.0, 1.0).expect("valid gamma");
    let (mut x, mut c, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut m, mut m_star, mut y) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let xi: f64 = rng.sample(rand_distr::StandardNormal);
        let ci = gamma.sample(rng);
        let zi = gamma.sample(rng);
        let mi = if bernoulli(rng, expit(truth.beta[0] + truth.beta[1] * xi + truth.beta[2] * ci)) {
            1u8
        } else {
            2u8
        };
        let g = &truth.gamma[(mi - 1) as usize];
        let msi = if bernoulli(rng, expit(g[0] + g[1] * zi)) { 1u8 } else { 2u8 };
        let ind = if mi == 1 { 1.0 } else { 0.0 };
        let t = &truth.theta;
        let eta = t[0] + t[1] * xi + t[2] * ci + t[3] * ind + t.get(4).copied().unwrap_or(0.0) * xi * ind;
        let yi = match spec.family() {
            Family::Normal => eta + rng.sample::<f64, _>(rand_distr::StandardNormal),
            Family::Bernoulli => f64::from(u8::from(bernoulli(rng, expit(eta)))),
            Family::Poisson => Poisson::new(eta.exp())
                .map_err(|e| Error::Evaluation(format!("Poisson rate: {e}")))?
                .sample(rng),
        };
        x.push(xi);
        c.push(ci);
        z.push(zi);
        m.push(mi);
        m_star.push(msi);
        y.push(yi);
    }
    let dataset = MediationDataset::new(
        x,
        vec![("c1".into(), c)],
        vec![("z1".into(), z)],
        m_star,
        y,
    )?;
    Ok(SimulatedData { dataset, true_m: m })
}

fn generate_setting4(spec: &ScenarioSpec, rng: &mut ChaCha20Rng) -> Result<SimulatedData> {
    let n = spec.n;
    let truth = spec.truth();
    let gamma = Gamma::new(1.0, 1.0).expect("valid gamma");
    // Second argument read as a standard deviation.
    let c2_dist = Normal::new(1.0, 2.0).expect("valid normal");
    let mut x = Vec::with_capacity(n);
    let mut cs: [Vec<f64>; 5] = Default::default();
    let (mut m, mut m_star, mut y) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let xi = f64::from(u8::from(bernoulli(rng, 0.67)));
        let ci = [
            gamma.sample(rng),
            Distribution::<f64>::sample(&c2_dist, rng).abs(),
            f64::from(u8::from(bernoulli(rng, 0.20))),
            f64::from(u8::from(bernoulli(rng, 0.55))),
            rng.sample::<f64, _>(rand_distr::StandardNormal),
        ];
        let b = &truth.beta;
        let eta_m = b[0] + b[1] * xi + (0..5).map(|k| b[2 + k] * ci[k]).sum::<f64>();
        let mi = if bernoulli(rng, expit(eta_m)) { 1u8 } else { 2u8 };
        let msi = if mi == 1 {
            let g = &truth.gamma[0];
            if bernoulli(rng, expit(g[0] + g[1] * ci[0] + g[2] * ci[2])) {
                1u8
            } else {
                2u8
            }
        } else {
            2u8
        };
        let t = &truth.theta;
        let ind = if mi == 1 { 1.0 } else { 0.0 };
        let eta_y = t[0] + t[1] * xi + (0..5).map(|k| t[2 + k] * ci[k]).sum::<f64>() + t[7] * ind;
        y.push(f64::from(u8::from(bernoulli(rng, expit(eta_y)))));
        x.push(xi);
        for (col, v) in cs.iter_mut().zip(ci) {
            col.push(v);
        }
        m.push(mi);
        m_star.push(msi);
    }
    let z = vec![("c1".to_string(), cs[0].clone()), ("c3".to_string(), cs[2].clone())];
    let c = cs
        .into_iter()
        .enumerate()
        .map(|(k, col)| (format!("c{}", k + 1), col))
        .collect();
    let dataset = MediationDataset::new(x, c, z, m_star, y)?;
    Ok(SimulatedData { dataset, true_m: m })
}

/// Marginal quantities of one generated data set.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RealizedStats {
    pub p_m1: f64,
    pub p_mstar1: f64,
    /// Mean over subjects of the generating `P(M* = 1 | M = 1, Z_i)`.
    pub sensitivity: f64,
    /// Mean over subjects of the generating `P(M* = 2 | M = 2, Z_i)`.
    pub specificity: f64,
}

impl RealizedStats {
    pub fn compute(spec: &ScenarioSpec, data: &SimulatedData) -> Result<Self> {
        let truth = spec.truth();
        let d = &data.dataset;
        let n = d.len() as f64;
        let (sensitivity, specificity) = crate::model::average_sens_spec(&truth, d)?;
        Ok(Self {
            p_m1: data.true_m.iter().filter(|&&m| m == 1).count() as f64 / n,
            p_mstar1: d.m_star().iter().filter(|&&m| m == 1).count() as f64 / n,
            sensitivity,
            specificity,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodEstimate {
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum MethodOutcome {
    Fitted(MethodEstimate),
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub outcomes: BTreeMap<Method, MethodOutcome>,
    pub realized: RealizedStats,
}

impl ReplicateResult {
    pub fn estimate(&self, method: Method) -> Option<&MethodEstimate> {
        match self.outcomes.get(&method) {
            Some(MethodOutcome::Fitted(e)) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub em: EmConfig,
    pub pvw_max_passes: usize,
    pub execution: Execution,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            em: EmConfig::default(),
            pvw_max_passes: PvwConfig::default().max_passes,
            execution: Execution::Parallel,
        }
    }
}

fn check_methods(spec: &ScenarioSpec, methods: &[Method]) -> Result<()> {
    if methods.is_empty() {
        return Err(Error::Config("no methods requested".into()));
    }
    if methods.contains(&Method::Ols) && spec.setting != 1 {
        return Err(Error::Config(format!(
            "the OLS correction needs a Normal outcome; setting {} is {}",
            spec.setting,
            spec.family()
        )));
    }
    Ok(())
}

/// Fits every requested method to one replicate.
pub fn run_replicate(
    spec: &ScenarioSpec,
    methods: &[Method],
    options: &StudyOptions,
    replicate: usize,
) -> Result<ReplicateResult> {
    check_methods(spec, methods)?;
    let data = generate_dataset(spec, replicate as u64)?;
    let realized = RealizedStats::compute(spec, &data)?;
    let d = &data.dataset;
    let family = spec.family();
    let interaction = spec.interaction();
    let em_config = EmConfig {
        perfect_specificity: spec.perfect_specificity(),
        ..options.em.clone()
    };

    let needs_step1 = methods.iter().any(|m| matches!(m, Method::Pvw | Method::Ols));
    let step1: Option<Result<MisclassificationFit>> =
        needs_step1.then(|| estimate_misclassification_model(d, &em_config));

    let mut outcomes = BTreeMap::new();
    for &method in methods {
        let fitted: Result<MethodEstimate> = match method {
            Method::Naive => fit_naive(d, family, interaction).map(|f| MethodEstimate {
                beta: f.beta_star,
                theta: f.theta_star,
                converged: true,
            }),
            Method::Em => run_em(d, family, &em_config, interaction).map(|r| MethodEstimate {
                beta: r.beta,
                theta: r.theta,
                converged: r.converged,
            }),
            Method::Pvw | Method::Ols => match step1.as_ref().expect("step 1 requested") {
                Err(e) => Err(Error::Evaluation(format!("step-1 EM failed: {e}"))),
                Ok(s1) => {
                    let report = if method == Method::Pvw {
                        let cfg = PvwConfig {
                            em: em_config.clone(),
                            max_passes: options.pvw_max_passes,
                            ..PvwConfig::default()
                        };
                        run_pvw_with(d, family, &cfg, interaction, s1)
                    } else {
                        run_ols_correction_with(d, interaction, s1)
                    };
                    report.map(|r| MethodEstimate {
                        beta: r.beta,
                        theta: r.theta,
                        converged: r.converged,
                    })
                }
            },
        };
        let outcome = match fitted {
            Ok(e) => MethodOutcome::Fitted(e),
            Err(e) => MethodOutcome::Failed {
                error: e.to_string(),
            },
        };
        outcomes.insert(method, outcome);
    }
    Ok(ReplicateResult {
        replicate,
        outcomes,
        realized,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub method: Method,
    pub parameter: String,
    pub truth: f64,
    pub mean_estimate: f64,
    pub bias: f64,
    pub rmse: f64,
    pub n_used: usize,
    pub convergence_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub fitted: usize,
    pub converged: usize,
    pub failed: usize,
    pub convergence_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub schema_version: u32,
    pub scenario: ScenarioSpec,
    pub options: StudyOptions,
    pub methods: Vec<MethodSummary>,
    pub cells: Vec<SummaryCell>,
    /// Mean realized marginal quantities over replicates.
    pub realized: RealizedStats,
}

impl StudySummary {
    pub fn cell(&self, method: Method, parameter: &str) -> Option<&SummaryCell> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.parameter == parameter)
    }
}

/// Runs all replicates and aggregates bias and rMSE per method and
/// parameter. Aggregation follows replicate order.
pub fn run_study(
    spec: &ScenarioSpec,
    methods: &[Method],
    options: &StudyOptions,
) -> Result<(StudySummary, Vec<ReplicateResult>)> {
    spec.validate()?;
    check_methods(spec, methods)?;
    options.em.validate()?;
    if spec.replicates == 0 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    let results = map_indexed(spec.replicates, options.execution, |r| {
        run_replicate(spec, methods, options, r)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok((summarize(spec, methods, options, &results)?, results))
}

/// Aggregates finished replicates.
pub fn summarize(
    spec: &ScenarioSpec,
    methods: &[Method],
    options: &StudyOptions,
    results: &[ReplicateResult],
) -> Result<StudySummary> {
    let truth = spec.truth();
    let template = ParameterSet {
        theta: truth.theta.clone(),
        ..truth.clone()
    };
    let probe = generate_dataset(
        &ScenarioSpec {
            n: 8,
            ..spec.clone()
        },
        0,
    )?;
    let names = template.parameter_names(&probe.dataset);

    let mut summaries = Vec::new();
    let mut cells = Vec::new();
    for &method in methods {
        let fitted: Vec<&MethodEstimate> = results.iter().filter_map(|r| r.estimate(method)).collect();
        let converged = fitted.iter().filter(|e| e.converged).count();
        let rate = converged as f64 / results.len() as f64;
        summaries.push(MethodSummary {
            method,
            fitted: fitted.len(),
            converged,
            failed: results.len() - fitted.len(),
            convergence_rate: rate,
        });
        let groups = [
            (&names.beta, &truth.beta, 0usize),
            (&names.theta, &truth.theta, 1usize),
        ];
        for (group_names, group_truth, which) in groups {
            for (k, (name, &t)) in group_names.iter().zip(group_truth.iter()).enumerate() {
                let values: Vec<f64> = fitted
                    .iter()
                    .filter_map(|e| if which == 0 { e.beta.get(k) } else { e.theta.get(k) })
                    .copied()
                    .collect();
                if values.is_empty() {
                    continue;
                }
                let count = values.len() as f64;
                let mean = values.iter().sum::<f64>() / count;
                let mse = values.iter().map(|v| (v - t).powi(2)).sum::<f64>() / count;
                cells.push(SummaryCell {
                    method,
                    parameter: name.clone(),
                    truth: t,
                    mean_estimate: mean,
                    bias: mean - t,
                    rmse: mse.sqrt(),
                    n_used: values.len(),
                    convergence_rate: rate,
                });
            }
        }
    }
    let count = results.len() as f64;
    let mut realized = RealizedStats::default();
    for r in results {
        realized.p_m1 += r.realized.p_m1 / count;
        realized.p_mstar1 += r.realized.p_mstar1 / count;
        realized.sensitivity += r.realized.sensitivity / count;
        realized.specificity += r.realized.specificity / count;
    }
    Ok(StudySummary {
        schema_version: SCHEMA_VERSION,
        scenario: spec.clone(),
        options: options.clone(),
        methods: summaries,
        cells,
        realized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Renders the summary as CSV with `#`-prefixed provenance lines.
pub fn summary_to_csv(summary: &StudySummary) -> Result<String> {
    if summary.methods.is_empty() {
        return Err(Error::Config("summary has no methods".into()));
    }
    let mut out = String::new();
    let s = &summary.scenario;
    out.push_str(&format!("# schema_version={}\n", summary.schema_version));
    out.push_str(&format!(
        "# setting={} level={} n={} replicates={} seed={}\n",
        s.setting,
        s.level.as_str(),
        s.n,
        s.replicates,
        s.seed
    ));
    out.push_str(&format!(
        "# tol={:e} max_iter={} acceleration={:?} pvw_max_passes={}\n",
        summary.options.em.loglik_tolerance,
        summary.options.em.max_iterations,
        summary.options.em.acceleration,
        summary.options.pvw_max_passes
    ));
    let mut writer = csv::Writer::from_writer(Vec::new());
    for cell in &summary.cells {
        writer
            .serialize(cell)
            .map_err(|e| Error::Csv { row: 0, message: e.to_string() })?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::Csv { row: 0, message: e.to_string() })?;
    out.push_str(std::str::from_utf8(&body).expect("csv writes UTF-8"));
    Ok(out)
}

/// Parses cells back from [`summary_to_csv`] output.
pub fn cells_from_csv(text: &str) -> Result<Vec<SummaryCell>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Csv {
                row: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes the summary. Nothing is created when the summary is empty.
pub fn emit_results(summary: &StudySummary, format: OutputFormat, path: &Path) -> Result<()> {
    if summary.methods.is_empty() {
        return Err(Error::Config("summary has no methods".into()));
    }
    let text = match format {
        OutputFormat::Csv => summary_to_csv(summary)?,
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(summary)?;
            s.push('\n');
            s
        }
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(setting: u8, level: Level) -> ScenarioSpec {
        ScenarioSpec {
            setting,
            level,
            n: 2_000,
            replicates: 2,
            seed: 11,
        }
    }

    #[test]
    fn generation_is_reproducible_per_replicate() {
        let s = spec(2, Level::Medium);
        let a = generate_dataset(&s, 1).unwrap();
        let b = generate_dataset(&s, 1).unwrap();
        let c = generate_dataset(&s, 0).unwrap();
        assert_eq!(a.dataset, b.dataset);
        assert_ne!(a.dataset, c.dataset);
    }

    #[test]
    fn setting4_has_no_false_positives() {
        for level in Level::ALL {
            let data = generate_dataset(&spec(4, level), 0).unwrap();
            let bad = data
                .dataset
                .m_star()
                .iter()
                .zip(data.true_mediator())
                .filter(|(&ms, &m)| ms == 1 && m == 2)
                .count();
            assert_eq!(bad, 0);
            assert_eq!(data.dataset.n_confounders(), 5);
            assert_eq!(data.dataset.misclass_covariate(0), data.dataset.confounder(0));
            assert_eq!(data.dataset.misclass_covariate(1), data.dataset.confounder(2));
        }
    }

    #[test]
    fn outcome_types_follow_the_setting() {
        let d2 = generate_dataset(&spec(2, Level::Low), 0).unwrap();
        assert!(d2.dataset.y().iter().all(|&y| y == 0.0 || y == 1.0));
        let d5 = generate_dataset(&spec(5, Level::Low), 0).unwrap();
        assert!(d5.dataset.y().iter().all(|&y| y >= 0.0 && y.fract() == 0.0));
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(ScenarioSpec::new(6, Level::Low, 1).is_err());
        let s = spec(2, Level::Low);
        let err = run_study(&s, &[Method::Ols], &StudyOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(run_study(&s, &[], &StudyOptions::default()).is_err());
    }

    #[test]
    fn single_replicate_summary_equals_its_deviations() {
        let s = ScenarioSpec {
            replicates: 1,
            ..spec(1, Level::Medium)
        };
        let (summary, results) = run_study(&s, &[Method::Naive], &StudyOptions::default()).unwrap();
        let est = results[0].estimate(Method::Naive).unwrap();
        let cell = summary.cell(Method::Naive, "theta_m").unwrap();
        assert_eq!(cell.bias, est.theta[3] - (-2.0));
        assert_eq!(cell.rmse, (est.theta[3] + 2.0).abs());
    }
}
