use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use misclass::effects::{effects, EffectEstimates, EffectModel, EffectQuery, Scale};
use misclass::em::{run_em, Acceleration, EmConfig, StartStrategy};
use misclass::io::{read_dataset_file, write_dataset, ColumnMap};
use misclass::model::fit_naive;
use misclass::ols::run_ols_correction;
use misclass::oracles::run_self_check;
use misclass::parallel::Execution;
use misclass::pvw::{run_pvw, PvwConfig};
use misclass::report::SCHEMA_VERSION;
use misclass::sim::{
    generate_dataset, run_study, summary_to_csv, Level, ScenarioSpec, StudyOptions,
};
use misclass::{Error, Family, FitReport, Method};

use crate::args::{
    Cli, Command, DatagenArgs, EffectsArgs, EmArgs, FamilyArg, FitArgs, FormatArg, LevelArg,
    MethodArg, ScaleArg, SimulateArgs,
};

pub mod exit_code {
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const MISSING_COLUMN: u8 = 4;
    pub const MEDIATOR_CODE: u8 = 5;
    pub const METHOD_FAMILY: u8 = 6;
    pub const MALFORMED_INPUT: u8 = 7;
    pub const ESTIMATION: u8 = 8;
    pub const SELF_CHECK: u8 = 9;
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    MethodFamily(String),
    Config(String),
    SelfCheckFailed(usize),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::MethodFamily(_) => exit_code::METHOD_FAMILY,
            CliError::Config(_) => exit_code::USAGE,
            CliError::SelfCheckFailed(_) => exit_code::SELF_CHECK,
            CliError::Core(e) => match e {
                Error::Config(_) => exit_code::USAGE,
                Error::Io(_) => exit_code::IO,
                Error::MissingColumn(_) => exit_code::MISSING_COLUMN,
                Error::MediatorCode { .. } => exit_code::MEDIATOR_CODE,
                Error::Csv { .. } | Error::Json(_) | Error::Shape(_) | Error::InvalidInput(_) => {
                    exit_code::MALFORMED_INPUT
                }
                _ => exit_code::ESTIMATION,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::MethodFamily(m) | CliError::Config(m) => f.write_str(m),
            CliError::SelfCheckFailed(n) => write!(f, "{n} oracle check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult {
    if cli.self_check {
        self_check()?;
    }
    match cli.command {
        Some(Command::Fit(a)) => cmd_fit(&a),
        Some(Command::Simulate(a)) => cmd_simulate(&a),
        Some(Command::Effects(a)) => cmd_effects(&a),
        Some(Command::Datagen(a)) => cmd_datagen(&a),
        None if cli.self_check => Ok(()),
        None => Err(CliError::Config("no subcommand given".into())),
    }
}

/// Writes via a sibling temporary file so a failed run leaves no partial
/// output behind.
fn write_atomic(path: &Path, contents: &[u8]) -> CliResult {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::from(e)
    })
}

fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Normal => Family::Normal,
        FamilyArg::Bernoulli => Family::Bernoulli,
        FamilyArg::Poisson => Family::Poisson,
    }
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Naive => Method::Naive,
        MethodArg::Em => Method::Em,
        MethodArg::Pvw => Method::Pvw,
        MethodArg::Ols => Method::Ols,
    }
}

fn level(l: LevelArg) -> Level {
    match l {
        LevelArg::Low => Level::Low,
        LevelArg::Medium => Level::Medium,
        LevelArg::High => Level::High,
    }
}

fn em_config(a: &EmArgs, seed: Option<u64>, perfect_specificity: bool) -> CliResult<EmConfig> {
    let config = EmConfig {
        loglik_tolerance: a.tol,
        max_iterations: a.max_iter,
        acceleration: if a.no_accel {
            Acceleration::None
        } else {
            Acceleration::Squarem
        },
        start: match seed {
            Some(seed) => StartStrategy::Perturbed { seed, scale: 0.1 },
            None => StartStrategy::Naive,
        },
        perfect_specificity,
    };
    config.validate()?;
    Ok(config)
}

#[derive(Serialize)]
struct FitOutput<'a> {
    #[serde(flatten)]
    report: &'a FitReport,
    config: &'a FitArgs,
}

fn cmd_fit(a: &FitArgs) -> CliResult {
    let family = family(a.family);
    let method = method(a.method);
    if !method.supports(family) {
        return Err(CliError::MethodFamily(format!(
            "method {method} requires a Normal outcome, got {family}"
        )));
    }
    let config = em_config(&a.em, a.seed, a.perfect_specificity)?;
    let columns = ColumnMap {
        x: a.x_col.clone(),
        c: a.c_cols.clone(),
        z: a.z_cols.clone(),
        m_star: a.mstar_col.clone(),
        y: a.y_col.clone(),
    };
    let ingested = read_dataset_file(&a.input, &columns)?;
    let d = &ingested.dataset;
    let mut report = match method {
        Method::Naive => FitReport::from_naive(&fit_naive(d, family, a.interaction)?, family, a.interaction, d),
        Method::Em => run_em(d, family, &config, a.interaction)?,
        Method::Pvw => {
            let pvw = PvwConfig {
                em: config,
                ..PvwConfig::default()
            };
            run_pvw(d, family, &pvw, a.interaction)?
        }
        Method::Ols => run_ols_correction(d, &config, a.interaction)?,
    };
    report
        .metadata
        .insert("mediator_coding".into(), ingested.coding.describe().into());
    report.metadata.insert("rows".into(), d.len().to_string());
    let out = FitOutput {
        report: &report,
        config: a,
    };
    write_atomic(&a.output, &to_json(&out)?)
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult {
    let mut spec = ScenarioSpec::new(a.setting, level(a.level), a.seed)?;
    if let Some(n) = a.n {
        spec.n = n;
    }
    spec.replicates = a.replicates;
    let methods: Vec<Method> = if a.methods.is_empty() {
        Method::ALL
            .into_iter()
            .filter(|m| m.supports(spec.family()))
            .collect()
    } else {
        a.methods.iter().map(|&m| method(m)).collect()
    };
    if let Some(m) = methods.iter().find(|m| !m.supports(spec.family())) {
        return Err(CliError::MethodFamily(format!(
            "method {m} requires a Normal outcome; setting {} has a {} outcome",
            spec.setting,
            spec.family()
        )));
    }
    let options = StudyOptions {
        em: em_config(&a.em, None, false)?,
        execution: if a.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        ..StudyOptions::default()
    };
    let (summary, _) = run_study(&spec, &methods, &options)?;
    let format = a.format.unwrap_or_else(|| {
        if a.output.extension().is_some_and(|e| e == "json") {
            FormatArg::Json
        } else {
            FormatArg::Csv
        }
    });
    let bytes = match format {
        FormatArg::Csv => summary_to_csv(&summary)?.into_bytes(),
        FormatArg::Json => to_json(&summary)?,
    };
    write_atomic(&a.output, &bytes)
}

fn scale(s: ScaleArg) -> Scale {
    match s {
        ScaleArg::Difference => Scale::Difference,
        ScaleArg::OddsRatio => Scale::OddsRatio,
        ScaleArg::RiskRatio => Scale::RiskRatio,
    }
}

#[derive(Serialize)]
struct EffectsOutput<'a> {
    schema_version: u32,
    source_report: &'a Path,
    method: Method,
    family: Family,
    query: &'a EffectQuery,
    estimates: EffectEstimates,
}

fn cmd_effects(a: &EffectsArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.input)?;
    let report: FitReport = serde_json::from_str(&text)?;
    let natural = Scale::for_family(report.family);
    let requested = a.scale.map(scale).unwrap_or(natural);
    if requested != natural {
        return Err(CliError::Config(format!(
            "scale {} does not match the {} fit (use {})",
            requested.as_str(),
            report.family,
            natural.as_str()
        )));
    }
    let p = report.beta.len().saturating_sub(2);
    if a.c.len() > p {
        return Err(CliError::Config(format!(
            "{} confounder values given, the fit has {p}",
            a.c.len()
        )));
    }
    let mut c = a.c.clone();
    c.resize(p, 0.0);
    let query = EffectQuery {
        x: a.x,
        x_ref: a.xref,
        c,
        m: a.m,
        scale: requested,
    };
    let estimates = effects(&EffectModel::from(&report), &query)?;
    let out = EffectsOutput {
        schema_version: SCHEMA_VERSION,
        source_report: &a.input,
        method: report.method,
        family: report.family,
        query: &query,
        estimates,
    };
    write_atomic(&a.output, &to_json(&out)?)
}

fn cmd_datagen(a: &DatagenArgs) -> CliResult {
    let mut spec = ScenarioSpec::new(a.setting, level(a.level), a.seed)?;
    if let Some(n) = a.n {
        spec.n = n;
    }
    spec.replicates = 1;
    let data = generate_dataset(&spec, a.replicate)?;
    let comments = vec![
        format!("schema_version={SCHEMA_VERSION}"),
        format!(
            "misclass datagen setting={} level={} n={} seed={} replicate={} reveal_truth={}",
            spec.setting,
            spec.level.as_str(),
            spec.n,
            spec.seed,
            a.replicate,
            a.reveal_truth
        ),
    ];
    let mut buf = Vec::new();
    write_dataset(
        &mut buf,
        &data.dataset,
        a.reveal_truth.then(|| data.true_mediator()),
        &comments,
    )?;
    write_atomic(&a.output, &buf)
}

fn self_check() -> CliResult {
    let reports = run_self_check()?;
    let mut failed = 0;
    for r in &reports {
        let worst = r
            .reference
            .iter()
            .zip(&r.observed)
            .zip(&r.tolerance)
            .map(|((a, b), t)| (a - b).abs() / t)
            .fold(0.0, f64::max);
        println!(
            "{} {:<24} max deviation {:.3} x tolerance",
            if r.passed { "PASS" } else { "FAIL" },
            r.oracle,
            worst
        );
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        Err(CliError::SelfCheckFailed(failed))
    } else {
        Ok(())
    }
}
