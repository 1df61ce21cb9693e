use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "misclass",
    version,
    about = "Causal mediation analysis with a misclassified binary mediator",
    subcommand_required = false,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Run the built-in oracle suite and report pass/fail.
    #[arg(long)]
    pub self_check: bool,

    /// TOML file whose keys are flag names; command-line flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a CSV data set and write a JSON report.
    Fit(FitArgs),
    /// Run a simulation study and write its summary.
    Simulate(SimulateArgs),
    /// Compute causal effects from a fit report.
    Effects(EffectsArgs),
    /// Generate one simulated data set as CSV.
    Datagen(DatagenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Naive,
    Em,
    Pvw,
    Ols,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Normal,
    Bernoulli,
    Poisson,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelArg {
    Low,
    Medium,
    High,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleArg {
    Difference,
    #[value(alias = "or")]
    OddsRatio,
    #[value(alias = "rr")]
    RiskRatio,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmArgs {
    /// Log-likelihood change that ends EM.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 1500)]
    pub max_iter: usize,
    /// Plain EM without SQUAREM acceleration.
    #[arg(long)]
    pub no_accel: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub x_col: String,
    #[arg(long, value_delimiter = ',')]
    pub c_cols: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub z_cols: Vec<String>,
    #[arg(long)]
    pub mstar_col: String,
    #[arg(long)]
    pub y_col: String,
    /// Include the exposure-mediator interaction in the outcome model.
    #[arg(long)]
    pub interaction: bool,
    /// Fix specificity at 1 (no false positives).
    #[arg(long)]
    pub perfect_specificity: bool,
    #[command(flatten)]
    pub em: EmArgs,
    /// Seed for perturbed EM starts; the default start is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub setting: u8,
    #[arg(long, value_enum, default_value = "medium")]
    pub level: LevelArg,
    /// Subjects per replicate (default 10,000; 20,000 for setting 4).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Methods to compare (default: all that support the setting's outcome).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Vec<MethodArg>,
    #[arg(long)]
    pub output: PathBuf,
    /// Output format (default: from the file extension, CSV unless `.json`).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Run replicates one after another.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub em: EmArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EffectsArgs {
    /// JSON fit report written by `fit`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Effect scale (default: the fitted family's natural scale).
    #[arg(long, value_enum)]
    pub scale: Option<ScaleArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub xref: f64,
    /// Confounder values; missing trailing values are 0.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub c: Vec<f64>,
    /// Controlled mediator level (1 = mediator present).
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub m: u8,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DatagenArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub setting: u8,
    #[arg(long, value_enum, default_value = "medium")]
    pub level: LevelArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Replicate index (selects the random stream).
    #[arg(long, default_value_t = 0)]
    pub replicate: u64,
    #[arg(long)]
    pub output: PathBuf,
    /// Add the latent mediator as a `true_m` column.
    #[arg(long)]
    pub reveal_truth: bool,
}

const SUBCOMMANDS: [&str; 4] = ["fit", "simulate", "effects", "datagen"];

/// Turns a TOML table into flags.
pub fn config_to_flags(text: &str) -> Result<Vec<OsString>, String> {
    let table: toml::Table = text.parse().map_err(|e| format!("config file: {e}"))?;
    let mut flags = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        let rendered = match value {
            toml::Value::Boolean(true) => {
                flags.push(flag.into());
                continue;
            }
            toml::Value::Boolean(false) => continue,
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => Ok(s.clone()),
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    toml::Value::Float(f) => Ok(f.to_string()),
                    _ => Err(format!("config key '{key}': unsupported array element")),
                })
                .collect::<Result<Vec<_>, _>>()?
                .join(","),
            _ => return Err(format!("config key '{key}': unsupported value")),
        };
        flags.push(format!("{flag}={rendered}").into());
    }
    Ok(flags)
}

/// Inserts config-file flags after the subcommand, skipping any flag the
/// command line already sets.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            path = Some(iter.next().ok_or("--config needs a file")?);
        } else if let Some(p) = text.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let given: Vec<String> = rest
        .iter()
        .map(|a| a.to_string_lossy().split('=').next().unwrap_or("").to_string())
        .collect();
    let flags: Vec<OsString> = config_to_flags(&text)?
        .into_iter()
        .filter(|f| {
            let name = f.to_string_lossy().split('=').next().unwrap_or("").to_string();
            !given.contains(&name)
        })
        .collect();
    let at = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or("a config file needs a subcommand")?;
    rest.splice(at + 1..at + 1, flags);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_from_toml() {
        let flags = config_to_flags("method = \"em\"\nc_cols = [\"a\", \"b\"]\ninteraction = true\ntol = 1e-6\n")
            .unwrap();
        let flags: Vec<String> = flags.into_iter().map(|f| f.into_string().unwrap()).collect();
        assert!(flags.contains(&"--method=em".to_string()));
        assert!(flags.contains(&"--c-cols=a,b".to_string()));
        assert!(flags.contains(&"--interaction".to_string()));
        assert!(flags.contains(&"--tol=0.000001".to_string()));
    }

    #[test]
    fn command_line_overrides_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "seed = 3\nsetting = 2\n").unwrap();
        let args: Vec<OsString> = ["misclass", "--config", cfg.to_str().unwrap(), "datagen", "--seed", "9", "--output", "o.csv"]
            .iter()
            .map(OsString::from)
            .collect();
        let merged = merge_config(args).unwrap();
        let cli = Cli::try_parse_from(merged).unwrap();
        match cli.command {
            Some(Command::Datagen(d)) => {
                assert_eq!(d.seed, 9);
                assert_eq!(d.setting, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
