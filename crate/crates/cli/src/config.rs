//! Command-line flags, `key=value` config files and the resolved run settings.
//!
//! Every flag is optional at the clap level. A value is taken from the
//! command line if present, then from the `--config` file, then from the
//! default, so flags always win over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gaussmod::modular::{FACTORIAL_EPS, STANDARD_EPS};
use gaussmod::random::DEFAULT_SCALE;
use gaussmod::scalarfield::Geometry;
use serde_json::Value;

use crate::CliError;

pub const MAX_PERTURB_DIM: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "gaussmod", version, about = "Modular theory checks for Gaussian states")]
pub struct Cli {
    /// Plain-text `key=value` file; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thermal state of a free scalar field against its closed forms.
    #[command(allow_negative_numbers = true)]
    Thermal(ThermalArgs),
    /// Seeded random perturbations of random Gaussian states.
    #[command(allow_negative_numbers = true)]
    Perturb(PerturbArgs),
    /// Operator inequalities on seeded random matrices.
    #[command(allow_negative_numbers = true)]
    Inequalities(InequalityArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Seed for all random instances (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; printed to stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// `json` or `csv`; inferred from the `--out` extension when absent.
    #[arg(long)]
    pub format: Option<Format>,
    /// Add the wall-clock time to the report metadata.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ThermalArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// `circle` or `torus`.
    #[arg(long)]
    pub geometry: Option<String>,
    /// Circle circumference (default 2π).
    #[arg(long)]
    pub length: Option<f64>,
    /// Torus side lengths, comma separated.
    #[arg(long)]
    pub lengths: Option<String>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Momentum cutoff N.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Random vectors for the Tomita check.
    #[arg(long)]
    pub tomita_trials: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Phase-space dimension of the random states.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Size of the random PSD perturbations.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Fixed symplectic form instead of a random one.
    #[arg(long, value_name = "PATH")]
    pub sigma: Option<PathBuf>,
    /// Fixed inner product μ instead of a random one.
    #[arg(long, value_name = "PATH")]
    pub mu: Option<PathBuf>,
    /// Fixed perturbation δ instead of a random one.
    #[arg(long, value_name = "PATH")]
    pub delta: Option<PathBuf>,
    /// Write every instance as matrix files into this directory.
    #[arg(long, value_name = "DIR")]
    pub dump_dir: Option<PathBuf>,
    #[arg(long)]
    pub standard_eps: Option<f64>,
    #[arg(long)]
    pub factorial_eps: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InequalityArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Size of the perturbations used by the Lipschitz checks.
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped,
/// underscores in keys are read as dashes.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got {line:?}", i + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key {key:?}", i + 1));
        }
    }
    Ok(out)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Merges one flag with the config file and a default.
struct Resolver {
    file: BTreeMap<String, String>,
    allowed: &'static [&'static str],
}

impl Resolver {
    fn new(file: BTreeMap<String, String>, allowed: &'static [&'static str]) -> Result<Self, CliError> {
        if let Some(key) = file.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown config key {key:?}")));
        }
        Ok(Self { file, allowed })
    }

    fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        debug_assert!(self.allowed.contains(&key));
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key {key}: cannot parse {raw:?}: {e}"))),
        }
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.opt::<bool>(None, key)?.unwrap_or(false))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

impl OutputConfig {
    fn resolve(r: &Resolver, args: &OutputArgs) -> Result<Self, CliError> {
        let out: Option<PathBuf> = r.opt(args.out.clone(), "out")?;
        let inferred = match out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        };
        Ok(Self {
            seed: r.get(args.seed, "seed", 0)?,
            format: r.get(args.format, "format", inferred)?,
            out,
            timestamp: r.flag(args.timestamp, "timestamp")?,
        })
    }

    fn echo(&self, into: &mut BTreeMap<String, Value>) {
        into.insert("seed".into(), Value::from(self.seed));
        into.insert(
            "format".into(),
            Value::from(match self.format {
                Format::Json => "json",
                Format::Csv => "csv",
            }),
        );
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{name} must be positive (got {x})")))
    }
}

fn at_least_one(name: &str, n: usize) -> Result<usize, CliError> {
    if n >= 1 {
        Ok(n)
    } else {
        Err(CliError::Config(format!("{name} must be at least 1 (got 0)")))
    }
}

fn non_negative(name: &str, x: f64) -> Result<f64, CliError> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{name} must be non-negative (got {x})")))
    }
}

fn number(x: f64) -> Value {
    crate::report::number(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalConfig {
    pub output: OutputConfig,
    pub geometry: Geometry,
    pub mass: f64,
    pub beta: f64,
    pub cutoff: usize,
    pub tomita_trials: usize,
}

const THERMAL_KEYS: [&str; 11] = [
    "seed", "out", "format", "timestamp", "geometry", "length", "lengths", "mass", "beta", "cutoff", "tomita-trials",
];

impl ThermalConfig {
    pub fn resolve(args: &ThermalArgs, file: BTreeMap<String, String>) -> Result<Self, CliError> {
        let r = Resolver::new(file, &THERMAL_KEYS)?;
        let output = OutputConfig::resolve(&r, &args.output)?;
        let kind: String = r.get(args.geometry.clone(), "geometry", "circle".into())?;
        let length: Option<f64> = r.opt(args.length, "length")?;
        let lengths: Option<String> = r.opt(args.lengths.clone(), "lengths")?;
        let geometry = match kind.to_ascii_lowercase().as_str() {
            "circle" => {
                if lengths.is_some() {
                    return Err(CliError::Config("--lengths applies to the torus; use --length".into()));
                }
                Geometry::Circle {
                    length: positive("length", length.unwrap_or(std::f64::consts::TAU))?,
                }
            }
            "torus" => {
                if length.is_some() {
                    return Err(CliError::Config("--length applies to the circle; use --lengths".into()));
                }
                let text = lengths.ok_or_else(|| CliError::Config("torus geometry needs --lengths".into()))?;
                let lengths = text
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|e| CliError::Config(format!("bad torus length {t:?}: {e}")))
                            .and_then(|x| positive("torus length", x))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Geometry::Torus { lengths }
            }
            other => return Err(CliError::Config(format!("unknown geometry {other:?} (expected circle or torus)"))),
        };
        Ok(Self {
            output,
            geometry,
            mass: positive("mass", r.get(args.mass, "mass", 1.0)?)?,
            beta: positive("beta", r.get(args.beta, "beta", 1.0)?)?,
            cutoff: r.get(args.cutoff, "cutoff", 32)?,
            tomita_trials: at_least_one("tomita-trials", r.get(args.tomita_trials, "tomita-trials", 100)?)?,
        })
    }

    pub fn echo(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), Value::from("thermal"));
        self.output.echo(&mut m);
        m.insert("geometry".into(), Value::from(self.geometry.label()));
        match &self.geometry {
            Geometry::Circle { length } => {
                m.insert("length".into(), number(*length));
            }
            Geometry::Torus { lengths } => {
                m.insert("lengths".into(), Value::Array(lengths.iter().map(|&x| number(x)).collect()));
            }
            Geometry::Explicit => {}
        }
        m.insert("mass".into(), number(self.mass));
        m.insert("beta".into(), number(self.beta));
        m.insert("cutoff".into(), Value::from(self.cutoff));
        m.insert("tomita_trials".into(), Value::from(self.tomita_trials));
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbConfig {
    pub output: OutputConfig,
    pub dim: usize,
    pub trials: usize,
    pub scale: f64,
    pub sigma: Option<PathBuf>,
    pub mu: Option<PathBuf>,
    pub delta: Option<PathBuf>,
    pub dump_dir: Option<PathBuf>,
    pub standard_eps: f64,
    pub factorial_eps: f64,
}

const PERTURB_KEYS: [&str; 13] = [
    "seed", "out", "format", "timestamp", "dim", "trials", "scale", "sigma", "mu", "delta", "dump-dir", "standard-eps",
    "factorial-eps",
];

impl PerturbConfig {
    pub fn resolve(args: &PerturbArgs, file: BTreeMap<String, String>) -> Result<Self, CliError> {
        let r = Resolver::new(file, &PERTURB_KEYS)?;
        let dim = r.get(args.dim, "dim", 16)?;
        if dim == 0 || dim > MAX_PERTURB_DIM {
            return Err(CliError::Config(format!("dim must be in 1..={MAX_PERTURB_DIM} (got {dim})")));
        }
        Ok(Self {
            output: OutputConfig::resolve(&r, &args.output)?,
            dim,
            trials: at_least_one("trials", r.get(args.trials, "trials", 100)?)?,
            scale: positive("scale", r.get(args.scale, "scale", DEFAULT_SCALE)?)?,
            sigma: r.opt(args.sigma.clone(), "sigma")?,
            mu: r.opt(args.mu.clone(), "mu")?,
            delta: r.opt(args.delta.clone(), "delta")?,
            dump_dir: r.opt(args.dump_dir.clone(), "dump-dir")?,
            standard_eps: non_negative("standard-eps", r.get(args.standard_eps, "standard-eps", STANDARD_EPS)?)?,
            factorial_eps: non_negative("factorial-eps", r.get(args.factorial_eps, "factorial-eps", FACTORIAL_EPS)?)?,
        })
    }

    pub fn echo(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), Value::from("perturb"));
        self.output.echo(&mut m);
        m.insert("dim".into(), Value::from(self.dim));
        m.insert("trials".into(), Value::from(self.trials));
        m.insert("scale".into(), number(self.scale));
        for (key, path) in [("sigma", &self.sigma), ("mu", &self.mu), ("delta", &self.delta)] {
            if let Some(p) = path {
                m.insert(key.into(), Value::from(p.display().to_string()));
            }
        }
        m.insert("standard_eps".into(), number(self.standard_eps));
        m.insert("factorial_eps".into(), number(self.factorial_eps));
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityConfig {
    pub output: OutputConfig,
    pub dim: usize,
    pub trials: usize,
    pub scale: f64,
}

const INEQUALITY_KEYS: [&str; 7] = ["seed", "out", "format", "timestamp", "dim", "trials", "scale"];

impl InequalityConfig {
    pub fn resolve(args: &InequalityArgs, file: BTreeMap<String, String>) -> Result<Self, CliError> {
        let r = Resolver::new(file, &INEQUALITY_KEYS)?;
        let dim = r.get(args.dim, "dim", 8)?;
        if dim == 0 || dim > MAX_PERTURB_DIM {
            return Err(CliError::Config(format!("dim must be in 1..={MAX_PERTURB_DIM} (got {dim})")));
        }
        Ok(Self {
            output: OutputConfig::resolve(&r, &args.output)?,
            dim,
            trials: at_least_one("trials", r.get(args.trials, "trials", 100)?)?,
            scale: positive("scale", r.get(args.scale, "scale", DEFAULT_SCALE)?)?,
        })
    }

    pub fn echo(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), Value::from("inequalities"));
        self.output.echo(&mut m);
        m.insert("dim".into(), Value::from(self.dim));
        m.insert("trials".into(), Value::from(self.trials));
        m.insert("scale".into(), number(self.scale));
        m
    }
}
