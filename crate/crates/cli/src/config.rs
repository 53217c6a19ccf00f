//! Run configuration: defaults < config file < environment < flags.
//! Only the worker count (`LCHI_WORKERS`) and cache path (`LCHI_CACHE`)
//! may come from the environment; everything else is file or flag.

use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub x: u64,
    pub theta: f64,
    pub vartheta: f64,
    /// μ²-split parameter; `None` means X^0.05
    pub y: Option<f64>,
    pub tol: f64,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub cache_path: Option<PathBuf>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: u64,
    /// explicit mollifier length; `None` means X^θ
    pub mollifier_len: Option<f64>,
    /// slack δ in the S₂ upper bound
    pub s2_delta: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            x: 1_000_000,
            theta: 0.174090385173497,
            vartheta: 0.15,
            y: None,
            tol: 1e-8,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            cache_path: None,
            output_path: None,
            output_format: OutputFormat::Json,
            seed: 1,
            mollifier_len: None,
            s2_delta: 0.1,
        }
    }
}

impl RunConfig {
    pub fn y_value(&self) -> f64 {
        self.y.unwrap_or_else(|| (self.x as f64).powf(0.05))
    }

    pub fn mollifier_len_value(&self) -> f64 {
        self.mollifier_len
            .unwrap_or_else(|| (self.x as f64).powf(self.theta))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.x < 2 {
            return Err(CliError::Config(format!("x must be at least 2, got {}", self.x)));
        }
        if !(self.theta > 0.0 && self.theta < 0.5) {
            return Err(CliError::Config(format!("theta must lie in (0, 1/2), got {}", self.theta)));
        }
        if !(self.vartheta > 0.0 && self.vartheta < 0.5) {
            return Err(CliError::Config(format!(
                "vartheta must lie in (0, 1/2), got {}",
                self.vartheta
            )));
        }
        if self.tol <= 0.0 {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.workers < 1 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if let Some(y) = self.y {
            if y < 1.0 {
                return Err(CliError::Config(format!("y must be at least 1, got {y}")));
            }
        }
        if self.s2_delta < 0.0 {
            return Err(CliError::Config("s2-delta must be nonnegative".into()));
        }
        Ok(())
    }

    /// `θ + 2ϑ < 1/2`, required wherever mollifier and sieve ranges interact.
    pub fn validate_moment_regime(&self) -> Result<(), CliError> {
        self.validate()?;
        if self.theta + 2.0 * self.vartheta >= 0.5 {
            return Err(CliError::Config(format!(
                "need theta + 2*vartheta < 1/2, got {} + 2*{}",
                self.theta, self.vartheta
            )));
        }
        Ok(())
    }
}

/// All-optional mirror of [`RunConfig`] for the TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    x: Option<u64>,
    theta: Option<f64>,
    vartheta: Option<f64>,
    y: Option<f64>,
    tol: Option<f64>,
    workers: Option<usize>,
    cache_path: Option<PathBuf>,
    output_path: Option<PathBuf>,
    output_format: Option<OutputFormat>,
    seed: Option<u64>,
    mollifier_len: Option<f64>,
    s2_delta: Option<f64>,
}

/// Flag set shared by every subcommand; mirrors the config fields.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonOpts {
    /// TOML configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// family bound X
    #[arg(long, global = true)]
    pub x: Option<u64>,
    /// mollifier length exponent θ
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// sieve level exponent ϑ
    #[arg(long, global = true)]
    pub vartheta: Option<f64>,
    /// μ²-split parameter Y (default X^0.05)
    #[arg(long, global = true)]
    pub y: Option<f64>,
    /// nonvanishing threshold
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// worker thread count
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// L-value cache file
    #[arg(long = "cache", global = true)]
    pub cache_path: Option<PathBuf>,
    /// output path (stem for multi-file reports)
    #[arg(long = "output", global = true)]
    pub output_path: Option<PathBuf>,
    /// report format
    #[arg(long = "format", global = true, value_enum)]
    pub output_format: Option<OutputFormat>,
    /// seed for sampled validations
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// explicit mollifier length M (default X^θ)
    #[arg(long = "mollifier-len", global = true)]
    pub mollifier_len: Option<f64>,
    /// slack δ in the S₂ upper bound
    #[arg(long = "s2-delta", global = true)]
    pub s2_delta: Option<f64>,
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
}

pub fn resolve(opts: &CommonOpts) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();

    if let Some(path) = &opts.config {
        let f = load_file(path)?;
        if let Some(v) = f.x {
            cfg.x = v;
        }
        if let Some(v) = f.theta {
            cfg.theta = v;
        }
        if let Some(v) = f.vartheta {
            cfg.vartheta = v;
        }
        if f.y.is_some() {
            cfg.y = f.y;
        }
        if let Some(v) = f.tol {
            cfg.tol = v;
        }
        if let Some(v) = f.workers {
            cfg.workers = v;
        }
        if f.cache_path.is_some() {
            cfg.cache_path = f.cache_path;
        }
        if f.output_path.is_some() {
            cfg.output_path = f.output_path;
        }
        if let Some(v) = f.output_format {
            cfg.output_format = v;
        }
        if let Some(v) = f.seed {
            cfg.seed = v;
        }
        if f.mollifier_len.is_some() {
            cfg.mollifier_len = f.mollifier_len;
        }
        if let Some(v) = f.s2_delta {
            cfg.s2_delta = v;
        }
    }

    if let Ok(v) = std::env::var("LCHI_WORKERS") {
        cfg.workers = v
            .parse()
            .map_err(|_| CliError::Config(format!("LCHI_WORKERS must be an integer, got {v:?}")))?;
    }
    if let Ok(v) = std::env::var("LCHI_CACHE") {
        if !v.is_empty() {
            cfg.cache_path = Some(PathBuf::from(v));
        }
    }

    if let Some(v) = opts.x {
        cfg.x = v;
    }
    if let Some(v) = opts.theta {
        cfg.theta = v;
    }
    if let Some(v) = opts.vartheta {
        cfg.vartheta = v;
    }
    if opts.y.is_some() {
        cfg.y = opts.y;
    }
    if let Some(v) = opts.tol {
        cfg.tol = v;
    }
    if let Some(v) = opts.workers {
        cfg.workers = v;
    }
    if opts.cache_path.is_some() {
        cfg.cache_path = opts.cache_path.clone();
    }
    if opts.output_path.is_some() {
        cfg.output_path = opts.output_path.clone();
    }
    if let Some(v) = opts.output_format {
        cfg.output_format = v;
    }
    if let Some(v) = opts.seed {
        cfg.seed = v;
    }
    if opts.mollifier_len.is_some() {
        cfg.mollifier_len = opts.mollifier_len;
    }
    if let Some(v) = opts.s2_delta {
        cfg.s2_delta = v;
    }

    cfg.validate()?;
    Ok(cfg)
}
