//! Experiment configuration: a JSON file whose every field can be
//! overridden by the command-line flag of the same name.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gsemo_core::instances::{ConstraintScheme, EdgeUniverse};
use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, CliError, Result};

pub const OUTPUT_DIR_ENV: &str = "GSEMO_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "gsemo-out";

/// Iteration budget as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TPolicy {
    /// `c · n²`.
    Quadratic(u64),
    Fixed(u64),
}

impl TPolicy {
    pub fn iterations(self, n: usize) -> u64 {
        match self {
            TPolicy::Quadratic(c) => c * (n as u64) * (n as u64),
            TPolicy::Fixed(t) => t,
        }
    }
}

impl Default for TPolicy {
    fn default() -> Self {
        TPolicy::Quadratic(4)
    }
}

impl fmt::Display for TPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TPolicy::Quadratic(c) => write!(f, "quadratic:{c}"),
            TPolicy::Fixed(t) => write!(f, "fixed:{t}"),
        }
    }
}

impl FromStr for TPolicy {
    type Err = String;

    /// `quadratic:<c>` for `c·n²`, or `fixed:<T>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad T policy {s:?}; expected quadratic:<c> or fixed:<T>");
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let v: u64 = arg.parse().map_err(|_| bad())?;
        match kind {
            "quadratic" => Ok(TPolicy::Quadratic(v)),
            "fixed" => Ok(TPolicy::Fixed(v)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for TPolicy {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<TPolicy> for String {
    fn from(t: TPolicy) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub ns: Vec<usize>,
    pub densities: Vec<f64>,
    /// `card:<num>/<den>` or `part:<k>`.
    pub schemes: Vec<String>,
    pub graphs_per_setting: usize,
    pub repeats: usize,
    pub t_policy: TPolicy,
    pub parallelism: usize,
    /// Falls back to `$GSEMO_OUTPUT_DIR`, then `gsemo-out`.
    pub output_dir: Option<PathBuf>,
    /// Defaults to `n`; 0 disables traces.
    pub trace_stride: Option<u64>,
    pub edge_universe: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            master_seed: 1,
            ns: vec![50, 100, 200],
            densities: vec![0.01, 0.02, 0.05, 0.1, 0.2],
            schemes: ["card:1/4", "card:1/2", "card:3/4", "part:2", "part:5", "part:10"]
                .map(String::from)
                .to_vec(),
            graphs_per_setting: 30,
            repeats: 30,
            t_policy: TPolicy::default(),
            parallelism: std::thread::available_parallelism().map_or(1, |p| p.get()),
            output_dir: None,
            trace_stride: None,
            edge_universe: EdgeUniverse::Unordered.name().to_string(),
        }
    }
}

/// Flag overrides; `None` keeps the file (or default) value.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ConfigOverrides {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub master_seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub densities: Option<Vec<f64>>,
    /// Comma-separated, e.g. `card:1/4,part:5`.
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<String>>,
    #[arg(long)]
    pub graphs_per_setting: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// `quadratic:<c>` or `fixed:<T>`.
    #[arg(long)]
    pub t_policy: Option<TPolicy>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub trace_stride: Option<u64>,
    /// `unordered` or `ordered`.
    #[arg(long)]
    pub edge_universe: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::json(path, e))
    }

    /// File (if any), then flags, then the output-directory fallbacks.
    pub fn resolve(overrides: &ConfigOverrides) -> Result<Self> {
        let mut c = match &overrides.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        let o = overrides.clone();
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { c.$f = v; } )* };
        }
        take!(master_seed, ns, densities, schemes, graphs_per_setting, repeats, t_policy, parallelism, edge_universe);
        if o.output_dir.is_some() {
            c.output_dir = o.output_dir;
        }
        if o.trace_stride.is_some() {
            c.trace_stride = o.trace_stride;
        }
        if c.output_dir.is_none() {
            c.output_dir = Some(
                std::env::var_os(OUTPUT_DIR_ENV)
                    .map_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR), PathBuf::from),
            );
        }
        c.validate()?;
        Ok(c)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    pub fn parsed_schemes(&self) -> Result<Vec<ConstraintScheme>> {
        self.schemes
            .iter()
            .map(|s| s.parse().map_err(CliError::from))
            .collect()
    }

    pub fn universe(&self) -> Result<EdgeUniverse> {
        Ok(self.edge_universe.parse()?)
    }

    pub fn trace_stride_for(&self, n: usize) -> Option<u64> {
        match self.trace_stride {
            None => Some(n as u64),
            Some(0) => None,
            Some(s) => Some(s),
        }
    }

    /// Checks counts and list contents; instance-level checks happen when
    /// the work plan is built.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        if self.ns.is_empty() || self.densities.is_empty() || self.schemes.is_empty() {
            return fail("ns, densities and schemes must be non-empty".into());
        }
        if self.graphs_per_setting == 0 || self.repeats == 0 || self.parallelism == 0 {
            return fail("graphs_per_setting, repeats and parallelism must be at least 1".into());
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n == 0) {
            return fail(format!("n must be at least 1, got {n}"));
        }
        self.parsed_schemes()?;
        self.universe()?;
        Ok(())
    }
}
