//! Instance bundles: a directory holding the objective, `constraint.json`
//! and `meta.json`.
//!
//! The objective is either a cut graph in `graph.txt` or a modular function
//! in `weights.json`.

use std::path::{Path, PathBuf};

use gsemo_core::instances::{content_id, InstanceSpec};
use gsemo_core::objectives::{ModularFunction, SetFunction, WeightedGraph};
use gsemo_core::{PartitionMatroid, Solution};
use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, write, CliError, Result};
use crate::formats::{parse_graph, write_graph, ConstraintFile, WeightsFile};

pub const GRAPH_FILE: &str = "graph.txt";
pub const WEIGHTS_FILE: &str = "weights.json";
pub const CONSTRAINT_FILE: &str = "constraint.json";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    Cut(WeightedGraph),
    Modular(ModularFunction),
}

impl Objective {
    pub fn kind(&self) -> &'static str {
        match self {
            Objective::Cut(_) => "cut",
            Objective::Modular(_) => "modular",
        }
    }
}

impl SetFunction for Objective {
    fn ground_size(&self) -> usize {
        match self {
            Objective::Cut(g) => g.ground_size(),
            Objective::Modular(f) => f.ground_size(),
        }
    }

    fn value(&self, x: &Solution) -> f64 {
        match self {
            Objective::Cut(g) => g.value(x),
            Objective::Modular(f) => f.value(x),
        }
    }

    fn value_after_flips(&self, x: &Solution, value_x: f64, flips: &[usize]) -> f64 {
        match self {
            Objective::Cut(g) => g.value_after_flips(x, value_x, flips),
            Objective::Modular(f) => f.value_after_flips(x, value_x, flips),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub graph: Option<u64>,
    pub partition: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub instance_id: String,
    pub n: usize,
    pub density: Option<f64>,
    pub scheme: Option<String>,
    pub seeds: Seeds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_universe: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
}

impl Meta {
    pub fn from_spec(spec: &InstanceSpec) -> Self {
        Meta {
            instance_id: spec.id().to_string(),
            n: spec.n,
            density: Some(spec.density),
            scheme: Some(spec.scheme.to_string()),
            seeds: Seeds {
                graph: Some(spec.graph_seed),
                partition: spec.partition_seed,
            },
            edge_universe: Some(spec.universe.name().to_string()),
            objective: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub objective: Objective,
    pub constraint: PartitionMatroid,
    pub meta: Meta,
}

impl Bundle {
    /// Regenerates an instance from its spec.
    pub fn generate(spec: &InstanceSpec) -> Result<Self> {
        Ok(Bundle {
            objective: Objective::Cut(spec.graph()?),
            constraint: spec.constraint()?,
            meta: Meta::from_spec(spec),
        })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        match &self.objective {
            Objective::Cut(g) => write(&dir.join(GRAPH_FILE), write_graph(g))?,
            Objective::Modular(f) => write(
                &dir.join(WEIGHTS_FILE),
                to_json(&WeightsFile {
                    weights: f.weights().to_vec(),
                }),
            )?,
        }
        write(
            &dir.join(CONSTRAINT_FILE),
            to_json(&ConstraintFile::from_matroid(&self.constraint)),
        )?;
        write(&dir.join(META_FILE), to_json(&self.meta))
    }

    /// Loads a bundle. Without `meta.json` the instance id is a hash of the
    /// objective and constraint files.
    pub fn load(dir: &Path) -> Result<Self> {
        let graph_path = dir.join(GRAPH_FILE);
        let weights_path = dir.join(WEIGHTS_FILE);
        let (objective, objective_text) = if graph_path.exists() {
            let text = read_to_string(&graph_path)?;
            let g = parse_graph(&text).map_err(|e| CliError::Parse {
                path: graph_path.clone(),
                line: e.line,
                msg: e.msg,
            })?;
            (Objective::Cut(g), text)
        } else if weights_path.exists() {
            let text = read_to_string(&weights_path)?;
            let w: WeightsFile =
                serde_json::from_str(&text).map_err(|e| CliError::json(&weights_path, e))?;
            let f = ModularFunction::new(w.weights).map_err(|e| CliError::Parse {
                path: weights_path.clone(),
                line: 0,
                msg: e.to_string(),
            })?;
            (Objective::Modular(f), text)
        } else {
            return Err(CliError::io(
                &graph_path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "no graph.txt or weights.json"),
            ));
        };

        let constraint_path = dir.join(CONSTRAINT_FILE);
        let constraint_text = read_to_string(&constraint_path)?;
        let file: ConstraintFile = serde_json::from_str(&constraint_text)
            .map_err(|e| CliError::json(&constraint_path, e))?;
        let constraint = file.into_matroid().map_err(|msg| CliError::Parse {
            path: constraint_path.clone(),
            line: 0,
            msg,
        })?;
        let n = objective.ground_size();
        if constraint.n() != n {
            return Err(CliError::Validation(format!(
                "{}: constraint covers {} elements but the objective has {n}",
                dir.display(),
                constraint.n()
            )));
        }

        let meta_path = dir.join(META_FILE);
        let meta = if meta_path.exists() {
            let text = read_to_string(&meta_path)?;
            let meta: Meta =
                serde_json::from_str(&text).map_err(|e| CliError::json(&meta_path, e))?;
            if meta.n != n {
                return Err(CliError::Validation(format!(
                    "{}: meta.json says n = {} but the objective has {n}",
                    dir.display(),
                    meta.n
                )));
            }
            meta
        } else {
            Meta {
                instance_id: content_id((objective_text + &constraint_text).as_bytes()).to_string(),
                n,
                density: None,
                scheme: None,
                seeds: Seeds::default(),
                edge_universe: None,
                objective: Some(objective.kind().to_string()),
            }
        };
        Ok(Bundle {
            objective,
            constraint,
            meta,
        })
    }
}

pub fn bundle_dir(root: &Path, instance_id: &str) -> PathBuf {
    root.join("instances").join(instance_id)
}

/// Compact JSON followed by a newline.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
