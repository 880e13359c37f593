//! Instance generation and the experiment loop.

use std::path::{Path, PathBuf};

use gsemo_core::instances::{check_density, InstanceSpec};
use gsemo_core::rng::{derive_seed, tag};
use gsemo_core::{greedy, gsemo, GsemoParams, OracleCounter, PartitionMatroid, RunRecord};
use rayon::prelude::*;

use crate::bundle::{bundle_dir, to_json, Bundle};
use crate::config::ExperimentConfig;
use crate::error::{write, CliError, Result};
use crate::store::{InstanceRecord, RunLine, Store, STORE_FILE};

pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedInstance {
    pub spec: InstanceSpec,
    pub id: String,
    pub iterations: u64,
    pub trace_stride: Option<u64>,
}

/// Seed of GSEMO repeat `r` on an instance.
pub fn run_seed(master: u64, instance_id: &str, repeat: usize) -> u64 {
    let id = u64::from_str_radix(instance_id, 16).unwrap_or_else(|_| {
        gsemo_core::instances::content_id(instance_id.as_bytes()).0
    });
    derive_seed(master, &[tag::GSEMO, id, repeat as u64])
}

pub fn graph_seed(master: u64, n: usize, density: f64, graph: usize) -> u64 {
    derive_seed(master, &[tag::GRAPH, n as u64, density.to_bits(), graph as u64])
}

pub fn partition_seed(master: u64, graph_seed: u64, k: usize) -> u64 {
    derive_seed(master, &[tag::PARTITION, graph_seed, k as u64])
}

/// Every instance of the configuration in a fixed order: n, density, graph
/// index, scheme. Validates densities and schemes without generating graphs.
pub fn plan(c: &ExperimentConfig) -> Result<Vec<PlannedInstance>> {
    c.validate()?;
    let schemes = c.parsed_schemes()?;
    let universe = c.universe()?;
    let mut out = Vec::new();
    for &n in &c.ns {
        for &density in &c.densities {
            check_density(n, density, universe)?;
            for s in &schemes {
                s.build(n, Some(0))?;
            }
            for g in 0..c.graphs_per_setting {
                let gs = graph_seed(c.master_seed, n, density, g);
                for s in &schemes {
                    let partition_seed = match s {
                        gsemo_core::instances::ConstraintScheme::Partition { k } => {
                            Some(partition_seed(c.master_seed, gs, *k))
                        }
                        _ => None,
                    };
                    let spec = InstanceSpec {
                        n,
                        density,
                        scheme: *s,
                        graph_seed: gs,
                        partition_seed,
                        universe,
                    };
                    out.push(PlannedInstance {
                        id: spec.id().to_string(),
                        spec,
                        iterations: c.t_policy.iterations(n),
                        trace_stride: c.trace_stride_for(n),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn instance_record(p: &PlannedInstance, m: &PartitionMatroid) -> InstanceRecord {
    let param = match p.spec.scheme {
        gsemo_core::instances::ConstraintScheme::Cardinality(_) => m.capacity(),
        gsemo_core::instances::ConstraintScheme::Partition { k } => k,
    };
    InstanceRecord {
        instance_id: p.id.clone(),
        n: p.spec.n,
        density: p.spec.density,
        scheme: p.spec.scheme.to_string(),
        family: p.spec.scheme.family().to_string(),
        param,
        k: m.k(),
        d: m.capacity(),
        dbar: m.min_threshold(),
        iterations: p.iterations,
    }
}

fn pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))
}

/// Loads the bundle if it is on disk with a matching id, otherwise
/// generates and writes it.
fn materialize(p: &PlannedInstance, root: &Path) -> Result<(Bundle, PathBuf)> {
    let dir = bundle_dir(root, &p.id);
    if dir.join(crate::bundle::META_FILE).exists() {
        let b = Bundle::load(&dir)?;
        if b.meta.instance_id == p.id {
            return Ok((b, dir));
        }
    }
    let b = Bundle::generate(&p.spec)?;
    b.save(&dir)?;
    Ok((b, dir))
}

fn write_config(c: &ExperimentConfig, root: &Path) -> Result<()> {
    std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
    write(&root.join(CONFIG_FILE), to_json(c))
}

/// Writes every planned bundle under `<output_dir>/instances/<id>/` and
/// returns the ids in plan order.
pub fn cmd_gen(c: &ExperimentConfig) -> Result<Vec<(String, PathBuf)>> {
    let planned = plan(c)?;
    let root = c.output_dir();
    write_config(c, &root)?;
    pool(c.parallelism)?.install(|| {
        planned
            .par_iter()
            .map(|p| {
                let dir = bundle_dir(&root, &p.id);
                Bundle::generate(&p.spec)?.save(&dir)?;
                Ok((p.id.clone(), dir))
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Greedy,
    Gsemo { repeat: usize },
}

impl Task {
    fn key(self, id: &str) -> (String, String, usize) {
        match self {
            Task::Greedy => (id.to_string(), "greedy".to_string(), 0),
            Task::Gsemo { repeat } => (id.to_string(), "gsemo".to_string(), repeat),
        }
    }
}

pub fn execute(
    task: Task,
    bundle: &Bundle,
    master_seed: u64,
    iterations: u64,
    trace_stride: Option<u64>,
) -> Result<RunRecord> {
    let mut counter = OracleCounter::new();
    let id = &bundle.meta.instance_id;
    Ok(match task {
        Task::Greedy => greedy(&bundle.objective, &bundle.constraint, &mut counter)?,
        Task::Gsemo { repeat } => gsemo(
            &bundle.objective,
            &bundle.constraint,
            &GsemoParams {
                iterations,
                seed: run_seed(master_seed, id, repeat),
                trace_stride,
            },
            &mut counter,
        )?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentOutcome {
    pub store: PathBuf,
    pub instances: usize,
    pub runs_added: usize,
    pub runs_skipped: usize,
}

/// Runs GREEDY once and GSEMO `repeats` times on every planned instance,
/// skipping runs already in the store. Work is spread over `parallelism`
/// threads; results are appended in plan order.
pub fn cmd_experiment(c: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cmd_experiment_with(c, |_, _| {})
}

/// [`cmd_experiment`] with a progress callback `(instances done, total)`.
pub fn cmd_experiment_with(
    c: &ExperimentConfig,
    mut progress: impl FnMut(usize, usize),
) -> Result<ExperimentOutcome> {
    let planned = plan(c)?;
    let root = c.output_dir();
    write_config(c, &root)?;
    let store_path = root.join(STORE_FILE);
    let mut store = Store::open(&store_path)?;
    let workers = pool(c.parallelism)?;
    let mut outcome = ExperimentOutcome {
        store: store_path,
        instances: planned.len(),
        runs_added: 0,
        runs_skipped: 0,
    };

    let tasks_for = |p: &PlannedInstance, store: &Store| -> Vec<Task> {
        std::iter::once(Task::Greedy)
            .chain((0..c.repeats).map(|repeat| Task::Gsemo { repeat }))
            .filter(|t| !store.contains(&t.key(&p.id)))
            .collect()
    };

    let batch = c.parallelism.max(1);
    for (done, chunk) in planned.chunks(batch).enumerate() {
        let bundles: Vec<(Bundle, PathBuf)> = workers.install(|| {
            chunk
                .par_iter()
                .map(|p| materialize(p, &root))
                .collect::<Result<_>>()
        })?;
        let mut work = Vec::new();
        for (i, p) in chunk.iter().enumerate() {
            let tasks = tasks_for(p, &store);
            outcome.runs_skipped += 1 + c.repeats - tasks.len();
            work.extend(tasks.into_iter().map(|t| (i, t)));
        }
        let results: Vec<Result<RunLine>> = workers.install(|| {
            work.par_iter()
                .map(|&(i, t)| {
                    let p = &chunk[i];
                    let r = execute(t, &bundles[i].0, c.master_seed, p.iterations, p.trace_stride)?;
                    let repeat = match t {
                        Task::Greedy => 0,
                        Task::Gsemo { repeat } => repeat,
                    };
                    Ok(RunLine::new(&p.id, repeat, &r))
                })
                .collect()
        });
        let mut results = work.iter().map(|&(i, _)| i).zip(results).peekable();
        for (i, p) in chunk.iter().enumerate() {
            store.add_instance(instance_record(p, &bundles[i].0.constraint))?;
            while let Some((_, r)) = results.next_if(|(j, _)| *j == i) {
                if store.add_run(r?)? {
                    outcome.runs_added += 1;
                }
            }
        }
        store.flush()?;
        progress(((done + 1) * batch).min(planned.len()), planned.len());
    }
    Ok(outcome)
}
