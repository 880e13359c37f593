//! Append-only JSON-lines result store.
//!
//! The first line is a schema header; every further line is an instance
//! record or a run record. Runs are keyed by `(instance_id, algorithm,
//! repeat)`, and appending an existing key is a no-op provided the record is
//! identical.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gsemo_core::RunRecord;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA: &str = "gsemo-store";
pub const VERSION: u32 = 1;
pub const STORE_FILE: &str = "store.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub schema: String,
    pub version: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance_id: String,
    pub n: usize,
    pub density: f64,
    pub scheme: String,
    pub family: String,
    /// `d₁` for cardinality schemes, `k` for partition schemes.
    pub param: usize,
    pub k: usize,
    pub d: usize,
    pub dbar: usize,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLine {
    pub instance_id: String,
    pub algorithm: String,
    pub repeat: usize,
    pub seed: Option<u64>,
    pub iterations: u64,
    pub oracle_calls: u64,
    pub best_value: f64,
    pub best_solution: Vec<usize>,
    /// `(iteration, best-so-far)` pairs.
    pub trace: Vec<(u64, f64)>,
}

impl RunLine {
    pub fn new(instance_id: &str, repeat: usize, r: &RunRecord) -> Self {
        RunLine {
            instance_id: instance_id.to_string(),
            algorithm: r.algorithm.name().to_string(),
            repeat,
            seed: r.seed,
            iterations: r.iterations,
            oracle_calls: r.oracle_calls,
            best_value: r.best_value,
            best_solution: r.best_solution.to_vec(),
            trace: r.trace.iter().map(|p| (p.iteration, p.best)).collect(),
        }
    }

    pub fn key(&self) -> RunKey {
        (self.instance_id.clone(), self.algorithm.clone(), self.repeat)
    }
}

pub type RunKey = (String, String, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Record {
    Instance(InstanceRecord),
    Run(RunLine),
}

/// In-memory view of a store file, optionally open for appending.
#[derive(Debug)]
pub struct Store {
    path: PathBuf,
    instances: BTreeMap<String, InstanceRecord>,
    runs: Vec<RunLine>,
    index: HashMap<RunKey, usize>,
    writer: Option<BufWriter<File>>,
}

impl Store {
    /// Reads a store without modifying it. A truncated final line is ignored.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let complete = complete_prefix(&bytes);
        let mut store = Store::empty(path);
        store.ingest(&bytes[..complete])?;
        Ok(store)
    }

    /// Opens a store for appending, creating it with a header if absent and
    /// cutting off a partially written final line.
    pub fn open(path: &Path) -> Result<Self> {
        let io = |e| CliError::io(path, e);
        let mut store = Store::empty(path);
        let existing = match std::fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(io(e)),
        };
        let complete = complete_prefix(&existing);
        if complete > 0 {
            store.ingest(&existing[..complete])?;
        }
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io)?;
        }
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(path)
            .map_err(io)?;
        if complete < existing.len() {
            eprintln!(
                "warning: {}: dropping {} bytes of a truncated final record",
                path.display(),
                existing.len() - complete
            );
        }
        file.set_len(complete as u64).map_err(io)?;
        let mut writer = BufWriter::new(file);
        use std::io::Seek;
        writer.seek(std::io::SeekFrom::End(0)).map_err(io)?;
        if complete == 0 {
            let header = Header {
                schema: SCHEMA.to_string(),
                version: VERSION,
            };
            writeln!(writer, "{}", serde_json::to_string(&header).expect("serializable"))
                .map_err(io)?;
        }
        store.writer = Some(writer);
        store.flush()?;
        Ok(store)
    }

    fn empty(path: &Path) -> Self {
        Store {
            path: path.to_path_buf(),
            instances: BTreeMap::new(),
            runs: Vec::new(),
            index: HashMap::new(),
            writer: None,
        }
    }

    fn ingest(&mut self, bytes: &[u8]) -> Result<()> {
        let text = std::str::from_utf8(bytes).map_err(|e| CliError::Parse {
            path: self.path.clone(),
            line: 0,
            msg: e.to_string(),
        })?;
        let mut lines = text.lines().enumerate();
        let Some((_, first)) = lines.next() else {
            return Ok(());
        };
        let header: Header = serde_json::from_str(first).map_err(|e| CliError::Parse {
            path: self.path.clone(),
            line: 1,
            msg: format!("bad store header: {e}"),
        })?;
        if header.schema != SCHEMA || header.version != VERSION {
            return Err(CliError::Validation(format!(
                "{}: unsupported store schema {} v{} (expected {SCHEMA} v{VERSION})",
                self.path.display(),
                header.schema,
                header.version
            )));
        }
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(line).map_err(|e| CliError::Parse {
                path: self.path.clone(),
                line: i + 1,
                msg: e.to_string(),
            })?;
            match rec {
                Record::Instance(r) => {
                    self.instances.insert(r.instance_id.clone(), r);
                }
                Record::Run(r) => {
                    if !self.index.contains_key(&r.key()) {
                        self.index.insert(r.key(), self.runs.len());
                        self.runs.push(r);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn instances(&self) -> &BTreeMap<String, InstanceRecord> {
        &self.instances
    }

    pub fn runs(&self) -> &[RunLine] {
        &self.runs
    }

    pub fn contains(&self, key: &RunKey) -> bool {
        self.index.contains_key(key)
    }

    pub fn get(&self, key: &RunKey) -> Option<&RunLine> {
        self.index.get(key).map(|&i| &self.runs[i])
    }

    fn write_record(&mut self, rec: &Record) -> Result<()> {
        let path = self.path.clone();
        let w = self.writer.as_mut().ok_or_else(|| {
            CliError::Validation(format!("{}: store opened read-only", path.display()))
        })?;
        let line = serde_json::to_string(rec).expect("serializable");
        writeln!(w, "{line}").map_err(|e| CliError::io(&path, e))
    }

    /// Returns whether the record was new.
    pub fn add_instance(&mut self, rec: InstanceRecord) -> Result<bool> {
        if let Some(old) = self.instances.get(&rec.instance_id) {
            return if *old == rec {
                Ok(false)
            } else {
                Err(CliError::Validation(format!(
                    "instance {} already stored with different metadata",
                    rec.instance_id
                )))
            };
        }
        let rec = Record::Instance(rec);
        self.write_record(&rec)?;
        let Record::Instance(r) = rec else { unreachable!() };
        self.instances.insert(r.instance_id.clone(), r);
        Ok(true)
    }

    /// Returns whether the run was new.
    pub fn add_run(&mut self, run: RunLine) -> Result<bool> {
        let key = run.key();
        if let Some(old) = self.get(&key) {
            return if *old == run {
                Ok(false)
            } else {
                Err(CliError::Validation(format!(
                    "run {key:?} already stored with a different result"
                )))
            };
        }
        let rec = Record::Run(run);
        self.write_record(&rec)?;
        let Record::Run(r) = rec else { unreachable!() };
        self.index.insert(key, self.runs.len());
        self.runs.push(r);
        Ok(true)
    }

    pub fn flush(&mut self) -> Result<()> {
        if let Some(w) = self.writer.as_mut() {
            w.flush().map_err(|e| CliError::io(&self.path, e))?;
        }
        Ok(())
    }
}

impl Drop for Store {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

fn complete_prefix(bytes: &[u8]) -> usize {
    bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1)
}
