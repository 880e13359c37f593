//! Per-setting comparison tables computed from a result store.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gsemo_core::stats::{setting_verdicts, SettingSummary, ALPHA};

use crate::error::{write, CliError, Result};
use crate::store::Store;

pub const CSV_FILE: &str = "report.csv";
pub const MARKDOWN_FILE: &str = "report.md";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub family: String,
    pub n: usize,
    pub density: f64,
    /// `d₁` for cardinality rows, `k` for partition rows.
    pub param: usize,
    pub summary: SettingSummary,
}

fn row_order(a: &ReportRow, b: &ReportRow) -> Ordering {
    a.family
        .cmp(&b.family)
        .then(a.n.cmp(&b.n))
        .then(a.density.total_cmp(&b.density))
        .then(a.param.cmp(&b.param))
}

/// Groups instances into settings and tests each one. Refuses an empty
/// store and settings with unpaired instances.
pub fn build_rows(store: &Store) -> Result<Vec<ReportRow>> {
    if store.instances().is_empty() {
        return Err(CliError::Validation(format!(
            "{}: store holds no instances",
            store.path().display()
        )));
    }
    if let Some(r) = store
        .runs()
        .iter()
        .find(|r| !store.instances().contains_key(&r.instance_id))
    {
        return Err(CliError::Validation(format!(
            "run for unknown instance {}",
            r.instance_id
        )));
    }

    type Group = (BTreeMap<String, f64>, BTreeMap<String, Vec<(usize, f64)>>);
    let mut groups: BTreeMap<(String, usize, u64, usize), Group> = BTreeMap::new();
    let mut setting_of = BTreeMap::new();
    for (id, rec) in store.instances() {
        let key = (rec.family.clone(), rec.n, rec.density.to_bits(), rec.param);
        groups.entry(key.clone()).or_default().1.insert(id.clone(), Vec::new());
        setting_of.insert(id.clone(), key);
    }
    for run in store.runs() {
        let group = groups.get_mut(&setting_of[&run.instance_id]).expect("grouped");
        match run.algorithm.as_str() {
            "greedy" => {
                group.0.insert(run.instance_id.clone(), run.best_value);
            }
            "gsemo" => group
                .1
                .get_mut(&run.instance_id)
                .expect("grouped")
                .push((run.repeat, run.best_value)),
            other => {
                return Err(CliError::Validation(format!("unknown algorithm {other:?} in store")))
            }
        }
    }

    let mut rows = Vec::with_capacity(groups.len());
    for ((family, n, density, param), (greedy, mut gsemo)) in groups {
        let gsemo: BTreeMap<String, Vec<f64>> = gsemo
            .iter_mut()
            .map(|(id, runs)| {
                runs.sort_by_key(|r| r.0);
                (id.clone(), runs.iter().map(|r| r.1).collect())
            })
            .collect();
        let summary = setting_verdicts(&greedy, &gsemo, ALPHA)?;
        rows.push(ReportRow {
            family,
            n,
            density: f64::from_bits(density),
            param,
            summary,
        });
    }
    rows.sort_by(row_order);
    Ok(rows)
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "family,n,density,param,instances,greedy_min,greedy_max,\
         gsemo_minus_min,gsemo_minus_max,gsemo_minus_stat,\
         gsemo_mean_min,gsemo_mean_max,gsemo_mean_stat,\
         gsemo_plus_min,gsemo_plus_max,gsemo_plus_stat,losses,wins,ties\n",
    );
    for r in rows {
        let s = &r.summary;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            r.density,
            r.param,
            s.instances,
            s.greedy.min,
            s.greedy.max,
            s.gsemo_min.min,
            s.gsemo_min.max,
            s.verdicts[0],
            s.gsemo_mean.min,
            s.gsemo_mean.max,
            s.verdicts[1],
            s.gsemo_max.min,
            s.gsemo_max.max,
            s.verdicts[2],
            s.losses,
            s.wins,
            s.ties
        );
    }
    out
}

/// Four significant digits, trailing zeros dropped.
pub fn sig4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.3e}").parse().expect("valid float");
    rounded.to_string()
}

/// One table per constraint family.
pub fn render_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let mut family: Option<&str> = None;
    for r in rows {
        if family != Some(r.family.as_str()) {
            if family.is_some() {
                out.push('\n');
            }
            family = Some(&r.family);
            let param = if r.family == "cardinality" { "d1" } else { "k" };
            let _ = writeln!(out, "### {}\n", r.family);
            let _ = writeln!(
                out,
                "| n | density | {param} | GREEDY min | GREEDY max | GSEMO- min | GSEMO- max | stat \
                 | GSEMO* min | GSEMO* max | stat | GSEMO+ min | GSEMO+ max | stat | L-W-T |"
            );
            out.push_str("|---:|---:|---:|---:|---:|---:|---:|:-:|---:|---:|:-:|---:|---:|:-:|:-:|\n");
        }
        let s = &r.summary;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {}-{}-{} |",
            r.n,
            r.density,
            r.param,
            sig4(s.greedy.min),
            sig4(s.greedy.max),
            sig4(s.gsemo_min.min),
            sig4(s.gsemo_min.max),
            s.verdicts[0],
            sig4(s.gsemo_mean.min),
            sig4(s.gsemo_mean.max),
            s.verdicts[1],
            sig4(s.gsemo_max.min),
            sig4(s.gsemo_max.max),
            s.verdicts[2],
            s.losses,
            s.wins,
            s.ties
        );
    }
    out
}

/// Writes `report.csv` and `report.md` into `out_dir` and returns their paths.
pub fn cmd_report(store_path: &Path, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let store = Store::load(store_path)?;
    let rows = build_rows(&store)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let csv = out_dir.join(CSV_FILE);
    let md = out_dir.join(MARKDOWN_FILE);
    write(&csv, render_csv(&rows))?;
    write(&md, render_markdown(&rows))?;
    Ok((csv, md))
}
