use std::path::{Path, PathBuf};
use std::process::Command;

use gsemo_cli::bundle::{Bundle, Meta, Objective, Seeds};
use gsemo_cli::config::{ExperimentConfig, TPolicy};
use gsemo_cli::experiment::{cmd_experiment, cmd_gen, plan};
use gsemo_cli::report::{build_rows, cmd_report, render_csv};
use gsemo_cli::store::{InstanceRecord, RunLine, Store, STORE_FILE};
use gsemo_cli::verify::cmd_verify;
use gsemo_core::instances::{ConstraintScheme, EdgeUniverse, Fraction, InstanceSpec};
use gsemo_core::objectives::{ModularFunction, SetFunction};
use gsemo_core::{PartitionMatroid, Solution};

fn gsemo_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsemo"))
}

fn write_g3(dir: &Path) {
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join("graph.txt"), "3 2\n0 1 0.5\n1 2 0.3\n").unwrap();
    std::fs::write(
        dir.join("constraint.json"),
        r#"{"n": 3, "k": 2, "assignment": [0, 0, 1], "thresholds": [1, 1]}"#,
    )
    .unwrap();
}

fn small_config(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        master_seed: 11,
        ns: vec![10],
        densities: vec![0.2],
        schemes: vec!["card:1/2".into(), "part:2".into()],
        graphs_per_setting: 3,
        repeats: 4,
        t_policy: TPolicy::Fixed(300),
        parallelism: 2,
        output_dir: Some(out.to_path_buf()),
        trace_stride: None,
        edge_universe: "unordered".into(),
    }
}

fn read_dir_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn generated_bundle_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    for scheme in [
        ConstraintScheme::Cardinality(Fraction::new(1, 4)),
        ConstraintScheme::Partition { k: 5 },
    ] {
        let spec = InstanceSpec {
            n: 50,
            density: 0.05,
            scheme,
            graph_seed: 3,
            partition_seed: scheme.needs_seed().then_some(4),
            universe: EdgeUniverse::Unordered,
        };
        let b = Bundle::generate(&spec).unwrap();
        let dir = tmp.path().join(spec.id().to_string());
        b.save(&dir).unwrap();
        assert_eq!(Bundle::load(&dir).unwrap(), b);
    }
}

#[test]
fn handwritten_g3_has_the_expected_cut_values() {
    let tmp = tempfile::tempdir().unwrap();
    write_g3(tmp.path());
    let b = Bundle::load(tmp.path()).unwrap();
    let expected = [0.0, 0.5, 0.8, 0.3, 0.3, 0.8, 0.5, 0.0];
    for (mask, want) in expected.iter().enumerate() {
        let x = Solution::from_mask(3, mask as u64);
        assert!((b.objective.value(&x) - want).abs() < 1e-12, "mask {mask}");
    }
}

#[test]
fn malformed_graph_files_are_rejected_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    write_g3(tmp.path());
    std::fs::write(tmp.path().join("graph.txt"), "3 2\n0 1 0.5\n2 2 0.3\n").unwrap();
    let e = Bundle::load(tmp.path()).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert!(e.to_string().contains("graph.txt:3: self-loop"), "{e}");

    let out = gsemo_bin()
        .args(["solve", tmp.path().to_str().unwrap(), "--algorithm", "greedy"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_subcommand() {
    let tmp = tempfile::tempdir().unwrap();
    write_g3(tmp.path());
    let dir = tmp.path().to_str().unwrap();
    let run = |args: &[&str]| {
        let out = gsemo_bin().args(args).output().unwrap();
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };

    let (code, json) = run(&["solve", dir, "--algorithm", "greedy"]);
    assert_eq!(code, Some(0));
    let r: RunLine = serde_json::from_str(&json).unwrap();
    assert_eq!((r.best_value, r.best_solution.clone()), (0.8, vec![1]));

    let (code, json) = run(&["solve", dir, "--algorithm", "gsemo", "--iterations", "0"]);
    assert_eq!(code, Some(0));
    let r: RunLine = serde_json::from_str(&json).unwrap();
    assert_eq!((r.best_value, r.oracle_calls), (0.0, 1));
    assert!(r.best_solution.is_empty());

    let (code, _) = run(&["solve", dir, "--algorithm", "anneal"]);
    assert_eq!(code, Some(2));

    let store = tmp.path().join("s.jsonl");
    let s = store.to_str().unwrap();
    for _ in 0..2 {
        let (code, _) = run(&["solve", dir, "--algorithm", "gsemo", "--iterations", "50", "--store", s]);
        assert_eq!(code, Some(0));
    }
    assert_eq!(Store::load(&store).unwrap().runs().len(), 1);
}

#[test]
fn gen_is_deterministic_and_guards_density() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ids_a = cmd_gen(&small_config(a.path())).unwrap();
    let ids_b = cmd_gen(&small_config(b.path())).unwrap();
    assert_eq!(ids_a.len(), 3 * 2);
    assert_eq!(
        ids_a.iter().map(|i| &i.0).collect::<Vec<_>>(),
        ids_b.iter().map(|i| &i.0).collect::<Vec<_>>()
    );
    assert_eq!(
        read_dir_bytes(&a.path().join("instances")),
        read_dir_bytes(&b.path().join("instances"))
    );

    let mut c = small_config(a.path());
    c.densities = vec![0.9];
    assert_eq!(cmd_gen(&c).unwrap_err().exit_code(), 3);
}

#[test]
fn full_protocol_instance_count() {
    let c = ExperimentConfig::default();
    let planned = plan(&c).unwrap();
    assert_eq!(planned.len(), 3 * 5 * 30 * 6);
    let card = planned
        .iter()
        .filter(|p| p.spec.scheme.family() == "cardinality")
        .count();
    assert_eq!(card, 1350);
}

#[test]
fn experiment_accounting_resume_and_parallelism() {
    let tmp = tempfile::tempdir().unwrap();
    let c = small_config(tmp.path());
    let out = cmd_experiment(&c).unwrap();
    assert_eq!(out.runs_added, 6 * (1 + 4));
    let store_path = tmp.path().join(STORE_FILE);
    let store = Store::load(&store_path).unwrap();
    assert_eq!(store.instances().len(), 6);
    assert_eq!(store.runs().len(), 6 * (1 + 4));
    for r in store.runs().iter().filter(|r| r.algorithm == "gsemo") {
        assert_eq!(r.oracle_calls, 300 + 1);
    }
    let full = std::fs::read(&store_path).unwrap();

    let again = cmd_experiment(&c).unwrap();
    assert_eq!((again.runs_added, again.runs_skipped), (0, 30));
    assert_eq!(std::fs::read(&store_path).unwrap(), full);

    for cut in [full.len() / 3, full.len() / 2 + 7, full.len() - 5] {
        std::fs::write(&store_path, &full[..cut]).unwrap();
        cmd_experiment(&c).unwrap();
        assert_eq!(std::fs::read(&store_path).unwrap(), full, "resume from byte {cut}");
    }

    for parallelism in [1, 5] {
        let other = tempfile::tempdir().unwrap();
        let mut c2 = small_config(other.path());
        c2.parallelism = parallelism;
        cmd_experiment(&c2).unwrap();
        assert_eq!(std::fs::read(other.path().join(STORE_FILE)).unwrap(), full);
    }
}

fn instance(id: &str) -> InstanceRecord {
    InstanceRecord {
        instance_id: id.into(),
        n: 10,
        density: 0.2,
        scheme: "card:1/2".into(),
        family: "cardinality".into(),
        param: 5,
        k: 1,
        d: 5,
        dbar: 5,
        iterations: 100,
    }
}

fn run(id: &str, algorithm: &str, repeat: usize, value: f64) -> RunLine {
    RunLine {
        instance_id: id.into(),
        algorithm: algorithm.into(),
        repeat,
        seed: None,
        iterations: 0,
        oracle_calls: 0,
        best_value: value,
        best_solution: vec![],
        trace: vec![],
    }
}

/// Exact two-sided signed-rank p by enumerating all sign vectors.
fn enumerated_p(diffs: &[f64]) -> f64 {
    let d: Vec<f64> = diffs.iter().copied().filter(|x| *x != 0.0).collect();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs()));
    let mut rank = vec![0.0; d.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && d[order[j + 1]].abs() == d[order[i]].abs() {
            j += 1;
        }
        for &o in &order[i..=j] {
            rank[o] = (i + j + 2) as f64 / 2.0;
        }
        i = j + 1;
    }
    let observed: f64 = (0..d.len()).filter(|&i| d[i] > 0.0).map(|i| rank[i]).sum();
    let total = 1u64 << d.len();
    let (mut ge, mut le) = (0u64, 0u64);
    for s in 0..total {
        let w: f64 = (0..d.len()).filter(|&i| s >> i & 1 == 1).map(|i| rank[i]).sum();
        ge += (w >= observed - 1e-9) as u64;
        le += (w <= observed + 1e-9) as u64;
    }
    (2.0 * ge.min(le) as f64 / total as f64).min(1.0)
}

#[test]
fn report_matches_a_hand_computed_row() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join(STORE_FILE);
    let greedy = [("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0), ("e", 5.0), ("f", 6.0), ("g", 7.0)];
    {
        let mut store = Store::open(&path).unwrap();
        for &(id, g) in &greedy {
            store.add_instance(instance(id)).unwrap();
            store.add_run(run(id, "greedy", 0, g)).unwrap();
            for r in 0..6 {
                let v = if id == "f" { r as f64 } else { g + 1.0 + r as f64 };
                store.add_run(run(id, "gsemo", r, v)).unwrap();
            }
        }
    }
    let rows = build_rows(&Store::load(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    let s = &rows[0].summary;
    assert_eq!((s.greedy.min, s.greedy.max), (1.0, 7.0));
    assert_eq!((s.gsemo_min.min, s.gsemo_min.max), (0.0, 8.0));
    assert_eq!((s.gsemo_mean.min, s.gsemo_mean.max), (2.5, 10.5));
    assert_eq!((s.gsemo_max.min, s.gsemo_max.max), (5.0, 13.0));
    assert_eq!((s.losses, s.wins, s.ties), (1, 6, 0));

    let columns: [[f64; 7]; 3] = [
        [2.0, 3.0, 4.0, 5.0, 6.0, 0.0, 8.0],
        [4.5, 5.5, 6.5, 7.5, 8.5, 2.5, 10.5],
        [7.0, 8.0, 9.0, 10.0, 11.0, 5.0, 13.0],
    ];
    let expected_p = [23.0 / 64.0, 8.0 / 64.0, 2.0 / 64.0];
    for (k, col) in columns.iter().enumerate() {
        let diffs: Vec<f64> = col.iter().zip(&greedy).map(|(c, g)| c - g.1).collect();
        assert!((enumerated_p(&diffs) - expected_p[k]).abs() < 1e-12);
    }
    let symbols: String = s.verdicts.iter().map(|v| v.symbol()).collect();
    assert_eq!(symbols, "**+");

    let csv = render_csv(&rows);
    assert_eq!(
        csv.lines().nth(1).unwrap(),
        "cardinality,10,0.2,5,7,1,7,0,8,*,2.5,10.5,*,5,13,+,1,6,0"
    );
    let (csv_path, md_path) = cmd_report(&path, tmp.path()).unwrap();
    let first = std::fs::read(&csv_path).unwrap();
    cmd_report(&path, tmp.path()).unwrap();
    assert_eq!(std::fs::read(&csv_path).unwrap(), first);
    let md = std::fs::read_to_string(md_path).unwrap();
    assert!(md.contains("| 10 | 0.2 | 5 | 1 | 7 | 0 | 8 | * | 2.5 | 10.5 | * | 5 | 13 | + | 1-6-0 |"), "{md}");
}

#[test]
fn report_refusals() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join(STORE_FILE);
    drop(Store::open(&path).unwrap());
    assert_eq!(cmd_report(&path, tmp.path()).unwrap_err().exit_code(), 3);

    let mut store = Store::open(&path).unwrap();
    store.add_instance(instance("a")).unwrap();
    store.add_instance(instance("b")).unwrap();
    store.add_run(run("a", "greedy", 0, 1.0)).unwrap();
    store.add_run(run("a", "gsemo", 0, 1.0)).unwrap();
    drop(store);
    let e = cmd_report(&path, tmp.path()).unwrap_err();
    assert!(e.to_string().contains('b'), "{e}");

    let e = cmd_report(&tmp.path().join("missing.jsonl"), tmp.path()).unwrap_err();
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn report_verdicts_stay_in_codomain() {
    let tmp = tempfile::tempdir().unwrap();
    let c = small_config(tmp.path());
    cmd_experiment(&c).unwrap();
    let (csv, _) = cmd_report(&tmp.path().join(STORE_FILE), tmp.path()).unwrap();
    let text = std::fs::read_to_string(csv).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        for idx in [9, 12, 15] {
            assert!(["+", "-", "*"].contains(&f[idx]), "{line}");
        }
        let ltw: usize = f[16..19].iter().map(|x| x.parse::<usize>().unwrap()).sum();
        assert_eq!(ltw, f[4].parse::<usize>().unwrap());
    }
}

#[test]
fn verify_g3_and_modular_bundles() {
    let tmp = tempfile::tempdir().unwrap();
    write_g3(tmp.path());
    let r = cmd_verify(&Bundle::load(tmp.path()).unwrap(), None, 1).unwrap();
    assert!((r.opt_value - 0.8).abs() < 1e-12);
    assert!(r.theorem1_bound <= 0.8);
    assert!(r.gsemo.meets_theorem1 && r.gsemo.at_most_opt && r.gsemo.feasible);
    assert_eq!(r.greedy.value, 0.8);

    let modular = Bundle {
        objective: Objective::Modular(ModularFunction::new(vec![0.5, 0.2, 0.9, 0.4, 0.1]).unwrap()),
        constraint: PartitionMatroid::new(vec![0, 0, 1, 1, 1], vec![1, 2]).unwrap(),
        meta: Meta {
            instance_id: "modular".into(),
            n: 5,
            density: None,
            scheme: None,
            seeds: Seeds::default(),
            edge_universe: None,
            objective: Some("modular".into()),
        },
    };
    let dir = tmp.path().join("modular");
    modular.save(&dir).unwrap();
    let out = gsemo_bin().args(["verify", dir.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["gamma_term"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["gsemo"]["meets_theorem2"], serde_json::Value::Bool(true));

    let big = Bundle {
        objective: Objective::Modular(ModularFunction::new(vec![1.0; 21]).unwrap()),
        constraint: PartitionMatroid::cardinality(21, 3).unwrap(),
        meta: Meta { n: 21, ..modular.meta },
    };
    let dir = tmp.path().join("big");
    big.save(&dir).unwrap();
    let out = gsemo_bin().args(["verify", dir.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("limited to n <= 20"), "{err}");
}
