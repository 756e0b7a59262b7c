use std::path::Path;

use instsel::datamodel::{FeatureTable, InstanceKey, PerfRecord, PerformanceTable};
use instsel::pipeline::{cmd_compare, cmd_extract, cmd_pipeline, cmd_select, list_tree, HeuristicChoice, PipelineConfig, Report};
use instsel::Error;

fn quick(out: &Path) -> PipelineConfig {
    PipelineConfig {
        out: out.to_path_buf(),
        ..Default::default()
    }
}

#[test]
fn extract_writes_one_row_per_builtin_problem() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick(dir.path());
    cfg.harness.dimension = 5;
    cfg.harness.rotated_instances = 0;
    cfg.harness.runs = 3;
    cfg.harness.budget_per_dimension = 50;
    cfg.harness.feature_repetitions = 2;
    cfg.harness.sample_factor = 20;
    cmd_extract(&cfg).unwrap();
    let t = instsel::datamodel::load_feature_table(dir.path().join("features.csv"), &[] as &[&str]).unwrap();
    assert_eq!(t.n_rows(), 12);
    assert!(t.keys().iter().all(|k| k.dimension == 5));
    assert!(t.column_index("ic.eps.s").is_none());
}

#[test]
fn select_writes_a_file_per_seed_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick(dir.path());
    cfg.heuristics = vec![HeuristicChoice::Mis];
    cmd_select(&cfg).unwrap();
    let files = list_tree(&dir.path().join("selections")).unwrap();
    let runs = files.iter().filter(|p| p.to_string_lossy().contains("_seed")).count();
    let summaries = files.iter().filter(|p| p.to_string_lossy().ends_with("_summary.json")).count();
    assert_eq!((runs, summaries), (90, 3));
    let one: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("selections/mis_0.95_seed07.json")).unwrap()).unwrap();
    assert_eq!(one["heuristic"], "mis");
    assert!(one["config"].is_object());
}

#[test]
fn cluster_selection_draws_configured_suites() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = quick(dir.path());
    cfg.heuristics = vec![HeuristicChoice::Cluster];
    cmd_select(&cfg).unwrap();
    let suites: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("selections/cluster_suites.json")).unwrap()).unwrap();
    assert_eq!(suites["suites"].as_array().unwrap().len(), 15);
    let clusters = std::fs::read_to_string(dir.path().join("clusters.csv")).unwrap();
    assert_eq!(clusters.lines().count(), 37);
}

fn write_tables(dir: &Path, families: &[&str], n_per: u32, corrupt: bool) -> (std::path::PathBuf, std::path::PathBuf) {
    let mut rng = instsel::rng::stream(6);
    let mut keys = Vec::new();
    let mut rows = Vec::new();
    for fam in families {
        for p in 1..=n_per {
            keys.push(InstanceKey::new(*fam, p, 1, 2).unwrap());
            rows.push((0..5).map(|_| 0.1 + instsel::rng::unit(&mut rng)).collect::<Vec<f64>>());
        }
    }
    let names = (0..5).map(|j| format!("f{j}")).collect();
    let mut features = FeatureTable::new(keys.clone(), names, rows).unwrap().to_csv_string().unwrap();
    if corrupt {
        features = features.replacen("\n", "\nBAD,1,1,2,1,2,3\n", 1);
    }
    let mut records = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        // "A" and "B" tie on family X and differ on family Y
        let fam_y = k.suite == "Y";
        for (alg, shift) in [("A", 0.0), ("B", if fam_y { 5.0 } else { 0.0 }), ("C", 10.0)] {
            for r in 0..10 {
                records.push(PerfRecord {
                    key: k.clone(),
                    algorithm: alg.into(),
                    run_index: r,
                    value: shift + ((i * 31 + r * 7) % 13) as f64 / 13.0,
                });
            }
        }
    }
    let perf = PerformanceTable::new(records).unwrap().to_csv_string().unwrap();
    let fp = dir.join("in_features.csv");
    let pp = dir.join("in_performance.csv");
    std::fs::write(&fp, features).unwrap();
    std::fs::write(&pp, perf).unwrap();
    (fp, pp)
}

fn file_config(dir: &Path, families: &[&str], corrupt: bool) -> PipelineConfig {
    let (f, p) = write_tables(dir, families, 15, corrupt);
    PipelineConfig {
        features: Some(f),
        performance: Some(p),
        out: dir.join("out"),
        heuristics: vec![HeuristicChoice::Ds, HeuristicChoice::Mis],
        thresholds: vec![0.99],
        ..Default::default()
    }
}

#[test]
fn corrupt_input_fails_without_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = file_config(dir.path(), &["X"], true);
    let err = cmd_pipeline(&cfg).unwrap_err();
    assert!(err.is_data_error(), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn single_suite_has_no_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = file_config(dir.path(), &["X"], false);
    cfg.graph_repetitions = 1;
    cmd_compare(&cfg).unwrap();
    let report: Report = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    for s in &report.selections {
        assert!(s.counts.is_none() && s.single.is_some(), "{}", s.label);
    }
    assert!(report.per_benchmark.is_empty());
}

#[test]
fn family_disagreement_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = file_config(dir.path(), &["X", "Y"], false);
    cmd_compare(&cfg).unwrap();
    let report: Report = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report.per_benchmark.len(), 2);
    let flagged = report
        .discrepancies
        .iter()
        .find(|d| d.first == "A" && d.second == "B")
        .expect("A vs B differs between families");
    assert_eq!(flagged.significant_in, vec!["Y".to_string()]);
    assert_eq!(flagged.not_significant_in, vec!["X".to_string()]);
    let md = std::fs::read_to_string(dir.path().join("out/report.md")).unwrap();
    assert!(md.contains("A vs B"));
}

#[test]
fn strict_mode_turns_warnings_into_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = file_config(dir.path(), &["X"], false);
    cfg.thresholds = vec![0.5];
    let lenient = cmd_compare(&cfg).unwrap();
    assert!(!lenient.warnings.is_empty());
    cfg.strict = true;
    cfg.out = dir.path().join("strict");
    assert!(matches!(cmd_compare(&cfg), Err(Error::Precondition(_))));
    assert!(!cfg.out.exists());
}
