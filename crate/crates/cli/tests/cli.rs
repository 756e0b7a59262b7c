use std::path::Path;
use std::process::{Command, Output};

fn instsel(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_instsel"));
    cmd.args(args).env_remove("SELECTOR_THREADS");
    if let Some(t) = threads {
        cmd.env("SELECTOR_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn out_arg(dir: &Path) -> String {
    dir.join("out").to_string_lossy().into_owned()
}

#[test]
fn build_graph_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = instsel(&["build-graph", "--threshold", "0.9", "--threshold", "0.97", "--out", &out_arg(dir.path())], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/graphs/graph_0.90.edges").exists());
    assert!(dir.path().join("out/graphs/graph_0.97.edges").exists());
    assert!(!dir.path().join("out/graphs/graph_0.95.edges").exists());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = instsel(&["select", "--heuristic", "ds", "--out", path.to_str().unwrap()], Some(threads));
        assert_eq!(code(&out), 0);
    }
    for name in ["selections/ds_0.95_seed00.json", "selections/ds_0.97_summary.json"] {
        let read = |root: &Path| std::fs::read_to_string(root.join(name)).unwrap().replace(root.to_str().unwrap(), "");
        assert_eq!(read(&a), read(&b), "{name}");
    }
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = out_arg(dir.path());
    assert_eq!(code(&instsel(&["select", "--alpha", "1.5", "--out", &o], None)), 2);
    assert_eq!(code(&instsel(&["select", "--threshold", "1.2", "--out", &o], None)), 2);
    assert_eq!(code(&instsel(&["select", "--heuristic", "cluster", "--clusters-range", "2-500", "--out", &o], None)), 2);
    assert_eq!(code(&instsel(&["select", "--out", &o], Some("zero"))), 2);
    assert!(!dir.path().join("out").exists());
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let features = dir.path().join("f.csv");
    let performance = dir.path().join("p.csv");
    std::fs::write(&features, "suite,problem_id,instance_id,dimension,a\nS,1,1,2,oops\n").unwrap();
    std::fs::write(&performance, "suite,problem_id,instance_id,dimension,algorithm,run,value\nS,1,1,2,A,0,1\n").unwrap();
    let out = instsel(
        &[
            "compare",
            "--features",
            features.to_str().unwrap(),
            "--performance",
            performance.to_str().unwrap(),
            "--out",
            &out_arg(dir.path()),
        ],
        None,
    );
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn strict_warnings_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = out_arg(dir.path());
    // small suites at the low thresholds fall below the Friedman minimum
    let lenient = instsel(&["compare", "--heuristic", "ds", "--threshold", "0.9", "--out", &o], None);
    assert_eq!(code(&lenient), 0);
    let strict = dir.path().join("strict");
    let out = instsel(
        &["compare", "--heuristic", "ds", "--threshold", "0.9", "--strict", "--out", strict.to_str().unwrap()],
        None,
    );
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!strict.exists());
}
