use std::path::Path;
use std::process::{Command, Output};

fn dynfeat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynfeat"))
        .args(args)
        .current_dir(dir)
        .env_remove("DYNFEAT_DATA_DIR")
        .output()
        .unwrap()
}

fn synth(dir: &Path, kind: &str, name: &str, seed: &str) {
    let out = dynfeat(&["gen-synth", "--kind", kind, "--seed", seed, "--out-dir", ".", "--name", name], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn stats_prints_a_csv_line() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "planted-signal", "ps", "0");
    let out = dynfeat(&["stats", "--dataset-dir", ".", "--name", "ps"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,num_graphs,classes,node_labels,avg_nodes,avg_edges");
    assert!(lines[1].starts_with("ps,120,2,3,"), "{}", lines[1]);
}

#[test]
fn gen_synth_and_extract_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "planted-signal", "a", "7");
    synth(dir.path(), "planted-signal", "b", "7");
    for suffix in ["A", "graph_indicator", "graph_labels", "node_labels"] {
        let a = std::fs::read(dir.path().join(format!("a_{suffix}.txt"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b_{suffix}.txt"))).unwrap();
        assert_eq!(a, b, "{suffix}");
    }
    for out in ["x.csv", "y.csv"] {
        let o = dynfeat(&["extract", "--dataset-dir", ".", "--name", "a", "--out", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let x = std::fs::read(dir.path().join("x.csv")).unwrap();
    assert_eq!(x, std::fs::read(dir.path().join("y.csv")).unwrap());
    assert!(String::from_utf8(x).unwrap().starts_with("graph_id,class,deg@0,"));
}

#[test]
fn node_labels_on_unlabeled_data_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "fixed-vertex", "fv", "0");
    let out = dynfeat(&["extract", "--dataset-dir", ".", "--name", "fv", "--out", "f.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node_labels"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dynfeat(&["no-such-command"], dir.path()).status.code(), Some(2));
    assert_eq!(dynfeat(&["stats", "--name", "x"], dir.path()).status.code(), Some(2));
    let missing = dynfeat(&["stats", "--dataset-dir", ".", "--name", "absent"], dir.path());
    assert_eq!(missing.status.code(), Some(3));
    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    synth(dir.path(), "planted-signal", "ps", "0");
    let bad_cfg = dynfeat(
        &["extract", "--dataset-dir", ".", "--name", "ps", "--config", "bad.cfg", "--out", "o.csv"],
        dir.path(),
    );
    assert_eq!(bad_cfg.status.code(), Some(2));
    assert_eq!(dynfeat(&["--jobs", "0", "demo-fig1"], dir.path()).status.code(), Some(2));
}

#[test]
fn demo_fig1_writes_six_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dynfeat(&["demo-fig1", "--n", "12", "--t-max", "4"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("topology,t,u"));
    assert_eq!(text.lines().count(), 1 + 6 * 5);
    assert!(text.contains("\nclique,1,"));
}

#[test]
fn evaluate_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "planted-signal", "ps", "2");
    std::fs::write(dir.path().join("c.cfg"), "# small run\nattributes = degree, second_eigenvector\nts = 0, 1, 2\n").unwrap();
    let out = dynfeat(
        &[
            "evaluate", "--dataset-dir", ".", "--name", "ps", "--config", "c.cfg", "--model", "rf", "--repeats", "1",
            "--folds", "5", "--no-timing",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("ps,rf,"), "{last}");
    assert!(last.ends_with(",0.000"), "{last}");
}
