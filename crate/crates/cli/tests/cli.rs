use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str =
    "bound,trial,seed,dA,d,eps,eps_provenance,lhs_bits,rhs_bits,margin_bits,violated";

fn qcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcb"))
        .args(args)
        .env_remove("QCB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn export(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["export"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", &path]);
    assert_eq!(qcb(&full).status.code(), Some(0));
    path
}

#[test]
fn check_prints_schema_and_summary() {
    let o = qcb(&[
        "check",
        "prop1",
        "--trials",
        "5",
        "--seed",
        "7",
        "--dims",
        "A=2,B=2,C=2,E=2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 6);
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').count() == 11 && l.ends_with(",false")));
    assert!(stderr(&o).contains("violations=0"));
    assert!(stderr(&o).contains("max_negative_margin_bits="));
}

#[test]
fn check_is_deterministic_and_seeded() {
    let args = ["check", "prop2", "--trials", "4", "--seed", "3"];
    let (a, b) = (qcb(&args), qcb(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = qcb(&["check", "prop2", "--trials", "4", "--seed", "4"]);
    assert_ne!(a.stdout, other.stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_qcb"))
        .args(["check", "prop2", "--trials", "4"])
        .env("QCB_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
}

#[test]
fn trivial_prop3_row() {
    let o = qcb(&[
        "check",
        "prop3",
        "--trials",
        "1",
        "--same-channel",
        "--same-state",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(row[7], "0");
}

#[test]
fn campaign_variants_exit_cleanly() {
    for args in [
        &[
            "check",
            "prop4",
            "--n",
            "2",
            "--trials",
            "3",
            "--dims",
            "A=2,B=2,C=2,D=2",
        ][..],
        &[
            "check",
            "prop5",
            "--trials",
            "3",
            "--eps-source",
            "interval-upper",
        ],
        &["check", "aux", "--trials", "3"],
        &["check", "prop1", "--qc", "--trials", "3"],
    ] {
        let o = qcb(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn tsv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.tsv");
    let o = qcb(&[
        "check",
        "prop1",
        "--trials",
        "2",
        "--format",
        "tsv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), HEADER.replace(',', "\t"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["check", "prop9"][..],
        &["check", "prop1", "--trials", "0"],
        &["check", "prop1", "--dims", "A=0"],
        &["check", "prop1", "--dims", "A=2,A=3"],
        &["check", "prop1", "--eps-source", "exact"],
        &["check", "prop4", "--n", "0"],
        &["check", "prop1", "--dims", "A=64,B=64,C=2,E=2"],
        &["tightness", "--x", "0.5"],
        &["capacity", "--d", "1"],
        &["bogus"],
    ] {
        assert_eq!(qcb(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tightness_table() {
    let o = qcb(&["tightness", "--x", "0.001,0", "--log2-d", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,log2_d,beta_upper,lhs_Q,rhs_QC,ratio");
    let ratio: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 0.987_742_283_912).abs() < 1e-11);
    assert_eq!(lines[2], "0,1000,0,0,0,1");
}

#[test]
fn erasure_capacity_table() {
    let o = qcb(&["capacity", "--d", "4", "--p", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("classical,1.5,closed-form"));
    assert!(text.contains("quantum,1,closed-form"));
    assert!(text.contains("entanglement-assisted,3,concave-certified"));
    for p in ["0.5", "0.6"] {
        let text = stdout(&qcb(&["capacity", "--d", "2", "--p", p]));
        assert!(text.contains("quantum,0,closed-form"), "p={p}");
    }
}

#[test]
fn capacity_of_channel_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = export(dir.path(), "id.json", &["identity", "--d", "2"]);
    let o = qcb(&["capacity", "--channel", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("holevo-cap,1,heuristic-lower-bound"));
    assert!(text.contains("quantum,unavailable,none"));
    assert!(text.contains("entanglement-assisted,2,concave-certified"));
}

#[test]
fn distance_between_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = export(dir.path(), "a.json", &["erasure", "--d", "2", "--p", "0.4"]);
    let b = export(dir.path(), "b.json", &["erasure", "--d", "2", "--p", "0.5"]);
    let o = qcb(&["distance", &a, &b]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("sandwich: ok"));
    let bures = text.lines().find(|l| l.starts_with("bures:")).unwrap();
    let upper: f64 = bures
        .split(['[', ',', ']'])
        .nth(2)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    // closed form at x = 0.1
    assert!(upper <= 0.100_636_444_64 + 1e-10);

    let same = stdout(&qcb(&["distance", &a, &a]));
    assert!(same.contains("diamond: [0, 0]"));
    assert!(same.contains("bures: [0, 0]"));

    let qutrit = export(dir.path(), "c.json", &["identity", "--d", "3"]);
    assert_eq!(qcb(&["distance", &a, &qutrit]).status.code(), Some(2));
}

#[test]
fn malformed_channel_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"din\": 2,\n  \"dout\": ]\n}").unwrap();
    let good = export(dir.path(), "good.json", &["identity"]);
    let o = qcb(&["distance", bad.to_str().unwrap(), &good]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn random_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = export(
        dir.path(),
        "r1.json",
        &[
            "random", "--d", "2", "--dout", "3", "--kraus", "2", "--seed", "5",
        ],
    );
    let b = export(
        dir.path(),
        "r2.json",
        &[
            "random", "--d", "2", "--dout", "3", "--kraus", "2", "--seed", "5",
        ],
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = qcb(&["distance", &a, &b, "--method", "bures"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("bures: [0, "));
}
