use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn graph(name: &str) -> String {
    repo()
        .join(format!("data/graphs/{name}.graph"))
        .to_str()
        .unwrap()
        .to_string()
}

fn walkfilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkfilter"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = walkfilter(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = walkfilter(args);
    assert!(!out.status.success(), "{args:?} succeeded");
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn oracle_text_and_json() {
    assert_eq!(
        ok(&["oracle", &graph("diamond")]),
        "n_p=66\nn_h_directed=12\nn_h_undirected=6\n"
    );
    let json: serde_json::Value = serde_json::from_str(&ok(&["oracle", &graph("k4"), "--json", "--spectrum"])).unwrap();
    assert_eq!(json["n_h_directed"], 24);
    let total: u64 = json["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[1].as_u64().unwrap())
        .sum();
    assert_eq!(total, json["n_p"].as_u64().unwrap());
    assert!(fails(&["oracle", &graph("c5"), "--oracle-limit", "4"]).contains("limit"));
}

#[test]
fn pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s).to_str().unwrap().to_string();
    ok(&["encode", &graph("p2"), "--out", &p("f.series")]);
    ok(&[
        "filter",
        &p("f.series"),
        "--out",
        &p("o.series"),
        "--dump-steps",
        &p("steps"),
    ]);
    for k in 1..=11 {
        assert!(dir.path().join(format!("steps/step_{k}.series")).exists());
    }
    assert_eq!(
        std::fs::read(p("o.series")).unwrap(),
        std::fs::read(p("steps/step_11.series")).unwrap()
    );
    ok(&["pseudo", "--out", &p("pseudo.txt")]);
    assert!(std::fs::read_to_string(p("pseudo.txt"))
        .unwrap()
        .starts_with("pseudo p=4096\n"));
    let text = ok(&["extract", &p("o.series"), &p("pseudo.txt")]);
    assert!(text.starts_with("[extraction]\n") && text.contains("residuals_ok=true"));
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["extract", &p("o.series"), &p("pseudo.txt"), "--json"])).unwrap();
    assert_eq!(json["residuals_ok"], true);

    // the same extraction as the run subcommand
    let run = ok(&["run", &graph("p2")]);
    let k0 = text.lines().find(|l| l.starts_with("k0_re_hex=")).unwrap();
    assert!(run.contains(k0));
}

#[test]
fn run_report_shape() {
    let text = ok(&["run", &graph("diamond")]);
    for block in [
        "[graph]",
        "[profile]",
        "[schedule]",
        "[steps]",
        "[oracle]",
        "[extraction]",
        "[verdict]",
    ] {
        assert!(text.contains(block), "{block}");
    }
    assert!(!text.contains("[timings_ms]"));
    assert!(ok(&["run", &graph("diamond"), "--timings"]).contains("[timings_ms]"));
    let json: serde_json::Value = serde_json::from_str(&ok(&["run", &graph("c4"), "--json"])).unwrap();
    assert_eq!(json["oracle"]["n_h_directed"], 8);
    assert_eq!(json["steps"].as_array().unwrap().len(), 11);
    let unverified = ok(&["run", &graph("k4"), "--oracle-limit", "3"]);
    assert!(unverified.contains("verdict=UNVERIFIED"));
}

#[test]
fn thread_count_does_not_change_output() {
    for name in ["diamond", "c5"] {
        let one = ok(&["run", &graph(name), "--threads", "1"]);
        assert_eq!(one, ok(&["run", &graph(name), "--threads", "4"]));
        assert_eq!(one, ok(&["run", &graph(name)]));
    }
    assert!(fails(&["run", &graph("p2"), "--threads", "0"]).contains("threads"));
}

#[test]
fn check_profile() {
    let desk = ok(&["check-profile"]);
    assert!(desk.contains("FAIL") && desk.contains("2^n_d n^n r_{n_d+1} << 1"));
    for n in [4, 8, 16] {
        let path = repo().join(format!("data/profiles/full_n{n}.profile"));
        let text = ok(&["check-profile", "--profile", path.to_str().unwrap()]);
        assert!(!text.contains("FAIL"), "n = {n}");
    }
    let json: serde_json::Value = serde_json::from_str(&ok(&["check-profile", "--json"])).unwrap();
    assert_eq!(json["constraints"].as_array().unwrap().len(), 7);
}

#[test]
fn bench_table() {
    let text = ok(&["bench", "--n-min", "3", "--n-max", "4"]);
    assert_eq!(text.lines().count(), 3);
    assert_eq!(ok(&["bench", "--n-min", "5", "--n-max", "4"]).lines().count(), 1);
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "n 3\ne 1 2\ne 2 9\n").unwrap();
    let err = fails(&["run", bad.to_str().unwrap()]);
    assert!(err.contains("graph") && err.contains("line 3"), "{err}");
    let profile = dir.path().join("bad.profile");
    std::fs::write(&profile, "n=4\nbogus=1\n").unwrap();
    assert!(fails(&["check-profile", "--profile", profile.to_str().unwrap()]).contains("line 2"));
    let series = dir.path().join("bad.series");
    std::fs::write(&series, "not a series\n").unwrap();
    fails(&["filter", series.to_str().unwrap()]);
    fails(&["encode", dir.path().join("missing.graph").to_str().unwrap()]);
    fails(&[
        "run",
        &graph("p2"),
        "--profile",
        repo().join("data/profiles/full_n4.profile").to_str().unwrap(),
    ]);
}
