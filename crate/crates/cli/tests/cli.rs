use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FILES: &[&str] = &[
    "corpus.jsonl",
    "corpus_stats.txt",
    "weeks.csv",
    "stances.csv",
    "aspect_scores.csv",
    "edges.csv",
    "polarization.csv",
    "polarization_summary.csv",
    "disaster_report.csv",
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affectgauge"))
        .args(args)
        .env_remove("AFFECTGAUGE_OUT")
        .output()
        .expect("binary runs")
}

fn small_spec(dir: &Path) -> String {
    let spec = dir.join("spec.toml");
    let text = r#"
n_users_per_group = 120
n_weeks = 6
msgs_per_user_week = 3
p_intergroup_interaction = 0.3
sentiment_sd = 0.2
seed_hashtag_rate = 0.05
retweet_rate = 0.2
retweet_homophily = 0.97
shared_tag_rate = 0.1
disaster_tag_share = 0.5
topic_purity = 0.85
start_date = "2017-08-26"
rng_seed = 5

[believer]
in_group_mean = 0.4
out_group_mean = 0.1
hostile_out_group_mean = -0.5
hostile_weeks = 1
disaster_rate_hostile = 0.05
disaster_rate_other = 0.15

[disbeliever]
in_group_mean = 0.4
out_group_mean = -0.1
hostile_out_group_mean = -0.7
hostile_weeks = 1
disaster_rate_hostile = 0.35
disaster_rate_other = 0.1
"#;
    fs::write(&spec, text).unwrap();
    spec.display().to_string()
}

fn synth_then_all(dir: &Path, out: &str, parallelism: &str) {
    let d = dir.display().to_string();
    let spec = small_spec(dir);
    let synth = run(&["synth", "--out", &d, "--spec", &spec]);
    assert!(synth.status.success(), "{}", String::from_utf8_lossy(&synth.stderr));
    let all = run(&[
        "all",
        "--out",
        &dir.join(out).display().to_string(),
        "--corpus",
        &dir.join("synth_corpus.jsonl").display().to_string(),
        "--collection-config",
        &dir.join("synth_collection.toml").display().to_string(),
        "--parallelism",
        parallelism,
    ]);
    assert!(all.status.success(), "{}", String::from_utf8_lossy(&all.stderr));
}

#[test]
fn help_exits_zero() {
    for args in [&["--help"][..], &["ingest", "--help"], &["synth", "--help"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    }
}

#[test]
fn polarize_without_graph_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["polarize", "--out", &dir.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges.csv"));
}

#[test]
fn unknown_flags_and_absent_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    assert_eq!(run(&["ingest", "--out", &d, "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["ingest"]).status.code(), Some(2));
    let missing = dir.path().join("absent.jsonl").display().to_string();
    assert_eq!(run(&["ingest", "--out", &d, "--corpus", &missing]).status.code(), Some(2));
}

#[test]
fn malformed_corpus_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.jsonl");
    fs::write(&corpus, "not json\nstill not json\n").unwrap();
    let out = run(&[
        "ingest",
        "--out",
        &dir.path().join("o").display().to_string(),
        "--corpus",
        &corpus.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synth_then_all_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    synth_then_all(dir.path(), "out", "1");
    for f in FILES {
        let text = fs::read_to_string(dir.path().join("out").join(f)).unwrap();
        assert!(!text.is_empty(), "{f} is empty");
    }
    for f in ["truth_users.csv", "truth_weeks.csv"] {
        assert!(dir.path().join(f).is_file());
    }
    let report = fs::read_to_string(dir.path().join("out/disaster_report.csv")).unwrap();
    assert!(report.starts_with("group,condition,metric,value,se,n_weeks\n"));
}

#[test]
fn outputs_do_not_depend_on_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    synth_then_all(dir.path(), "p1", "1");
    synth_then_all(dir.path(), "p8", "8");
    for f in FILES {
        let a = fs::read(dir.path().join("p1").join(f)).unwrap();
        let b = fs::read(dir.path().join("p8").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn output_dir_falls_back_to_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_affectgauge"))
        .args(["synth", "--seed", "1", "--spec", &small_spec(dir.path())])
        .env("AFFECTGAUGE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("synth_corpus.jsonl").is_file());
}
