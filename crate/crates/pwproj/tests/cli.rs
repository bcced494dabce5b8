use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pwproj::format::from_json;
use pwproj_core::distortion::DistortionCert;
use pwproj_core::marriage::{validate_certificate, MatchingCertificate, TranslatingSet};
use pwproj_core::number::rat;

fn pwproj(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwproj"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pwproj(dir.path(), &[])), 2);
    assert_eq!(code(&pwproj(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&pwproj(dir.path(), &["verify-relations", "--group", "bogus"])), 2);
    assert_eq!(code(&pwproj(dir.path(), &["distortion", "--epsilon", "2"])), 2);
    assert_eq!(code(&pwproj(dir.path(), &["check-marriage", "--tset", "missing.json"])), 2);
    assert_eq!(code(&pwproj(dir.path(), &["--help"])), 0);
}

#[test]
fn relations_and_freeness() {
    let dir = tempfile::tempdir().unwrap();
    let o = pwproj(dir.path(), &["verify-relations", "--group", "thompson-f"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    assert_eq!(code(&pwproj(dir.path(), &["no-relation", "--pair", "sanov", "--max-len", "5"])), 0);
    let pair = dir.path().join("pair.json");
    fs::write(
        &pair,
        r#"{"name": "b=a", "provenance": "test",
            "a": {"a": {"r": "1", "s": "0"}, "b": {"r": "1", "s": "0"}, "c": {"r": "0", "s": "0"}, "d": {"r": "1", "s": "0"}},
            "b": {"a": {"r": "1", "s": "0"}, "b": {"r": "1", "s": "0"}, "c": {"r": "0", "s": "0"}, "d": {"r": "1", "s": "0"}}}"#,
    )
    .unwrap();
    let o = pwproj(dir.path(), &["no-relation", "--pair-file", pair.to_str().unwrap(), "--max-len", "4"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn distortion_certificate_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = pwproj(dir.path(), &["distortion"]);
    assert_eq!(code(&o), 0);
    let cert: DistortionCert = from_json(&fs::read_to_string(dir.path().join("cert/distortion.json")).unwrap()).unwrap();
    assert_eq!(cert.delta, rat(1, 195));
    assert_eq!(code(&pwproj(dir.path(), &["distortion", "--delta", "1/100"])), 1);
}

#[test]
fn failed_build_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = pwproj(dir.path(), &["build-set", "--pair", "sanov", "--max-core-len", "4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("dist>=delta"));
}

#[test]
fn set_then_matching() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pwproj(dir.path(), &["build-set"])), 0);
    let tset = dir.path().join("tset/tset.json");
    let set: TranslatingSet = from_json(&fs::read_to_string(&tset).unwrap()).unwrap();
    assert_eq!(set.elements.len(), 12);

    let subset = dir.path().join("u.txt");
    fs::write(&subset, "# two translations\n(-inf, inf) [1 1; 0 1]\n(-inf, inf) [1 2; 0 1]\n").unwrap();
    let args = ["--tset", tset.to_str().unwrap(), "--subset", subset.to_str().unwrap()];
    let o = pwproj(dir.path(), &[&["check-marriage"][..], &args].concat());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = pwproj(dir.path(), &[&["extract-matching"][..], &args].concat());
    assert_eq!(code(&o), 0);
    let cert: MatchingCertificate =
        from_json(&fs::read_to_string(dir.path().join("cert/matching.json")).unwrap()).unwrap();
    assert_eq!(cert.edges.len(), 4);
    assert_eq!(validate_certificate(&cert), Ok(()));
}

#[test]
fn pigeonhole_instances() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pwproj(dir.path(), &["--seed", "5", "pigeonhole"])), 0);
    let input = dir.path().join("cert/pigeonhole-input.json");
    assert!(input.exists());
    // J sticking out of I violates a precondition
    let text = fs::read_to_string(&input).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["j"] = serde_json::json!({"intervals": [{"lo": "-1", "hi": "1"}]});
    let bad = dir.path().join("bad.json");
    fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&pwproj(dir.path(), &["pigeonhole", "--input", bad.to_str().unwrap()])), 2);
}

#[test]
fn campaign_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "epsilon = \"1/48\"\n[campaign]\nradius = 1\nexhaustive_max = 1\nrandom_count = 50\nrandom_max = 4\negs_count = 10\nseed = 3\n",
    )
    .unwrap();
    let o = pwproj(dir.path(), &["campaign", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("reports/campaign.json")).unwrap()).unwrap();
    assert_eq!(report["aggregate"]["random"]["checked"], 50);
    assert_eq!(report["config"]["campaign"]["seed"], 3);
    let lines = fs::read_to_string(dir.path().join("reports/records.jsonl")).unwrap().lines().count();
    assert!(lines > 60);

    fs::write(&cfg, "epsilon = \"1/48\"\ncolour = \"blue\"\n").unwrap();
    assert_eq!(code(&pwproj(dir.path(), &["campaign", "--config", cfg.to_str().unwrap()])), 2);
}
