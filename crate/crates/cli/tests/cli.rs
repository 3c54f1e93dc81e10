//! End-to-end command tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hydrosbox"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn hydrosbox")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn pipeline_is_deterministic_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let bits_a = dir.path().join("a.bin");
    let bits_b = dir.path().join("b.bin");
    let boxes_a = dir.path().join("boxes_a");
    let boxes_b = dir.path().join("boxes_b");

    ok(&[
        "synth-corpus", "--seed", "42", "--files", "16", "--duration", "2.0",
        "--out", &s(&corpus),
    ]);
    for bits in [&bits_a, &bits_b] {
        ok(&[
            "extract", "--dir", &s(&corpus), "--out", &s(bits),
            "--window-seconds", "0.0005",
        ]);
    }
    assert_eq!(
        std::fs::read(&bits_a).unwrap(),
        std::fs::read(&bits_b).unwrap()
    );

    for boxes in [&boxes_a, &boxes_b] {
        ok(&["gen-sbox", "--in", &s(&bits_a), "--count", "2", "--out", &s(boxes)]);
    }
    for k in 0..2 {
        let name = format!("sbox_{k:03}.txt");
        assert_eq!(
            std::fs::read(boxes_a.join(&name)).unwrap(),
            std::fs::read(boxes_b.join(&name)).unwrap()
        );
    }

    // generated boxes analyze as bijective
    let report = dir.path().join("r.json");
    ok(&[
        "analyze", "--in", &s(&boxes_a.join("sbox_000.txt")),
        "--json", &s(&report),
    ]);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["bijective"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_reproduces_published_figures() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sbox1.json");
    let out = ok(&[
        "analyze", "--in", &s(&fixture("sbox1.txt")),
        "--json", &s(&report), "--text",
    ]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("bijective: yes"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["nl"]["max_coordinate"], 110);
    assert_eq!(json["lp"], 0.125);
    // Dependency matrix, first row, first two entries
    assert_eq!(json["sac"]["matrix"][0][0], 0.5);
    assert_eq!(json["sac"]["matrix"][0][1], 0.5625);
    let mean = json["sac"]["score"].as_f64().unwrap();
    assert!((mean - 0.495361).abs() < 1e-6);
    // BIC matrix entry and undefined diagonal
    let b01 = json["bic"]["matrix"][0][1].as_f64().unwrap();
    assert!((b01 - 0.480469).abs() < 5e-7);
    assert!(json["bic"]["matrix"][0][0].is_null());
}

#[test]
fn invert_matches_published_inverse_tables() {
    let dir = tempfile::tempdir().unwrap();
    for (sbox, inverse) in [("sbox2.txt", "inv_sbox2.txt"), ("sbox1.txt", "inv_sbox1.txt")] {
        let out_path = dir.path().join(format!("out_{sbox}"));
        ok(&["invert", "--in", &s(&fixture(sbox)), "--out", &s(&out_path)]);
        assert_eq!(
            std::fs::read(&out_path).unwrap(),
            std::fs::read(fixture(inverse)).unwrap(),
            "inverse of {sbox} differs from {inverse}"
        );
    }
}

#[test]
fn analyze_flags_non_bijective_tables() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let mut values: Vec<String> = (0..=255u16).map(|v| v.to_string()).collect();
    values[3] = "9".into(); // 9 twice, 3 missing
    std::fs::write(&bad, values.join(" ")).unwrap();

    let report = dir.path().join("bad.json");
    let out = ok(&["analyze", "--in", &s(&bad), "--json", &s(&report)]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["bijective"], serde_json::Value::Bool(false));
    assert_eq!(json["duplicated_values"][0], 9);
}

#[test]
fn invert_rejects_non_bijective_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let values: Vec<String> = (0..256).map(|_| "7".to_string()).collect();
    std::fs::write(&bad, values.join(" ")).unwrap();
    let out = run(&["invert", "--in", &s(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[not-bijective]"));
}

#[test]
fn extract_rejects_bad_file_counts_before_processing() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&[
        "synth-corpus", "--seed", "7", "--files", "16", "--duration", "0.01",
        "--out", &s(&corpus),
    ]);
    // pass only one of the files
    let one = corpus.join("synth_0000.wav");
    let out = run(&["extract", &s(&one), "--out", &s(&dir.path().join("x.bin"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[block-count]"));
}

#[test]
fn synth_corpus_validates_count_and_respects_force() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    let out = run(&["synth-corpus", "--seed", "1", "--files", "15", "--out", &s(&corpus)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[block-count]"));

    ok(&["synth-corpus", "--seed", "1", "--files", "16", "--duration", "0.01", "--out", &s(&corpus)]);
    let again = run(&["synth-corpus", "--seed", "1", "--files", "16", "--duration", "0.01", "--out", &s(&corpus)]);
    assert!(!again.status.success(), "should refuse to overwrite without --force");
    ok(&[
        "synth-corpus", "--seed", "1", "--files", "16", "--duration", "0.01",
        "--out", &s(&corpus), "--force",
    ]);
}

#[test]
fn randtest_reports_and_serializes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let bits = dir.path().join("bits.bin");
    let report = dir.path().join("report.json");
    ok(&[
        "synth-corpus", "--seed", "5", "--files", "16", "--duration", "1.0",
        "--out", &s(&corpus),
    ]);
    ok(&[
        "extract", "--dir", &s(&corpus), "--out", &s(&bits),
        "--window-seconds", "0.0005",
    ]);
    let out = ok(&["randtest", "--in", &s(&bits), "--json", &s(&report)]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("frequency (monobit)"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["test"], "frequency (monobit)");
    assert!(rows[0]["p_values"].is_array());
    // short stream: serial and approximate entropy surface their preconditions
    assert!(rows.iter().any(|r| r.get("error").is_some()));
}

#[test]
fn malformed_sbox_file_reports_parse_category() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2 three").unwrap();
    let out = run(&["analyze", "--in", &s(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[sbox-parse]"));
}

#[test]
fn missing_input_reports_io_category() {
    let out = run(&["randtest", "--in", "/nonexistent/bits.bin"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[io]"));
}
