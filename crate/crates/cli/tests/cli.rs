use std::path::Path;

use tlogic_cli::{run, EXIT_INPUT, EXIT_NO, EXIT_OK};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tlogic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).display().to_string()
}

#[test]
fn text_and_json_agree_on_verdicts() {
    let cases: [&[&str]; 4] = [
        &["decide", "A * B |- B * A"],
        &["--mode", "tprime", "decide", "A * B |- B * A"],
        &["prove", "A, 1 |- A"],
        &["decide", "A |- A * A"],
    ];
    for args in cases {
        let (code, text, _) = call(args);
        let mut with_json = vec!["--json"];
        with_json.extend_from_slice(args);
        let (json_code, json, _) = call(&with_json);
        assert_eq!(code, json_code, "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let verdict = v["verdict"].as_str().unwrap();
        assert!(text.starts_with(verdict), "{args:?}: `{text}` vs `{verdict}`");
    }
}

#[test]
fn proved_witness_checks() {
    let dir = std::env::temp_dir().join(format!("tlogic-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for mode in ["t", "tprime"] {
        let (code, json, _) = call(&["--json", "--mode", mode, "prove", "(A * 1) * B |- A * (1 * B)"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let file = dir.join(format!("witness-{mode}.proof"));
        std::fs::write(&file, v["witness"].as_str().unwrap()).unwrap();
        let (code, out, _) = call(&["--mode", mode, "check", file.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("A * 1 * B |- A * (1 * B)"), "{out}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn swap_needs_exchange() {
    let swap = example("swap.proof");
    assert_eq!(call(&["check", &swap]).0, EXIT_OK);
    assert_eq!(call(&["--mode", "tprime", "check", &swap]).0, EXIT_NO);
}

#[test]
fn cut_elimination_and_equivalence() {
    let (code, out, _) = call(&["elim-cut", &example("swap-cut.proof")]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("(cut"), "{out}");
    let identity = example("identity.proof");
    assert_eq!(call(&["equiv", &identity, &identity]).0, EXIT_OK);
    assert_eq!(call(&["equiv", &identity, &example("swap.proof")]).0, EXIT_NO);
}

#[test]
fn models_are_checked() {
    let gap = example("factorization-gap.model");
    assert_eq!(call(&["model", "check", &gap]).0, EXIT_OK);
    assert_eq!(call(&["model", "check", &gap, "P * P |- P"]).0, EXIT_OK);
    assert_eq!(call(&["model", "check", &gap, "P |- P * P"]).0, EXIT_NO);
}

#[test]
fn bad_input_is_reported() {
    let (code, _, err) = call(&["decide", "A |- "]);
    assert_eq!(code, EXIT_INPUT);
    assert!(!err.is_empty());
    assert_eq!(call(&["check", "/nonexistent/file.proof"]).0, EXIT_INPUT);
    assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(call(&["--cap", "0", "decide", "A |- A"]).0, EXIT_INPUT);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn theory_encoding_round_trips_through_the_parser() {
    let (code, out, _) = call(&["--theory", &example("coherence.thy"), "theory", "encode"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("convert"), "{out}");
}

#[test]
fn coherence_sweep_passes() {
    let (code, out, _) = call(&["coherence", "sweep", "--pairs", "20"]);
    assert_eq!(code, EXIT_OK, "{out}");
}
