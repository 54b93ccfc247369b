//! End-to-end tests of the command-line binary: exit codes, byte-level
//! determinism of emitted certificates, and recheck behavior.

use std::path::Path;
use std::process::{Command, Output};

fn mukit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mukit"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    mukit().args(args).output().expect("binary must run")
}

const ENDO: &str = r#"{"kind":"poset_map",
 "dom":{"elems":["c0","c1","c2"],"leq":[["c0","c1"],["c1","c2"],["c0","c2"]]},
 "cod":{"elems":["c0","c1","c2"],"leq":[["c0","c1"],["c1","c2"],["c0","c2"]]},
 "map":[["c0","c1"],["c1","c2"],["c2","c2"]]}"#;

const MAYBE: &str = r#"{"kind":"functor",
 "functor":{"tag":"container","ctors":[
   {"name":"Z","constants":["*"],"arity":0},
   {"name":"S","constants":["*"],"arity":1}]}}"#;

#[test]
fn fixpoint_all_engines_pass() {
    let dir = tempfile::tempdir().unwrap();
    let endo = write(dir.path(), "endo.json", ENDO);
    let out = run(&["fixpoint", "--engine", "all", endo.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let cert: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(cert["outcome"], "pass");
    assert_eq!(cert["witnesses"]["value"], "c2");
    for engine in ["kleene", "zermelo", "tarski", "pataraia", "monoid"] {
        assert_eq!(cert["witnesses"]["results"][engine]["value"], "c2");
    }
}

#[test]
fn chain_budget_exhaustion_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "maybe.json", MAYBE);
    let out = run(&["chain", "--budget", "5", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let cert: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cert["outcome"], "unknown");
    assert_eq!(cert["witnesses"]["sizes"], serde_json::json!([0, 1, 2, 3, 4, 5]));
}

#[test]
fn hylo_cycle_is_fail() {
    let dir = tempfile::tempdir().unwrap();
    let coalg = write(
        dir.path(),
        "loop.json",
        r#"{"kind":"coalgebra",
            "functor":{"tag":"container","ctors":[
              {"name":"Z","constants":["*"],"arity":0},
              {"name":"S","constants":["*"],"arity":1}]},
            "carrier":["x"],
            "structure":[["x","S[*](x)"]]}"#,
    );
    let alg = write(
        dir.path(),
        "alg.json",
        r#"{"kind":"algebra",
            "functor":{"tag":"container","ctors":[
              {"name":"Z","constants":["*"],"arity":0},
              {"name":"S","constants":["*"],"arity":1}]},
            "carrier":["m0"],
            "structure":[["Z[*]","m0"],["S[*](m0)","m0"]]}"#,
    );
    let out = run(&["hylo", coalg.to_str().unwrap(), alg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cert["outcome"], "fail");
    assert_eq!(cert["counterexamples"]["cycle"], serde_json::json!(["x"]));
}

#[test]
fn malformed_input_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"kind":"poset","elems":["a","a"]}"#);
    let out = run(&["fixpoint", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certificates_are_byte_identical_and_recheckable() {
    let dir = tempfile::tempdir().unwrap();
    let endo = write(dir.path(), "endo.json", ENDO);
    let first = run(&["fixpoint", endo.to_str().unwrap()]);
    let second = run(&["fixpoint", endo.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "byte-identical certificates");
    let cert_path = write(
        dir.path(),
        "cert.json",
        &String::from_utf8(first.stdout).unwrap(),
    );
    // recheck alone, and against the original input file
    let out = run(&["recheck", cert_path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "recheck",
        cert_path.to_str().unwrap(),
        endo.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // a stale input file is a hash mismatch, reported as an input error
    let stale = write(dir.path(), "stale.json", &ENDO.replace("c2\"]]", "c1\"]]"));
    let out = run(&[
        "recheck",
        cert_path.to_str().unwrap(),
        stale.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    // a tampered witness fails recheck with exit 1
    let tampered_text = String::from_utf8(run(&["fixpoint", endo.to_str().unwrap()]).stdout)
        .unwrap()
        .replace("\"value\":\"c2\"", "\"value\":\"c0\"");
    let tampered = write(dir.path(), "tampered.json", &tampered_text);
    let out = run(&["recheck", tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cross_validate_and_initial_algebra_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "prefixed.json",
        r#"{"kind":"prefixed_point",
            "functor":{"tag":"const","set":["b1","b2"]},
            "carrier":["a1","b1","b2"],
            "structure":[["b1","b1"],["b2","b2"]]}"#,
    );
    for via in ["pataraia", "zermelo"] {
        let out = run(&["initial-algebra", "--via", via, p.to_str().unwrap()]);
        assert!(out.status.success());
        let cert: serde_json::Value =
            serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(cert["witnesses"]["carrier"], serde_json::json!(["b1", "b2"]));
    }
    let out = run(&["cross-validate", "--budget", "6", p.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn human_output_is_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let endo = write(dir.path(), "endo.json", ENDO);
    let out = run(&["--human", "fixpoint", endo.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("fixpoint: PASS"));
    assert!(text.contains("sha256"));
}

#[test]
fn metric_join_cli() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(
        dir.path(),
        "family.json",
        r#"{"kind":"metric_family",
            "ambient":{"points":["p","q"],"d":[["p","q","1/4"]]},
            "subspaces":[{"points":["p","q"],"d":[["p","q","1/2"]]}]}"#,
    );
    let out = run(&["metric-join", fam.to_str().unwrap()]);
    assert!(out.status.success());
    let cert: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cert["witnesses"]["d"][0][2], "1/2");
}

#[test]
fn verify_colimit_cli_fail_path() {
    let dir = tempfile::tempdir().unwrap();
    // cocone into a strictly larger apex: not a colimit, sides agree on Fail
    let diagram = write(
        dir.path(),
        "diagram.json",
        r#"{"index":{"elems":["i0"],"leq":[]},
            "objects":{"i0":{"elems":["c0"],"leq":[]}},
            "edges":[],
            "cocone":{"apex":{"elems":["c0","c1"],"leq":[["c0","c1"]]},
                      "maps":{"i0":[["c0","c0"]]}}}"#,
    );
    let out = run(&["verify-colimit", diagram.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cert["witnesses"]["side_colimit"], false);
    assert_eq!(cert["witnesses"]["side_join"], false);
    assert_eq!(cert["witnesses"]["agree"], true);
}
