use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn eclnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eclnl"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("ECLNL_FUEL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_prints_the_type_of_the_box_example() {
    let o = eclnl(&["check", "examples/hadamard.eclnl"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "Diag(qubit, qubit)\n");
}

#[test]
fn divergence_exhausts_fuel() {
    let o = eclnl(&["run", "examples/diverge.eclnl", "--fuel", "100"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = eclnl(&["run", "missing.eclnl"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).is_empty());
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(code(&eclnl(&["frobnicate", "x"])), 4);
    assert_eq!(code(&eclnl(&["run"])), 4);
    assert_eq!(code(&eclnl(&["run", "examples/hadamard.eclnl", "--fuel", "0"])), 4);
    assert_eq!(code(&eclnl(&["run", "examples/hadamard.eclnl", "--format", "svg"])), 4);
    assert_eq!(code(&eclnl(&["check", "examples/hadamard.eclnl", "--format", "dot"])), 4);
    assert_eq!(code(&eclnl(&["emit", "examples/hadamard.eclnl", "--format", "text"])), 4);
}

#[test]
fn help_exits_zero() {
    let o = eclnl(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("oracle"));
}

#[test]
fn fuel_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_eclnl"))
        .args(["run", "examples/diverge.eclnl"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("ECLNL_FUEL", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("50 steps"));
}

#[test]
fn type_and_syntax_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_type = write(dir.path(), "t.eclnl", "h *");
    let bad_syntax = write(dir.path(), "s.eclnl", "lift (");
    for f in [&bad_type, &bad_syntax] {
        let o = eclnl(&["check", f.to_str().unwrap()]);
        assert_eq!(code(&o), 1);
        assert!(stderr(&o).starts_with("error: "));
        assert_eq!(code(&eclnl(&["run", f.to_str().unwrap()])), 1);
    }
}

#[test]
fn json_mode_keeps_diagnostics_off_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "t.eclnl", "*;\nh *");
    for cmd in ["check", "run", "oracle"] {
        let o = eclnl(&[cmd, bad.to_str().unwrap(), "--format", "json"]);
        assert_eq!(code(&o), 1);
        assert!(stdout(&o).is_empty(), "{cmd}");
        let d: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
        assert_eq!(d["kind"], "TypeMismatch");
        assert_eq!(d["span"]["line"], 2);
        assert_eq!(d["span"]["col"], 3);
    }
    let o = eclnl(&["run", "missing.eclnl", "--format", "json"]);
    assert!(stdout(&o).is_empty());
    let d: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(d["kind"], "Io");
}

#[test]
fn run_reports_value_and_boxed_diagram_as_json() {
    let o = eclnl(&["run", "examples/hadamard.eclnl", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "Diag(qubit, qubit)");
    assert_eq!(v["outcome"], "value");
    assert_eq!(v["boxed"][0]["nodes"], serde_json::json!([[0, "h"]]));
    assert_eq!(v["diagram"]["nodes"], serde_json::json!([]));
}

#[test]
fn run_text_summarises_the_circuit() {
    let o = eclnl(&["run", "examples/bell.eclnl"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("type: qubit * qubit"));
    assert!(out.contains("diagram: 4 node(s)"));
}

#[test]
fn dot_output_goes_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bell.dot");
    let o = eclnl(&["run", "examples/bell.eclnl", "--format", "dot", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let dot = std::fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph \"diagram\""));
    assert_eq!(dot.matches("[label=\"cnot\"]").count(), 1);
}

#[test]
fn emit_converts_diagram_json_to_dot() {
    let dir = tempfile::tempdir().unwrap();
    let json = write(
        dir.path(),
        "h.json",
        r##"{"dom":[["#l0","qubit"]],"cod":[["#l1","qubit"]],"nodes":[[0,"h"]],"edges":[[["in",0],["node",0,0]],[["node",0,0],["out",0]]]}"##,
    );
    let o = eclnl(&["emit", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dot = stdout(&o);
    assert!(dot.contains("n0 [label=\"h\"];"));
    assert!(dot.contains("in0 -> n0"));
    let o = eclnl(&["emit", json.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"], serde_json::json!([[0, "h"]]));
    let broken = write(dir.path(), "b.json", r#"{"dom": []}"#);
    assert_eq!(code(&eclnl(&["emit", broken.to_str().unwrap()])), 4);
}

#[test]
fn signature_resolution_order() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sig.json", r#"{"wires": ["bit"], "generators": [{"name":"flip", "ins":["bit"], "outs":["bit"]}, {"name":"zero", "ins":[], "outs":["bit"]}]}"#);
    let prog = write(dir.path(), "p.eclnl", "signature \"sig.json\"\nflip (zero *)");
    let o = eclnl(&["check", prog.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "bit\n");
    // The flag beats the in-file line.
    let other = write(dir.path(), "other.json", r#"{"wires": ["qubit"], "generators": []}"#);
    let o = eclnl(&["check", prog.to_str().unwrap(), "--signature", other.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    // No line and no flag: the demo signature.
    let demo = write(dir.path(), "d.eclnl", "h (new *)");
    assert_eq!(stdout(&eclnl(&["check", demo.to_str().unwrap()])), "qubit\n");
}

#[test]
fn runtime_errors_exit_two_is_unreachable_from_well_typed_files() {
    // Error freeness means a typechecked file never exits 2 from `run`.
    for f in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")).unwrap() {
        let f = f.unwrap().path();
        let o = eclnl(&["run", f.to_str().unwrap(), "--fuel", "1000"]);
        assert!(matches!(code(&o), 0 | 3), "{}: {}", f.display(), stderr(&o));
    }
}

#[test]
fn oracle_verdicts() {
    let o = eclnl(&["oracle", "examples/negate.eclnl"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "type: I + I\ndenotation: inl *\nsoundness: pass\nadequacy: pass\n");
    let o = eclnl(&["oracle", "examples/diverge.eclnl", "--fuel", "1000"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("denotation: bot"));
    assert!(stdout(&o).contains("adequacy: pass (presumed divergent)"));
    let o = eclnl(&["oracle", "examples/hadamard.eclnl"]);
    assert_eq!(code(&o), 4);
    let o = eclnl(&["oracle", "examples/search.eclnl", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["soundness"], "pass");
}

#[test]
fn oracle_at_a_linear_type() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.eclnl", "\\b:I + I. b");
    let o = eclnl(&["oracle", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("adequacy: not applicable at a linear type"));
}
