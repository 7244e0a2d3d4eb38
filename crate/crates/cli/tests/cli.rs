use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn bhf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhf")).args(args).output().expect("binary runs")
}

fn bhf_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bhf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().expect("piped").write_all(input.as_bytes()).expect("stdin accepts");
    child.wait_with_output().expect("binary exits")
}

fn json_ok(args: &[&str]) -> Value {
    let out = bhf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pairing_solid_tori() {
    let v = json_ok(&["pair", "--left", "catalog:h_inf", "--right", "catalog:h_minus1", "--homology"]);
    assert_eq!(v, json!({ "rank": 1 }));
}

#[test]
fn lens_space_ranks() {
    for p in 1..=4usize {
        let word = vec!["Tm"; p].join(" ");
        assert_eq!(json_ok(&["hf3m", "--word", &word]), json!({ "rank": p }));
    }
    let v = json_ok(&["hf3m", "--word", "", "--start", "-1", "--closing", "inf"]);
    assert_eq!(v, json!({ "rank": 1 }));
}

#[test]
fn bimodule_pairing_agrees_with_hf3m() {
    for t in ["Tm", "Tl", "Tm'"] {
        let dd = format!("catalog:twist:{t}");
        let paired = json_ok(&["pair", "--left", "h_zero", "--right", "h_zero", "--dd", &dd, "--homology"]);
        assert_eq!(paired, json_ok(&["hf3m", "--word", t]), "{t}");
    }
}

#[test]
fn tau_from_a_file() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("trefoil.json");
    let dump = bhf(&["catalog", "dump", "trefoil"]);
    std::fs::write(&path, &dump.stdout).expect("write");
    let path = path.to_str().expect("utf-8 path");
    assert_eq!(json_ok(&["knot", "tau", "--in", path]), json!({ "tau": -1 }));
    let v = json_ok(&["knot", "alexander", "--in", path]);
    assert_eq!(v["alexander"], json!("T - 1 + T^-1"));
}

#[test]
fn documents_round_trip_through_stdin() {
    for name in ["h_zero", "cable21", "twist:Tl'", "figure8"] {
        let dump = bhf(&["catalog", "dump", name]);
        let text = String::from_utf8(dump.stdout).expect("utf-8");
        let out = bhf_stdin(&["catalog", "dump", "-"], &text);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).expect("utf-8"), text, "{name}");
    }
}

#[test]
fn bad_input_exits_with_one() {
    let out = bhf_stdin(&["dmod", "check", "--in", "-"], "{\"schema\": \"bhf.type-d/1\",\n  \"generators\": [");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = bhf_stdin(&["dmod", "check", "--in", "-"], r#"{"generators": []}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));

    let fixed_point = r#"{"schema": "bhf.pmc/1", "genus": 1, "matching": [[1, 1], [2, 4]]}"#;
    let out = bhf_stdin(&["algebra", "info", "--pmc", "-"], fixed_point);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(bhf(&["knot", "tau", "--in", "no-such-thing"]).status.code(), Some(1));
    assert_eq!(bhf(&["knot", "tau", "--in", "h_zero"]).status.code(), Some(1));
    assert_eq!(bhf(&["hf3m", "--word", "Tx"]).status.code(), Some(1));
    assert_eq!(bhf(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(bhf(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes() {
    let out = bhf(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON");
    assert_eq!(v["failed"], json!(0));
}

#[test]
fn satellite_of_trefoil() {
    let v = json_ok(&["satellite", "--companion", "trefoil", "--pattern", "cable21", "--framing", "-2"]);
    assert_eq!(v["generators"], json!(29));
    assert_eq!(v["hat_rank"], json!(5));
    assert_eq!(v, json_ok(&["knot", "satellite", "--in", "trefoil", "--framing=-2"]));
}

#[test]
fn algebra_queries() {
    assert_eq!(json_ok(&["algebra", "mul", "--pmc", "torus", "rho1", "rho2"]), json!({ "product": "rho12" }));
    assert_eq!(json_ok(&["algebra", "mul", "--pmc", "torus", "rho2", "rho1"]), json!({ "product": "0" }));
    let info = json_ok(&["algebra", "info", "--pmc", "torus"]);
    assert_eq!(info["dim"], json!(16));
    let basis = json_ok(&["algebra", "basis", "--pmc", "torus", "--summand", "-1"]);
    assert_eq!(basis["basis"].as_array().map(Vec::len), Some(1));
}

#[test]
fn text_format() {
    let out = bhf(&["--format", "text", "pair", "--left", "h_inf", "--right", "h_minus1", "--homology"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "rank 1");
    let out = bhf(&["knot", "cfd", "--in", "unknot", "--framing", "0", "--format", "text"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("->"));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bhf"))
            .args(["satellite", "--companion", "figure8", "--framing", "1"])
            .env("BHF_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
    let out = Command::new(env!("CARGO_BIN_EXE_bhf")).arg("verify").env("BHF_THREADS", "many").output().expect("runs");
    assert_eq!(out.status.code(), Some(1));
}
