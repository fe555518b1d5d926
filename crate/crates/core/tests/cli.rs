use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn gvkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gvkit")).args(args).output().expect("binary runs")
}

fn scratch(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("gvkit-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn assert_golden(args: &[&str], expected: &str) {
    let out = gvkit(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let want = std::fs::read_to_string(golden(expected)).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn golden_outputs() {
    let poly = golden("conifold_poly.json");
    let gv = golden("conifold_gv.json");
    let (poly, gv) = (poly.to_str().unwrap(), gv.to_str().unwrap());
    assert_golden(&["decompose", poly], "decompose.out");
    assert_golden(&["gv2gw", gv, "--cutoff", "2"], "gv2gw.out");
    assert_golden(&["--format", "table", "gv2gw", gv, "--cutoff", "2"], "gv2gw.table");
    assert_golden(&["fixture", "nodal"], "fixture_nodal.out");
    assert_golden(&["fixture", "enriques", "--n", "3", "--mode", "all"], "fixture_enriques_3.out");
}

#[test]
fn gv_pt_roundtrip_through_files() {
    let gv = r#"{"rank":2,"entries":[{"beta":[0,1],"g":1,"n":-2},{"beta":[1,0],"g":0,"n":3},{"beta":[1,1],"g":0,"n":5}]}"#;
    let input = scratch("gv", gv);
    let pt = std::env::temp_dir().join(format!("gvkit-cli-{}-pt.json", std::process::id()));
    let out = gvkit(&["gv2pt", input.to_str().unwrap(), "--cutoff", "1,1:2", "-o", pt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let back = gvkit(&["pt2gv", pt.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0), "{}", String::from_utf8_lossy(&back.stderr));
    let got: serde_json::Value = serde_json::from_slice(&back.stdout).unwrap();
    let want: serde_json::Value = serde_json::from_str(gv).unwrap();
    assert_eq!(got, want);
    let _ = std::fs::remove_file(input);
    let _ = std::fs::remove_file(pt);
}

#[test]
fn validation_errors_exit_one_with_json_on_stderr() {
    let odd = scratch("odd", r#"{"coeffs":[[1,"1"]],"window":null}"#);
    let out = gvkit(&["decompose", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["module"], "genus_basis");
    assert_eq!(err["operation"], "decompose");
    assert_eq!(err["location"], "s^1");

    let junk = scratch("junk", "not json");
    let out = gvkit(&["recompose", junk.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["module"], "cli");
    let _ = std::fs::remove_file(odd);
    let _ = std::fs::remove_file(junk);
}

#[test]
fn failed_checks_exit_two() {
    let model = scratch("model", r#"{"generators":[{"label":"c","class":[1]}],"points":[{"cycle":[0],"euler":1},{"cycle":[1],"euler":1}]}"#);
    let pt = scratch("pt", r#"{"window":[0,4],"values":[{"cycle":[0],"coeffs":[[0,"1"]]},{"cycle":[1],"coeffs":[[2,"1/2"]]}]}"#);
    let out = gvkit(&["local-pt2gv", pt.to_str().unwrap(), "--model", model.to_str().unwrap(), "--gmax", "1"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let _ = std::fs::remove_file(model);
    let _ = std::fs::remove_file(pt);
}

#[test]
fn flop_fixture_passes_its_own_check() {
    let out = gvkit(&["fixture", "conifold-flop", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let path = scratch("flop", &String::from_utf8(out.stdout).unwrap());
    let check = gvkit(&["flop-check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stdout));
    let _ = std::fs::remove_file(path);
}
