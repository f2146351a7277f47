use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fields_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fields")
}

fn field(name: &str) -> PathBuf {
    fields_dir().join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_order-lab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const CUBIC_R: &str = "Z_plus_ideal 3, 2+2a+a^2 ^2";

#[test]
fn davenport_of_z3_squared() {
    let out = run(&["davenport", "3", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "5");
    assert_eq!(run(&["davenport", "2", "3"]).status.code(), Some(3));
}

#[test]
fn props_of_z_5sqrt2() {
    let f = field("Q-sqrt2.json");
    let out = run(&["props", f.to_str().unwrap(), "--order", "Z_plus 5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let la = &v["locally_associated"];
    assert_eq!(la["verdict"], false);
    let quad: Vec<u64> = ["unit_index", "units_maximal_mod_conductor", "units_order_mod_conductor", "class_number"]
        .iter()
        .map(|k| la[k].as_u64().unwrap())
        .collect();
    assert_eq!(quad, [3, 24, 4, 2]);
}

#[test]
fn props_of_cubic_order() {
    let f = field("cubic-x3+4x-1.json");
    let out = run(&["props", f.to_str().unwrap(), "--order", CUBIC_R]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["associated"]["verdict"], true);
}

#[test]
fn bad_inputs_exit_3() {
    let f = field("Q-sqrt2.json");
    let f = f.to_str().unwrap();
    assert_eq!(run(&["props", f, "--order", "Z_plus"]).status.code(), Some(3));
    assert_eq!(run(&["props", "/nonexistent.json", "--order", "Z_plus 5"]).status.code(), Some(3));
    assert_eq!(run(&["factor", f, "--order", "Z_plus 5", "--element", "1,1"]).status.code(), Some(3));
    assert_eq!(run(&["verify-paper", "--only", "no-such-case"]).status.code(), Some(3));
}

#[test]
fn corrupted_field_file_exits_3() {
    let dir = std::env::temp_dir().join(format!("order-lab-corrupt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for e in std::fs::read_dir(fields_dir()).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    std::fs::write(dir.join("cubic-x3+4x-1.json"), "{\"min_poly\": [-1, 4, 0, 1], \"colour\": 3}").unwrap();
    let out = run(&["verify-paper", "--fields-dir", dir.to_str().unwrap(), "--only", "z5sqrt2"]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn only_runs_a_single_case() {
    let out = run(&["verify-paper", "--only", "z2sqrt2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 1);
    assert_eq!(cases[0]["name"], "z2sqrt2");
    assert_eq!(cases[0]["pass"], true);
}

#[test]
fn wrong_golden_value_fails_with_a_diff() {
    let text = include_str!("../golden/verify-paper.json").replace("\"unit_index\": 3", "\"unit_index\": 6");
    let path = std::env::temp_dir().join(format!("order-lab-golden-{}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let out = run(&["verify-paper", "--golden", path.to_str().unwrap(), "--only", "z5sqrt2"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("z5sqrt2") && err.contains("expected"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify-paper", "--only", "cubic-orders", "--only", "assoc-obstruction", "--only", "deg1-irreducible"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pseries_certificates() {
    let f = field("cubic-x3+4x-1.json");
    let f = f.to_str().unwrap();
    let f_series = "6-12a+3a^2; 1-2a-4a^2";
    let out = run(&["pseries-cert", f, "--order", CUBIC_R, "--series", "3; a", "--mode", "assoc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"], "certificate");
    let out = run(&["pseries-cert", f, "--order", CUBIC_R, "--series", f_series, "--mode", "irred"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "irreducible");
    let out = run(&[
        "pseries-cert", f, "--order", CUBIC_R, "--series", f_series, "--mode", "hfd-witness", "--cofactor", "2-4a+a^2; 0",
        "--linear", "3; a", "--ideal", "3, 2+2a+a^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!((v["m"].as_u64(), v["k"].as_u64(), v["verified"].as_bool()), (Some(3), Some(12), Some(true)));
    let out = run(&["pseries-cert", f, "--order", CUBIC_R, "--series", f_series, "--mode", "hfd-witness"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn full_verification_passes() {
    let out = run(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 12);
}
