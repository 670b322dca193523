use std::path::PathBuf;
use std::process::Command;

use gb_cli::schema::{parse, Instance};
use gb_core::bundles::verify_witness;
use gb_core::cstar::{implementing_unitary, DEFAULT_TOLERANCE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", "v1", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gb(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_gb")).args(args).output().expect("gb runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn gb_json(args: &[&str]) -> (Value, i32) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let (out, code) = gb(&a);
    (serde_json::from_str(&out).expect("report is JSON"), code)
}

fn load(name: &str) -> Instance {
    parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

#[test]
fn cohomology_examples() {
    let (out, code) = gb(&["cohomology", &fixture("circle_z2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("H1 = Z2"), "{out}");
    let (out, code) = gb(&["cohomology", &fixture("single_patch.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("H1 = 0"), "{out}");
    let (out, _) = gb(&["cohomology", &fixture("circle_z2.json"), "--degree", "0"]);
    assert!(out.contains("H0 = Z2"), "{out}");
    let (out, _) = gb(&["cohomology", &fixture("two_arc_circle_z3.json")]);
    assert!(out.contains("H1 = Z3"), "{out}");
}

#[test]
fn invalid_inputs_exit_2() {
    for name in ["malformed.json", "unknown_field.json", "wrong_schema.json"] {
        let (out, code) = gb(&["cohomology", &fixture(name)]);
        assert_eq!(code, 2, "{name}");
        assert!(out.contains("ERROR"), "{out}");
    }
    let (out, code) = gb(&["cohomology", &fixture("nonexistent.json")]);
    assert_eq!(code, 2);
    assert!(out.contains("cannot read"));
    // wrong kind for the command
    assert_eq!(gb(&["verify", &fixture("pauli.json"), "takai"]).1, 2);
    assert_eq!(gb(&["cohomology", &fixture("circle_z2.json"), "--degree", "2"]).1, 2);
    assert_eq!(gb(&["--tolerance", "-1", "cohomology", &fixture("circle_z2.json")]).1, 2);
    assert_eq!(gb(&["xprod", &fixture("pauli.json"), "--point", "1", "build"]).1, 2);
    // usage errors
    assert_eq!(gb(&["frobnicate"]).1, 2);
    assert_eq!(gb(&["verify", &fixture("pauli.json"), "takai", "--dual-sign", "sideways"]).1, 2);
}

#[test]
fn iso_examples_carry_checkable_witnesses() {
    let (a, b, zero) = (fixture("circle_z2_110.json"), fixture("circle_z2_100.json"), fixture("circle_z2_000.json"));
    let (v, code) = gb_json(&["iso", &a, &zero]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PASS");
    // re-check the emitted witness with the library
    let beta: Vec<i64> = serde_json::from_value(v["certificate"]["witness"].clone()).unwrap();
    let (Instance::Bundle(fa), Instance::Bundle(fz)) = (load("circle_z2_110.json"), load("circle_z2_000.json")) else { panic!() };
    let (ba, bz) = (fa.build().unwrap(), fz.build().unwrap());
    let beta = ba.presentation().cochain_from_flat(0, &beta).unwrap();
    assert!(verify_witness(&ba, &bz, &beta).unwrap());

    let (v, code) = gb_json(&["iso", &b, &zero]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "FAIL");
    assert_eq!(v["certificate"]["classes"], serde_json::json!([[1], [0]]));

    let (v, code) = gb_json(&["iso", &b, &b]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["witness"], serde_json::json!([0, 0, 0]));

    // different presentations are rejected, not compared
    assert_eq!(gb(&["iso", &b, &fixture("circle_z3_100.json")]).1, 2);
}

#[test]
fn crossed_product_reports() {
    let diag = fixture("diag_z2.json");
    let (out, code) = gb(&["xprod", &diag, "--point", "0", "spectrum"]);
    assert_eq!(code, 0);
    assert!(out.contains("2 irreps, dims [2, 2], sum-of-squares 8 = dim 8"), "{out}");
    assert!(out.ends_with("PASS\n"));
    let (out, _) = gb(&["xprod", &diag, "--point", "0", "build"]);
    assert!(out.contains("center dimension 2"), "{out}");
    let (out, _) = gb(&["xprod", &fixture("pauli.json"), "--point", "0", "decompose"]);
    assert!(out.contains("summands MATRIX[4]"), "{out}");
    let (out, code) = gb(&["xprod", &fixture("locunit_matrix_z2.json"), "--point", "2", "spectrum"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn unitary_iso_reports() {
    for name in ["diag_z2.json", "z3_diagonal.json"] {
        let (v, code) = gb_json(&["verify", &fixture(name), "unitary-iso"]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["certificate"]["exact"], true);
    }
    let (v, code) = gb_json(&["verify", &fixture("pauli.json"), "unitary-iso"]);
    assert_eq!(code, 1);
    assert!(v["summary"][0].as_str().unwrap().contains("OBSTRUCTED"));
    assert!(v["summary"][0].as_str().unwrap().contains("= -1"));
    // the obstruction is re-derivable from the action alone
    let Instance::Action(f) = load("pauli.json") else { panic!() };
    let alpha = f.build(DEFAULT_TOLERANCE).unwrap();
    for entry in v["certificate"]["obstruction"].as_array().unwrap() {
        let s: Vec<i64> = serde_json::from_value(entry["s"].clone()).unwrap();
        let t: Vec<i64> = serde_json::from_value(entry["t"].clone()).unwrap();
        assert_eq!(entry["phase"], serde_json::json!([1, 2]));
        let vs = implementing_unitary(&alpha, &s, 1e-9).unwrap().unwrap();
        let vt = implementing_unitary(&alpha, &t, 1e-9).unwrap().unwrap();
        let c = (&vs * &vt * vs.adjoint() * vt.adjoint()).trace() / 2.0;
        assert!((c + 1.0).norm() < 1e-9);
    }
    let (out, code) = gb(&["verify", &fixture("translation_z3.json"), "unitary-iso"]);
    assert_eq!(code, 1);
    assert!(out.contains("NOT POINTWISE INNER"));
}

#[test]
fn locunit_and_equivalence_reports() {
    let (v, code) = gb_json(&["verify", &fixture("locunit_circle_z2.json"), "locunit"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["class"], serde_json::json!([1]));
    let (v, code) = gb_json(&["verify", &fixture("locunit_discontinuous.json"), "locunit"]);
    assert_eq!(code, 1);
    assert!(v["certificate"]["counterexample"].as_str().unwrap().contains("point 1"));
    let (v, code) = gb_json(&["verify", &fixture("equivalence_circle_z2.json"), "equivalence"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["beta"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["certificate"]["round_trip"], true);
    assert_eq!(gb(&["verify", &fixture("equivalence_distinct_z2.json"), "equivalence"]).1, 1);
}

#[test]
fn takai_reports() {
    let (out, code) = gb(&["verify", &fixture("mobius_z2.json"), "takai"]);
    assert_eq!(code, 0);
    assert!(out.contains("recovered class = double-dual of input class"), "{out}");
    let (v, _) = gb_json(&["verify", &fixture("circle_z3_100.json"), "takai", "--dual-sign", "plain"]);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["certificate"]["recovered_class"], serde_json::json!([2]));
    assert_eq!(v["certificate"]["dual_sign"], "plain");
}

#[test]
fn timing_goes_to_stderr() {
    let f = fixture("circle_z2.json");
    let out = Command::new(env!("CARGO_BIN_EXE_gb")).args(["--timing", "cohomology", &f]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("elapsed"));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), gb(&["--timing", "cohomology", &f]).0);
}
