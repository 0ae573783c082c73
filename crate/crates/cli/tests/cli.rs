use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_condensed-lab"));
    c.env_remove("CONDENSED_LAB_THREADS");
    c
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).arg("--json").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("condensed-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn em_homology_payload() {
    let (code, r) = run(&["em-homology", "--group", "Z/2", "--n", "2", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"], serde_json::json!({"rank": 0, "torsion": [2]}));
    assert_eq!(r["outcome"], "pass");
    assert!(r.get("wall_time_ms").is_none());
}

#[test]
fn lattice_coefficients_report_stability() {
    let (code, r) = run(&["em-homology", "--group", "Z", "--n", "2", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["rank"], 1);
    assert_eq!(r["payload"]["stable"], true);
}

#[test]
fn solid_commands() {
    let (code, r) = run(&["solid", "check", "Zp(2)(x)Zp(3)", "0", "--level", "8"]);
    assert_eq!((code, r["outcome"].as_str()), (0, Some("pass")));
    let (code, r) = run(&["solid", "check", "Prod(I)", "Prod(I) (+) 0"]);
    assert_eq!((code, r["outcome"].as_str()), (0, Some("symbolic")));
    let (code, r) = run(&["solid", "check", "Zp(2)", "Zp(3)"]);
    assert_eq!((code, r["outcome"].as_str()), (1, Some("fail")));
    let (code, r) = run(&["solid", "normalize", "PS(U)(x)PS(T)"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["normal_form"], "PS(T,U)");
}

#[test]
fn duality_commands() {
    let (code, r) = run(&["duality", "shriek-unit", "--ring", "Z[T]"]);
    assert_eq!(code, 0);
    assert_eq!(
        (r["payload"]["rank"].as_u64(), r["payload"]["shift"].as_i64()),
        (Some(1), Some(1))
    );
    let (code, r) = run(&["duality", "shriek-unit", "--ring", "Z[x]/(x)", "--codimension", "2"]);
    assert_eq!(code, 1);
    assert!(r["payload"]["error"].as_str().unwrap().contains("codimension"));
    let (code, r) = run(&["duality", "p1", "--twist", "-3"]);
    assert_eq!((code, r["payload"]["perfect"].as_bool()), (0, Some(true)));
    let (code, r) = run(&["duality", "xy", "--window", "8"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["shift"], 1);
    assert_eq!(r["payload"]["degrees"]["2"]["rank"], 2);
    let (code, _) = run(&["duality", "ainfty", "--window", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn file_inputs() {
    let cover = scratch(
        "cover.json",
        r#"{"subsets":[{"numerators":["T","1"],"denominator":"T"},{"numerators":["T","1"],"denominator":"1"}],"unit_ideal":true}"#,
    );
    let (code, r) = run(&["adic", "refine", "--cover", cover.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["members"].as_array().unwrap().len(), 3);

    let unflagged = scratch(
        "unflagged.json",
        r#"{"subsets":[{"numerators":["g"],"denominator":"f"}]}"#,
    );
    let (code, _) = run(&["adic", "refine", "--cover", unflagged.to_str().unwrap()]);
    assert_eq!(code, 1);

    let points = scratch("points.json", r#"{"dim":2,"points":[[0,0],[1,0],[1,1]]}"#);
    let (code, r) = run(&["noebeling", "--points", points.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["basis"].as_array().unwrap().len(), 3);

    let nerve = scratch(
        "nerve.json",
        r#"{"kind":"cech_nerve","target_size":2,"map":[0,1,1,0],"levels":3}"#,
    );
    let (code, r) = run(&[
        "cech",
        "homotopy",
        "--cover",
        nerve.to_str().unwrap(),
        "--trials",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["seed"], 7);

    let complex = scratch(
        "complex.json",
        r#"{"degrees":[0,1],"ranks":[1,1],"differentials":[{"degree":1,"entries":[[0,0,2]]}]}"#,
    );
    let (code, r) = run(&["homology", "--complex", complex.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        r["payload"]["homology"]["0"],
        serde_json::json!({"rank": 0, "torsion": [2]})
    );
    assert_eq!(
        r["payload"]["homology"]["1"],
        serde_json::json!({"rank": 0, "torsion": []})
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--bogus"][..],
        &["solid", "normalize", "Zp("],
        &["em-homology", "--group", "Q", "--n", "1", "--degree", "1"],
        &["snf", "--matrix", "[[1,2],[3]]"],
        &["adic", "refine", "--cover", "/nonexistent/cover.json"],
    ] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_and_flags() {
    let config = scratch("lab.toml", "window = 4\nlevel = 2\n");
    let out = bin()
        .args(["duality", "xy", "--json", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["parameters"]["window"], 4);
    let bad = scratch("bad.toml", "windw = 4\n");
    let out = bin()
        .args(["duality", "xy", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["cech", "torus", "--factors", "2", "--quiet"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let (_, r) = run(&["cech", "torus", "--factors", "1", "--timing"]);
    assert!(r["wall_time_ms"].is_u64());
}

#[test]
fn thread_count_does_not_change_reports() {
    let one = bin()
        .args(["suite", "--quick", "--json"])
        .env("CONDENSED_LAB_THREADS", "1")
        .output()
        .unwrap();
    let four = bin()
        .args(["suite", "--quick", "--json"])
        .env("CONDENSED_LAB_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
