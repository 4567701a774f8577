use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn shz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shz"))
        .args(args)
        .env_remove("SHZ_CUTOFF")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn eval_single_box() {
    let out = shz(&["eval", "--shape", "1", "--z", "0=2", "--y", "0=0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    let re = v["value_re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-7);
    for key in ["value_im", "err_bound", "cutoff", "runtime_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn eval_column_matches_double_zeta() {
    let out = shz(&["eval", "--shape", "1,1", "--z", "-1=2,0=3"]);
    assert_eq!(out.status.code(), Some(0));
    let re = json_lines(&out)[0]["value_re"].as_f64().unwrap();
    // Σ_{m<n} m^{-3} n^{-2}
    assert!((re - 0.711_566_197_550_572_4).abs() < 1e-8, "{re}");
}

#[test]
fn eval_errors() {
    let out = shz(&["eval", "--shape", "1,1", "--z", "0=3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("-1"));
    let out = shz(&["eval", "--shape", "1,1", "--z", "-1=1,0=1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Re(s) > 1"));
    assert_eq!(shz(&["eval", "--shape", "2,x", "--z", "0=2"]).status.code(), Some(2));
    assert_eq!(shz(&["eval", "--bogus"]).status.code(), Some(2));
}

#[test]
fn eval_from_tableau_file() {
    let dir = std::env::temp_dir().join(format!("shz-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, r#"{{"s": [[null, 2], [3]], "x": [[null, 0], [0]]}}"#).unwrap();
    let out = shz(&["eval", "--tableau-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = &json_lines(&out)[0];
    assert_eq!(v["shape"], "2,1/1");
    // Two disconnected cells: ζ(2) ζ(3).
    let want = std::f64::consts::PI.powi(2) / 6.0 * 1.202_056_903_159_594_3;
    assert!((v["value_re"].as_f64().unwrap() - want).abs() < 1e-7);
}

#[test]
fn cutoff_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_shz"))
        .args(["eval", "--shape", "1", "--z", "0=3"])
        .env("SHZ_CUTOFF", "321")
        .output()
        .unwrap();
    assert_eq!(json_lines(&out)[0]["cutoff"], 321);
    let out = Command::new(env!("CARGO_BIN_EXE_shz"))
        .args(["eval", "--shape", "1", "--z", "0=3", "--cutoff", "50"])
        .env("SHZ_CUTOFF", "321")
        .output()
        .unwrap();
    assert_eq!(json_lines(&out)[0]["cutoff"], 50);
}

#[test]
fn check_lgv_exact() {
    let out = shz(&["check", "--builtin", "lgv-exact"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert!(!lines.is_empty());
    for v in lines {
        assert_eq!(v["identity_id"], "lgv_cancellation");
        assert_eq!(v["pass"], true);
        assert_eq!(v["discrepancy"], 0.0);
    }
}

#[test]
fn check_all_builtin() {
    let out = shz(&["check", "--builtin", "all", "--cutoff", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = json_lines(&out);
    let lines_seen: Vec<u64> = lines.iter().map(|v| v["line"].as_u64().unwrap()).collect();
    let mut sorted = lines_seen.clone();
    sorted.sort_unstable();
    assert_eq!(lines_seen, sorted, "reports come out in manifest order");
    for v in &lines {
        assert_eq!(v["as_expected"], true, "{v}");
        for key in ["identity_id", "shape", "lhs", "rhs", "discrepancy", "budget", "pass", "cutoffs", "runtime_ms"] {
            assert!(v.get(key).is_some(), "{key} missing in {v}");
        }
    }
    assert!(lines.iter().any(|v| v["pass"] == false && v["expected_pass"] == false));
}

#[test]
fn check_is_deterministic() {
    let strip = |out: &Output| -> Vec<Value> {
        json_lines(out)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("runtime_ms");
                v
            })
            .collect()
    };
    let a = shz(&["check", "--builtin", "hook", "--jobs", "1"]);
    let b = shz(&["check", "--builtin", "hook", "--jobs", "4"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn check_example_manifest() {
    let path = repo_file("manifests/example.txt");
    let out = shz(&["check", "--manifest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn check_failures_and_errors() {
    let dir = std::env::temp_dir().join(format!("shz-check-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let unknown = dir.join("unknown.txt");
    std::fs::write(&unknown, "no_such_identity 2,2 z=0=2\n").unwrap();
    assert_eq!(shz(&["check", "--manifest", unknown.to_str().unwrap()]).status.code(), Some(2));

    let failing = dir.join("failing.txt");
    std::fs::write(&failing, "extended_jacobi_trudi_single 2,2 s=[[3,2],[2,2]] x=[[0,0.5],[0.2,0]]\n").unwrap();
    let out = shz(&["check", "--manifest", failing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = &json_lines(&out)[0];
    assert_eq!(v["pass"], false);
    assert!(v["margin"].as_f64().unwrap() < 0.0);

    assert_eq!(shz(&["check", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(shz(&["check"]).status.code(), Some(2));
}

#[test]
fn paths_counts_and_render() {
    let out = shz(&["paths", "--shape", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["patterns"], 1);
    assert_eq!(v["by_type"]["1"], 1);

    let out = shz(&["paths", "--shape", "3,2", "--n", "4", "--render"]);
    let v = &json_lines(&out)[0];
    assert!(v["by_type"]["1 2"].as_u64().unwrap() > 0);
    assert!(v["by_type"]["2 1"].as_u64().unwrap() > 0);
    assert_eq!(v["diagrams"].as_array().unwrap().len() as u64, v["patterns"].as_u64().unwrap());
    let again = shz(&["paths", "--shape", "3,2", "--n", "4", "--render"]);
    assert_eq!(out.stdout, again.stdout);

    assert_eq!(shz(&["paths", "--shape", "3,2,x", "--n", "4"]).status.code(), Some(2));
    assert_eq!(shz(&["paths", "--shape", "3,2"]).status.code(), Some(2));
}
