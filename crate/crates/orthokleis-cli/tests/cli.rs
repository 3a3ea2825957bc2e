use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_orthokleis")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn gram_file(name: &str, text: &str) -> String {
    let p = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn malformed_gram_exits_2() {
    let odd = gram_file("odd.gram", "2\n2 1\n1 3\n");
    let (code, _, err) = run(&["--lattice", &odd]);
    assert_eq!(code, 2);
    assert!(err.contains("not even"), "{err}");
    let asym = gram_file("asym.gram", "2\n2 1\n0 2\n");
    let (code, _, err) = run(&["--lattice", &asym]);
    assert_eq!(code, 2);
    assert!(err.contains("not symmetric"), "{err}");
    let (code, _, _) = run(&["--lattice", "Z9"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["--command", "eisenstein", "--s", "x,1"]).0, 2);
    assert_eq!(run(&["--command", "theta", "--tol", "-1"]).0, 2);
    assert_eq!(run(&["--command", "verify", "--suite", "nope"]).0, 2);
    assert_eq!(run(&["--command", "frobnicate"]).0, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_orthokleis")).env("ORTHOKLEIS_PRECISION", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_json_carries_schema_and_seed() {
    let (code, out, _) = run(&["--lattice", "A1", "--seed", "7"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["level"], 4);
}

#[test]
fn eisenstein_increments_shrink() {
    let (code, out, _) = run(&["--lattice", "A2", "--command", "eisenstein", "--s", "12,0", "--B", "5,10,20,40"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let vals: Vec<f64> = rows.iter().map(|r| r["value_re"].as_f64().unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{vals:?}");
    assert!(rows[0]["increment"].is_null());
}

#[test]
fn below_convergence_is_labelled_and_fails() {
    let (code, out, _) = run(&["--lattice", "A2", "--command", "eisenstein", "--s", "2,0", "--B", "5"]);
    assert_eq!(code, 1);
    assert!(out.contains("convergence"));
    let (code, out, _) = run(&["--lattice", "A2", "--command", "eisenstein", "--s", "2,0", "--B", "5", "--formal"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"formal\": true"));
}

#[test]
fn theta_tail_meets_tolerance() {
    let (code, out, _) = run(&["--lattice", "A2", "--command", "theta", "--z", "0,2;0,2;0,0", "--tol", "1e-8"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert!(last["tail_bound"].as_f64().unwrap() <= 1e-8);
    // previous-level value lies within its own tail bound of the final one
    let prev = &rows[rows.len() - 2];
    let d = (prev["theta_re"].as_f64().unwrap() - last["theta_re"].as_f64().unwrap()).abs();
    assert!(d <= prev["tail_bound"].as_f64().unwrap());
}

#[test]
fn csv_and_completed_factors() {
    let (code, out, _) = run(&["--lattice", "E8", "--command", "completed", "--s", "12,0", "--B", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let header = out.lines().next().unwrap();
    for label in ["xi(s-3)_re", "xi(2s-8)_re", "xi(s)_re", "xi(s-1)_re", "gamma_S(s)_re", "completed_re"] {
        assert!(header.contains(label), "{header}");
    }
    let (code, out, _) = run(&["--command", "completed", "--coeffs", "[[1,0]]", "--weight", "4", "--so-order", "1", "--s", "8,0"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["dirichlet_re"], 1.0);
}
