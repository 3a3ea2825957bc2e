//! Acceptance gate: drives the `orthokleis` binary and prints one PASS/FAIL
//! line per criterion before asserting that all of them hold.

use serde_json::Value;
use std::process::Command;
use std::time::Instant;

struct Run {
    code: i32,
    doc: Value,
    seconds: f64,
}

fn orthokleis(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_orthokleis")).args(args).output().expect("binary runs");
    let seconds = start.elapsed().as_secs_f64();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), doc, seconds }
}

fn line<'a>(doc: &'a Value, name: &str) -> Option<&'a Value> {
    doc["rows"].as_array()?.iter().find(|l| l["name"] == name)
}

/// The named line exists, passed, used at most `threshold` and at least `samples` samples.
fn check(doc: &Value, name: &str, threshold: f64, samples: u64, why: &mut Vec<String>) {
    match line(doc, name) {
        None => why.push(format!("{name}: missing")),
        Some(l) => {
            if l["pass"] != true {
                why.push(format!("{name}: residual {} > {}{}", l["residual"], l["threshold"], l["note"].as_str().map(|n| format!(" ({n})")).unwrap_or_default()));
            } else if l["samples"].as_u64().unwrap_or(0) < samples {
                why.push(format!("{name}: {} samples, need {samples}", l["samples"]));
            }
            if l["threshold"].as_f64().is_none_or(|t| t > threshold) {
                why.push(format!("{name}: threshold {} looser than {threshold:e}", l["threshold"]));
            }
        }
    }
}

fn suite_time(doc: &Value, suite: &str) -> f64 {
    doc["suite_seconds"][suite].as_f64().unwrap_or(f64::INFINITY)
}

fn report(id: u32, title: &str, why: &[String]) -> bool {
    if why.is_empty() {
        println!("criterion {id} PASS  {title}");
    } else {
        println!("criterion {id} FAIL  {title}: {}", why.join("; "));
    }
    why.is_empty()
}

#[test]
fn acceptance_criteria() {
    let mut ok = Vec::new();

    // 1: catalog reports
    let mut why = Vec::new();
    let start = Instant::now();
    for (name, det, level, roots) in [("E8", 1, 1, 240), ("A1", 2, 4, 2), ("A2", 3, 3, 6)] {
        let r = orthokleis(&["--lattice", name, "--command", "report"]);
        let got = (r.doc["det"].as_i64(), r.doc["level"].as_i64(), r.doc["roots"].as_i64());
        if r.code != 0 || got != (Some(det), Some(level), Some(roots)) {
            why.push(format!("{name}: exit {} det/level/roots {got:?}", r.code));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t >= 5.0 {
        why.push(format!("{t:.1} s"));
    }
    ok.push(report(1, "lattice reports", &why));

    let full = orthokleis(&["--lattice", "E8", "--command", "verify"]);
    let doc = &full.doc;

    // 2: group identities
    let mut why = Vec::new();
    check(doc, "automorphy-cocycle", 1e-9, 100, &mut why);
    check(doc, "q0-norm-identity", 1e-9, 100, &mut why);
    if suite_time(doc, "group") >= 10.0 {
        why.push(format!("{:.1} s", suite_time(doc, "group")));
    }
    ok.push(report(2, "group suite", &why));

    // 3: majorant identities
    let mut why = Vec::new();
    check(doc, "majorant-axioms", 1e-8, 1, &mut why);
    check(doc, "transport-two-paths", 1e-8, 1, &mut why);
    check(doc, "klingen-quotient-identity", 1e-8, 50, &mut why);
    check(doc, "majorant-equivariance", 1e-8, 1, &mut why);
    ok.push(report(3, "majorant suite", &why));

    // 4: Eisenstein invariance at B = 5, 20, 100 on A2 and E8
    let mut why = Vec::new();
    for name in ["A2", "E8"] {
        let r = orthokleis(&["--lattice", name, "--command", "verify", "--suite", "eisenstein", "--B", "5,20,100"]);
        let mut sub = Vec::new();
        for b in [5, 20, 100] {
            check(&r.doc, &format!("gamma-invariance-B{b}"), 1e-10, 20, &mut sub);
        }
        check(&r.doc, "hnf-sigma1", 0.0, 100, &mut sub);
        check(&r.doc, "imprimitive-decomposition", 1e-9, 1, &mut sub);
        if name == "E8" && suite_time(&r.doc, "eisenstein") >= 60.0 {
            sub.push(format!("{:.1} s", suite_time(&r.doc, "eisenstein")));
        }
        why.extend(sub.into_iter().map(|w| format!("{name} {w}")));
    }
    ok.push(report(4, "Eisenstein suite", &why));

    // 5: theta transformation laws
    let mut why = Vec::new();
    check(doc, "theta-majorant-invariance", 1e-10, 1, &mut why);
    check(doc, "translation-periodicity", 1e-10, 1, &mut why);
    match line(doc, "sp2-inversion") {
        Some(l) if l["pass"] == true => {}
        other => why.push(format!("sp2-inversion: {other:?}")),
    }
    ok.push(report(5, "theta suite", &why));

    // 6: exact operator identities
    let mut why = Vec::new();
    for name in ["cayley-eigen", "delta-alpha-identity", "onedim-annihilation-n4", "onedim-annihilation-n8", "pull-out-n4-r1"] {
        check(doc, name, 0.0, 1, &mut why);
    }
    check(doc, "polynomial-structure-n4", 0.0, 5, &mut why);
    check(doc, "maass-covariance", 1e-6, 1, &mut why);
    if suite_time(doc, "operators") >= 120.0 {
        why.push(format!("{:.1} s", suite_time(doc, "operators")));
    }
    ok.push(report(6, "operator suite", &why));

    // 7: special functions
    let mut why = Vec::new();
    check(doc, "xi-reflection", 1e-10, 20, &mut why);
    check(doc, "p2-cubature", 1e-4, 5, &mut why);
    check(doc, "gammaS-roots-n8", 0.0, 1, &mut why);
    check(doc, "reflection-algebra", 0.0, 1, &mut why);
    ok.push(report(7, "special-function suite", &why));

    // 8: end to end
    let mut why = Vec::new();
    if full.code != 0 {
        let failed: Vec<&str> = doc["rows"].as_array().map(|v| v.iter().filter(|l| l["pass"] != true).filter_map(|l| l["name"].as_str()).collect()).unwrap_or_default();
        why.push(format!("exit {} (failing: {failed:?})", full.code));
    }
    if full.seconds >= 300.0 {
        why.push(format!("{:.1} s", full.seconds));
    }
    ok.push(report(8, "end-to-end verify on E8", &why));

    let failed: Vec<usize> = ok.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
