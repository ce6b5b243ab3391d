use std::process::{Command, Output};

use serde_json::Value;

fn edgebounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgebounds")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn help_goes_to_stdout() {
    let out = edgebounds(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("audit"));
    let out = edgebounds(&["audit", "--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_input_errors_exit_two() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["bound", "--d", "2"],
        &["bound", "--d", "1", "--log-conductor", "0.5"],
        &["audit", "--id", "nope"],
        &["dirichlet", "l1", "--q", "5", "--index", "9"],
        &["dirichlet", "l1", "--q", "5", "--index", "0"],
        &["window", "--q", "6", "--index", "1"],
        &["bound", "--instance", "{\"label\":1}"],
        &["bound", "--instance", "/nonexistent/instance.json"],
        &["audit", "--id", "lemma24", "--x", "1e8"],
        &["constants", "--d", "1", "--format", "text", "--tol", "-1"],
    ] {
        let out = edgebounds(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_audit_exits_one() {
    let out = edgebounds(&["audit", "--id", "lemma24", "--x", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["any_fail"], true);
    let ids: Vec<_> = v["records"].as_array().unwrap().iter().map(|r| (r["id"].clone(), r["verdict"].clone())).collect();
    assert!(ids.contains(&("lemma24.as_printed".into(), "FAIL".into())));
    assert!(ids.contains(&("lemma24.corrected".into(), "PASS".into())));
}

#[test]
fn report_only_audit_exits_zero() {
    let out = edgebounds(&["audit", "--id", "techlem1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,verdict,lhs,rhs,window,residual,params\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("techlem1,REPORT,")));
}

#[test]
fn bound_from_instance_matches_direct() {
    let inst = r#"{"label":"zeta-like","d":1,"q":1000000000000,"kappas":[{"re":0,"im":0}],"oracle":"none"}"#;
    let a = json(&edgebounds(&["bound", "--instance", inst]));
    let log_c = a["report"]["logC"].as_f64().unwrap();
    let expected = 1e12f64.ln() - std::f64::consts::PI.ln() + 0.5f64.ln();
    assert!((log_c - expected).abs() < 1e-12);
    let b = json(&edgebounds(&["bound", "--d", "1", "--log-conductor", &log_c.to_string()]));
    assert_eq!(a["report"]["upper"], b["report"]["upper"]);
    assert_eq!(a["schema"], "edgebounds-report/1");

    let dir = std::env::temp_dir().join(format!("edgebounds-inst-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inst.json");
    std::fs::write(&path, inst).unwrap();
    let c = json(&edgebounds(&["bound", "--instance", path.to_str().unwrap(), "--t", "0"]));
    assert_eq!(a, c);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn survey_writes_csv_and_json() {
    let dir = std::env::temp_dir().join(format!("edgebounds-survey-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let stem = dir.join("survey");
    let out = edgebounds(&["dirichlet", "survey", "--q-max", "12", "--out", stem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "q,char_index,conductor,parity,re_L1,im_L1,abs_L1,C_chi,bound_upper,bound_valid,ratio");
    let file: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    let rows = file.as_array().unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    assert_eq!(json(&out)["records"], file);
    let mut qs: Vec<u64> = rows.iter().map(|r| r["q"].as_u64().unwrap()).collect();
    qs.dedup();
    assert_eq!(qs, [3, 4, 5, 7, 8, 9, 11, 12]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_document() {
    let dir = std::env::temp_dir().join(format!("edgebounds-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.json");
    let out = edgebounds(&["constants", "--d", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["constants"]["d"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn formats() {
    let text = edgebounds(&["window", "--q", "3", "--index", "1", "--x", "1000", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("log|L(1,f)| in ["));
    let csv = edgebounds(&["primesums", "--x", "100", "1000", "--format", "csv"]);
    let s = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(s.lines().count(), 1 + 2 * 4);
    let l1 = json(&edgebounds(&["dirichlet", "l1", "--q", "7"]));
    assert_eq!(l1["values"].as_array().unwrap().len(), 5);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["audit", "--id", "aterms"];
    let one = edgebounds(&[&args[..], &["--threads", "1"]].concat());
    let many = edgebounds(&[&args[..], &["--threads", "5"]].concat());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.status.code(), Some(0));
}
