use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qangle"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn line(re: &[f64], im: &[f64]) -> Value {
    serde_json::json!({"dim": re.len(), "re": re, "im": im})
}

#[test]
fn angle_matches_library() {
    let p = serde_json::json!({"u": line(&[1.0, 0.0], &[0.0, 0.0]), "v": line(&[0.6, 0.8], &[0.0, 0.0])});
    let o = run(&["angle"], &p.to_string());
    assert!(o.status.success());
    assert!((json(&o)["radians"].as_f64().unwrap() - 0.8f64.atan2(0.6)).abs() < 1e-15);
    assert!(String::from_utf8_lossy(&o.stderr).contains("runtime"));
}

#[test]
fn outputs_are_deterministic_and_round_trip() {
    for args in [
        vec!["wigner-generate", "--seed", "5"],
        vec!["verify", "section5", "--dim", "3", "--seed", "3", "--draws", "10"],
    ] {
        let a = run(&args, r#"{"dim": 3, "antiunitary": true}"#);
        let b = run(&args, r#"{"dim": 3, "antiunitary": true}"#);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout);
        let v = json(&a);
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again.as_bytes(), a.stdout.as_slice());
    }
}

#[test]
fn generated_symmetry_feeds_other_verbs() {
    let w = json(&run(&["wigner-generate", "--seed", "9"], r#"{"dim": 2}"#));
    let p = serde_json::json!({"map": {"kind": "wigner", "symmetry": w}, "alpha": 0.7, "pairs": 50});
    let o = run(&["wigner-check"], &p.to_string());
    assert!(o.status.success());
    assert_eq!(json(&o)["report"]["forward_violations"], 0);

    let p = serde_json::json!({"map": {"kind": "exotic", "psi": w, "band": 0.2}, "alpha": std::f64::consts::FRAC_PI_4, "pairs": 200, "probe_angle": 1.0});
    let r = json(&run(&["wigner-check"], &p.to_string()));
    assert_eq!(r["report"]["forward_violations"], 0);
    assert!(r["violation"]["deviation"].as_f64().unwrap() > 1e-3);
}

#[test]
fn in_and_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, r#"{"a": 0.5, "c": 0.9, "d": 0.4358898943540674}"#).unwrap();
    let o = run(&["witness", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert!(v["witness"]["checks"]["separation"].as_f64().unwrap() > 1e-6);
}

#[test]
fn exit_codes() {
    let o = run(&["angle"], "{}");
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "SchemaError");
    let o = run(&["angle"], "not json");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["no-such-verb"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "no-such-suite"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["witness"], r#"{"alpha": 1.2, "c": 0.8, "d": 0.6}"#);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "CaseError");
    let o = run(&["alphaset"], r#"{"a": 0.5, "alpha": 1.0, "lines": []}"#);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["witness"], r#"{"alpha": 1.2, "c": 0.8, "d": 0.6, "extra": 1}"#);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_circle3_rounded_constants() {
    let o = run(
        &["verify", "circle3", "--a", "0.57735026919", "--c", "0.81649658092", "--d", "0.57735026919", "--cloud", "20000"],
        "",
    );
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["verdict"], true);
    assert_eq!(r["counts"]["components"], 2);
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().starts_with("case (i)")));
}

#[test]
fn descriptor_and_cardinality_verbs() {
    let lines = serde_json::json!([line(&[1.0, 0.0, 0.0], &[0.0; 3]), line(&[0.6, 0.8, 0.0], &[0.0; 3])]);
    let d = json(&run(&["alphaset"], &serde_json::json!({"alpha": 1.2, "lines": lines}).to_string()));
    assert_eq!(d["components"][0]["kind"], "atheta");
    let fam = d["components"][0].clone();
    let mut fam = fam.as_object().unwrap().clone();
    fam.remove("kind");
    fam.insert("ambient_dim".into(), 4.into());
    for k in ["e1", "e2"] {
        let v = fam[k].as_object_mut().unwrap();
        v["dim"] = 4.into();
        v["re"].as_array_mut().unwrap().push(0.0.into());
        v["im"].as_array_mut().unwrap().push(0.0.into());
    }
    let p = serde_json::json!({"alpha": 1.2, "family": fam, "theta": 0.0, "c1": [0.0, 0.0], "c2": [0.0, 0.0], "c3": 1.0});
    let o = run(&["cardinality"], &p.to_string());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(json(&o)["cardinality"].is_string());

    let s = 1.0 / 3f64.sqrt();
    let t = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)].map(|(lr, li)| {
        line(&[(2.0f64 / 3.0).sqrt(), lr * s, 0.0], &[0.0, li * s, 0.0])
    });
    let o = run(&["double-alphaset"], &serde_json::json!({"a": s, "lines": t}).to_string());
    let r = json(&o);
    assert_eq!(r["case"], "exceptional-circle-circle");
    assert_eq!(r["descriptor"]["components"].as_array().unwrap().len(), 2);
    let o = run(&["canonical"], &serde_json::json!({"lines": t}).to_string());
    assert_eq!(json(&o)["kind"], "triple");
}
