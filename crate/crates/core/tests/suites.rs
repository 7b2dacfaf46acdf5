use qangle::suites::{run_suite, Suite, SuiteParams};
use qangle::Error;

fn params(seed: u64) -> SuiteParams {
    SuiteParams { draws: Some(3), cloud: Some(20_000), seed, ..Default::default() }
}

#[test]
fn reports_are_reproducible() {
    for s in [Suite::Shape, Suite::Section5, Suite::InfiniteElement] {
        let a = serde_json::to_string(&run_suite(s, &params(11)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(s, &params(11)).unwrap()).unwrap();
        assert_eq!(a, b, "{s}");
    }
}

#[test]
fn basic_relations_hold_on_small_cloud() {
    let rep = run_suite(Suite::Basic, &SuiteParams { draws: Some(2), cloud: Some(30_000), ..Default::default() }).unwrap();
    assert!(rep.verdict, "{rep:?}");
    assert!(rep.counts["alpha_members_s1"] > 0);
}

#[test]
fn circle_char_small() {
    let rep = run_suite(Suite::CircleChar, &SuiteParams { draws: Some(6), ..Default::default() }).unwrap();
    assert!(rep.verdict, "{rep:?}");
}

#[test]
fn bad_parameters_are_errors() {
    let p = SuiteParams { dim: Some(3), ..params(0) };
    assert!(matches!(run_suite(Suite::Circle4, &p), Err(Error::Parameter(_))));
    let p = SuiteParams { a: Some(0.5), ..params(0) };
    assert!(matches!(run_suite(Suite::Circle3, &p), Err(Error::Parameter(_))));
    let p = SuiteParams { a: Some(0.9), c: Some(0.8), ..params(0) };
    assert!(run_suite(Suite::Circle3, &p).is_err());
}

#[test]
fn report_json_shape() {
    let rep = run_suite(Suite::Section5, &params(1)).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    for k in ["verdict", "max_residual", "counts", "notes"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    let back: qangle::oracle::OracleReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, rep);
}
