use quadlie::liealg::DPolicy;
use quadlie::suites::{run, Fault, VerifyOptions, SUITE_NAMES};
use quadlie::Error;

fn only(names: &[&str]) -> VerifyOptions {
    VerifyOptions { suites: Some(names.iter().map(|s| s.to_string()).collect()), ..VerifyOptions::default() }
}

#[test]
fn default_run_passes_every_suite() {
    let rep = run(&VerifyOptions::default()).unwrap();
    let names: Vec<&str> = rep.suites.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, SUITE_NAMES);
    for s in &rep.suites {
        assert!(s.passed, "{} failed: {:?}", s.name, s.counterexamples);
    }
    assert!(rep.passed);
}

#[test]
fn suite_filter_keeps_canonical_order() {
    let rep = run(&only(&["prop31", "prop26"])).unwrap();
    let names: Vec<&str> = rep.suites.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["prop26", "prop31"]);
}

#[test]
fn other_line_and_field() {
    let opts = VerifyOptions { line: 17, field_degree: 3, ..VerifyOptions::default() };
    let rep = run(&opts).unwrap();
    assert!(rep.passed, "{:?}", rep.suites.iter().filter(|s| !s.passed).collect::<Vec<_>>());
}

#[test]
fn bad_options_are_errors() {
    assert!(matches!(run(&only(&["nope"])), Err(Error::Unknown { .. })));
    let bad_line = VerifyOptions { line: 45, ..VerifyOptions::default() };
    assert!(matches!(run(&bad_line), Err(Error::Precondition(_))));
    let bad_d = VerifyOptions { d: DPolicy::Index(80), ..only(&["g2"]) };
    assert!(matches!(run(&bad_d), Err(Error::Precondition(_))));
    assert!("1:2".parse::<Fault>().is_err());
    assert!("72:0:0".parse::<Fault>().is_err());
    assert!("0:27:0".parse::<Fault>().is_err());
    assert_eq!("3:4:5".parse::<Fault>().unwrap(), Fault { root_base: 3, row: 4, col: 5 });
}

#[test]
fn index_policy_with_non_g2_folding_is_rejected() {
    // index 0 folds as (0, 8) on line 0
    let opts = VerifyOptions { d: DPolicy::Index(0), ..only(&["weights"]) };
    assert!(matches!(run(&opts), Err(Error::Precondition(_))));
}

#[test]
fn faults_are_localized_by_bracket_laws() {
    for (rb, row, col) in [(0, 0, 0), (17, 3, 9), (40, 26, 1), (71, 5, 5), (33, 12, 20)] {
        let fault = Fault { root_base: rb, row, col };
        let opts = VerifyOptions { fault: Some(fault), ..only(&["prop31", "e6", "g2"]) };
        let rep = run(&opts).unwrap();
        assert!(!rep.passed);
        let p31 = rep.suite("prop31").unwrap();
        assert!(!p31.passed);
        assert!(
            p31.counterexamples.iter().any(|c| c.contains(&format!("R_{rb}"))),
            "fault {fault:?} not localized: {:?}",
            p31.counterexamples
        );
    }
}

#[test]
fn report_serializes() {
    let rep = run(&only(&["catalog"])).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["name"], "catalog");
    assert!(v["suites"][0]["checks"].as_array().unwrap().len() > 5);
}
