use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quadlie::liealg::RootOps;
use quadlie::table::StructureTable;
use quadlie::Geometry;

fn quadlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadlie")).args(args).output().expect("spawn quadlie")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_dumps() {
    for (kind, rows, header) in [
        ("points", 27, "id,code,a,b,c"),
        ("lines", 45, "id,p0,p1,p2"),
        ("phi", 72, "id,p0,p1,p2,p3,p4,p5,s_code,dual_id"),
    ] {
        let o = quadlie(&["catalog", "--dump", kind]);
        assert!(o.status.success());
        let text = stdout(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], header);
        assert_eq!(lines.len(), rows + 1, "{kind}");
    }
    let first_point = stdout(&quadlie(&["catalog", "--dump", "points"])).lines().nth(1).unwrap().to_string();
    assert_eq!(first_point, "0,5,0,1,1");
}

#[test]
fn phi_dump_matches_catalog_dump() {
    let a = stdout(&quadlie(&["phi", "--dump"]));
    let b = stdout(&quadlie(&["catalog", "--dump", "phi"]));
    assert_eq!(a, b);
    assert_eq!(stdout(&quadlie(&["phi"])).trim(), "rootbases=72 sums=36");
    for row in a.lines().skip(1) {
        let f: Vec<u32> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f.len(), 9);
        let dual_row = a.lines().nth(f[8] as usize + 1).unwrap();
        let g: Vec<u32> = dual_row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!((g[7], g[8]), (f[7], f[0]));
    }
}

#[test]
fn weyl_command() {
    assert_eq!(stdout(&quadlie(&["weyl", "--order"])).trim(), "order=51840");
    assert_eq!(stdout(&quadlie(&["weyl", "--normalizer", "12"])).trim(), "line=12 normalizer=1152 order3=80");
    assert_eq!(quadlie(&["weyl", "--normalizer", "45"]).status.code(), Some(2));
}

#[test]
fn build_exports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let geo = Geometry::build().unwrap();
    let roots = RootOps::build(&geo);
    for (target, dim, extra) in
        [("e6", 78, &[][..]), ("d4", 28, &["--line", "7"][..]), ("g2", 14, &["--field", "2^4"][..])]
    {
        let path = dir.path().join(format!("{target}.json"));
        let mut args = vec!["build", target, "--out", path_str(&path)];
        args.extend_from_slice(extra);
        let o = quadlie(&args);
        assert!(o.status.success(), "{target}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().next().unwrap(), format!("dim={dim}"));
        let table = StructureTable::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(table.dim(), dim);
        let alg = table.materialize(&geo, &roots).unwrap();
        table.verify_against(&alg).unwrap();
    }
    let g2 = StructureTable::from_json(&fs::read_to_string(dir.path().join("g2.json")).unwrap()).unwrap();
    assert_eq!(g2.field.degree(), 4);
    let meta = g2.metadata.unwrap();
    assert_eq!(meta.line, Some(0));
    assert_eq!(meta.d.unwrap().len(), 27);
}

#[test]
fn build_csv() {
    let o = quadlie(&["build", "g2", "--format", "csv", "--out", "-"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stderr).trim(), "dim=14");
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("i,j,k,coeff"));
    for row in text.lines().skip(1) {
        let f: Vec<usize> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[0] < f[1] && f[1] < 14 && f[2] < 14 && f[3] == 1);
    }
}

#[test]
fn build_default_path_is_target_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_quadlie")).args(["build", "d4"]).current_dir(dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("d4.json").exists());
}

#[test]
fn exit_codes() {
    // d index 0 of line 0 folds as (0, 8)
    assert_eq!(quadlie(&["build", "g2", "--d", "0", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "g2", "--d", "80", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "g2", "--d", "x", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "d4", "--line", "45", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "e6", "--field", "2^9", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "e6", "--field", "4", "--out", "-"]).status.code(), Some(2));
    assert_eq!(quadlie(&["build", "f4"]).status.code(), Some(2));
    assert_eq!(quadlie(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(quadlie(&["verify", "--inject-fault", "1:2"]).status.code(), Some(2));
    let missing = Path::new("/nonexistent-dir/x.json");
    assert_eq!(quadlie(&["build", "d4", "--out", path_str(missing)]).status.code(), Some(2));
}

#[test]
fn verify_suite_filter_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = quadlie(&["verify", "--suite", "prop26", "--out", path_str(&path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["PASS prop26 (3 checks)", "verify: passed"]);
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_with_fault_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = quadlie(&["verify", "--suite", "prop31", "--inject-fault", "5:0:0", "--out", path_str(&path)]);
    assert_eq!(o.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep["passed"], false);
    let ce = rep["suites"][0]["counterexamples"].as_array().unwrap();
    assert!(!ce.is_empty());
    assert!(ce.iter().any(|c| c.as_str().unwrap().contains("R_5 ")));
}
