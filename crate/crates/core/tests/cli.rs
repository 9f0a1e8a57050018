use std::path::{Path, PathBuf};

use serde_json::Value;

use conedepth::cli::run;
use conedepth::json::RegionJson;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn conedepth(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("conedepth").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> Value {
    let o = conedepth(args);
    assert_eq!(o.code, 0, "{}", o.err);
    serde_json::from_str(&o.out).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_owned()
}

#[test]
fn depth_of_the_triangle_center() {
    let triangle = path("triangle.csv");
    let v = json(&["depth", &triangle, "--points", "0,0;5,5"]);
    assert_eq!(v[0]["depth"].as_f64(), Some(1.0 / 3.0));
    assert_eq!(v[0]["exact"], Value::Bool(true));
    assert_eq!(v[1]["depth"].as_f64(), Some(0.0));
    let v = json(&["depth", &triangle, "--points", "0,0", "--family", "axis"]);
    assert_eq!(v[0]["depth"].as_f64(), Some(2.0 / 3.0));
    assert_eq!(json(&["depth", &triangle]), Value::Array(vec![]));
}

#[test]
fn median_center_and_empty_region() {
    let triangle = path("triangle.csv");
    let m = json(&["median", &triangle]);
    assert_eq!(m["lower"], serde_json::json!([0.0, 0.0]));
    assert_eq!(m["upper"], serde_json::json!([0.0, 0.0]));
    let c = json(&["center", &triangle]);
    assert_eq!(c["kind"], "polygon");
    assert_eq!(c["alpha"].as_f64(), Some(1.0 / 3.0));
    assert_eq!(c["vertices"].as_array().unwrap().len(), 3);
    let r = json(&["region", &triangle, "--alpha", "0.9"]);
    assert_eq!(r["kind"], "empty");
}

#[test]
fn bound_and_budget() {
    let simplex = path("simplex3d.csv");
    let b = json(&["bound", &simplex]);
    assert_eq!(b["alpha_max"].as_f64(), Some(0.25));
    assert_eq!(b["holds"], Value::Bool(true));
    let o = conedepth(&["bound", &simplex, "--budget", "2"]);
    assert_eq!(o.code, 3);
    assert!(o.err.contains("budget"));
}

#[test]
fn input_errors_exit_with_two() {
    let triangle = path("triangle.csv");
    let o = conedepth(&["jensen", &triangle, "--family", "axis", "--function", "sqnorm"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("witness"));
    assert_eq!(conedepth(&["region", &triangle, "--alpha", "0"]).code, 2);
    assert_eq!(conedepth(&["depth", "/nonexistent/file.csv"]).code, 2);
    assert_eq!(conedepth(&["depth", &triangle, "--points", "1,2,3"]).code, 2);
    assert_eq!(conedepth(&["frobnicate"]).code, 2);
    assert_eq!(conedepth(&["--help"]).code, 0);
}

#[test]
fn weighted_and_headerless_files() {
    let dir = tempfile::tempdir().unwrap();
    let named = dir.path().join("named.csv");
    std::fs::write(&named, "x,y,w\n0,1,1\n-1,0,1\n1,0,2\n").unwrap();
    let bare = dir.path().join("bare.csv");
    std::fs::write(&bare, "# comment\n0,1,1\n-1,0,1\n1,0,2\n").unwrap();
    let a = json(&["depth", named.to_str().unwrap(), "--points", "1,0"]);
    let b = json(&["depth", bare.to_str().unwrap(), "--weighted", "--points", "1,0"]);
    assert_eq!(a[0]["depth"].as_f64(), Some(0.5));
    assert_eq!(a, b);
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0,1\n2\n").unwrap();
    assert_eq!(conedepth(&["depth", bad.to_str().unwrap()]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let six = path("six_atoms.csv");
    for args in [
        vec!["depth", six.as_str(), "--family", "mc", "--seed", "7", "--trials", "200", "--points", "0,0;1,0"],
        vec!["center", six.as_str()],
        vec!["jensen", six.as_str(), "--function", "exp-line", "--params", "-1,0,1,0,0,1"],
    ] {
        let first = conedepth(&args);
        assert_eq!(first.code, 0, "{}", first.err);
        assert_eq!(first.out, conedepth(&args).out);
    }
}

#[test]
fn region_json_round_trips() {
    let six = path("six_atoms.csv");
    let o = conedepth(&["region", &six, "--alpha", "0.25"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let parsed: RegionJson = serde_json::from_str(&o.out).unwrap();
    let region = parsed.to_region().unwrap();
    assert!(region.contains(&[0.0, 0.0], 0.0));
    let mut again = RegionJson::from_region(&region, 0.25);
    again.family = parsed.family.clone();
    assert_eq!(conedepth::json::to_json_string(&again), o.out);
}

#[test]
fn csv_output_has_a_header() {
    let triangle = path("triangle.csv");
    let o = conedepth(&["depth", &triangle, "--points", "0,0;-1,0", "--format", "csv"]);
    assert_eq!(o.code, 0);
    let mut lines = o.out.lines();
    assert_eq!(lines.next(), Some("x1,x2,family,depth,exact"));
    assert!(lines.next().unwrap().starts_with("0.0,0.0,halfspace,0.333"));
    assert!(lines.next().unwrap().starts_with("-1.0"));
}
