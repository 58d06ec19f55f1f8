use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn flagpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagpoly"))
        .args(args)
        .env_remove("FLAGPOLY_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn model_commands() {
    let pentagon = flagpoly(&["model", "A", "2"]);
    assert!(pentagon.status.success());
    assert_eq!(json(&pentagon)["facets"].as_array().unwrap().len(), 5);
    let square = json(&flagpoly(&["model", "D", "2"]));
    assert_eq!(square["facets"].as_array().unwrap().len(), 4);
    // D^2 has no antipodal pairs: four coloured diameters
    assert!(square["facets"].as_array().unwrap().iter().all(|f| f["kind"] == "ddiam"));

    let bad = flagpoly(&["model", "D", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    assert_eq!(flagpoly(&["model", "Q", "3"]).status.code(), Some(2));
}

#[test]
fn vectors_of_square_and_associahedron() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "sq.json", &String::from_utf8(flagpoly(&["model", "D", "2"]).stdout).unwrap());
    let csv = String::from_utf8(flagpoly(&["vectors", &square]).stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "vector,index,value");
    assert_eq!(
        &rows[1..],
        ["f,0,4", "f,1,4", "f,2,1", "h,0,1", "h,1,2", "h,2,1", "gamma,0,1", "gamma,1,0"]
    );

    let a3 = write(dir.path(), "a3.json", &String::from_utf8(flagpoly(&["model", "A", "3"]).stdout).unwrap());
    let v = json(&flagpoly(&["vectors", &a3, "--format", "json"]));
    assert_eq!(v["f"], serde_json::json!([14, 21, 9, 1]));
    assert_eq!(v["h"], serde_json::json!([1, 6, 6, 1]));
    assert_eq!(v["gamma"], serde_json::json!([1, 3]));
}

#[test]
fn building_set_files_are_models() {
    let dir = tempfile::tempdir().unwrap();
    let path3 = write(dir.path(), "p.json", r#"{"ground": 3, "sets": [[1], [2], [3], [1, 2], [2, 3], [1, 2, 3]]}"#);
    let v = json(&flagpoly(&["vectors", &path3, "--format", "json"]));
    assert_eq!(v["f"], serde_json::json!([5, 5, 1]));
    assert!(v["model"].as_str().unwrap().starts_with("nestohedron-"));
    let g = json(&flagpoly(&["model", "nestohedron", &path3]));
    assert_eq!(g["facets"][0]["kind"], "bset");

    // the triangle building set is not flag
    let tri = write(dir.path(), "t.json", r#"{"ground": 3, "sets": [[1], [2], [3], [1, 2, 3]]}"#);
    assert_eq!(flagpoly(&["model", "nestohedron", &tri]).status.code(), Some(2));
    let broken = write(dir.path(), "b.json", r#"{"ground": 3, "sets": [[1], [2], [1, 2, 3]]}"#);
    assert_eq!(flagpoly(&["vectors", &broken]).status.code(), Some(2));
}

#[test]
fn non_simple_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(
        dir.path(),
        "tri.json",
        r#"{"dimension": 2, "facets": [{"kind": "derived", "tag": "a"}, {"kind": "derived", "tag": "b"},
            {"kind": "derived", "tag": "c"}], "edges": [[0, 1], [0, 2], [1, 2]]}"#,
    );
    let out = flagpoly(&["vectors", &tri]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(flagpoly(&["shave", "--graph", &tri, "--edge", "0", "1"]).status.code(), Some(3));
    assert_eq!(flagpoly(&["vectors", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn shaving_a_square_gives_a_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "sq.json", &String::from_utf8(flagpoly(&["model", "D", "2"]).stdout).unwrap());
    let out = flagpoly(&["shave", "--graph", &square, "--edge", "0", "1"]);
    assert!(out.status.success());
    let pentagon = write(dir.path(), "pent.json", &String::from_utf8(out.stdout).unwrap());
    let v = json(&flagpoly(&["vectors", &pentagon, "--format", "json"]));
    assert_eq!(v["f"], serde_json::json!([5, 5, 1]));
    // a facet cannot be shaved against itself
    let bad = flagpoly(&["shave", "--graph", &square, "--edge", "0", "0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn find_sequence_certificate_and_budget() {
    let out = flagpoly(&["find-sequence", "--source", "prism:D3", "--target", "D4"]);
    assert!(out.status.success());
    let c = json(&out);
    assert_eq!(c["steps"].as_array().unwrap().len(), 5);
    assert_eq!(c["gamma_trace"].as_array().unwrap().last().unwrap(), &serde_json::json!([1, 8, 2]));
    assert_eq!(c["strategy"], "guided");

    let cube = json(&flagpoly(&["find-sequence", "--source", "cube3", "--target", "A3"]));
    assert_eq!(cube["strategy"], "full");
    assert_eq!(cube["steps"].as_array().unwrap().len(), 3);

    let slow = flagpoly(&[
        "find-sequence", "--source", "prism:D4", "--target", "D5", "--strategy", "full", "--budget-seconds", "0.01",
    ]);
    assert_eq!(slow.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&slow.stderr).contains("nodes"));

    // fewer steps than the facet difference is rejected before searching
    let short = flagpoly(&["find-sequence", "--source", "cube3", "--target", "A3", "--max-steps", "2"]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn unreachable_target_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "c.json", &String::from_utf8(flagpoly(&["model", "spec", "cube3"]).stdout).unwrap());
    let once = flagpoly(&["shave", "--graph", &cube, "--edge", "0", "2"]).stdout;
    let once = write(dir.path(), "c1.json", &String::from_utf8(once).unwrap());
    let twice = flagpoly(&["shave", "--graph", &once, "--edge", "0", "4"]).stdout;
    let twice = write(dir.path(), "c2.json", &String::from_utf8(twice).unwrap());
    // eight facets each, but not the hexagonal prism
    let out = flagpoly(&["find-sequence", "--source", &twice, "--target", "prism:Cy2"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_reports() {
    let gal = flagpoly(&["verify", "gal", "--family", "D", "--max-rank", "6"]);
    assert!(gal.status.success());
    let r = json(&gal);
    assert_eq!(r["pass"], true);
    assert_eq!(r["instances"].as_array().unwrap().len(), 5);
    assert_eq!(r["tool"]["name"], "flagpoly");
    assert!(r["instances"][0]["digest"].is_string());
    assert!(r["instances"][0].get("millis").is_none());

    let d = json(&flagpoly(&["verify", "prop2", "--family", "D", "--max-rank", "6"]));
    let fired: Vec<bool> = d["instances"].as_array().unwrap().iter().map(|i| i["certificate_fired"] == true).collect();
    assert_eq!(fired, [false, false, true, true, true]);
    let a = flagpoly(&["verify", "prop2", "--family", "A", "--max-rank", "6"]);
    assert!(a.status.success());

    let timed = json(&flagpoly(&["verify", "prop1", "--max-rank", "4", "--timings"]));
    assert!(timed["instances"][0]["millis"].is_u64());
    assert_eq!(timed["instances"][0]["pass"], true);

    assert_eq!(flagpoly(&["verify", "prop1", "--family", "A"]).status.code(), Some(2));
    assert_eq!(flagpoly(&["verify", "nonsense"]).status.code(), Some(2));
    assert!(flagpoly(&["verify", "nestohedron-cross", "--max-rank", "3"]).status.success());
    assert!(flagpoly(&["verify", "dehn-sommerville", "--max-rank", "5"]).status.success());
    assert!(flagpoly(&["verify", "thm2", "--max-rank", "4"]).status.success());
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_flagpoly"))
            .args(["verify", "gal", "--max-rank", "4"])
            .env("FLAGPOLY_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let (cold, warm) = (run(), run());
    assert_eq!(cold.stdout, warm.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(cold.stdout, flagpoly(&["--no-cache", "verify", "gal", "--max-rank", "4"]).stdout);
}
