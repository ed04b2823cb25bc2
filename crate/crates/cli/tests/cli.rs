use std::path::Path;
use std::process::{Command, Output};

use nichols_core::presdsl::catalog_source;
use serde_json::Value;

fn nichols(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nichols")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn catalog_commands() {
    let o = nichols(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    for n in ["cartan-A2-N3", "cartan-B2-N5", "standard-G2", "super-A2-minus", "super-A2-cartan"] {
        assert!(names.iter().any(|m| m == n), "{n}");
    }

    let o = nichols(&["catalog", "show", "cartan-A1"]);
    assert_eq!(stdout(&o), catalog_source("cartan-A1").unwrap());

    let o = nichols(&["catalog", "show", "missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing"));
    assert_eq!(nichols(&["verify", "missing"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let o = nichols(&["verify", "cartan-A2-N3", "--lam", "r112=1", "--lam", "r221=1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["dim"].as_u64(), v["dim_undeformed"].as_u64()), (Some(27), Some(27)));
    assert_eq!(v["elapsed_ms"], Value::Null);

    assert_eq!(nichols(&["verify", "cartan-B2-N5", "--lam", "all=1"]).status.code(), Some(0));

    let o = nichols(&["verify", "cartan-A2-N5-skew", "--lam", "r112=1", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not admissible"));
    let v = json(&o);
    assert_eq!(v["status"], "zero");
    let digest = v["trace_digest"].as_str().unwrap();
    assert!(digest.len() == 64 && digest.bytes().all(|b| b.is_ascii_hexdigit()));

    let o = nichols(&["verify", "cartan-A2-N5-skew", "--lam", "r112=1", "--strict"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes_follow_the_status() {
    let runs: [&[&str]; 6] = [
        &["verify", "cartan-A2-N3", "--json"],
        &["verify", "cartan-A2-N3", "--degree-bound", "3", "--json"],
        &["verify", "cartan-A2-N5", "--lam", "r112=1", "--json"],
        &["verify", "brj-2-3", "--lam", "m1=1", "--json"],
        &["verify", "cartan-G2", "--json"],
        &["verify", "standard-G2", "--lam", "l1=2", "--lam", "l2=2", "--json"],
    ];
    let mut seen = Vec::new();
    for args in runs {
        let o = nichols(args);
        let v = json(&o);
        let expect = match (v["status"].as_str().unwrap(), v["flat"].as_bool()) {
            ("zero", _) => 3,
            ("nonzero", Some(true)) => 0,
            _ => 4,
        };
        assert_eq!(o.status.code(), Some(expect), "{args:?}");
        seen.push(expect);
    }
    seen.sort();
    seen.dedup();
    assert_eq!(seen, [0, 3, 4]);
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.pres", "presentation x\nfield 3\ntheta 1\nmatrix [z]\nrel p1 s0 y1^3 @\n");
    let o = nichols(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5, column 16"), "{}", stderr(&o));

    for args in [
        &["verify", "cartan-A2-N3", "--lam", "r112=1 +"][..],
        &["verify", "cartan-A2-N3", "--lam", "nope=1"],
        &["verify", "cartan-A2-N3", "--lam", "r112"],
        &["verify", "cartan-A2-N3", "--order", "y1 < y3"],
        &["verify", "cartan-A2-N3", "--degree-bound", "0"],
    ] {
        assert_eq!(nichols(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn scalars_use_the_dsl_grammar() {
    let o = nichols(&["verify", "cartan-A2-N3", "--lam", "r112=z^2 - 1/2", "--lam", "r221=q(1,2)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lambda"]["r112"], "-3/2 - z");
    assert_eq!(v["lambda"]["r221"], "z");
}

#[test]
fn all_respects_exclusions() {
    let o = nichols(&["verify", "brj-2-3", "--lam", "all=1", "--json"]);
    let v = json(&o);
    assert!(!stderr(&o).contains("excluded together"), "{}", stderr(&o));
    assert!(!v["lambda"].as_object().unwrap().is_empty());
}

#[test]
fn thin_wrappers() {
    let o = nichols(&["admissible", "cartan-A2-N3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["admissible"], serde_json::json!(["r112", "r221", "p1", "p2", "p12"]));
    assert_eq!(v["rejected"], serde_json::json!([]));

    let o = nichols(&["admissible", "cartan-A1-N2", "--group", "2"]);
    assert!(stdout(&o).contains("p1           rejected (trivial group-like)"));

    let o = nichols(&["dim", "cartan-A1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "3"));
    let o = nichols(&["dim", "cartan-B2-N5"]);
    assert!(stdout(&o).starts_with("infinite\nhilbert 1 2 4"));
    assert_eq!(nichols(&["dim", "cartan-A2-N5", "--lam", "r112=1"]).status.code(), Some(3));

    let o = nichols(&["diagram", "cartan-A2-N3"]);
    assert_eq!(stdout(&o), "vertex 1 : z\nvertex 2 : z\nedge 1 - 2 : z^2\ncomponent 1 : 1 2\n");

    let o = nichols(&["dump", "cartan-A1"]);
    assert_eq!(stdout(&o), "y1*y1*y1 -> 0\n");
}

#[test]
fn isom_on_datum_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "pair.pres",
        "presentation pair\nfield 6\ntheta 2\nmatrix [-1, -1; -1, -1]\n\
         rel m1 s0 y1^2\nrel m2 s0 y2^2\nrel lnk1_2 s0 ad(1,2) primitive deform\n",
    );
    let one = write(d, "one.datum", "# linked\npresentation pair.pres\nlam lnk1_2 = 1\n");
    let z = write(d, "z.datum", "presentation pair.pres\nlam lnk1_2 = z^2\n");
    let zero = write(d, "zero.datum", "presentation pair.pres\n");

    let v = json(&nichols(&["isom", &one, &one, "--json"]));
    assert_eq!(v["witness"], serde_json::json!({"sigma": "()", "s": ["1", "1"]}));

    let o = nichols(&["isom", &one, &z, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"]["s"][0], "z^4");

    let o = nichols(&["isom", &one, &zero]);
    assert_eq!(stdout(&o), "not isomorphic\n");

    let bad = write(d, "bad.datum", "presentation pair.pres\nlam m1 = 1\n");
    assert_eq!(nichols(&["isom", &one, &bad]).status.code(), Some(1));
}

#[test]
fn lifted_presentations_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = nichols(&["lift", "cartan-A1-N2", "--group", "4", "--lam", "p1=1"]);
    assert_eq!(o.status.code(), Some(0));
    let path = write(dir.path(), "taft.pres", &stdout(&o));
    let v = json(&nichols(&["verify", &path, "--lam", "p1=1", "--json"]));
    assert_eq!((v["entry"].as_str(), v["dim"].as_u64()), (Some("cartan-A1-N2-lift"), Some(8)));
    assert_eq!(nichols(&["lift", "cartan-A1-N2"]).status.code(), Some(1));
    assert_eq!(nichols(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_is_seeded() {
    let a = nichols(&["check", "standard-B2", "--seed", "11", "--json"]);
    let b = nichols(&["check", "standard-B2", "--seed", "11", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!((v["seed"].as_u64(), v["failures"].as_array().map(Vec::len)), (Some(11), Some(0)));
    assert_eq!(nichols(&["check", "cartan-A2-N3", "--degree-bound", "3"]).status.code(), Some(4));
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "standard-B2", "--lam", "all=1", "--json"];
    assert_eq!(nichols(&args).stdout, nichols(&args).stdout);

    let v = json(&nichols(&["verify", "standard-B2", "--json", "--timings"]));
    assert!(v["elapsed_ms"].is_u64());

    let one = nichols(&["batch", "--lam", "all=1", "--json"]);
    let two = nichols(&["batch", "--lam", "all=1", "--json", "--jobs", "2"]);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(one.status.code(), two.status.code());
    let v = json(&one);
    assert_eq!(v["errors"], serde_json::json!([]));
    let worst = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| match (r["status"].as_str().unwrap(), r["flat"].as_bool()) {
            ("zero", _) => 3,
            ("nonzero", Some(true)) => 0,
            _ => 4,
        })
        .max();
    assert_eq!(one.status.code(), worst);
    assert_eq!(nichols(&["batch", "--lam", "r112=1"]).status.code(), Some(1));
}
