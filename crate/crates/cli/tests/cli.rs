//! End-to-end runs of the command-line interface.

use std::path::{Path, PathBuf};

use mfsing_cli::{run, ProblemFile};
use serde_json::Value;
use tempfile::TempDir;

const RESIDUE: &str = r#"
[ring]
field = "Q"
vars = ["x"]
potential = "x^2"

[objects.E]
kind = "mf"
d0 = [["x"]]
d1 = [["x"]]

[objects.M]
kind = "koszul"
lo = -1
ranks = [1, 1]
d = [[["x"]]]
h = [[["x"]]]

[objects.K]
kind = "koszul"
lo = -1
ranks = [1, 1]
d = [[["x^2"]]]
h = [[["1"]]]

[objects.k]
kind = "module"
presentation = [["x"]]

[objects.twice_x]
kind = "hom"
source = "E"
target = "E"
parity = "even"
m0 = [["2*x"]]
m1 = [["2*x"]]

[objects.one]
kind = "hom"
source = "E"
target = "E"
parity = "even"
m0 = [["1"]]
m1 = [["1"]]

[params]
source = "E"
target = "E"
"#;

const POINT: &str = r#"
[ring]
vars = []

[objects.trivial]
kind = "koszul"
lo = 0
ranks = [1]
d = []
h = []

[objects.T2]
kind = "koszul"
lo = -3
ranks = [1, 1, 1, 1]
d = [[["0"]], [["1"]], [["0"]]]
h = [[["1"]], [["0"]], [["1"]]]
"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Fixture {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

fn exec(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(std::iter::once("mfsing").chain(args.iter().copied()));
    let report: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    assert_eq!(report["schema"], "mfsing-report/1");
    (code, report)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn valid_problem_validates() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["validate", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
}

#[test]
fn corrupted_differential_names_the_entry() {
    let fx = Fixture::new();
    let bad = RESIDUE.replacen("d1 = [[\"x\"]]", "d1 = [[\"x + 1\"]]", 1);
    let f = fx.file("bad.lg", &bad);
    let (code, r) = exec(&["validate", p(&f)]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "violation");
    let loc = r["location"].as_str().unwrap();
    assert!(loc.contains("`E`") && loc.contains("entry (0, 0)"), "{loc}");
}

#[test]
fn stable_endomorphisms_of_residue_representative() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["stable-hom", p(&f), "--source", "M", "--target", "M"]);
    assert_eq!(code, 0);
    assert_eq!(r["dims"], serde_json::json!({ "even": 1, "odd": 1 }));
    let (_, r) = exec(&["stable-hom", p(&f), "--source", "K", "--target", "K"]);
    assert_eq!(r["dims"], serde_json::json!({ "even": 0, "odd": 0 }));
}

#[test]
fn hom_between_factorizations() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["hom", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["dims"], serde_json::json!({ "even": 1, "odd": 1 }));
}

#[test]
fn null_homotopies() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["null-homotopy", p(&f), "--object", "twice_x"]);
    assert_eq!(code, 0);
    assert_eq!(r["witness_present"], true);
    let (_, r) = exec(&["null-homotopy", p(&f), "--object", "one"]);
    assert_eq!(r["witness_present"], false);
}

#[test]
fn milnor_numbers() {
    let (code, r) = exec(&["milnor", "--field", "Q", "--vars", "x,y", "--f", "x^3+y^2"]);
    assert_eq!(code, 0);
    assert_eq!(r["milnor"], 2);
    let (_, r) = exec(&["milnor", "--vars", "x,y", "--f", "x*y^2"]);
    assert_eq!(r["milnor"], "INFINITE");
    let (code, r) = exec(&["milnor", "--field", "F_3", "--vars", "x", "--f", "x^3"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "parse-error");
}

#[test]
fn thom_sebastiani_inline() {
    let (code, r) = exec(&["ts-check", "--vars", "x", "--f", "x^3", "--g-vars", "y", "--g", "y^4"]);
    assert_eq!(code, 0);
    assert_eq!(r["milnor"], serde_json::json!({ "f": 2, "g": 3, "sum": 6 }));
}

#[test]
fn stabilize_residue_field() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["stabilize", p(&f), "--source", "k", "--target", "E"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["factorization"]["rank0"], 1);
    assert_eq!(r["witness_present"], true);
}

#[test]
fn periodicity_cap_is_a_resource_failure() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    let (code, r) = exec(&["stabilize", p(&f), "--source", "k", "--cap", "0"]);
    assert_eq!(code, 3);
    assert_eq!(r["status"], "resource-cap");
}

#[test]
fn torsion_orders_and_windows() {
    let fx = Fixture::new();
    let f = fx.file("pt.lg", POINT);
    let (code, r) = exec(&["u-torsion", p(&f), "--object", "T2"]);
    assert_eq!(code, 0);
    assert_eq!(r["order"], 2);
    let (code, r) = exec(&["u-torsion", p(&f), "--object", "T2", "--window", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "indeterminate");
    assert_eq!(r["order"], "INDETERMINATE");
    let (_, r) = exec(&["u-torsion", p(&f), "--object", "trivial"]);
    assert_eq!(r["order"], "INDETERMINATE");
    assert_eq!(r["perfect"], false);
}

#[test]
fn point_report_over_prime_field() {
    let (code, r) = exec(&["point-report", "--field", "F_101"]);
    assert_eq!(code, 0);
    assert_eq!(r["dims"], serde_json::json!({ "even": 1, "odd": 0 }));
    assert_eq!(r["perfect"], false);
}

#[test]
fn malformed_inputs_exit_with_parse_errors() {
    let fx = Fixture::new();
    let cases = [
        ("syntax.lg", RESIDUE.replacen("x^2\"", "x^^2\"", 1)),
        ("unknown_var.lg", RESIDUE.replacen("d0 = [[\"x\"]]", "d0 = [[\"z\"]]", 1)),
        ("shape.lg", RESIDUE.replacen("d0 = [[\"x\"]]", "d0 = [[\"x\", \"1\"]]", 1)),
        ("toml.lg", "[ring\nvars = 3".to_string()),
        ("field.lg", RESIDUE.replacen("field = \"Q\"", "field = \"F_4\"", 1)),
        ("modp.lg", RESIDUE.replacen("field = \"Q\"", "field = \"F_3\"", 1).replacen("2*x", "x/3", 2)),
    ];
    for (name, text) in cases {
        let f = fx.file(name, &text);
        let (code, r) = exec(&["validate", p(&f)]);
        assert_eq!(code, 2, "{name}: {r}");
        assert_eq!(r["status"], "parse-error", "{name}");
    }
    let (code, _) = exec(&["validate", "/definitely/not/here.lg"]);
    assert_eq!(code, 2);
    let (code, _) = exec(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic() {
    let fx = Fixture::new();
    let f = fx.file("r.lg", RESIDUE);
    for args in [
        vec!["stable-hom", p(&f), "--source", "M", "--target", "M"],
        vec!["stabilize", p(&f), "--source", "k", "--target", "E"],
        vec!["validate", p(&f)],
        vec!["point-report"],
    ] {
        let a = run(std::iter::once("mfsing").chain(args.iter().copied()));
        let b = run(std::iter::once("mfsing").chain(args.iter().copied()));
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn problem_files_round_trip() {
    for text in [RESIDUE, POINT] {
        let parsed = ProblemFile::parse(text).unwrap();
        let again = ProblemFile::parse(&parsed.to_toml()).unwrap();
        assert_eq!(parsed, again);
    }
}

#[test]
fn bundled_problems_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "lg") {
            let (code, r) = exec(&["validate", p(&path)]);
            assert_eq!(code, 0, "{}: {r}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 3);
}
