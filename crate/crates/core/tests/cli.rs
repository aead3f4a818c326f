use std::path::PathBuf;

use qba::cli::{
    run, CommandResult, ComposeJson, CongruencesJson, DecompositionJson, ExtendJson, GenerateJson, InfoJson, IsoJson,
    QuotientJson, SplitJson, ValidateJson, VerdictJson,
};
use qba::enumeration::EnumerationReport;
use qba::quotients::are_isomorphic;
use qba::{fixtures, FiniteAlgebra};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(format!("{name}.alg"));
    p.to_string_lossy().into_owned()
}

fn qba(args: &[&str]) -> CommandResult {
    run(std::iter::once("qba").chain(args.iter().copied()))
}

/// Parses `--json` output as `T` and checks that re-serialising gives the
/// same bytes.
fn round_trip<T: Serialize + DeserializeOwned>(out: &CommandResult) -> T {
    let value: T = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, out.stdout);
    value
}

#[test]
fn decide_example_is_invalid_with_witness() {
    let out = qba(&["decide", "--variety", "qb", r"x \/ x = x"]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.starts_with("INVALID in 4: x=a"), "{}", out.stdout);

    let out = qba(&["--json", "decide", "--variety", "qb", r"x \/ x = x"]);
    let v: VerdictJson = round_trip(&out);
    assert!(!v.valid);
    let w = v.witness.unwrap();
    assert_eq!(w.algebra, "4");
    assert_eq!(w.assignment.get("x").map(String::as_str), Some("a"));
    assert_eq!((w.lhs_value.as_str(), w.rhs_value.as_str()), ("0", "a"));
}

#[test]
fn decide_valid_equation_exits_zero() {
    let out = qba(&["decide", r"x \/ y = y \/ x"]);
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.stdout, "VALID\n");
    let out = qba(&["decide", "--variety", "b", r"x \/ x = x"]);
    assert_eq!(out.exit_code, 0);
}

#[test]
fn validate_six() {
    let out = qba(&["validate", &fixture("6")]);
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.stdout, "VALID QB-algebra (non-flat, 6 elements)\n");
    let v: ValidateJson = round_trip(&qba(&["validate", "--json", &fixture("6")]));
    assert!(v.valid && !v.flat && v.size == 6 && v.violations.is_empty());
}

#[test]
fn validate_reports_broken_tables_with_exit_one() {
    let broken = fixtures::four().with_join_entry(1, 2, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.alg");
    std::fs::write(&path, broken.to_file_string()).unwrap();
    let out = qba(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.starts_with("INVALID"));
    let v: ValidateJson = round_trip(&qba(&["--json", "validate", path.to_str().unwrap()]));
    assert!(!v.valid && !v.violations.is_empty());
}

#[test]
fn extend_example() {
    let out = qba(&["extend", &fixture("6"), "--sub", "0,a,b,1", "--cong", "0,a,b,1"]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "0,a,b,1;e;f\n");
    let e: ExtendJson = round_trip(&qba(&["extend", &fixture("6"), "--sub", "0,a,b,1", "--cong", "0,a,b,1", "--json"]));
    assert_eq!(e.congruence, "0,a,b,1;e;f");
    assert!(!e.via_fallback);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let out = qba(&[]);
    assert_eq!(out.exit_code, 2);
    let out = qba(&["frobnicate"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("Usage"));
    let out = qba(&["extend", &fixture("6")]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("--sub"));
    let out = qba(&["decide", "--variety", "lattice", "x = x"]);
    assert_eq!(out.exit_code, 2);
    let out = qba(&["decide", r"x \/ = y"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("equation"));
    let out = qba(&["validate", "/nonexistent/file.alg"]);
    assert_eq!(out.exit_code, 2);
    let out = qba(&["split", &fixture("4"), "--cong", "0,q"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("unknown element name `q`"));
    let out = qba(&["extend", &fixture("6"), "--sub", "0,a,1", "--cong", "0"]);
    assert_eq!(out.exit_code, 2, "not a subalgebra");
    let out = qba(&["decompose", &fixture("4"), "--cong", "0,a"]);
    assert_eq!(out.exit_code, 2, "not a congruence");
}

#[test]
fn help_exits_zero() {
    let out = qba(&["--help"]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("enumerate"));
}

#[test]
fn info_flags_the_trivial_algebra() {
    let trivial = FiniteAlgebra::new(vec!["0".into()], vec![vec![0]], vec![vec![0]], vec![0], 0, 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.alg");
    std::fs::write(&path, trivial.to_file_string()).unwrap();
    let out = qba(&["info", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("trivial:       yes"));
    let info: InfoJson = round_trip(&qba(&["info", "--json", path.to_str().unwrap()]));
    assert!(info.trivial && info.valid);

    let info: InfoJson = round_trip(&qba(&["info", "--json", &fixture("4")]));
    assert!(!info.trivial && !info.flat);
    assert_eq!(info.irreducible, Some(true));
    assert_eq!(info.regular, ["0", "1"]);
}

#[test]
fn quotient_json_reloads_as_an_algebra() {
    let dir = tempfile::tempdir().unwrap();
    for (rel, expected) in [("chi", fixtures::two()), ("tau", fixtures::f3())] {
        let out = qba(&["quotient", &fixture("4"), "--rel", rel, "--json"]);
        assert_eq!(out.exit_code, 0);
        let q: QuotientJson = round_trip(&out);
        assert!(are_isomorphic(&q.algebra, &expected), "{rel}");
        let path = dir.path().join(format!("{rel}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        assert_eq!(qba(&["validate", path.to_str().unwrap()]).exit_code, 0);
        let text = qba(&["quotient", &fixture("4"), "--rel", rel]);
        let alg = qba::load_algebra(&text.stdout).unwrap();
        assert_eq!(alg, q.algebra);
    }
    let q: QuotientJson = round_trip(&qba(&["quotient", &fixture("6"), "--cong", "0,a,b,1;e;f", "--json"]));
    assert_eq!(q.algebra.size(), 3);
}

#[test]
fn product_and_iso() {
    let out = qba(&["product", &fixture("2"), &fixture("F3"), "--json"]);
    let p: FiniteAlgebra = round_trip(&out);
    assert_eq!(p.size(), 6);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let path = path.to_str().unwrap();

    let iso: IsoJson = round_trip(&qba(&["iso", path, &fixture("A"), "--json"]));
    assert_eq!(iso.isomorphic, are_isomorphic(&p, &fixtures::a()));

    let out = qba(&["iso", &fixture("4"), &fixture("4bar")]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.starts_with("ISOMORPHIC"));
    let out = qba(&["iso", &fixture("4"), &fixture("B4")]);
    assert_eq!(out.exit_code, 1);
    let iso: IsoJson = round_trip(&qba(&["iso", &fixture("4"), &fixture("B4"), "--json"]));
    assert!(!iso.isomorphic && iso.map.is_none());
}

#[test]
fn check_uses_the_file_stem_as_algebra_name() {
    let out = qba(&["check", &fixture("F3"), r"x /\ y = 0"]);
    assert_eq!(out.exit_code, 0);
    let out = qba(&["check", &fixture("F3"), "x'' = x"]);
    assert_eq!(out.exit_code, 0);
    let out = qba(&["check", &fixture("F3"), r"x \/ x = x"]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.starts_with("INVALID in F3:"));
    let v: VerdictJson = round_trip(&qba(&["check", "--json", &fixture("2"), r"x \/ x' = 1"]));
    assert!(v.valid && v.algebra == "2");
}

#[test]
fn congruences_and_generate() {
    let c: CongruencesJson = round_trip(&qba(&["congruences", &fixture("4"), "--json"]));
    assert_eq!(c.count, c.congruences.len());
    assert!(c.congruences.contains(&"0,1;a;b".to_string()));
    assert!(c.congruences.contains(&"0;a;b;1".to_string()));
    for theta in &c.congruences {
        let split = qba(&["split", &fixture("4"), "--cong", theta]);
        assert_eq!(split.exit_code, 0, "{theta}: {}", split.stdout);
    }

    let g: GenerateJson = round_trip(&qba(&["generate", &fixture("6"), "a,b", "--json"]));
    assert_eq!(g.seed, [("a".to_string(), "b".to_string())]);
    let out = qba(&["generate", &fixture("6"), "a,b"]);
    assert_eq!(out.stdout, format!("{}\n", g.congruence));
    // the closure is itself a congruence, so generating from it is idempotent
    let again: GenerateJson = round_trip(&qba(&["generate", &fixture("6"), &g.congruence, "--json"]));
    assert_eq!(again.congruence, g.congruence);
}

#[test]
fn split_nabla_on_four() {
    let s: SplitJson = round_trip(&qba(&["split", &fixture("4"), "--cong", "0,a,b,1", "--json"]));
    assert_eq!(s.boolean_factor.len(), 2);
    assert_eq!(s.theta_chi.split(';').count(), 1);
    assert_eq!(s.flat_factor.len(), 3);
    assert_eq!(s.theta_tau.split(';').count(), 1);
}

#[test]
fn decompose_then_compose_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (name, theta) in [("4", "0,1;a;b"), ("6", "0,a,b,1;e;f"), ("6", "0,e;a;f,1;b"), ("A", "0;a;e;f;b;1")] {
        let out = qba(&["decompose", &fixture(name), "--cong", theta, "--json"]);
        assert_eq!(out.exit_code, 0, "{name} {theta}: {}", out.stderr);
        let d: DecompositionJson = round_trip(&out);
        let path = dir.path().join("d.json");
        std::fs::write(&path, &out.stdout).unwrap();
        let c: ComposeJson = round_trip(&qba(&["compose", &fixture(name), "--from", path.to_str().unwrap(), "--json"]));
        assert_eq!(c.congruence, d.congruence);
    }
}

#[test]
fn compose_rejects_a_broken_decomposition() {
    let out = qba(&["decompose", &fixture("4"), "--cong", "0,1;a;b", "--json"]);
    let mut d: DecompositionJson = serde_json::from_str(&out.stdout).unwrap();
    // a mixed pair relating a regular element to an irregular one is not allowed here
    d.cross = vec![("0".into(), "a".into()), ("a".into(), "0".into())];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, serde_json::to_string(&d).unwrap()).unwrap();
    let out = qba(&["compose", &fixture("4"), "--from", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 1, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.starts_with("REJECTED"));
}

#[test]
fn compose_flat_from_irregular_partition() {
    let c: ComposeJson = round_trip(&qba(&["compose", &fixture("F5"), "--cong", "g,h;i,j", "--json"]));
    assert_eq!(c.congruence, "0;g,h;i,j");
    assert_eq!(qba(&["compose", &fixture("4"), "--cong", "a"]).exit_code, 2);
}

#[test]
fn enumerate_reports_and_emits() {
    let out = qba(&["enumerate", "--size", "5", "--flat", "--up-to-iso", "--json"]);
    assert_eq!(out.exit_code, 0);
    let r: EnumerationReport = round_trip(&out);
    assert_eq!(r.iso_classes.len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let out = qba(&["enumerate", "--size", "3", "--up-to-iso", "--emit", dir.path().to_str().unwrap()]);
    assert_eq!(out.exit_code, 0, "{}", out.stdout);
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty());
    for f in &files {
        assert_eq!(qba(&["validate", f.to_str().unwrap()]).exit_code, 0);
    }

    // size 4 contains the irreducible algebra 4, which breaks the shape claim
    let out = qba(&["enumerate", "--size", "4", "--up-to-iso"]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.contains("VIOLATION"));

    assert_eq!(qba(&["enumerate", "--size", "7"]).exit_code, 2);
}
