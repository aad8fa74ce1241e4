use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sztwist")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_passes_on_sphere_and_cover() {
    let o = run(&["check", &data("sphere2.json"), "comultiplicativity", "--dim", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS comultiplicativity"));
    let o = run(&["check", &data("cover.json"), "psi-dgc"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["check", &data("trivial-bundle.json"), "psi-dgc"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["check", &data("sphere2.json"), "degeneracy"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_twist_fails_with_witness() {
    let o = run(&["check", &data("corrupted-twist.json"), "twisting", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"]["element"], "x0123");
    assert_ne!(v["witness"]["lhs"], v["witness"]["rhs"]);
    assert_eq!(run(&["check", &data("collapsed3.json"), "twisting"]).status.code(), Some(0));
}

#[test]
fn eval_matches_the_worked_examples() {
    let o = run(&["eval", &data("collapsed3.json"), "t(x0123)"]);
    let text = stdout(&o);
    assert!(text.starts_with("t(0123) = + σ(0123)σ(1223)σ(2333) - σ(0113)σ(1233)σ(2333)\n"), "{text}");
    let o = run(&["eval", &data("sphere2.json"), "Sz((0), sigma)"]);
    assert_eq!(stdout(&o), "σ(012)σ(122)\n+ sigma~\n");
    let o = run(&["eval", &data("sphere2.json"), "Delta[sigma]"]);
    assert_eq!(stdout(&o), "+ [] ⊗ [sigma] + [sigma] ⊗ []\n");
}

#[test]
fn eval_json_reparses() {
    let o = run(&["eval", &data("collapsed3.json"), "t(x0123)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v.as_array().unwrap();
    assert_eq!(terms.len(), 2);
    let coeffs: Vec<i64> = terms.iter().map(|t| t["coeff"].as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(coeffs.iter().map(|c| c.abs()).sum::<i64>(), 2);
}

#[test]
fn homology_tables() {
    let o = run(&["homology", &data("cover.json"), "--twisted", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ranks: Vec<u64> = v.as_array().unwrap().iter().map(|h| h["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 1, 0, 0, 0]);
    let o = run(&["homology", &data("cover.json"), "--total"]);
    assert!(stdout(&o).starts_with("H_0 = Z\nH_1 = Z\nH_2 = 0\n"));
    let o = run(&["homology", &data("sphere2.json")]);
    assert!(stdout(&o).starts_with("H_0 = Z\nH_1 = 0\nH_2 = Z\n"));
}

#[test]
fn spectral_sequence_tables() {
    let o = run(&["ss", &data("cover.json"), "--field", "fp:2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pages = v["pages"].as_array().unwrap();
    let last = &pages.last().unwrap()["entries"];
    assert_eq!(last, &serde_json::json!([[-1, 1, 1, 0], [0, 0, 1, 0]]));
    let o = run(&["ss", &data("trivial-bundle.json"), "--field", "q"]);
    let text = stdout(&o);
    assert!(text.contains("E^2 = E^inf"), "{text}");
    assert!(!text.contains("d^2"));
    let o = run(&["ss", &data("cover.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("field"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", &data("cover.json"), "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["check", &data("missing.json"), "twisting"]).status.code(), Some(2));
    assert_eq!(run(&["ss", &data("cover.json"), "--field", "fp:4"]).status.code(), Some(2));
    assert_eq!(run(&["list-basis", &data("cover.json"), "--dim", "0"]).status.code(), Some(2));
}

#[test]
fn list_basis_counts() {
    let o = run(&["list-basis", &data("collapsed3.json"), "--dim", "3"]);
    let counts: Vec<usize> = stdout(&o).lines().map(|l| l.split_whitespace().count() - 1).collect();
    assert_eq!(counts, [1, 6, 4, 1]);
}
