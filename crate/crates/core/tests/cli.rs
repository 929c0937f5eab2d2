use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use vagrowth::cli::{Definition, SetDef};
use vagrowth::lattice::IntVec;
use vagrowth::polyhedral::for_each_in_box;

const DINF: &str = r#"{
  "k": 1,
  "transversal": ["e", "t"],
  "action": {"t": [[-1]]},
  "sigma": {"t": {"t": "e"}}
}"#;

const EVENS: &str = r#"{"kind": "polyhedral", "dim": 1,
  "basics": [[{"type": "congruence", "u": [1], "a": 0, "b": 2}]]}"#;

const AT_STAR: &str = r#"{"arity": 1, "alphabet": ["a", "t"], "states": 2, "start": 0, "accept": [0],
  "edges": [{"from": 0, "to": 1, "label": "a"}, {"from": 1, "to": 0, "label": "t"}]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_vagrowth")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_and_growth_of_a_group_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "dinf.group", DINF);
    let (code, out, _) = run(&["validate", "--group", s(&g)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok group"));
    let (code, out, _) = run(&["growth", "--group", s(&g), "--radius", "15", "--fit"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("series\t(1 + 2z + z^2) / (1 - z)"));
    let table: Vec<u64> = lines.map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(table.len(), 16);
    assert_eq!(&table[..4], &[1, 3, 4, 4]);
}

#[test]
fn convert_preserves_membership() {
    let dir = TempDir::new().unwrap();
    let evens = write(&dir, "evens.poly", EVENS);
    let out_path = dir.path().join("evens.semi");
    let (code, _, err) = run(&["convert", "--set", s(&evens), "--to", "semilinear", "--out", s(&out_path)]);
    assert_eq!(code, 0, "{err}");
    let Definition::Set(SetDef::Semilinear(sl)) = Definition::parse(&fs::read_to_string(&out_path).unwrap()).unwrap()
    else {
        panic!("expected a semilinear file")
    };
    let back = dir.path().join("evens2.poly");
    assert_eq!(run(&["convert", "--set", s(&out_path), "--to", "polyhedral", "--out", s(&back)]).0, 0);
    let Definition::Set(SetDef::Polyhedral(p)) = Definition::parse(&fs::read_to_string(&back).unwrap()).unwrap()
    else {
        panic!("expected a polyhedral file")
    };
    for_each_in_box(&IntVec::from_i64s(&[-20]), &IntVec::from_i64s(&[20]), |z| {
        let even = z[0].clone() % 2 == 0.into();
        assert_eq!(sl.contains(z).unwrap(), even);
        assert_eq!(p.contains(z).unwrap(), even);
    });
}

#[test]
fn group_pipeline_through_files() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "dinf.group", DINF);
    let at = write(&dir, "at.nfsa", AT_STAR);
    let cwp = dir.path().join("image.cwp");
    let (code, _, err) = run(&["rational-to-cwp", "--group", s(&g), "--automaton", s(&at), "--out", s(&cwp)]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["enumerate", "--set", s(&cwp), "--group", s(&g), "--radius", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out, "([0], e)\n([1], t)\n");

    let (code, out, _) = run(&["nf-edt0l", "--group", s(&g), "--set", s(&cwp), "--enumerate", "6"]);
    assert_eq!(code, 0);
    let words: Vec<&str> = out.lines().rev().take(2).collect();
    assert!(words.contains(&"a t") && words.contains(&""), "{out}");

    let regular = dir.path().join("image.nfsa");
    assert_eq!(run(&["cwp-to-regular", "--group", s(&g), "--set", s(&cwp), "--out", s(&regular)]).0, 0);
    let (code, out, _) = run(&["enumerate", "--automaton", s(&regular), "--maxlen", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(~)\n(at)\n");
}

#[test]
fn dot_output_is_stable() {
    let dir = TempDir::new().unwrap();
    let at = write(&dir, "at.nfsa", AT_STAR);
    let (a, b) = (dir.path().join("a.dot"), dir.path().join("b.dot"));
    assert_eq!(run(&["emit-dot", "--automaton", s(&at), "--out", s(&a)]).0, 0);
    assert_eq!(run(&["emit-dot", "--automaton", s(&at), "--out", s(&b)]).0, 0);
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert!(String::from_utf8(x).unwrap().starts_with("digraph"));
}

#[test]
fn representatives_of_conjugacy_classes() {
    let (code, out, _) = run(&["reps", "--group", "dinf", "--kind", "conjugacy", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "ε\na\nt\na a\na t\na a a\n");
    let (code, out, _) = run(&["reps", "--group", "dinf", "--kind", "cosets", "--subgroup", "a", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "ε\nt\n");
}

#[test]
fn exit_statuses() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.poly", "{\"kind\": \"polyhedral\", \"dim\": ");
    assert_eq!(run(&["validate", "--set", s(&broken)]).0, 1);
    assert_eq!(run(&["no-such-verb"]).0, 1);
    // a set in Z^2 used with a rank-1 group
    let plane = write(&dir, "plane.cwp", r#"{"kind": "cwp", "cosets": {"e": {"dim": 2, "basics": [[]]}}}"#);
    let (code, _, err) = run(&["nf-edt0l", "--group", "dinf", "--set", s(&plane)]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("dimension mismatch"));
    let bad_group = write(&dir, "bad.group", r#"{"k": 1, "transversal": ["e", "t"], "action": {"t": [[2]]}, "sigma": {"t": {"t": "e"}}}"#);
    assert_eq!(run(&["validate", "--group", s(&bad_group)]).0, 2);
}
