use std::process::Command;

use cubres::cli::{ChiDoc, DecomposeDoc, ResidueDoc, SelftestDoc, SlopesDoc};
use cubres::tables::{verify_table, ResidueTable, TableDocument};

const BIG_P: &str = "(3^19+5^82)/4";

fn cubres(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubres"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn decompose() {
    let (code, out, _) = cubres(&["decompose", "63601"]);
    assert_eq!(code, 0);
    assert!(out.contains("L = 19") && out.contains("M = 97"));
    let (code, _, err) = cubres(&["decompose", "11"]);
    assert_eq!(code, 2);
    assert!(err.contains("not congruent to 1 mod 3"));
}

#[test]
fn decompose_big_prime_structured() {
    let (code, out, _) = cubres(&["--format", "structured", "decompose", BIG_P]);
    assert_eq!(code, 0);
    let doc: DecomposeDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.l, "45474735088646411895751953125");
    assert_eq!(doc.m, "6561");
    assert_eq!(doc.p.len(), 57);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(value["p"].is_string() && value["pi"]["a"].is_string());
}

#[test]
fn chi() {
    assert_eq!(cubres(&["chi", "63601", "490"]).1, "1\n");
    assert_eq!(cubres(&["chi", "--method", "rules", "63601", "2"]).1, "w2\n");
    assert_eq!(cubres(&["chi", BIG_P, "1982"]).1, "w2\n");
    let (code, out, _) = cubres(&["chi", BIG_P, "1982", "--format", "structured"]);
    assert_eq!(code, 0);
    let doc: ChiDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.value, "w2");
    let rules: Vec<(&str, &str)> = doc.factors.iter().map(|f| (f.q.as_str(), f.value.as_str())).collect();
    assert_eq!(rules, [("2", "w"), ("991", "w")]);
}

#[test]
fn chi_unfactored() {
    let (code, _, err) = cubres(&["chi", "--factor-bound", "10", "63601", "(2^61-1)*(2^89-1)"]);
    assert_eq!(code, 3);
    assert!(err.contains("1427247692705959880439315947500961989719490561"), "{err}");
}

#[test]
fn is_cr() {
    let (code, out, _) = cubres(&["is-cr", "490", "63601"]);
    assert_eq!((code, out.as_str()), (0, "yes\n"));
    assert_eq!(cubres(&["is-cr", "8", "9"]).0, 0);
    assert_eq!(cubres(&["is-cr", "2", "7"]).0, 1);
    assert_eq!(cubres(&["is-cr", "3", "9"]).0, 4);
    let (code, out, _) = cubres(&["--format", "structured", "is-cr", "2", "7"]);
    assert_eq!(code, 1);
    let doc: ResidueDoc = serde_json::from_str(&out).unwrap();
    assert!(!doc.residue);
}

#[test]
fn table() {
    let (code, out, _) = cubres(&["table", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains('|')).count(), 5);
    let (code, out, _) = cubres(&["table", "11", "--format", "structured"]);
    assert_eq!(code, 0);
    let doc: TableDocument = serde_json::from_str(&out).unwrap();
    let mut t = ResidueTable {
        q: 11,
        modulus: 11,
        search_bound: doc.search_bound.parse().unwrap(),
        entries: doc.cells().unwrap(),
        witness: vec![vec![None; 11]; 11],
    };
    assert!(verify_table(&t).is_clean());
    assert_eq!(serde_json::to_string_pretty(&t.to_document()).unwrap() + "\n", out);
    t.entries[1][1] = t.entries[1][1].conj();
    assert!(!verify_table(&t).is_clean());
}

#[test]
fn slopes() {
    let (code, out, _) = cubres(&["slopes", "11", "--gamma", "1,0", "--format", "structured"]);
    assert_eq!(code, 0);
    let doc: SlopesDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.values.len(), 4);
    assert!(doc.values.iter().all(|v| v.multiplicity == 3));
    assert_eq!(doc.map.len(), 12);
    assert_eq!(cubres(&["slopes", "7", "--gamma", "2,3"]).0, 2);
}

#[test]
fn selftest_quick() {
    let (code, out, _) = cubres(&["selftest", "quick", "--format", "structured"]);
    let doc: SelftestDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(code, 0, "{out}");
    assert!(doc.passed);
    assert_eq!(doc.criteria.len(), 12);
}
