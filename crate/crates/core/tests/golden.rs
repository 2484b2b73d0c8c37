//! Golden-file checks for the canonical pretty forms of the named equations.
//!
//! Regenerate with `GOLDEN_WRITE=1 cargo test -p sl2trace --test golden` after
//! an intentional change, and review the diff.

use sl2trace::geometry::{discriminant_f3, f3_equation, genus2_relations};
use std::path::PathBuf;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check(name: &str, actual: String) {
    let path = golden_path(name);
    if std::env::var_os("GOLDEN_WRITE").is_some() {
        std::fs::write(&path, actual + "\n").expect("write golden file");
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    assert_eq!(actual, expected.trim_end(), "golden mismatch for {name}");
}

#[test]
fn f3_equation_matches_golden() {
    check("f3_equation.txt", f3_equation().to_string());
}

#[test]
fn discriminant_matches_golden() {
    check("discriminant_f3.txt", discriminant_f3().to_string());
}

#[test]
fn genus2_relations_match_golden() {
    let rels = genus2_relations();
    for (i, r) in rels.iter().enumerate() {
        check(&format!("genus2_r{}.txt", i + 1), r.to_string());
    }
}
