//! The lemma registry end to end: every id runs and passes, unknown ids
//! are rejected, and results are deterministic for a fixed seed.

use hochcat::verify::{lemma_ids, run_all, run_lemma};

#[test]
fn unknown_lemma_rejected() {
    assert!(run_lemma("not-a-lemma", 1).is_err());
}

#[test]
fn all_lemmas_pass() {
    let results = run_all(12345).unwrap();
    assert_eq!(results.len(), lemma_ids().len());
    for r in &results {
        assert!(r.pass, "lemma {} failed: {:?}", r.id, r.details);
    }
}

#[test]
fn determinism_same_seed() {
    let a = run_all(7).unwrap();
    let b = run_all(7).unwrap();
    let ser_a = serde_json::to_string(&a).unwrap();
    let ser_b = serde_json::to_string(&b).unwrap();
    assert_eq!(ser_a, ser_b);
}
