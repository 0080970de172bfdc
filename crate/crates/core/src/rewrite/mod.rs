//! Equational rewriting of words into normal forms, with certificates.

mod engine;
mod lemma;
mod perm;
mod tactics;

pub use engine::{
    normal_edge, normal_word, CertStats, Certificate, EdgeKind, Engine, Normalization, StateEdge, DEFAULT_NODE_BUDGET,
};
pub use lemma::{forbidden_residue_check, main_lemma_step, MainLemmaStep, StepCase};

use crate::linalg::Generator;

/// The basic generators of dimension `n`: `ω[1]`, `H[1,2]` and the
/// adjacent swaps.
pub fn basic_generators(n: usize) -> Vec<Generator> {
    let mut v = vec![Generator::W(1)];
    if n >= 2 {
        v.push(Generator::H(1, 2));
    }
    v.extend((1..n).map(|j| Generator::X(j, j + 1)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::random_word;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    #[test]
    fn normalize_random_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut engine = Engine::new(4).unwrap();
        for _ in 0..40 {
            let len = rng.gen_range(1..=14);
            let w = random_word(&mut rng, 4, len);
            let norm = engine.normalize(&w, true).unwrap_or_else(|e| panic!("`{w}`: {e}"));
            assert_eq!(norm.normal_form.evaluate(4).unwrap(), w.evaluate(4).unwrap());
            let cert = norm.cert.unwrap();
            assert_eq!(cert.start, w);
            assert_eq!(cert.end, norm.normal_form);
            let stats = cert.check().unwrap();
            assert!(stats.histogram.keys().all(|&r| r <= 20));
        }
    }

    #[test]
    fn survey_main_lemma() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let gens = basic_generators(4);
        let mut cases: BTreeMap<String, usize> = BTreeMap::new();
        let mut errs = Vec::new();
        for _ in 0..1500 {
            let len = rng.gen_range(1..30);
            let s = random_word(&mut rng, 4, len).evaluate(4).unwrap();
            if s.is_identity() {
                continue;
            }
            let g = gens[rng.gen_range(0..gens.len())];
            match main_lemma_step(&s, g) {
                Ok(st) => {
                    st.cert.check().unwrap();
                    assert!(st.cert.max_rule() <= 20);
                    *cases.entry(st.case.to_string()).or_default() += 1;
                }
                Err(e) => errs.push(format!("{g} at {}: {e}", s.level())),
            }
        }
        assert!(errs.is_empty(), "{errs:?}");
        for case in ["same-target", "retrograde", "merge", "monomial", "hadamard", "four-index (rule 31)"] {
            assert!(cases.contains_key(case), "{case} never occurred: {cases:?}");
        }
    }
}
