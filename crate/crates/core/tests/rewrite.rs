mod common;

use domega::linalg::{GenMatrix, Generator};
use domega::rewrite::{basic_generators, main_lemma_step, normal_edge, normal_word, EdgeKind, Engine};
use domega::synth::syllables_to_word;
use domega::words::{co_evaluating_variant, random_word, to_basic_word, Word};
use domega::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word(s: &str) -> Word {
    s.parse().unwrap()
}

fn eval(s: &str) -> GenMatrix {
    word(s).evaluate(4).unwrap()
}

fn normal_form(e: &mut Engine, s: &str) -> String {
    e.normalize(&word(s), false).unwrap().normal_form.to_string()
}

#[test]
fn normal_edges() {
    let e = normal_edge(&eval("X[1,2]")).unwrap();
    assert_eq!(e.label.to_string(), "X[1,2]");
    assert!(e.target.is_identity());
    assert_eq!(e.kind, EdgeKind::Normal);
    let s = eval("H[1,2]");
    let e = normal_edge(&s).unwrap();
    assert_eq!(e.label[0], Generator::H(1, 2));
    assert!(e.target.level() < s.level());
    assert!(matches!(normal_edge(&GenMatrix::identity(4)), Err(Error::Precondition(_))));
    assert!(matches!(normal_edge(&GenMatrix::identity(5)), Err(Error::Dimension(_))));
}

#[test]
fn normal_words_invert_the_state() {
    let s = eval("H[1,2] w[2] H[2,3] X[1,4]");
    assert!(normal_word(&s).unwrap().evaluate(4).unwrap().mul(&s).unwrap().is_identity());
}

#[test]
fn lemma_at_a_hadamard_state() {
    let s = eval("H[1,2]");
    let step = main_lemma_step(&s, Generator::H(1, 2)).unwrap();
    assert!(step.n_prime.is_empty() && step.g_prime.is_empty());
    let step = main_lemma_step(&s, Generator::W(1)).unwrap();
    step.cert.check().unwrap();
    assert!(step.cert.max_rule() <= 20);
}

#[test]
fn lemma_preconditions() {
    let s = eval("H[1,2]");
    assert!(matches!(main_lemma_step(&s, Generator::H(1, 3)), Err(Error::InvalidGenerator(_))));
    assert!(matches!(main_lemma_step(&GenMatrix::identity(4), Generator::H(1, 2)), Err(Error::Precondition(_))));
}

/// `N⃗′ g ≈ G⃗′ N`, proved over rules 1–20, and the basic path of `G⃗′`
/// from the target of `N` stays below the level of `s`.
fn check_lemma(s: &GenMatrix, g: Generator) {
    let step = main_lemma_step(s, g).unwrap_or_else(|e| panic!("{g} at {}: {e}", s.level()));
    let n = normal_edge(s).unwrap();
    let lhs = syllables_to_word(&step.n_prime).concat(&Word::from(vec![g]));
    let rhs = step.g_prime.concat(&n.label);
    assert_eq!(step.cert.start, lhs);
    assert_eq!(step.cert.end, rhs);
    step.cert.check().unwrap();
    assert!(step.cert.max_rule() <= 20);
    assert_eq!(lhs.evaluate(4).unwrap().mul(s).unwrap(), rhs.evaluate(4).unwrap().mul(s).unwrap());
    let mut state = n.target.clone();
    for h in to_basic_word(&step.g_prime).iter().rev() {
        state.apply_generator(*h).unwrap();
        assert!(state.level() < s.level(), "{} at {}: path reaches {}", step.case, s.level(), state.level());
    }
    let mut r = s.clone();
    r.apply_generator(g).unwrap();
    let mut reached = r;
    for syl in &step.n_prime {
        syl.apply(&mut reached).unwrap();
    }
    assert_eq!(reached, state);
}

#[test]
fn lemma_base_cases() {
    // States one generator away from the identity.
    for g in basic_generators(4) {
        let s = Word::from(vec![g]).inverse().evaluate(4).unwrap();
        for h in basic_generators(4) {
            check_lemma(&s, h);
        }
    }
}

#[test]
fn lemma_contract_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let gens = basic_generators(4);
    for _ in 0..400 {
        let len = rng.gen_range(1..24);
        let s = random_word(&mut rng, 4, len).evaluate(4).unwrap();
        if s.is_identity() {
            continue;
        }
        check_lemma(&s, gens[rng.gen_range(0..gens.len())]);
    }
}

#[test]
fn normal_forms_of_small_words() {
    let mut e = Engine::new(4).unwrap();
    let n = e.normalize(&Word::new(), true).unwrap();
    assert!(n.normal_form.is_empty());
    assert!(n.cert.unwrap().is_empty());
    let n = e.normalize(&word("X[1,2] X[1,2]"), true).unwrap();
    assert!(n.normal_form.is_empty());
    let stats = n.cert.unwrap().check().unwrap();
    assert_eq!(stats.histogram.keys().copied().collect::<Vec<_>>(), vec![3]);
    assert_eq!(normal_form(&mut e, "X[1,2] X[2,3]"), normal_form(&mut e, "X[2,3] X[1,3]"));
    assert_eq!(normal_form(&mut e, "H[1,2] X[1,2]"), normal_form(&mut e, "w^4[2] H[1,2]"));
}

#[test]
fn equivalence() {
    let mut e = Engine::new(4).unwrap();
    let w = word("H[1,2] w[3] X[2,4]");
    let (same, cert) = e.decide_equiv(&w, &w, true).unwrap();
    assert!(same);
    cert.unwrap().check().unwrap();
    let (same, cert) = e.decide_equiv(&word("H[1,2]"), &word("X[1,2]"), true).unwrap();
    assert!(!same && cert.is_none());
    let (a, b) = (word("H[1,2] X[1,2]"), word("w^4[2] H[1,2]"));
    let (same, cert) = e.decide_equiv(&a, &b, true).unwrap();
    let cert = cert.unwrap();
    assert!(same);
    assert_eq!((&cert.start, &cert.end), (&a, &b));
    assert_eq!(cert.check().unwrap().histogram.get(&18), Some(&1));
}

#[test]
fn certificates_write_derivation_files() {
    let mut e = Engine::new(4).unwrap();
    let w = word("w[3] H[2,3] X[1,3]");
    let cert = e.normalize(&w, true).unwrap().cert.unwrap();
    let mut text = Vec::new();
    cert.write_text(&mut text).unwrap();
    let d = domega::words::Derivation::from_text(std::str::from_utf8(&text).unwrap(), None).unwrap();
    d.check().unwrap();
    assert_eq!((&d.start, &d.end), (&cert.start, &cert.end));
    assert_eq!(d.steps.len(), cert.len());
    assert_eq!(cert.to_derivation().unwrap(), d);
}

#[test]
fn engine_limits() {
    assert!(matches!(Engine::new(5), Err(Error::Dimension(_))));
    let mut e = Engine::new(4).unwrap();
    e.set_node_budget(1);
    let w = word("H[1,2] w[2] H[2,3] w[3] H[3,4] X[1,4] H[1,3]");
    assert!(matches!(e.normalize(&w, true), Err(Error::Budget(1))));
    assert!(e.normalize(&w, false).is_ok());
}

#[test]
fn normal_forms_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut e = Engine::new(4).unwrap();
    for _ in 0..1000 {
        let len = rng.gen_range(0..=40);
        let w = random_word(&mut rng, 4, len);
        let nf = e.normalize(&w, false).unwrap().normal_form;
        assert!(common::matches(&w.evaluate(4).unwrap(), &common::word(&nf, 4)), "`{w}`");
    }
}

#[test]
fn lower_dimensions() {
    for n in 2..=3 {
        let mut e = Engine::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..20 {
            let w = random_word(&mut rng, n, 8);
            let norm = e.normalize(&w, true).unwrap();
            assert_eq!(norm.normal_form.evaluate(n).unwrap(), w.evaluate(n).unwrap());
            assert!(norm.cert.unwrap().check().unwrap().histogram.keys().all(|&r| r <= 20));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn co_evaluating_words_share_a_normal_form(seed in any::<u64>(), len in 1usize..8, ops in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = random_word(&mut rng, 4, len);
        let w2 = co_evaluating_variant(&mut rng, &w1, 4, ops);
        let mut e = Engine::new(4).unwrap();
        let (same, cert) = e.decide_equiv(&w1, &w2, true).unwrap();
        prop_assert!(same);
        let stats = cert.unwrap().check().unwrap();
        prop_assert!(stats.histogram.keys().all(|&r| r <= 20));
    }

    #[test]
    fn normal_forms_depend_only_on_the_matrix(seed in any::<u64>(), len in 0usize..20) {
        let w = random_word(&mut ChaCha8Rng::seed_from_u64(seed), 4, len);
        let m = w.evaluate(4).unwrap();
        let mut e = Engine::new(4).unwrap();
        prop_assert_eq!(e.normalize(&w, false).unwrap().normal_form, normal_word(&m.adjoint()).unwrap());
    }
}
