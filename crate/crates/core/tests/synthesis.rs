mod common;

use domega::linalg::{clifford_t_gate, clifford_t_gates, GenMatrix, Generator, Level};
use domega::ring::CycInt;
use domega::ring::RingElem;
use domega::synth::{column_step, next_syllable, sync_pair, synthesize, synthesize_traced, unit_vector_form, Syllable};
use domega::words::{random_word, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eval(text: &str) -> GenMatrix {
    text.parse::<Word>().unwrap().evaluate(4).unwrap()
}

fn inv_sqrt2() -> RingElem {
    "(-1,0,1,0)/2".parse().unwrap()
}

fn level(j: usize, k: u32, m: usize) -> Level {
    Level { j, k, m }
}

#[test]
fn generator_application() {
    let mut m = GenMatrix::identity(4);
    m.apply_generator(Generator::X(1, 2)).unwrap();
    assert!(common::matches(&m, &common::generator(Generator::X(1, 2), 4)));
    let mut h = GenMatrix::identity(4);
    h.apply_generator(Generator::H(1, 2)).unwrap();
    h.apply_generator(Generator::H(1, 2)).unwrap();
    assert!(h.is_identity());
    let mut p = GenMatrix::identity(4);
    for _ in 0..8 {
        p.apply_generator(Generator::W(1)).unwrap();
    }
    assert!(p.is_identity());
}

#[test]
fn unitarity() {
    assert!(GenMatrix::identity(4).is_unitary());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(random_word(&mut rng, 4, 50).evaluate(4).unwrap().is_unitary());
    let mut two = GenMatrix::identity(4);
    two.set(0, 0, RingElem::from_int(2));
    assert!(!two.is_unitary());
}

#[test]
fn pivots_and_levels() {
    assert_eq!(GenMatrix::identity(4).pivot_column(), 0);
    let x = eval("X[1,2]");
    assert_eq!(x.pivot_column(), 2);
    assert_eq!(x.column(2), vec![RingElem::one(), RingElem::zero(), RingElem::zero(), RingElem::zero()]);
    assert_eq!(eval("H[3,4]").pivot_column(), 4);
    assert_eq!(GenMatrix::identity(4).level(), level(0, 0, 0));
    assert_eq!(x.level(), level(2, 0, 0));
    assert_eq!(eval("H[1,2]").level(), level(2, 2, 2));
}

#[test]
fn gate_library() {
    let gates = clifford_t_gates();
    let get = |n: &str| gates.iter().find(|g| g.0 == n).unwrap().1.clone();
    assert_eq!(get("CNOT"), eval("X[3,4]"));
    assert_eq!(get("T1").mul(&get("T1")).unwrap(), get("S1"));
    assert_eq!(get("T2").mul(&get("T2")).unwrap(), get("S2"));
    let mut p = GenMatrix::identity(4);
    for _ in 0..8 {
        p = p.mul(&get("OMEGA")).unwrap();
    }
    assert!(p.is_identity());
    assert!(gates.iter().all(|(_, m)| m.is_unitary()));
    // H ⊗ I acts on the first qubit, the high bit of the row index.
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!(common::close(common::from_elem(get("H1").get(0, 2)), (r, 0.0)));
    assert!(common::close(common::from_elem(get("H1").get(2, 2)), (-r, 0.0)));
    assert!(clifford_t_gate("toffoli").is_err());
}

#[test]
fn matrix_file_format() {
    let m: GenMatrix = "2\n (-1,0,1,0)/2 ; (-1,0,1,0)/2\n(-1,0,1,0)/2;(1,0,-1,0)/2\n".parse().unwrap();
    assert_eq!(m, Generator::H(1, 2).matrix(2).unwrap());
    assert_eq!(m.to_string().parse::<GenMatrix>().unwrap(), m);
    assert!("2\n1;0\n0\n".parse::<GenMatrix>().is_err());
    assert!(matches!("1\n1/3\n".parse::<GenMatrix>(), Err(domega::Error::NotInRing(_))));
}

#[test]
fn phase_synchronization() {
    let w = CycInt::omega_pow;
    assert_eq!(sync_pair(&CycInt::one(), &CycInt::one()).unwrap(), 0);
    assert_eq!(sync_pair(&CycInt::one(), &w(3)).unwrap(), 3);
    assert_eq!(sync_pair(&w(2), &w(1)).unwrap(), 3);
}

#[test]
fn column_steps() {
    let z = RingElem::zero;
    let s = column_step(&[inv_sqrt2(), inv_sqrt2(), z(), z()]).unwrap();
    assert!(matches!(s[..], [Syllable::HW { i: 1, l: 2, .. }]));
    let s = column_step(&[inv_sqrt2(), z(), inv_sqrt2(), z()]).unwrap();
    assert!(matches!(s[..], [Syllable::HW { i: 1, l: 3, .. }]));
    let half: RingElem = "1/2".parse().unwrap();
    let s = column_step(&[half.clone(), half.clone(), half.clone(), half]).unwrap();
    assert!(matches!(s[..], [Syllable::HW { i: 1, l: 2, .. }, Syllable::HW { i: 3, l: 4, .. }]));
}

#[test]
fn column_step_lowers_lde() {
    let v = vec![inv_sqrt2(), inv_sqrt2(), RingElem::zero(), RingElem::zero()];
    let mut m = GenMatrix::identity(4);
    for (r, e) in v.iter().enumerate() {
        m.set(r, 0, e.clone());
    }
    for s in column_step(&v).unwrap() {
        s.apply(&mut m).unwrap();
    }
    assert_eq!(m.column(1).iter().map(RingElem::lde).max(), Some(0));
}

#[test]
fn unit_vectors() {
    let z = RingElem::zero;
    assert_eq!(unit_vector_form(&[z(), z(), RingElem::one(), z()]).unwrap(), (3, 0));
    assert_eq!(unit_vector_form(&[RingElem::omega_pow(5), z(), z(), z()]).unwrap(), (1, 5));
    assert!(unit_vector_form(&[inv_sqrt2(), inv_sqrt2(), z(), z()]).is_err());
}

#[test]
fn first_syllables() {
    assert_eq!(next_syllable(&eval("X[1,2]")).unwrap(), Syllable::WX { m: 0, l: 1, j: 2 });
    assert_eq!(next_syllable(&eval("w^3[4]")).unwrap(), Syllable::W { m: 5, j: 4 });
    let h = eval("H[1,2]");
    let s = next_syllable(&h).unwrap();
    assert!(matches!(s, Syllable::HW { i: 1, l: 2, .. }));
    let mut after = h.clone();
    s.apply(&mut after).unwrap();
    assert!(after.level() < h.level());
    assert!(next_syllable(&GenMatrix::identity(4)).is_err());
}

#[test]
fn whole_synthesis() {
    assert!(synthesize(&GenMatrix::identity(4)).unwrap().is_empty());
    assert_eq!(synthesize(&eval("X[3,4]")).unwrap(), vec![Syllable::WX { m: 0, l: 3, j: 4 }]);
    let mut bad = GenMatrix::identity(4);
    bad.set(0, 0, RingElem::from_int(2));
    assert!(matches!(synthesize(&bad), Err(domega::Error::NotUnitary)));
}

#[test]
fn synthesis_beyond_four_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [2, 3, 5, 6, 8] {
        let m = random_word(&mut rng, n, 40).evaluate(n).unwrap();
        let syn = synthesize_traced(&m).unwrap();
        assert!(syn.inverse_word().evaluate(n).unwrap().mul(&m).unwrap().is_identity());
        assert_eq!(syn.word().evaluate(n).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_evaluate_like_the_oracle(seed in any::<u64>(), len in 0usize..24) {
        let w = random_word(&mut ChaCha8Rng::seed_from_u64(seed), 4, len);
        let m = w.evaluate(4).unwrap();
        prop_assert!(m.is_unitary());
        prop_assert!(common::matches(&m, &common::word(&w, 4)));
    }

    #[test]
    fn synthesis_round_trips(seed in any::<u64>(), len in 0usize..64) {
        let m = random_word(&mut ChaCha8Rng::seed_from_u64(seed), 4, len).evaluate(4).unwrap();
        let syn = synthesize_traced(&m).unwrap();
        prop_assert!(syn.inverse_word().evaluate(4).unwrap().mul(&m).unwrap().is_identity());
        prop_assert!(syn.levels.windows(2).all(|p| p[1] < p[0]));
        prop_assert!(common::matches(&m, &common::word(&syn.word(), 4)));
    }

    #[test]
    fn columns_of_lde_zero_are_unit_vectors(seed in any::<u64>(), len in 0usize..40) {
        let m = random_word(&mut ChaCha8Rng::seed_from_u64(seed), 4, len).evaluate(4).unwrap();
        for j in 1..=4 {
            let col = m.column(j);
            if col.iter().all(|e| e.lde() == 0) {
                prop_assert!(unit_vector_form(&col).is_ok());
            }
        }
    }
}
