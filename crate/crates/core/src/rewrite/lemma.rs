//! One commutation step of a basic generator past a normal edge.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{GenMatrix, Generator, Level};
use crate::ring::{omega_exponent_mod_delta3, RingElem};
use crate::synth::{next_syllable_unchecked, syllables_to_word, Syllable};
use crate::words::{expand_steps, rule, Derivation, Deriver, Direction, RuleInstance, Subst, Word};

use super::tactics::{canonical_monomial, prove, push_normal_form, TACTIC_RULES};

/// Which shape of the case analysis a step fell into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepCase {
    /// `⟦g⟧ s` is the target of the normal edge at `s`.
    SameTarget,
    /// The normal edge at `⟦g⟧ s` leads back to `s`.
    Retrograde,
    /// The normal edges at `s` and at `⟦g⟧ s` meet.
    Merge,
    /// The two targets differ by a monomial matrix.
    Monomial,
    /// The two targets differ by a single `H`.
    Hadamard,
    /// The four-odd-entry case around `X[2,3]`, closed by rule 31 or 32.
    FourIndex(u8),
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepCase::SameTarget => f.write_str("same-target"),
            StepCase::Retrograde => f.write_str("retrograde"),
            StepCase::Merge => f.write_str("merge"),
            StepCase::Monomial => f.write_str("monomial"),
            StepCase::Hadamard => f.write_str("hadamard"),
            StepCase::FourIndex(r) => write!(f, "four-index (rule {r})"),
        }
    }
}

/// The result of [`main_lemma_step`]: `N⃗′ · g ≈ G⃗′ · N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainLemmaStep {
    /// Normal syllables at `⟦g⟧ s`, in application order.
    pub n_prime: Vec<Syllable>,
    /// The word `G⃗′`, leading from the target of the normal edge at `s` to
    /// the state reached by `n_prime`.
    pub g_prime: Word,
    /// A derivation over rules 1–20 from `N⃗′ · g` to `G⃗′ · N`.
    pub cert: Derivation,
    pub case: StepCase,
}

fn apply_word(m: &GenMatrix, w: &Word) -> Result<GenMatrix> {
    let mut out = m.clone();
    for g in w.iter().rev() {
        out.apply_generator(*g)?;
    }
    Ok(out)
}

fn apply_syllable(m: &GenMatrix, s: Syllable) -> Result<GenMatrix> {
    let mut out = m.clone();
    s.apply(&mut out)?;
    Ok(out)
}

/// Whether every state visited by the basic word `w` starting at `t`
/// (before each of its generators) has level below `bound`.
pub(crate) fn path_below(t: &GenMatrix, w: &Word, bound: Level) -> Result<bool> {
    let mut cur = t.clone();
    for g in w.iter().rev() {
        if cur.level() >= bound {
            return Ok(false);
        }
        cur.apply_generator(*g)?;
    }
    Ok(true)
}

fn is_generator_matrix(d: &GenMatrix) -> Option<Generator> {
    let n = d.dim();
    for c in 1..=n {
        for k in c + 1..=n {
            let g = Generator::H(c, k);
            if g.matrix(n).ok().as_ref() == Some(d) {
                return Some(g);
            }
        }
    }
    None
}

fn phase_word(exps: [i64; 4]) -> Word {
    let mut w = Word::new();
    for (i, e) in exps.iter().enumerate() {
        for _ in 0..e.rem_euclid(8) {
            w.push(Generator::W(i + 1));
        }
    }
    w
}

/// The two right-hand sides that realise `H[3,4] H[1,2] X[2,3] H[1,2] H[3,4]`.
fn four_index_middles() -> Result<[(u8, Word); 2]> {
    let mid = |id: u8| -> Result<(u8, Word)> {
        let (_, rhs) = rule(id)?.instantiate(&Subst::default(), Direction::LR)?;
        Ok((id, rhs))
    };
    Ok([mid(31)?, mid(32)?])
}

/// `G⃗′` for the four-odd-entry configuration: phase normalisation on both
/// sides, `H[3,4]`, the right side of rule 31 or 32, `H[3,4]`.
fn four_index_path(s: &GenMatrix, t: &GenMatrix, d: &GenMatrix, bound: Level) -> Result<(u8, Word, usize)> {
    let col = s.column(4);
    let k = col.iter().map(RingElem::lde).max().unwrap_or(0);
    let u: Vec<_> = col.iter().map(|e| e.scaled_numerator(k).expect("k is the maximum lde")).collect();
    let e: Vec<i64> = u.iter().map(|x| omega_exponent_mod_delta3(x).map(i64::from)).collect::<Result<_>>()?;
    let (h, l, tau) = (e[1], e[2], e[3]);
    let h34 = Word::from(vec![Generator::H(3, 4)]);
    // The phase on rows 1 and 2 is fixed only modulo 4 by the residues.
    for flip in [0, 4] {
        let q_s = phase_word([flip - h, flip - h, -l, -tau]);
        for (id, mid) in four_index_middles()? {
            let right = h34.concat(&mid).concat(&h34).concat(&q_s);
            let left = d.mul(&right.evaluate(4)?.adjoint())?;
            if !left.is_monomial() || (1..=4).any(|c| left.get(c - 1, c - 1).is_zero()) {
                continue;
            }
            let q_r_inv = canonical_monomial(&left)?;
            let g = q_r_inv.concat(&right);
            if path_below(t, &super::engine::basic_form(&g)?.0, bound)? {
                return Ok((id, g, q_r_inv.len() + 1));
            }
        }
    }
    Err(Error::internal(format!("four-index case without a level-decreasing path at level {bound}")))
}

/// The `k`-residues of a four-dimensional unit column are not a
/// permutation of `{0, 1, δ, δ+1}` modulo `δ²`.  Always true for genuine
/// unit vectors; used as a guard before the four-index case.
pub fn forbidden_residue_check(v: &[RingElem]) -> bool {
    if v.len() != 4 {
        return true;
    }
    let k = v.iter().map(RingElem::lde).max().unwrap_or(0);
    let mut seen = Vec::new();
    for e in v {
        match e.scaled_numerator(k).map(|x| crate::ring::residue(&x, 2)) {
            Some(Ok(r)) => seen.push(r.rep.to_string()),
            _ => return true,
        }
    }
    let mut want: Vec<String> = crate::ring::residue_representatives(2).iter().map(|c| c.to_string()).collect();
    seen.sort();
    want.sort();
    seen != want
}

fn check_state(s: &GenMatrix, g: Generator) -> Result<()> {
    if s.dim() > 4 {
        return Err(Error::Dimension(format!("the rewrite engine works for n <= 4, got {}", s.dim())));
    }
    if !g.is_basic() {
        return Err(Error::InvalidGenerator(format!("{g} is not basic")));
    }
    if g.extent() > s.dim() {
        return Err(Error::Dimension(format!("{g} does not act in dimension {}", s.dim())));
    }
    if s.is_identity() {
        return Err(Error::Precondition("the identity state has no normal edge".into()));
    }
    Ok(())
}

/// One step of the Main Lemma at state `s` for the basic generator `g`.
///
/// With `N` the normal edge at `s` and `r = ⟦g⟧ s`, returns a prefix `N⃗′`
/// of the normal sequence at `r` and a word `G⃗′` with `N⃗′ g ≈ G⃗′ N`,
/// such that every state on the basic form of `G⃗′` (from the target of
/// `N`) has level below `level(s)`.
pub fn main_lemma_step(s: &GenMatrix, g: Generator) -> Result<MainLemmaStep> {
    check_state(s, g)?;
    if !s.is_unitary() {
        return Err(Error::NotUnitary);
    }
    step_unchecked(s, g)
}

pub(crate) fn step_unchecked(s: &GenMatrix, g: Generator) -> Result<MainLemmaStep> {
    let (step, _) = block_step(s, &Word::from(vec![g]))?;
    let mut t = s.clone();
    next_syllable_unchecked(s)?.apply(&mut t)?;
    let bound = s.level();
    if !path_below(&t, &super::engine::basic_form(&step.g_prime)?.0, bound)? {
        return Err(Error::internal(format!("G' path does not stay below level {bound} ({})", step.case)));
    }
    Ok(step)
}

/// `G⃗′` cut into blocks (in application order), with the steps rewriting
/// `G⃗′` into their concatenation.
pub(crate) struct BlockSplit {
    pub pieces: Vec<Word>,
    pub steps: Vec<RuleInstance>,
}

/// The Main Lemma step for a block `b` (a monomial word or a single `H`)
/// in place of a basic generator, together with `G⃗′` cut into blocks.
pub(crate) fn block_step(s: &GenMatrix, gw: &Word) -> Result<(MainLemmaStep, BlockSplit)> {
    let n = s.dim();
    let nsyl = next_syllable_unchecked(s)?;
    let nw = nsyl.to_word();
    let t = apply_syllable(s, nsyl)?;
    let r = apply_word(s, gw)?;
    let bound = s.level();

    let (n_prime, g_prime, steps, case) = if r == t {
        let d = prove(gw, &nw, n)?;
        (vec![], Word::new(), d, StepCase::SameTarget)
    } else {
        if r.is_identity() {
            return Err(Error::internal("no case matched: r is the identity but differs from t"));
        }
        let rsyl = next_syllable_unchecked(&r)?;
        let r1 = apply_syllable(&r, rsyl)?;
        let lhs = rsyl.to_word().concat(gw);
        if r1 == *s {
            let d = prove(&lhs, &Word::new(), n)?.embed(&nw, &Word::new());
            (vec![rsyl, nsyl], Word::new(), d, StepCase::Retrograde)
        } else if r1 == t {
            (vec![rsyl], Word::new(), prove(&lhs, &nw, n)?, StepCase::Merge)
        } else {
            let d = r1.mul(&t.adjoint())?;
            if d.is_monomial() {
                let gp = canonical_monomial(&d)?;
                let cert = prove(&lhs, &gp.concat(&nw), n)?;
                (vec![rsyl], gp, cert, StepCase::Monomial)
            } else if let Some(h) = is_generator_matrix(&d) {
                let gp = Word::from(vec![h]);
                let cert = prove(&lhs, &gp.concat(&nw), n)?;
                (vec![rsyl], gp, cert, StepCase::Hadamard)
            } else if n == 4 {
                if !forbidden_residue_check(&s.column(4))
                    || (t.pivot_column() > 0 && !forbidden_residue_check(&t.column(t.pivot_column())))
                {
                    return Err(Error::internal("a forbidden residue pattern occurred"));
                }
                let (id, gp, mid_at) = four_index_path(s, &t, &d, bound)?;
                let cert = prove_four_index(&lhs, &gp.concat(&nw), id, mid_at, n)?;
                (vec![rsyl], gp, cert, StepCase::FourIndex(id))
            } else {
                return Err(Error::internal(format!("no case matched at level {bound} for `{gw}`")));
            }
        }
    };

    let start = syllables_to_word(&n_prime).concat(gw);
    let end = g_prime.concat(&nw);
    if steps.start != start || steps.end != end {
        return Err(Error::internal("main lemma certificate has the wrong endpoints"));
    }
    if start.evaluate(n)? != end.evaluate(n)? {
        return Err(Error::internal("main lemma equation is not sound"));
    }
    let (pieces, split_steps) = match case {
        StepCase::FourIndex(_) | StepCase::Hadamard => {
            let (basic, steps) = super::engine::basic_form(&g_prime)?;
            (split_blocks(&basic), steps)
        }
        _ if g_prime.is_empty() => (vec![], vec![]),
        _ => (vec![g_prime.clone()], vec![]),
    };
    let cert = Derivation { start, steps: expand_steps(&steps.steps)?, end };
    Ok((MainLemmaStep { n_prime, g_prime, cert, case }, BlockSplit { pieces, steps: split_steps }))
}

/// Cuts a word into maximal monomial runs and single `H` tokens, in
/// application order (rightmost first).
fn split_blocks(w: &Word) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut run = Vec::new();
    for g in w.iter().rev() {
        if let Generator::H(..) = g {
            if !run.is_empty() {
                out.push(Word::from(std::mem::take(&mut run).into_iter().rev().collect::<Vec<_>>()));
            }
            out.push(Word::from(vec![*g]));
        } else {
            run.push(*g);
        }
    }
    if !run.is_empty() {
        out.push(Word::from(run.into_iter().rev().collect::<Vec<_>>()));
    }
    out
}

/// Proves `a ≈ b` where `b` contains the right side of rule `id` at
/// `mid_at`: that side is first folded back into the rule's left side.
fn prove_four_index(a: &Word, b: &Word, id: u8, mid_at: usize, n: usize) -> Result<Derivation> {
    let mut db = Deriver::new(b.clone(), TACTIC_RULES);
    db.apply(RuleInstance::new(id, Direction::RL, mid_at, Subst::default()))?;
    push_normal_form(&mut db, n)?;
    let mut da = Deriver::new(a.clone(), TACTIC_RULES);
    push_normal_form(&mut da, n)?;
    if da.word() != db.word() {
        return Err(Error::internal(format!(
            "four-index push normal forms differ: `{}` and `{}`",
            da.word(),
            db.word()
        )));
    }
    da.finish().then(&db.finish().reversed())
}
