//! Proof tactics over words: rewriting into basic generators, canonical
//! monomial words, and a push normal form that moves every monomial token
//! to the left of the `H` generators.
//!
//! Every tactic works on a [`Deriver`], so each change it makes is recorded
//! as rule instances.

use crate::error::{Error, Result};
use crate::linalg::{GenMatrix, Generator};
use crate::words::{Deriver, Word};

use super::perm::{append_lemma, canonical_word, perm_of};

/// The largest rule id the tactics use; derived rules are expanded later.
pub(crate) const TACTIC_RULES: u8 = 32;

fn replace(d: &mut Deriver, start: usize, end: usize, with: &[Generator]) -> Result<()> {
    let next = d.word().splice(start, end, with);
    d.step_to(&next)
}

fn reorder(d: &mut Deriver, start: usize, with: &[Generator]) -> Result<()> {
    let next = d.word().splice(start, start + with.len(), with);
    d.reorder_to(&next)
}

fn swap_image(a: usize, b: usize, i: usize) -> usize {
    if i == a {
        b
    } else if i == b {
        a
    } else {
        i
    }
}

fn x_adj(g: Generator) -> Option<(usize, usize)> {
    match g {
        Generator::X(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Expands the non-basic token at `p` one level, returning how many tokens
/// it now occupies.  A run of `ω[i]` (`i > 1`) is conjugated as a whole.
fn basify_at(d: &mut Deriver, p: usize) -> Result<usize> {
    let g = d.word()[p];
    match g {
        Generator::X(j, k) => {
            let (c, m) = (Generator::X(k - 1, k), Generator::X(j, k - 1));
            replace(d, p, p + 1, &[g, c, c])?;
            replace(d, p, p + 3, &[c, m, c])?;
            Ok(3)
        }
        Generator::W(i) => {
            let run = d.word()[p..].iter().take_while(|&&t| t == g).count();
            let c = Generator::X(1, i);
            replace(d, p, p, &[c, c])?;
            for q in 0..run {
                replace(d, p + 1 + q, p + 3 + q, &[Generator::W(1), c])?;
            }
            Ok(run + 2)
        }
        Generator::H(1, k) => {
            let c = Generator::X(2, k);
            replace(d, p, p, &[c, c])?;
            replace(d, p + 1, p + 3, &[Generator::H(1, 2), c])?;
            Ok(3)
        }
        Generator::H(j, k) => {
            let c = Generator::X(1, j);
            replace(d, p, p, &[c, c])?;
            replace(d, p + 1, p + 3, &[Generator::H(1, k), c])?;
            Ok(3)
        }
    }
}

/// Rewrites `d.word()[start..end]` into basic generators; returns the new end.
pub(crate) fn basify(d: &mut Deriver, start: usize, mut end: usize) -> Result<usize> {
    while let Some(p) = (start..end).find(|&p| !d.word()[p].is_basic()) {
        let before = d.word().len();
        basify_at(d, p)?;
        end += d.word().len() - before;
    }
    Ok(end)
}

/// Rewrites the `X` tokens of a monomial window into adjacent swaps.
fn adjacent_swaps(d: &mut Deriver, start: usize, mut end: usize) -> Result<usize> {
    while let Some(p) = (start..end).find(|&p| matches!(d.word()[p], Generator::X(j, k) if k > j + 1)) {
        end += basify_at(d, p)? - 1;
    }
    Ok(end)
}

/// Moves every phase of a monomial window to the left of every swap.
fn phases_first(d: &mut Deriver, start: usize, end: usize) -> Result<()> {
    while let Some(p) = (start..end.saturating_sub(1))
        .find(|&p| matches!((d.word()[p], d.word()[p + 1]), (Generator::X(..), Generator::W(_))))
    {
        let (a, b) = x_adj(d.word()[p]).expect("swap");
        let Generator::W(c) = d.word()[p + 1] else { unreachable!() };
        replace(d, p, p + 2, &[Generator::W(swap_image(a, b, c)), Generator::X(a, b)])?;
    }
    Ok(())
}

/// Moves every swap of a monomial window to the left of every phase.
fn swaps_first(d: &mut Deriver, start: usize, end: usize) -> Result<()> {
    while let Some(p) = (start..end.saturating_sub(1))
        .find(|&p| matches!((d.word()[p], d.word()[p + 1]), (Generator::W(_), Generator::X(..))))
    {
        let Generator::W(c) = d.word()[p] else { unreachable!() };
        let (a, b) = x_adj(d.word()[p + 1]).expect("swap");
        replace(d, p, p + 2, &[Generator::X(a, b), Generator::W(swap_image(a, b, c))])?;
    }
    Ok(())
}

/// Sorts a window of phases by index and removes complete `ω⁸` runs;
/// returns the new end.
fn sort_phases(d: &mut Deriver, start: usize, end: usize) -> Result<usize> {
    let mut sorted = d.word()[start..end].to_vec();
    sorted.sort();
    reorder(d, start, &sorted)?;
    let mut p = start;
    let mut end = end;
    while p < end {
        let g = d.word()[p];
        let run = d.word()[p..end].iter().take_while(|&&t| t == g).count();
        if run >= 8 {
            replace(d, p, p + 8, &[])?;
            end -= 8;
        } else {
            p += run;
        }
    }
    Ok(end)
}

/// The canonical word of a monomial matrix: phases `ω^{e_1}[1] ⋯ ω^{e_n}[n]`
/// (exponents in `0..8`) followed by the canonical swap word.
pub(crate) fn canonical_monomial(m: &GenMatrix) -> Result<Word> {
    let n = m.dim();
    let mut img = vec![0; n];
    let mut phase = vec![0u8; n];
    for (c, slot) in img.iter_mut().enumerate() {
        let col = m.column(c + 1);
        let (r, e) = col
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_zero())
            .ok_or_else(|| Error::Precondition("matrix is not monomial".into()))?;
        let p = (0..8)
            .find(|&p| *e == crate::ring::RingElem::omega_pow(p))
            .ok_or_else(|| Error::Precondition("matrix is not monomial".into()))?;
        *slot = r;
        phase[r] = p as u8;
    }
    let mut w: Word = (0..n).flat_map(|i| std::iter::repeat_n(Generator::W(i + 1), phase[i] as usize)).collect();
    for g in canonical_word(&img).iter() {
        w.push(*g);
    }
    Ok(w)
}

/// Rewrites a monomial window into its canonical word; returns the new end.
pub(crate) fn canonicalize_monomial(d: &mut Deriver, start: usize, end: usize, n: usize) -> Result<usize> {
    let end = adjacent_swaps(d, start, end)?;
    phases_first(d, start, end)?;
    let nphase = d.word()[start..end].iter().take_while(|g| matches!(g, Generator::W(_))).count();
    let pend = sort_phases(d, start, start + nphase)?;
    let mut end = end - (start + nphase - pend);
    let mut canon = Word::new();
    let mut p = pend;
    while p < end {
        let g = d.word()[p];
        for s in append_lemma(&canon, g, n)?.iter() {
            d.apply((*s).shifted(pend))?;
        }
        let mut next = canon.clone();
        next.push(g);
        canon = canonical_word(&perm_of(&next, n));
        end -= next.len() - canon.len();
        p = pend + canon.len();
    }
    Ok(end)
}

fn h_pair(g: Generator) -> Option<(usize, usize)> {
    match g {
        Generator::H(c, d) => Some((c, d)),
        _ => None,
    }
}

fn next_h(w: &[Generator], from: usize) -> usize {
    (from..w.len()).find(|&p| h_pair(w[p]).is_some()).unwrap_or(w.len())
}

/// Passes the monomial segment to the right of the `H` at `h` through it,
/// leaving only a residual `ω^z[c]` with `z < 4` on its right.  Returns the
/// new position of the `H`.
fn push_through(d: &mut Deriver, mut h: usize) -> Result<usize> {
    let e = next_h(d.word(), h + 1);
    let e = adjacent_swaps(d, h + 1, e)?;
    swaps_first(d, h + 1, e)?;
    while let Some((a, b)) = d.word().get(h + 1).and_then(|g| x_adj(*g)) {
        let (c, dd) = h_pair(d.word()[h]).expect("H");
        if (a, b) == (c, dd) {
            let mut with = vec![Generator::W(dd); 4];
            with.push(Generator::H(c, dd));
            replace(d, h, h + 2, &with)?;
            h += 4;
        } else {
            let (p, q) = (swap_image(a, b, c), swap_image(a, b, dd));
            replace(d, h, h + 2, &[Generator::X(a, b), Generator::H(p.min(q), p.max(q))])?;
            h += 1;
        }
    }
    let (c, dd) = h_pair(d.word()[h]).expect("H");
    let e = next_h(d.word(), h + 1);
    let seg = d.word()[h + 1..e].to_vec();
    let count = |i: usize| seg.iter().filter(|&&g| g == Generator::W(i)).count();
    let (nc, nd) = (count(c), count(dd));
    let mut outsiders: Vec<Generator> =
        seg.iter().copied().filter(|&g| g != Generator::W(c) && g != Generator::W(dd)).collect();
    outsiders.sort();
    let pairs = nc.min(nd);
    let mut order = outsiders.clone();
    for _ in 0..pairs {
        order.extend([Generator::W(c), Generator::W(dd)]);
    }
    order.extend(std::iter::repeat_n(Generator::W(c), nc - pairs));
    order.extend(std::iter::repeat_n(Generator::W(dd), nd - pairs));
    reorder(d, h + 1, &order)?;
    let hg = Generator::H(c, dd);
    for g in &outsiders {
        replace(d, h, h + 2, &[*g, hg])?;
        h += 1;
    }
    let pass_pairs = |d: &mut Deriver, h: &mut usize, count: usize| -> Result<()> {
        for _ in 0..count {
            replace(d, *h, *h + 3, &[Generator::W(c), Generator::W(dd), hg])?;
            *h += 2;
        }
        Ok(())
    };
    pass_pairs(d, &mut h, pairs)?;
    let mut rest_c = nc - pairs;
    let rest_d = (nd - pairs) % 8;
    if nd - pairs >= 8 {
        replace(d, h + 1, h + 9, &[])?;
    }
    if rest_d > 0 {
        replace(d, h + 1, h + 1, &[Generator::W(c); 8])?;
        let mut order = Vec::new();
        for _ in 0..rest_d {
            order.extend([Generator::W(c), Generator::W(dd)]);
        }
        order.extend(std::iter::repeat_n(Generator::W(c), 8 - rest_d));
        reorder(d, h + 1, &order)?;
        pass_pairs(d, &mut h, rest_d)?;
        rest_c = 8 - rest_d;
    }
    while rest_c >= 8 {
        replace(d, h + 1, h + 9, &[])?;
        rest_c -= 8;
    }
    if rest_c >= 4 {
        replace(d, h + 5, h + 5, &[Generator::W(dd); 8])?;
        let mut order = Vec::new();
        for _ in 0..4 {
            order.extend([Generator::W(c), Generator::W(dd)]);
        }
        order.extend([Generator::W(dd); 4]);
        reorder(d, h + 1, &order)?;
        pass_pairs(d, &mut h, 4)?;
        replace(d, h, h + 5, &[Generator::X(c, dd), hg])?;
        h += 1;
    }
    Ok(h)
}

/// Brings the word of `d` into push normal form:
/// `M · H₁ ω^{z₁}[c₁] ⋯ H_m ω^{z_m}[c_m]` with `M` a canonical monomial word
/// and each `z_i < 4`.  Adjacent blocks on disjoint pairs are sorted,
/// `H H` is cancelled and `H ω²[c] H` is rewritten by rule 26.
pub(crate) fn push_normal_form(d: &mut Deriver, n: usize) -> Result<()> {
    loop {
        let hs: Vec<usize> = (0..d.word().len()).filter(|&p| h_pair(d.word()[p]).is_some()).collect();
        for &h in hs.iter().rev() {
            push_through(d, h)?;
        }
        let hs: Vec<usize> = (0..d.word().len()).filter(|&p| h_pair(d.word()[p]).is_some()).collect();
        let mut changed = false;
        for i in 0..hs.len().saturating_sub(1) {
            let (h1, h2) = (hs[i], hs[i + 1]);
            let (p1, p2) = (h_pair(d.word()[h1]).unwrap(), h_pair(d.word()[h2]).unwrap());
            let z1 = h2 - h1 - 1;
            if p1 == p2 && z1 == 0 {
                replace(d, h1, h2 + 1, &[])?;
            } else if p1 == p2 && z1 == 2 {
                let (c, k) = p1;
                let mut with = vec![Generator::X(c, k)];
                with.extend([Generator::W(k); 7]);
                with.extend([Generator::W(c), Generator::H(c, k), Generator::W(c), Generator::W(c)]);
                replace(d, h1, h2 + 1, &with)?;
            } else if p1.0 != p2.0 && p1.0 != p2.1 && p1.1 != p2.0 && p1.1 != p2.1 && p1 > p2 {
                let e2 = next_h(d.word(), h2 + 1);
                let mut with = d.word()[h2..e2].to_vec();
                with.extend_from_slice(&d.word()[h1..h2]);
                reorder(d, h1, &with)?;
            } else {
                continue;
            }
            changed = true;
            break;
        }
        if !changed {
            let first = next_h(d.word(), 0);
            canonicalize_monomial(d, 0, first, n)?;
            return Ok(());
        }
    }
}

/// A derivation of `a ≈ b` through the push normal form of both sides.
pub(crate) fn prove(a: &Word, b: &Word, n: usize) -> Result<crate::words::Derivation> {
    let mut da = Deriver::new(a.clone(), TACTIC_RULES);
    push_normal_form(&mut da, n)?;
    let mut db = Deriver::new(b.clone(), TACTIC_RULES);
    push_normal_form(&mut db, n)?;
    if da.word() != db.word() {
        return Err(Error::internal(format!(
            "push normal forms differ: `{a}` gives `{}`, `{b}` gives `{}`",
            da.word(),
            db.word()
        )));
    }
    da.finish().then(&db.finish().reversed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn check(a: &str, b: &str) {
        let d = prove(&w(a), &w(b), 4).unwrap();
        d.check().unwrap();
        assert_eq!(d.start.evaluate(4).unwrap(), d.end.evaluate(4).unwrap());
    }

    #[test]
    fn monomial_words_canonicalize() {
        check("X[1,3] w[3] X[2,4] w^5[1]", "w[1] w^5[3] X[1,3] X[2,4]");
        check("w^8[2] X[1,2] X[1,2]", "");
    }

    #[test]
    fn one_h_words_canonicalize() {
        check("H[1,2] w^4[1]", "w^4[1] w^4[2] X[1,2] H[1,2]");
        check("H[2,4] w^3[2] X[1,2]", "X[1,2] H[1,4] w^3[1]");
    }

    #[test]
    fn two_h_words_canonicalize() {
        check("H[3,4] w[3] H[1,2]", "H[1,2] H[3,4] w[3]");
        check("H[1,2] w^2[1] H[1,2]", "X[1,2] w^7[2] w[1] H[1,2] w^2[1]");
        check("H[1,2] H[1,2] w[3]", "w[3]");
    }

    #[test]
    fn random_words_reach_push_normal_form() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for len in 1..40 {
            let word = crate::words::random_word(&mut rng, 4, len);
            let mut d = Deriver::new(word.clone(), TACTIC_RULES);
            push_normal_form(&mut d, 4).unwrap();
            let der = d.finish();
            der.check().unwrap();
            assert_eq!(der.end.evaluate(4).unwrap(), word.evaluate(4).unwrap(), "{word}");
            let first = next_h(&der.end, 0);
            let prefix = Word::from(der.end[..first].to_vec());
            assert_eq!(canonical_monomial(&prefix.evaluate(4).unwrap()).unwrap(), prefix);
        }
    }

    #[test]
    fn canonical_monomial_evaluates() {
        let m = w("X[1,3] w[3] X[2,4] w^5[1]").evaluate(4).unwrap();
        assert_eq!(canonical_monomial(&m).unwrap().evaluate(4).unwrap(), m);
    }
}
