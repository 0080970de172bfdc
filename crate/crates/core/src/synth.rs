//! Exact synthesis: the column-reduction loop that writes any unitary over
//! `D[ω]` as a product of one- and two-level generators.
//!
//! Each iteration looks at the pivot column (the last column that is not a
//! standard basis vector) and emits one [`Syllable`] that strictly lowers the
//! matrix's [`Level`].

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{GenMatrix, Generator, Level};
use crate::ring::{omega_exponent_mod_delta3, CycInt, RingElem};
use crate::words::Word;

/// One iteration's worth of generators.
///
/// * `W { m, j }` is `ω^m[j]`.
/// * `WX { m, l, j }` is `ω^m[j] X[l,j]` with `l < j`.
/// * `HW { i, l, z }` is `H[i,l] ω^z[i]` with `i < l` and `z < 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    W { m: u8, j: usize },
    WX { m: u8, l: usize, j: usize },
    HW { i: usize, l: usize, z: u8 },
}

impl Syllable {
    /// The generator word, leftmost applied last; zero phases are omitted.
    pub fn to_word(&self) -> Word {
        let mut out = Vec::new();
        match *self {
            Syllable::W { m, j } => out.extend(std::iter::repeat_n(Generator::W(j), m as usize)),
            Syllable::WX { m, l, j } => {
                out.extend(std::iter::repeat_n(Generator::W(j), m as usize));
                out.push(Generator::X(l, j));
            }
            Syllable::HW { i, l, z } => {
                out.push(Generator::H(i, l));
                out.extend(std::iter::repeat_n(Generator::W(i), z as usize));
            }
        }
        Word::from(out)
    }

    /// Left-multiplies `m` by the syllable.
    pub fn apply(&self, m: &mut GenMatrix) -> Result<()> {
        for g in self.to_word().iter().rev() {
            m.apply_generator(*g)?;
        }
        Ok(())
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syllable::W { m, j } => write!(f, "W({m},{j})"),
            Syllable::WX { m, l, j } => write!(f, "WX({m},{l},{j})"),
            Syllable::HW { i, l, z } => write!(f, "HW({i},{l},{z})"),
        }
    }
}

/// Flattens a syllable sequence `G_1, G_2, …` (in application order) into
/// the word `G_q ⋯ G_1`.
pub fn syllables_to_word(syllables: &[Syllable]) -> Word {
    let mut out = Vec::new();
    for s in syllables.iter().rev() {
        out.extend(s.to_word().iter().copied());
    }
    Word::from(out)
}

/// The phase `z ∈ 0..4` with `ω^z u1 ≡ u2 (mod δ³)`, for odd `u1`, `u2`.
pub fn sync_pair(u1: &CycInt, u2: &CycInt) -> Result<u8> {
    let l = omega_exponent_mod_delta3(u1)?;
    let m = omega_exponent_mod_delta3(u2)?;
    Ok((m + 4 - l) % 4)
}

fn scaled_column(v: &[RingElem]) -> (u32, Vec<CycInt>) {
    let k = v.iter().map(RingElem::lde).max().unwrap_or(0);
    (k, v.iter().map(|e| e.scaled_numerator(k).expect("k is the maximum lde")).collect())
}

/// The `HW` syllables that pair off the odd entries of `δ^k v` in index
/// order; together they lower the lde of a unit vector `v`.
pub fn column_step(v: &[RingElem]) -> Result<Vec<Syllable>> {
    let (k, u) = scaled_column(v);
    if k == 0 {
        return Err(Error::Precondition("column already has lde 0".into()));
    }
    let odd: Vec<usize> = (0..u.len()).filter(|&i| !u[i].divisible_by_delta()).collect();
    if !odd.len().is_multiple_of(2) {
        return Err(Error::Precondition("odd number of entries with residue 1; not a unit vector".into()));
    }
    odd.chunks(2)
        .map(|p| {
            let z = sync_pair(&u[p[0]], &u[p[1]])?;
            Ok(Syllable::HW { i: p[0] + 1, l: p[1] + 1, z })
        })
        .collect()
}

/// For a unit vector over `Z[ω]`, the pair `(s, l)` with `v = ω^l e_s`
/// (`s` 1-based, `l ∈ 0..8`).
pub fn unit_vector_form(v: &[RingElem]) -> Result<(usize, u8)> {
    let nonzero: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if v.iter().any(|e| e.lde() > 0) {
        return Err(Error::Precondition("entries not in Z[omega]".into()));
    }
    if let [s] = nonzero[..] {
        for l in 0..8u8 {
            if v[s] == RingElem::omega_pow(l as i64) {
                return Ok((s + 1, l));
            }
        }
    }
    Err(Error::Precondition("not a unit vector of the form omega^l e_s".into()))
}

/// The syllable the algorithm emits first on input `m`.
pub fn next_syllable(m: &GenMatrix) -> Result<Syllable> {
    if !m.is_unitary() {
        return Err(Error::NotUnitary);
    }
    next_syllable_unchecked(m)
}

/// [`next_syllable`] without the unitarity check; `m` must be unitary.
pub(crate) fn next_syllable_unchecked(m: &GenMatrix) -> Result<Syllable> {
    let j = m.pivot_column();
    if j == 0 {
        return Err(Error::Precondition("identity matrix has no next syllable".into()));
    }
    let col = m.column(j);
    let (k, u) = scaled_column(&col);
    if k == 0 {
        let (l, mu) = unit_vector_form(&col)?;
        let m = (8 - mu) % 8;
        return Ok(if l == j { Syllable::W { m, j } } else { Syllable::WX { m, l, j } });
    }
    let mut odd = (0..u.len()).filter(|&i| !u[i].divisible_by_delta());
    let (i, l) = match (odd.next(), odd.next()) {
        (Some(i), Some(l)) => (i, l),
        _ => return Err(Error::NotUnitary),
    };
    let z = sync_pair(&u[i], &u[l])?;
    Ok(Syllable::HW { i: i + 1, l: l + 1, z })
}

/// A synthesis run: the syllables in application order and the level
/// before each one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub syllables: Vec<Syllable>,
    pub levels: Vec<Level>,
}

impl Synthesis {
    /// The word `N` with `⟦N⟧ = M⁻¹`.
    pub fn inverse_word(&self) -> Word {
        syllables_to_word(&self.syllables)
    }

    /// A word for `M` itself: the inverse word reversed, with each run of
    /// `ω[j]` replaced by its inverse power modulo 8.
    pub fn word(&self) -> Word {
        let inv = self.inverse_word();
        let mut out = Vec::with_capacity(inv.len());
        let rev: Vec<Generator> = inv.iter().rev().copied().collect();
        let mut i = 0;
        while i < rev.len() {
            let g = rev[i];
            let mut run = 1;
            if let Generator::W(_) = g {
                while i + run < rev.len() && rev[i + run] == g {
                    run += 1;
                }
                out.extend(std::iter::repeat_n(g, (8 - run % 8) % 8));
            } else {
                out.push(g);
            }
            i += run;
        }
        out.into_iter().collect()
    }
}

/// Runs the algorithm to completion, recording the level before each step.
pub fn synthesize_traced(m: &GenMatrix) -> Result<Synthesis> {
    if !m.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let mut cur = m.clone();
    let mut syllables = Vec::new();
    let mut levels = Vec::new();
    loop {
        let level = cur.level();
        if level == Level::default() {
            break;
        }
        let s = next_syllable_unchecked(&cur)?;
        s.apply(&mut cur)?;
        if cur.level() >= level {
            return Err(Error::internal(format!("syllable {s} did not lower level {level}")));
        }
        syllables.push(s);
        levels.push(level);
    }
    Ok(Synthesis { syllables, levels })
}

/// The syllables `G_1, …, G_q` with `G_q ⋯ G_1 M = I`.
pub fn synthesize(m: &GenMatrix) -> Result<Vec<Syllable>> {
    synthesize_traced(m).map(|s| s.syllables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::clifford_t_gate;

    fn inv_sqrt2() -> RingElem {
        RingElem::one().div_sqrt2()
    }

    #[test]
    fn sync_pair_examples() {
        let w = CycInt::omega_pow;
        assert_eq!(sync_pair(&w(0), &w(0)).unwrap(), 0);
        assert_eq!(sync_pair(&w(0), &w(3)).unwrap(), 3);
        assert_eq!(sync_pair(&w(2), &w(1)).unwrap(), 3);
    }

    #[test]
    fn column_step_pairs_in_index_order() {
        let h = inv_sqrt2();
        let z = RingElem::zero();
        let v = vec![h.clone(), z.clone(), h.clone(), z.clone()];
        let steps = column_step(&v).unwrap();
        assert!(matches!(steps[..], [Syllable::HW { i: 1, l: 3, .. }]));
        let half = RingElem::from_dyadic(CycInt::one(), 1);
        let v4 = vec![half.clone(); 4];
        let steps = column_step(&v4).unwrap();
        assert!(matches!(steps[..], [Syllable::HW { i: 1, l: 2, .. }, Syllable::HW { i: 3, l: 4, .. }]));
    }

    #[test]
    fn unit_vector_form_examples() {
        let z = RingElem::zero();
        let e3 = vec![z.clone(), z.clone(), RingElem::one(), z.clone()];
        assert_eq!(unit_vector_form(&e3).unwrap(), (3, 0));
        let v = vec![RingElem::omega_pow(5), z.clone(), z.clone(), z.clone()];
        assert_eq!(unit_vector_form(&v).unwrap(), (1, 5));
        let h = inv_sqrt2();
        assert!(unit_vector_form(&[h.clone(), h, z.clone(), z]).is_err());
    }

    #[test]
    fn next_syllable_examples() {
        let x12 = Generator::X(1, 2).matrix(4).unwrap();
        assert_eq!(next_syllable(&x12).unwrap(), Syllable::WX { m: 0, l: 1, j: 2 });
        let mut w3 = GenMatrix::identity(4);
        for _ in 0..3 {
            w3.apply_generator(Generator::W(4)).unwrap();
        }
        assert_eq!(next_syllable(&w3).unwrap(), Syllable::W { m: 5, j: 4 });
        assert!(next_syllable(&GenMatrix::identity(4)).is_err());
    }

    #[test]
    fn cnot_synthesizes_to_single_swap() {
        let cnot = clifford_t_gate("cnot").unwrap();
        assert_eq!(synthesize(&cnot).unwrap(), vec![Syllable::WX { m: 0, l: 3, j: 4 }]);
        assert!(synthesize(&GenMatrix::identity(4)).unwrap().is_empty());
    }
}
