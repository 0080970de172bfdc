//! Generator words: parsing and printing, exact evaluation, decomposition
//! into basic generators, and the relation tables as rewrite rules.
//!
//! A word is written so that its leftmost token is applied last, so
//! `⟦g_1 g_2 ⋯ g_q⟧ = g_1 · g_2 ⋯ g_q` as a matrix product.

mod derivation;
mod rules;

pub(crate) use derivation::expand_steps;
pub use derivation::{derived_rule_derivation, Derivation, Deriver};
pub use rules::{
    apply_rule, derived_rules, find_instance, match_side, rule, rule_table, Direction, Pat, RuleInstance, RuleSchema,
    Subst,
};

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{GenMatrix, Generator};

/// A finite sequence of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn as_slice(&self) -> &[Generator] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Generator> {
        self.0
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    /// The largest index mentioned, 0 for the empty word.
    pub fn extent(&self) -> usize {
        self.0.iter().map(Generator::extent).max().unwrap_or(0)
    }

    /// `self` followed by `rhs` (so `rhs` is applied first).
    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    /// Replaces `self[start..end]` with `with`.
    pub fn splice(&self, start: usize, end: usize, with: &[Generator]) -> Word {
        let mut v = Vec::with_capacity(self.len() - (end - start) + with.len());
        v.extend_from_slice(&self.0[..start]);
        v.extend_from_slice(with);
        v.extend_from_slice(&self.0[end..]);
        Word(v)
    }

    /// The exact matrix `⟦self⟧` in dimension `n`.
    pub fn evaluate(&self, n: usize) -> Result<GenMatrix> {
        if self.extent() > n {
            return Err(Error::Dimension(format!("word extent {} exceeds dimension {n}", self.extent())));
        }
        let mut m = GenMatrix::identity(n);
        for g in self.0.iter().rev() {
            m.apply_generator(*g)?;
        }
        Ok(m)
    }

    /// Reverses the word, replacing `ω[j]` by `ω⁷[j]`; `X` and `H` are
    /// self-inverse.
    pub fn inverse(&self) -> Word {
        let mut v = Vec::with_capacity(self.len());
        for g in self.0.iter().rev() {
            match g {
                Generator::W(_) => v.extend(std::iter::repeat_n(*g, 7)),
                _ => v.push(*g),
            }
        }
        Word(v)
    }

    /// Whether every generator is basic.
    pub fn is_basic(&self) -> bool {
        self.0.iter().all(Generator::is_basic)
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

impl FromIterator<Generator> for Word {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Deref for Word {
    type Target = [Generator];
    fn deref(&self) -> &[Generator] {
        &self.0
    }
}

impl fmt::Display for Word {
    /// Runs of the same `ω[j]` are printed as `w^m[j]`; other tokens singly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let g = self.0[i];
            let mut run = 1;
            if let Generator::W(_) = g {
                while i + run < self.0.len() && self.0[i + run] == g {
                    run += 1;
                }
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match g {
                Generator::W(j) if run > 1 => write!(f, "w^{run}[{j}]")?,
                _ => write!(f, "{g}")?,
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses whitespace-separated tokens `w[j]`, `H[j,k]`, `X[j,k]`, each
    /// optionally with a power, as in `w^3[1]`.  Errors give the 1-based
    /// token position on line 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (pos, tok) in s.split_whitespace().enumerate() {
            let err = |m: &str| Error::parse(1, format!("token {} `{tok}`: {m}", pos + 1));
            let open = tok.find('[').ok_or_else(|| err("expected `[`"))?;
            let inner =
                tok[open..].strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| err("expected `]`"))?;
            let (sym, power) = match tok[..open].split_once('^') {
                Some((s, p)) => (s, p.parse::<usize>().map_err(|_| err("bad power"))?),
                None => (&tok[..open], 1),
            };
            let idx: Vec<usize> = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| err("bad index")))
                .collect::<Result<_>>()?;
            let g = match (sym, idx.as_slice()) {
                ("w", &[j]) => Generator::W(j),
                ("X", &[j, k]) => Generator::X(j, k),
                ("H", &[j, k]) => Generator::H(j, k),
                _ => return Err(err("unknown symbol or wrong number of indices")),
            };
            let g = g.validated().map_err(|_| err("indices must satisfy 1 <= j < k"))?;
            out.extend(std::iter::repeat_n(g, power));
        }
        Ok(Word(out))
    }
}

/// A word over basic generators with the same matrix as `g`.
///
/// Uses `X[j,k] = X[k-1,k] X[j,k-1] X[k-1,k]`, `ω[i] = X[1,i] ω[1] X[1,i]`,
/// `H[1,k] = X[2,k] H[1,2] X[2,k]` and `H[j,k] = X[1,j] H[1,k] X[1,j]`,
/// applied recursively.
pub fn to_basic(g: Generator) -> Word {
    let mut out = Vec::new();
    push_basic(g, &mut out);
    Word(out)
}

fn push_basic(g: Generator, out: &mut Vec<Generator>) {
    if g.is_basic() {
        out.push(g);
        return;
    }
    let conj = |c: Generator, mid: Generator, out: &mut Vec<Generator>| {
        push_basic(c, out);
        push_basic(mid, out);
        push_basic(c, out);
    };
    match g {
        Generator::X(j, k) => conj(Generator::X(k - 1, k), Generator::X(j, k - 1), out),
        Generator::W(i) => conj(Generator::X(1, i), Generator::W(1), out),
        Generator::H(1, k) => conj(Generator::X(2, k), Generator::H(1, 2), out),
        Generator::H(j, k) => conj(Generator::X(1, j), Generator::H(1, k), out),
    }
}

/// Replaces every generator by [`to_basic`].
pub fn to_basic_word(w: &Word) -> Word {
    let mut out = Vec::new();
    for g in w.iter() {
        push_basic(*g, &mut out);
    }
    Word(out)
}

/// All generators of dimension `n`.
pub fn all_generators(n: usize) -> Vec<Generator> {
    let mut v: Vec<Generator> = (1..=n).map(Generator::W).collect();
    for j in 1..=n {
        for k in j + 1..=n {
            v.push(Generator::X(j, k));
            v.push(Generator::H(j, k));
        }
    }
    v
}

/// A uniformly random word of the given length over all generators of
/// dimension `n ≥ 2`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Word {
    let gens = all_generators(n);
    (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect()
}

/// A word with the same matrix as `w`, made by `ops` random edits: each
/// either inserts `g g⁻¹` at a random position or rewrites one random
/// match of a rule (ids 1–32, either direction).
pub fn co_evaluating_variant<R: Rng + ?Sized>(rng: &mut R, w: &Word, n: usize, ops: usize) -> Word {
    let gens = all_generators(n);
    let mut cur = w.clone();
    for _ in 0..ops {
        let matches = rule_matches(&cur);
        if matches.is_empty() || rng.gen_bool(0.5) {
            let g = gens[rng.gen_range(0..gens.len())];
            let at = rng.gen_range(0..=cur.len());
            let pair: Vec<Generator> = std::iter::once(g).chain(Word(vec![g]).inverse().0).collect();
            cur = cur.splice(at, at, &pair);
        } else {
            let inst = &matches[rng.gen_range(0..matches.len())];
            cur = apply_rule(&cur, inst).expect("matched instances apply");
        }
    }
    cur
}

fn rule_matches(w: &Word) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for id in 1..=32u8 {
        let schema = rule(id).expect("rules 1-32 exist");
        for dir in [Direction::LR, Direction::RL] {
            let len = match dir {
                Direction::LR => schema.lhs.len(),
                Direction::RL => schema.rhs.len(),
            };
            if len == 0 || len > w.len() {
                continue;
            }
            for pos in 0..=w.len() - len {
                if let Some(s) = match_side(schema, dir, &w[pos..pos + len]) {
                    out.push(RuleInstance::new(id, dir, pos, s));
                }
            }
        }
    }
    out
}
