//! Canonical words for permutations of `{1, …, n}` over adjacent swaps, and
//! the derivations that bring any swap word into canonical shape.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::Generator;
use crate::words::{apply_rule, match_side, rule, Direction, RuleInstance, Word};

/// A permutation as its image vector: `p[i]` is the image of `i` (0-based).
pub(crate) type Perm = Vec<usize>;

fn swap_image(g: Generator, i: usize) -> usize {
    match g {
        Generator::X(a, b) if i + 1 == a => b - 1,
        Generator::X(a, b) if i + 1 == b => a - 1,
        _ => i,
    }
}

/// The permutation `⟦w⟧` of a word of swaps: `⟦w⟧ e_i = e_{p[i]}`.
pub(crate) fn perm_of(w: &[Generator], n: usize) -> Perm {
    (0..n).map(|i| w.iter().rev().fold(i, |acc, g| swap_image(*g, acc))).collect()
}

type Table = Arc<HashMap<Perm, Word>>;

fn canonical_table(n: usize) -> Table {
    static TABLES: OnceLock<Mutex<HashMap<usize, Table>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().expect("perm tables").get(&n) {
        return t.clone();
    }
    let mut table: HashMap<Perm, Word> = HashMap::new();
    let id: Perm = (0..n).collect();
    table.insert(id.clone(), Word::new());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        let w = table[&p].clone();
        for a in 1..n {
            let g = Generator::X(a, a + 1);
            let mut nw = w.clone();
            nw.push(g);
            let q = perm_of(&nw, n);
            if !table.contains_key(&q) {
                table.insert(q.clone(), nw);
                queue.push_back(q);
            }
        }
    }
    let t = Arc::new(table);
    tables.lock().expect("perm tables").insert(n, t.clone());
    t
}

/// The canonical adjacent-swap word of a permutation.
pub(crate) fn canonical_word(p: &Perm) -> Word {
    canonical_table(p.len())[p].clone()
}

const PERM_RULES: [u8; 4] = [3, 9, 12, 13];

/// Every single-rule rewrite of a swap word that does not lengthen it.
fn neighbours(w: &Word) -> Vec<(RuleInstance, Word)> {
    let mut out = Vec::new();
    for &id in &PERM_RULES {
        let schema = rule(id).expect("rule exists");
        for dir in [Direction::LR, Direction::RL] {
            let from_len = match dir {
                Direction::LR => schema.lhs.len(),
                Direction::RL => schema.rhs.len(),
            };
            if from_len == 0 {
                continue;
            }
            for pos in 0..w.len().saturating_sub(from_len - 1) {
                if let Some(subst) = match_side(schema, dir, &w[pos..pos + from_len]) {
                    let inst = RuleInstance::new(id, dir, pos, subst);
                    if let Ok(nw) = apply_rule(w, &inst) {
                        out.push((inst, nw));
                    }
                }
            }
        }
    }
    out
}

/// Steps rewriting the swap word `from` into `to` (same permutation), found
/// by breadth-first search over rules 3, 9, 12 and 13.
fn search(from: &Word, to: &Word) -> Result<Vec<RuleInstance>> {
    let mut prev: HashMap<Word, (Word, RuleInstance)> = HashMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    let mut seen = std::collections::HashSet::from([from.clone()]);
    while let Some(w) = queue.pop_front() {
        if w == *to {
            let mut steps = Vec::new();
            let mut cur = w;
            while cur != *from {
                let (p, inst) = prev[&cur].clone();
                steps.push(inst);
                cur = p;
            }
            steps.reverse();
            return Ok(steps);
        }
        for (inst, nw) in neighbours(&w) {
            if seen.insert(nw.clone()) {
                prev.insert(nw.clone(), (w.clone(), inst));
                queue.push_back(nw);
            }
        }
    }
    Err(Error::internal(format!("no swap-word derivation from `{from}` to `{to}`")))
}

/// Steps rewriting `canonical(p) · g` into `canonical(p ∘ g)`, cached.
pub(crate) fn append_lemma(prefix: &Word, g: Generator, n: usize) -> Result<Arc<Vec<RuleInstance>>> {
    type Cache = Mutex<HashMap<(Word, Generator, usize), Arc<Vec<RuleInstance>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (prefix.clone(), g, n);
    if let Some(s) = cache.lock().expect("lemma cache").get(&key) {
        return Ok(s.clone());
    }
    let mut from = prefix.clone();
    from.push(g);
    let to = canonical_word(&perm_of(&from, n));
    let steps = Arc::new(search(&from, &to)?);
    cache.lock().expect("lemma cache").insert(key, steps.clone());
    Ok(steps)
}
