//! Equational derivations: chains of rule instances that rewrite one word
//! into another, plus the stored chains that reduce rules 21–32 to rules
//! 1–20.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::Generator;
use crate::words::rules::{apply_rule, find_instance, rule, Direction, RuleInstance, Subst};
use crate::words::Word;

/// A replayable proof that `start ≈ end`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<RuleInstance>,
    pub end: Word,
}

impl Derivation {
    /// The empty derivation `w ≈ w`.
    pub fn identity(w: Word) -> Self {
        Derivation { start: w.clone(), steps: Vec::new(), end: w }
    }

    /// Applies the steps to `start`, checking each one, and returns the
    /// final word (which is not compared to `end`).
    pub fn replay_from_start(&self) -> Result<Word> {
        let mut w = self.start.clone();
        for (i, st) in self.steps.iter().enumerate() {
            w = apply_rule(&w, st).map_err(|e| Error::InvalidDerivation { step: i + 1, reason: e.to_string() })?;
        }
        Ok(w)
    }

    /// Replays the derivation and checks that it ends at `end`.
    pub fn check(&self) -> Result<()> {
        let w = self.replay_from_start()?;
        if w != self.end {
            return Err(Error::InvalidDerivation {
                step: self.steps.len(),
                reason: format!("replay ends at `{w}`, expected `{}`", self.end),
            });
        }
        Ok(())
    }

    /// The same proof read backwards: `end ≈ start`.
    pub fn reversed(&self) -> Self {
        Derivation {
            start: self.end.clone(),
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
            end: self.start.clone(),
        }
    }

    /// `self` followed by `next`; `next` must start where `self` ends.
    pub fn then(mut self, next: &Derivation) -> Result<Self> {
        if self.end != next.start {
            return Err(Error::InvalidDerivation {
                step: self.steps.len(),
                reason: format!("cannot chain `{}` with `{}`", self.end, next.start),
            });
        }
        self.steps.extend_from_slice(&next.steps);
        self.end = next.end.clone();
        Ok(self)
    }

    /// The derivation applied inside the context `prefix · _ · suffix`.
    pub fn embed(&self, prefix: &Word, suffix: &Word) -> Self {
        Derivation {
            start: prefix.concat(&self.start).concat(suffix),
            steps: self.steps.iter().map(|s| s.shifted(prefix.len())).collect(),
            end: prefix.concat(&self.end).concat(suffix),
        }
    }

    /// The largest rule id used, 0 when there are no steps.
    pub fn max_rule(&self) -> u8 {
        self.steps.iter().map(|s| s.rule).max().unwrap_or(0)
    }

    /// Replaces every step using rules 21–32 by its chain over rules 1–20.
    pub fn expanded(&self) -> Result<Self> {
        Ok(Derivation { start: self.start.clone(), steps: expand_steps(&self.steps)?, end: self.end.clone() })
    }

    /// How often each rule id is used.
    pub fn rule_histogram(&self) -> BTreeMap<u8, usize> {
        let mut h = BTreeMap::new();
        for s in &self.steps {
            *h.entry(s.rule).or_insert(0) += 1;
        }
        h
    }

    /// Writes the text format: `# start:` and `# end:` comment lines, then
    /// one step per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# start: {}\n# end: {}\n", self.start, self.end);
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Reads the text format.  When the `# start:` line is missing, `start`
    /// must be supplied; when `# end:` is missing the replay result is used.
    pub fn from_text(text: &str, start: Option<Word>) -> Result<Self> {
        let mut st = start;
        let mut end = None;
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# start:") {
                st = Some(rest.trim().parse()?);
            } else if let Some(rest) = line.strip_prefix("# end:") {
                end = Some(rest.trim().parse::<Word>()?);
            } else if line.is_empty() || line.starts_with('#') {
                continue;
            } else {
                steps.push(line.parse::<RuleInstance>().map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                    other => other,
                })?);
            }
        }
        let start = st.ok_or_else(|| Error::parse(0, "derivation has no start word"))?;
        let mut d = Derivation { start, steps, end: Word::new() };
        d.end = match end {
            Some(e) => e,
            None => d.replay_from_start()?,
        };
        Ok(d)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn expand_steps(steps: &[RuleInstance]) -> Result<Vec<RuleInstance>> {
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        if s.rule <= 20 {
            out.push(*s);
            continue;
        }
        let chain = derived_chain(s.rule, s.subst)?;
        match s.dir {
            Direction::LR => out.extend(chain.iter().map(|c| c.shifted(s.pos))),
            Direction::RL => out.extend(chain.iter().rev().map(|c| c.inverse().shifted(s.pos))),
        }
    }
    Ok(out)
}

type ChainCache = Mutex<HashMap<(u8, Subst), Arc<Vec<RuleInstance>>>>;

/// The rules-1–20 chain from the left side to the right side of a derived
/// rule instance, positioned at offset 0.
pub(crate) fn derived_chain(id: u8, subst: Subst) -> Result<Arc<Vec<RuleInstance>>> {
    static CACHE: OnceLock<ChainCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("chain cache").get(&(id, subst)) {
        return Ok(c.clone());
    }
    let schema = rule(id)?;
    let (lhs, rhs) = schema.instantiate(&subst, Direction::LR)?;
    let d = transcribe(id, subst, lhs)?;
    if d.end != rhs {
        return Err(Error::internal(format!("derivation of rule {id} ends at `{}`", d.end)));
    }
    let steps = Arc::new(expand_steps(&d.steps)?);
    cache.lock().expect("chain cache").insert((id, subst), steps.clone());
    Ok(steps)
}

/// The stored derivation of a derived rule instance over rules 1–20.
pub fn derived_rule_derivation(id: u8, subst: Subst) -> Result<Derivation> {
    let schema = rule(id)?;
    if !schema.is_derived() {
        return Err(Error::Precondition(format!("rule {id} is not derived")));
    }
    let (lhs, rhs) = schema.instantiate(&subst, Direction::LR)?;
    Ok(Derivation { start: lhs, steps: derived_chain(id, subst)?.to_vec(), end: rhs })
}

/// Builds a derivation step by step from milestone words.
pub struct Deriver {
    start: Word,
    word: Word,
    steps: Vec<RuleInstance>,
    max_rule: u8,
}

impl Deriver {
    /// A builder that may use rules with id at most `max_rule`.
    pub fn new(start: Word, max_rule: u8) -> Self {
        Deriver { start: start.clone(), word: start, steps: Vec::new(), max_rule }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn apply(&mut self, inst: RuleInstance) -> Result<()> {
        self.word = apply_rule(&self.word, &inst)?;
        self.steps.push(inst);
        Ok(())
    }

    /// Appends a derivation acting at `offset`.
    pub fn apply_derivation(&mut self, d: &Derivation, offset: usize) -> Result<()> {
        let end = offset + d.start.len();
        if end > self.word.len() || self.word[offset..end] != d.start[..] {
            return Err(Error::internal(format!("`{}` does not occur at {offset} in `{}`", d.start, self.word)));
        }
        self.word = self.word.splice(offset, end, &d.end);
        self.steps.extend(d.steps.iter().map(|s| s.shifted(offset)));
        Ok(())
    }

    /// Moves to `next` by one rule application found automatically.
    pub fn step_to(&mut self, next: &Word) -> Result<()> {
        if *next == self.word {
            return Ok(());
        }
        let inst = find_instance(&self.word, next, self.max_rule)
            .ok_or_else(|| Error::internal(format!("no single rule turns `{}` into `{next}`", self.word)))?;
        self.apply(inst)
    }

    /// Moves to `next`, which must be a rearrangement of the current word,
    /// by adjacent swaps that are each a single rule.
    pub fn reorder_to(&mut self, next: &Word) -> Result<()> {
        if next.len() != self.word.len() {
            return Err(Error::internal(format!("`{next}` is not a rearrangement of `{}`", self.word)));
        }
        for i in 0..next.len() {
            let src = (i..self.word.len())
                .find(|&p| self.word[p] == next[i])
                .ok_or_else(|| Error::internal(format!("`{next}` is not a rearrangement of `{}`", self.word)))?;
            for p in (i..src).rev() {
                let mut v = self.word.as_slice().to_vec();
                v.swap(p, p + 1);
                self.step_to(&Word::from(v))?;
            }
        }
        Ok(())
    }

    /// Moves to `next` by a single rule or, failing that, a rearrangement.
    pub fn goto(&mut self, next: &Word) -> Result<()> {
        if *next == self.word {
            return Ok(());
        }
        if let Some(inst) = find_instance(&self.word, next, self.max_rule) {
            return self.apply(inst);
        }
        self.reorder_to(next)
    }

    /// [`Deriver::goto`] with a word given as text.
    pub fn go(&mut self, next: &str) -> Result<()> {
        self.goto(&next.parse()?)
    }

    pub fn finish(self) -> Derivation {
        Derivation { start: self.start, steps: self.steps, end: self.word }
    }
}

/// Follows the proof chain of a derived rule at concrete indices.
fn transcribe(id: u8, s: Subst, lhs: Word) -> Result<Derivation> {
    let (j, k, l) = (s.0[0].unwrap_or(0), s.0[1].unwrap_or(0), s.0[2].unwrap_or(0));
    let mut d = Deriver::new(lhs, id - 1);
    let w = |g: Generator, n: usize| -> String { vec![g.to_string(); n].join(" ") };
    let wj = |n| w(Generator::W(j), n);
    let wk = |n| w(Generator::W(k), n);
    let pair = |n: usize| vec![format!("w[{j}] w[{k}]"); n].join(" ");
    match id {
        21 => {
            d.go(&format!("X[{j},{k}] X[{j},{k}] H[{j},{l}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{k},{l}] X[{j},{k}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{k},{l}]"))?;
        }
        22 => {
            d.go(&format!("X[{j},{k}] X[{j},{k}] H[{l},{j}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{l},{k}] X[{j},{k}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{l},{k}]"))?;
        }
        23 => {
            d.go(&format!("H[{j},{k}] H[{j},{k}] X[{j},{k}] H[{j},{k}]"))?;
            d.go(&format!("H[{j},{k}] {} H[{j},{k}] H[{j},{k}]", wk(4)))?;
            d.go(&format!("H[{j},{k}] {}", wk(4)))?;
        }
        24 => {
            d.go(&format!("{} {} H[{j},{k}]", wk(8), wj(2)))?;
            d.go(&format!("{} {} H[{j},{k}]", wk(6), pair(2)))?;
            d.go(&format!("{} {} H[{j},{k}] {}", wk(6), pair(1), pair(1)))?;
            d.go(&format!("{} H[{j},{k}] {}", wk(6), pair(2)))?;
            d.go(&format!("{} H[{j},{k}] {} {}", wk(6), wk(2), wj(2)))?;
        }
        25 => {
            d.go(&format!("X[{j},{k}] X[{j},{k}] X[{j},{l}] H[{k},{l}]"))?;
            d.go(&format!("X[{j},{k}] X[{k},{l}] X[{j},{k}] H[{k},{l}]"))?;
            d.go(&format!("X[{j},{k}] X[{k},{l}] H[{j},{l}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{j},{k}] X[{k},{l}] X[{j},{k}]"))?;
            d.go(&format!("X[{j},{k}] H[{j},{k}] X[{j},{k}] X[{j},{l}]"))?;
            d.go(&format!("H[{j},{k}] {} X[{j},{k}] X[{j},{l}]", wk(4)))?;
        }
        26 => {
            d.go(&format!("{} H[{j},{k}] {} {}", wj(6), wj(3), wk(5)))?;
            d.go(&format!("{} H[{j},{k}] {} {} {}", wj(6), pair(1), wj(2), wk(4)))?;
            d.go(&format!("{} {} H[{j},{k}] {} {}", wj(6), pair(1), wj(2), wk(4)))?;
            d.go(&format!("{} {} H[{j},{k}] {} {}", wj(7), wk(1), wk(4), wj(2)))?;
            d.go(&format!("{} {} X[{j},{k}] H[{j},{k}] {}", wj(7), wk(1), wj(2)))?;
            d.go(&format!("{} X[{j},{k}] {} H[{j},{k}] {}", wj(7), wj(1), wj(2)))?;
            for i in 1..=7 {
                d.go(&format!("{} X[{j},{k}] {} {} H[{j},{k}] {}", wj(7 - i), wk(i), wj(1), wj(2)))?;
            }
        }
        27 => {
            d.go(&format!("H[{j},{k}] X[{j},{k}] {}", wk(1)))?;
            d.go(&format!("{} H[{j},{k}] {}", wk(4), wk(1)))?;
            d.go(&format!("{} H[{j},{k}] {} {}", wk(4), wk(1), wj(8)))?;
            d.go(&format!("{} H[{j},{k}] {} {}", wk(4), pair(1), wj(7)))?;
            d.go(&format!("{} {} H[{j},{k}] {}", wk(4), pair(1), wj(7)))?;
            d.go(&format!("{} {} H[{j},{k}] {}", wj(1), wk(5), wj(7)))?;
        }
        28..=30 => {
            let a = (31 - id) as usize;
            let p = 4 + a;
            for i in 1..=a {
                d.go(&format!("H[{j},{k}] {} X[{j},{k}] {}", wj(a - i), wk(i)))?;
            }
            d.go(&format!("{} H[{j},{k}] {}", wk(4), wk(a)))?;
            d.go(&format!("{} X[{j},{k}] X[{j},{k}] H[{j},{k}] {}", wk(4), wk(a)))?;
            d.go(&format!("{} X[{j},{k}] H[{j},{k}] {}", wk(4), wk(4 + a)))?;
            d.go(&format!("{} X[{j},{k}] H[{j},{k}] {} {}", wk(4), wj(8), wk(p)))?;
            d.go(&format!("{} X[{j},{k}] H[{j},{k}] {} {}", wk(4), pair(p), wj(8 - p)))?;
            for i in 1..=p {
                d.go(&format!("{} X[{j},{k}] {} H[{j},{k}] {} {}", wk(4), pair(i), pair(p - i), wj(8 - p)))?;
            }
            for i in 1..=p {
                d.go(&format!("{} {} X[{j},{k}] {} H[{j},{k}] {}", wk(4), pair(i), pair(p - i), wj(8 - p)))?;
            }
            d.go(&format!("{} {} X[{j},{k}] H[{j},{k}] {}", wj(p), wk(4 + p), wj(8 - p)))?;
            d.go(&format!("{} {} X[{j},{k}] H[{j},{k}] {}", wj(p), wk(p - 4), wj(8 - p)))?;
        }
        31 => {
            d.go("H[3,4] H[1,2] H[1,3] X[2,3] H[3,4]")?;
            d.go("H[3,4] H[1,2] H[1,3] H[2,4] X[2,3]")?;
            d.go("H[1,2] H[3,4] H[1,3] H[2,4] X[2,3]")?;
            d.go("H[1,3] H[2,4] H[1,2] H[3,4] X[2,3]")?;
            d.go("H[1,3] H[2,4] H[1,2] X[2,3] H[2,4]")?;
            d.go("H[1,3] H[2,4] X[2,3] H[1,3] H[2,4]")?;
            d.go("H[1,3] H[2,4] X[2,3] H[2,4] H[1,3]")?;
        }
        32 => {
            d.go("H[3,4] H[1,2] X[2,3] H[1,2] H[3,4] X[3,4] X[3,4]")?;
            d.go("H[3,4] H[1,2] X[2,3] H[1,2] w^4[4] H[3,4] X[3,4]")?;
            d.go("H[3,4] w^4[4] H[1,2] X[2,3] H[1,2] H[3,4] X[3,4]")?;
            d.go("X[3,4] H[3,4] H[1,2] X[2,3] H[1,2] H[3,4] X[3,4]")?;
            d.go("X[3,4] H[1,3] H[2,4] X[2,3] H[2,4] H[1,3] X[3,4]")?;
            d.go("X[3,4] H[2,4] H[1,3] X[2,3] H[1,3] H[2,4] X[3,4]")?;
            d.go("H[2,3] X[3,4] H[1,3] X[2,3] H[1,3] H[2,4] X[3,4]")?;
            d.go("H[2,3] H[1,4] X[3,4] X[2,3] H[1,3] H[2,4] X[3,4]")?;
            d.go("H[2,3] H[1,4] X[2,4] X[3,4] H[1,3] H[2,4] X[3,4]")?;
            d.go("H[2,3] H[1,4] X[2,4] H[1,4] X[3,4] H[2,4] X[3,4]")?;
            d.go("H[2,3] H[1,4] X[2,4] H[1,4] H[2,3] X[3,4] X[3,4]")?;
            d.go("H[2,3] H[1,4] X[2,4] H[1,4] H[2,3]")?;
        }
        _ => return Err(Error::Precondition(format!("rule {id} is not derived"))),
    }
    Ok(d.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::rules::derived_rules;

    #[test]
    fn every_derived_instance_replays_over_base_rules() {
        for schema in derived_rules(4) {
            for s in schema.instantiations(4) {
                let d = derived_rule_derivation(schema.id, s).unwrap();
                assert!(d.max_rule() <= 20, "rule {} uses {}", schema.id, d.max_rule());
                d.check().unwrap();
            }
        }
    }

    #[test]
    fn rule_23_is_the_inverse_of_rule_18() {
        let d = derived_rule_derivation(23, Subst::jk(1, 2)).unwrap();
        let used: Vec<u8> = d.steps.iter().map(|s| s.rule).collect();
        assert_eq!(used, vec![2, 18, 2]);
    }

    #[test]
    fn reversal_and_text_round_trip() {
        let d = derived_rule_derivation(25, Subst::jkl(1, 2, 4)).unwrap();
        d.reversed().check().unwrap();
        let back = Derivation::from_text(&d.to_text(), None).unwrap();
        assert_eq!(back, d);
    }
}
