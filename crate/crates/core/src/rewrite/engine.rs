//! Normal-sequence commutation, word normalisation and equivalence, with
//! certificates stored as shared step sequences.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{GenMatrix, Generator};
use crate::synth::{next_syllable, next_syllable_unchecked, syllables_to_word, synthesize};
use crate::words::{apply_rule, expand_steps, Derivation, Deriver, RuleInstance, Word};

use super::lemma::block_step;
use super::tactics::{basify, prove, TACTIC_RULES};

/// Whether an edge is an arbitrary generator or the algorithm's own step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Simple,
    Normal,
}

/// An edge of the state graph: `target = ⟦label⟧ · source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateEdge {
    pub source: GenMatrix,
    pub label: Word,
    pub target: GenMatrix,
    pub kind: EdgeKind,
}

/// The normal edge at `s`: the first syllable the synthesis algorithm emits.
pub fn normal_edge(s: &GenMatrix) -> Result<StateEdge> {
    if s.dim() > 4 {
        return Err(Error::Dimension(format!("the rewrite engine works for n <= 4, got {}", s.dim())));
    }
    if s.is_identity() {
        return Err(Error::Precondition("the identity state has no normal edge".into()));
    }
    let syl = next_syllable(s)?;
    let mut target = s.clone();
    syl.apply(&mut target)?;
    Ok(StateEdge { source: s.clone(), label: syl.to_word(), target, kind: EdgeKind::Normal })
}

/// The normal word at `s`: the flattened synthesis of `s`, so that
/// `⟦normal_word(s)⟧ = s⁻¹`.
pub fn normal_word(s: &GenMatrix) -> Result<Word> {
    Ok(syllables_to_word(&synthesize(s)?))
}

#[derive(Debug)]
enum Node {
    Steps(Arc<Vec<RuleInstance>>),
    Seq { parts: Vec<(Arc<Node>, usize)>, len: usize },
}

impl Node {
    fn len(&self) -> usize {
        match self {
            Node::Steps(s) => s.len(),
            Node::Seq { len, .. } => *len,
        }
    }

    fn seq(parts: Vec<(Arc<Node>, usize)>) -> Node {
        let len = parts.iter().map(|(p, _)| p.len()).sum();
        Node::Seq { parts, len }
    }
}

/// A derivation over rules 1–20 kept in shared pieces, so repeated
/// sub-proofs are stored once.  Expand it with [`Certificate::to_derivation`]
/// or stream it with [`Certificate::for_each_step`].
#[derive(Clone, Debug)]
pub struct Certificate {
    pub start: Word,
    pub end: Word,
    parts: Vec<(Arc<Node>, bool)>,
}

impl Certificate {
    fn new(start: Word, end: Word, root: Arc<Node>) -> Self {
        Certificate { start, end, parts: vec![(root, false)] }
    }

    /// The number of rule steps.
    pub fn len(&self) -> usize {
        self.parts.iter().map(|(p, _)| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same proof read backwards.
    pub fn reversed(&self) -> Self {
        Certificate {
            start: self.end.clone(),
            end: self.start.clone(),
            parts: self.parts.iter().rev().map(|(p, r)| (p.clone(), !r)).collect(),
        }
    }

    /// `self` followed by `next`; `next` must start where `self` ends.
    pub fn then(&self, next: &Certificate) -> Result<Self> {
        if self.end != next.start {
            return Err(Error::internal("certificates do not chain"));
        }
        let mut parts = self.parts.clone();
        parts.extend(next.parts.iter().cloned());
        Ok(Certificate { start: self.start.clone(), end: next.end.clone(), parts })
    }

    /// Calls `f` on every step in order, without materialising the list.
    pub fn for_each_step(&self, mut f: impl FnMut(RuleInstance) -> Result<()>) -> Result<()> {
        let mut stack: Vec<(&Node, usize, bool)> = self.parts.iter().rev().map(|(p, r)| (&**p, 0, *r)).collect();
        while let Some((node, offset, rev)) = stack.pop() {
            match node {
                Node::Steps(steps) => {
                    if rev {
                        for s in steps.iter().rev() {
                            f(s.inverse().shifted(offset))?;
                        }
                    } else {
                        for s in steps.iter() {
                            f(s.shifted(offset))?;
                        }
                    }
                }
                Node::Seq { parts, .. } => {
                    if rev {
                        stack.extend(parts.iter().map(|(p, o)| (&**p, offset + o, true)));
                    } else {
                        stack.extend(parts.iter().rev().map(|(p, o)| (&**p, offset + o, false)));
                    }
                }
            }
        }
        Ok(())
    }

    /// The flat derivation.
    pub fn to_derivation(&self) -> Result<Derivation> {
        let mut steps = Vec::with_capacity(self.len());
        self.for_each_step(|s| {
            steps.push(s);
            Ok(())
        })?;
        Ok(Derivation { start: self.start.clone(), steps, end: self.end.clone() })
    }

    /// Replays every step from `start` and checks the result is `end`.
    pub fn check(&self) -> Result<CertStats> {
        let mut w = self.start.clone();
        let mut stats = CertStats { steps: 0, max_word_len: w.len(), histogram: BTreeMap::new() };
        self.for_each_step(|s| {
            w = apply_rule(&w, &s)
                .map_err(|e| Error::InvalidDerivation { step: stats.steps + 1, reason: e.to_string() })?;
            stats.steps += 1;
            stats.max_word_len = stats.max_word_len.max(w.len());
            *stats.histogram.entry(s.rule).or_insert(0) += 1;
            Ok(())
        })?;
        if w != self.end {
            return Err(Error::InvalidDerivation { step: stats.steps, reason: format!("replay ends at `{w}`") });
        }
        Ok(stats)
    }

    /// Writes the derivation text format without building the step list.
    pub fn write_text(&self, out: &mut impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::internal(format!("write failed: {e}"));
        writeln!(out, "# start: {}", self.start).map_err(io)?;
        writeln!(out, "# end: {}", self.end).map_err(io)?;
        self.for_each_step(|s| writeln!(out, "{s}").map_err(io))
    }
}

/// Facts gathered while replaying a certificate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertStats {
    pub steps: usize,
    pub max_word_len: usize,
    pub histogram: BTreeMap<u8, usize>,
}

/// The result of [`Engine::normalize`].
#[derive(Clone, Debug)]
pub struct Normalization {
    pub normal_form: Word,
    /// A proof `w ≈ normal_form` over rules 1–20, when requested.
    pub cert: Option<Certificate>,
}

struct Frame {
    key: (GenMatrix, Word),
    plan: Option<Plan>,
}

struct Plan {
    head: Vec<(Arc<Node>, usize)>,
    calls: Vec<(GenMatrix, Word)>,
}

/// The completeness engine for dimension `n ≤ 4`, with a memo of proved
/// commutations shared across calls.
pub struct Engine {
    n: usize,
    commutes: HashMap<(GenMatrix, Word), Arc<Node>>,
    normal_lens: HashMap<GenMatrix, usize>,
    max_depth: usize,
    plans: HashMap<(GenMatrix, Word), Plan>,
    budget: usize,
    built: usize,
}

/// Default cap on commutation nodes built by one call.
pub const DEFAULT_NODE_BUDGET: usize = 400_000;

fn leaf(steps: Vec<RuleInstance>) -> Arc<Node> {
    Arc::new(Node::Steps(Arc::new(steps)))
}

fn apply_left(m: &GenMatrix, w: &Word) -> Result<GenMatrix> {
    let mut out = m.clone();
    for g in w.iter().rev() {
        out.apply_generator(*g)?;
    }
    Ok(out)
}

fn inverse_generator_matrix(g: Generator, n: usize) -> Result<GenMatrix> {
    let mut m = GenMatrix::identity(n);
    m.apply_generator_inverse(g)?;
    Ok(m)
}

/// Rewrites `w` into basic generators; returns the basic word and the
/// steps over rules 1–20.
pub(crate) fn basic_form(w: &Word) -> Result<(Word, Vec<RuleInstance>)> {
    let mut d = Deriver::new(w.clone(), TACTIC_RULES);
    basify(&mut d, 0, w.len())?;
    let der = d.finish();
    Ok((der.end, expand_steps(&der.steps)?))
}

impl Engine {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::Dimension(format!("the rewrite engine works for 1 <= n <= 4, got {n}")));
        }
        Ok(Engine {
            n,
            commutes: HashMap::new(),
            plans: HashMap::new(),
            normal_lens: HashMap::new(),
            max_depth: 0,
            budget: DEFAULT_NODE_BUDGET,
            built: 0,
        })
    }

    /// Caps the commutation nodes a single `normalize`, `decide_equiv` or
    /// `commute_normal` call may build; exceeding it gives `Error::Budget`.
    pub fn set_node_budget(&mut self, budget: usize) {
        self.budget = budget;
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The deepest chain of nested commutations met so far.
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// How many distinct commutations have been proved.
    pub fn memo_size(&self) -> usize {
        self.commutes.len()
    }

    fn normal_len(&mut self, s: &GenMatrix) -> Result<usize> {
        if let Some(&l) = self.normal_lens.get(s) {
            return Ok(l);
        }
        let l = normal_word(s)?.len();
        self.normal_lens.insert(s.clone(), l);
        Ok(l)
    }

    /// The first proof steps for the block `bw` at `s`, and the blocks
    /// still to commute (each at its state), in certificate order.
    fn plan(&mut self, s: &GenMatrix, bw: &Word) -> Result<Plan> {
        if let Some(p) = self.plans.remove(&(s.clone(), bw.clone())) {
            return Ok(p);
        }
        match self.plan_direct(s, bw) {
            Err(_) if bw.len() > 1 => self.plan_split(s, bw),
            other => other,
        }
    }

    /// Cuts a block the main lemma cannot take whole into the longest
    /// suffixes it can, commuted one after another.
    fn plan_split(&mut self, s: &GenMatrix, bw: &Word) -> Result<Plan> {
        let mut cur = s.clone();
        let mut rest = bw.to_vec();
        let mut calls = Vec::new();
        while !rest.is_empty() {
            let mut found = None;
            for l in (1..=rest.len()).rev() {
                let piece = Word::from(rest[rest.len() - l..].to_vec());
                match self.plan_direct(&cur, &piece) {
                    Ok(p) => {
                        found = Some((piece, p));
                        break;
                    }
                    Err(e) if l == 1 => return Err(e),
                    Err(_) => {}
                }
            }
            let (piece, p) = found.expect("the loop returns or finds a piece");
            rest.truncate(rest.len() - piece.len());
            let next = apply_left(&cur, &piece)?;
            self.plans.insert((cur.clone(), piece.clone()), p);
            calls.push((cur, piece));
            cur = next;
        }
        calls.reverse();
        Ok(Plan { head: vec![], calls })
    }

    fn plan_direct(&mut self, s: &GenMatrix, bw: &Word) -> Result<Plan> {
        let n = self.n;
        let b = bw.evaluate(n)?;
        if s.is_identity() {
            let lhs = normal_word(&b)?.concat(bw);
            let d = prove(&lhs, &Word::new(), n)?;
            return Ok(Plan { head: vec![(leaf(expand_steps(&d.steps)?), 0)], calls: vec![] });
        }
        let r = b.mul(s)?;
        if r.is_identity() {
            let d = prove(bw, &normal_word(s)?, n)?;
            return Ok(Plan { head: vec![(leaf(expand_steps(&d.steps)?), 0)], calls: vec![] });
        }
        let (ml, split) = block_step(s, bw)?;
        let mut rk = r;
        for syl in &ml.n_prime {
            syl.apply(&mut rk)?;
        }
        let pre = self.normal_len(&rk)?;
        let mut cur = s.clone();
        next_syllable_unchecked(s)?.apply(&mut cur)?;
        let bound = s.level();
        let mut calls = Vec::with_capacity(split.pieces.len());
        for piece in split.pieces {
            if cur.level() >= bound {
                return Err(Error::internal(format!("commutation state does not descend below {bound}")));
            }
            let next = piece.evaluate(n)?.mul(&cur)?;
            calls.push((cur, piece));
            cur = next;
        }
        if cur != rk {
            return Err(Error::internal("G' does not reach the state after N'"));
        }
        calls.reverse();
        Ok(Plan { head: vec![(leaf(ml.cert.steps), pre), (leaf(split.steps), pre)], calls })
    }

    fn commute_node(&mut self, s: &GenMatrix, bw: &Word) -> Result<Arc<Node>> {
        let root = (s.clone(), bw.clone());
        if let Some(c) = self.commutes.get(&root) {
            return Ok(c.clone());
        }
        let mut stack = vec![Frame { key: root.clone(), plan: None }];
        while let Some(top) = stack.last_mut() {
            if self.commutes.contains_key(&top.key) {
                stack.pop();
                continue;
            }
            if top.plan.is_none() {
                let (s, bw) = top.key.clone();
                let plan = self.plan(&s, &bw)?;
                stack.last_mut().expect("frame").plan = Some(plan);
            }
            let top = stack.last().expect("frame");
            let plan = top.plan.as_ref().expect("planned");
            if let Some(next) = plan.calls.iter().find(|k| !self.commutes.contains_key(*k)) {
                let next = next.clone();
                stack.push(Frame { key: next, plan: None });
                self.max_depth = self.max_depth.max(stack.len());
                continue;
            }
            let mut parts = plan.head.clone();
            for k in &plan.calls {
                parts.push((self.commutes[k].clone(), 0));
            }
            let key = top.key.clone();
            self.commutes.insert(key, Arc::new(Node::seq(parts)));
            self.built += 1;
            if self.built > self.budget {
                return Err(Error::Budget(self.budget));
            }
            stack.pop();
        }
        Ok(self.commutes[&root].clone())
    }

    /// A proof of `normal_word(⟦g⟧ s) · g ≈ normal_word(s)`.
    pub fn commute_normal(&mut self, s: &GenMatrix, g: Generator) -> Result<Certificate> {
        if s.dim() != self.n {
            return Err(Error::Dimension(format!("state has dimension {}, engine {}", s.dim(), self.n)));
        }
        if !g.is_basic() || g.extent() > self.n {
            return Err(Error::InvalidGenerator(format!("{g} is not a basic generator of dimension {}", self.n)));
        }
        if !s.is_unitary() {
            return Err(Error::NotUnitary);
        }
        self.built = 0;
        let node = self.commute_node(s, &Word::from(vec![g]))?;
        let r = apply_left(s, &Word::from(vec![g]))?;
        let start = normal_word(&r)?.concat(&Word::from(vec![g]));
        Ok(Certificate::new(start, normal_word(s)?, node))
    }

    /// The normal form of `w` (the word with `⟦·⟧ = ⟦w⟧` read off the
    /// synthesis of `⟦w⟧⁻¹`) and, when `certify` is set, a proof.
    pub fn normalize(&mut self, w: &Word, certify: bool) -> Result<Normalization> {
        if w.extent() > self.n {
            return Err(Error::Dimension(format!("word extent {} exceeds dimension {}", w.extent(), self.n)));
        }
        let m = w.evaluate(self.n)?;
        let normal_form = normal_word(&m.adjoint())?;
        if !certify {
            return Ok(Normalization { normal_form, cert: None });
        }
        self.built = 0;
        let (basic, bsteps) = basic_form(w)?;
        let mut parts = vec![(leaf(bsteps), 0)];
        let mut s = GenMatrix::identity(self.n);
        for &g in basic.iter() {
            s = inverse_generator_matrix(g, self.n)?.mul(&s)?;
            parts.push((self.commute_node(&s, &Word::from(vec![g]))?, 0));
        }
        let cert = Certificate::new(w.clone(), normal_form.clone(), Arc::new(Node::seq(parts)));
        Ok(Normalization { normal_form, cert: Some(cert) })
    }

    /// Whether `⟦w1⟧ = ⟦w2⟧`; when equal and `certify` is set, a proof
    /// `w1 ≈ w2` through the common normal form.
    pub fn decide_equiv(&mut self, w1: &Word, w2: &Word, certify: bool) -> Result<(bool, Option<Certificate>)> {
        let n = self.n;
        for w in [w1, w2] {
            if w.extent() > n {
                return Err(Error::Dimension(format!("word extent {} exceeds dimension {n}", w.extent())));
            }
        }
        if w1.evaluate(n)? != w2.evaluate(n)? {
            return Ok((false, None));
        }
        if !certify {
            return Ok((true, None));
        }
        let a = self.normalize(w1, true)?;
        let b = self.normalize(w2, true)?;
        if a.normal_form != b.normal_form {
            return Err(Error::internal("co-evaluating words have different normal forms"));
        }
        let cert = a.cert.expect("certified").then(&b.cert.expect("certified").reversed())?;
        Ok((true, Some(cert)))
    }
}
