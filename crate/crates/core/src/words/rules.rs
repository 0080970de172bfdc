//! The relation tables as parameterised rewrite rules.
//!
//! Rules 1–20 are the defining relations.  Rules 21–32 are consequences of
//! them; each derived instance expands into a chain of rules 1–20 (see
//! [`super::derivation`]).

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Generator;
use crate::words::Word;

/// An index slot in a rule pattern: a variable (`j`, `k`, `l`, `t`) or a
/// fixed index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Idx {
    Var(usize),
    Lit(usize),
}

/// One token of a rule side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pat {
    W(Idx),
    X(Idx, Idx),
    H(Idx, Idx),
}

const VAR_NAMES: [&str; 4] = ["j", "k", "l", "t"];

/// An assignment of indices to the rule variables `j, k, l, t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst(pub [Option<usize>; 4]);

impl Subst {
    pub fn new(vals: &[(usize, usize)]) -> Self {
        let mut s = Subst::default();
        for &(v, i) in vals {
            s.0[v] = Some(i);
        }
        s
    }

    /// Shorthand for the common `j, k, l` substitutions.
    pub fn jkl(j: usize, k: usize, l: usize) -> Self {
        Subst([Some(j), Some(k), Some(l), None])
    }

    pub fn jk(j: usize, k: usize) -> Self {
        Subst([Some(j), Some(k), None, None])
    }

    pub fn j(j: usize) -> Self {
        Subst([Some(j), None, None, None])
    }

    fn get(&self, v: usize) -> usize {
        self.0[v].unwrap_or(0)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..4).filter_map(|v| self.0[v].map(|i| format!("{}={i}", VAR_NAMES[v]))).collect();
        if parts.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

impl std::str::FromStr for Subst {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Subst::default();
        if s == "-" {
            return Ok(out);
        }
        for part in s.split(',') {
            let (name, val) = part.split_once('=').ok_or_else(|| Error::parse(0, format!("bad binding `{part}`")))?;
            let v = VAR_NAMES
                .iter()
                .position(|n| *n == name.trim())
                .ok_or_else(|| Error::parse(0, format!("unknown variable `{name}`")))?;
            out.0[v] = Some(val.trim().parse().map_err(|_| Error::parse(0, format!("bad index `{val}`")))?);
        }
        Ok(out)
    }
}

/// A relation `lhs ≈ rhs` with a side condition on its variables.
pub struct RuleSchema {
    pub id: u8,
    pub lhs: Vec<Pat>,
    pub rhs: Vec<Pat>,
    /// Human-readable side condition, as printed in the tables.
    pub side: &'static str,
    cond: fn(&Subst) -> bool,
}

impl fmt::Debug for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleSchema({self})")
    }
}

impl RuleSchema {
    /// The variables the rule mentions.
    pub fn vars(&self) -> Vec<usize> {
        let mut seen = [false; 4];
        for p in self.lhs.iter().chain(&self.rhs) {
            for i in pat_indices(p) {
                if let Idx::Var(v) = i {
                    seen[v] = true;
                }
            }
        }
        (0..4).filter(|&v| seen[v]).collect()
    }

    /// Whether the substitution binds every variable and meets the side
    /// condition.
    pub fn admits(&self, s: &Subst) -> bool {
        self.vars().iter().all(|&v| s.0[v].is_some_and(|i| i >= 1)) && (self.cond)(s)
    }

    /// The two sides under `s`, as (source, target) for `dir`.
    pub fn instantiate(&self, s: &Subst, dir: Direction) -> Result<(Word, Word)> {
        if !self.admits(s) {
            return Err(Error::ConstraintViolated { rule: self.id });
        }
        let side = |ps: &[Pat]| -> Result<Word> {
            ps.iter()
                .map(|p| ground(p, s).validated().map_err(|_| Error::ConstraintViolated { rule: self.id }))
                .collect()
        };
        let (l, r) = (side(&self.lhs)?, side(&self.rhs)?);
        Ok(match dir {
            Direction::LR => (l, r),
            Direction::RL => (r, l),
        })
    }

    /// Every admissible substitution with indices in `1..=n`.
    pub fn instantiations(&self, n: usize) -> Vec<Subst> {
        let vars = self.vars();
        let mut out = Vec::new();
        let mut cur = Subst::default();
        fn rec(vars: &[usize], n: usize, cur: &mut Subst, rule: &RuleSchema, out: &mut Vec<Subst>) {
            match vars.split_first() {
                None => {
                    if rule.instantiate(cur, Direction::LR).is_ok() {
                        out.push(*cur);
                    }
                }
                Some((&v, rest)) => {
                    for i in 1..=n {
                        cur.0[v] = Some(i);
                        rec(rest, n, cur, rule, out);
                    }
                    cur.0[v] = None;
                }
            }
        }
        rec(&vars, n, &mut cur, self, &mut out);
        out
    }

    /// The largest fixed index in the rule, which bounds the dimension it
    /// needs.
    pub fn min_dimension(&self) -> usize {
        let lits = self.lhs.iter().chain(&self.rhs).flat_map(pat_indices).filter_map(|i| match i {
            Idx::Lit(v) => Some(v),
            Idx::Var(_) => None,
        });
        lits.max().unwrap_or(0).max(self.vars().len())
    }

    pub fn is_derived(&self) -> bool {
        self.id > 20
    }

    /// Evaluates both sides of every admissible instance in dimension `n`.
    /// Returns how many instances agree, or the first one that does not.
    pub fn check_sound(&self, n: usize) -> std::result::Result<usize, Subst> {
        if self.min_dimension() > n {
            return Ok(0);
        }
        let insts = self.instantiations(n);
        for s in &insts {
            let (l, r) = self.instantiate(s, Direction::LR).map_err(|_| *s)?;
            match (l.evaluate(n), r.evaluate(n)) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => return Err(*s),
            }
        }
        Ok(insts.len())
    }

    /// A copy whose right side gains a trailing `ω` on its first index,
    /// which makes the relation false.  Used to check that soundness
    /// sweeps notice a broken rule.
    pub fn corrupted(&self) -> RuleSchema {
        let first = self.lhs.iter().chain(&self.rhs).flat_map(pat_indices).next().unwrap_or(Idx::Lit(1));
        let mut rhs = self.rhs.clone();
        rhs.push(Pat::W(first));
        RuleSchema { id: self.id, lhs: self.lhs.clone(), rhs, side: self.side, cond: self.cond }
    }
}

fn pat_to_string(p: &Pat) -> String {
    let i = |x: &Idx| match x {
        Idx::Var(v) => VAR_NAMES[*v].to_string(),
        Idx::Lit(n) => n.to_string(),
    };
    match p {
        Pat::W(a) => format!("w[{}]", i(a)),
        Pat::X(a, b) => format!("X[{},{}]", i(a), i(b)),
        Pat::H(a, b) => format!("H[{},{}]", i(a), i(b)),
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ps: &[Pat]| {
            if ps.is_empty() {
                "ε".to_string()
            } else {
                ps.iter().map(pat_to_string).collect::<Vec<_>>().join(" ")
            }
        };
        write!(f, "({}) {} ≈ {}", self.id, side(&self.lhs), side(&self.rhs))?;
        if !self.side.is_empty() {
            write!(f, "  [{}]", self.side)?;
        }
        Ok(())
    }
}

fn pat_indices(p: &Pat) -> Vec<Idx> {
    match *p {
        Pat::W(a) => vec![a],
        Pat::X(a, b) | Pat::H(a, b) => vec![a, b],
    }
}

fn ground(p: &Pat, s: &Subst) -> Generator {
    let g = |i: Idx| match i {
        Idx::Var(v) => s.get(v),
        Idx::Lit(n) => n,
    };
    match *p {
        Pat::W(a) => Generator::W(g(a)),
        Pat::X(a, b) => Generator::X(g(a), g(b)),
        Pat::H(a, b) => Generator::H(g(a), g(b)),
    }
}

/// Parses a pattern such as `w^2[j] H[j,k]`.
fn pats(text: &str) -> Vec<Pat> {
    let idx = |t: &str| match VAR_NAMES.iter().position(|n| *n == t) {
        Some(v) => Idx::Var(v),
        None => Idx::Lit(t.parse().expect("pattern index")),
    };
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let open = tok.find('[').expect("pattern token");
        let inner: Vec<Idx> = tok[open + 1..tok.len() - 1].split(',').map(idx).collect();
        let (sym, pow) = match tok[..open].split_once('^') {
            Some((s, p)) => (s, p.parse::<usize>().expect("pattern power")),
            None => (&tok[..open], 1),
        };
        let p = match (sym, inner.as_slice()) {
            ("w", &[a]) => Pat::W(a),
            ("X", &[a, b]) => Pat::X(a, b),
            ("H", &[a, b]) => Pat::H(a, b),
            _ => panic!("bad pattern token {tok}"),
        };
        out.extend(std::iter::repeat_n(p, pow));
    }
    out
}

const J: usize = 0;
const K: usize = 1;
const L: usize = 2;
const T: usize = 3;

fn lt(s: &Subst, a: usize, b: usize) -> bool {
    s.get(a) < s.get(b)
}

fn no_cond(_: &Subst) -> bool {
    true
}

fn j_ne_k(s: &Subst) -> bool {
    s.get(J) != s.get(K)
}

fn j_lt_k(s: &Subst) -> bool {
    lt(s, J, K)
}

fn l_outside(s: &Subst) -> bool {
    lt(s, J, K) && s.get(L) != s.get(J) && s.get(L) != s.get(K)
}

fn disjoint(s: &Subst) -> bool {
    let (j, k, l, t) = (s.get(J), s.get(K), s.get(L), s.get(T));
    j < k && l < t && l != j && l != k && t != j && t != k
}

fn j_k_l(s: &Subst) -> bool {
    lt(s, J, K) && lt(s, K, L)
}

fn l_j_k(s: &Subst) -> bool {
    lt(s, L, J) && lt(s, J, K)
}

fn j_k_l_t(s: &Subst) -> bool {
    lt(s, J, K) && lt(s, K, L) && lt(s, L, T)
}

fn all_rules() -> &'static [RuleSchema] {
    static RULES: OnceLock<Vec<RuleSchema>> = OnceLock::new();
    RULES.get_or_init(|| {
        let r = |id, lhs: &str, rhs: &str, side, cond| RuleSchema { id, lhs: pats(lhs), rhs: pats(rhs), side, cond };
        vec![
            r(1, "w^8[j]", "", "", no_cond),
            r(2, "H[j,k] H[j,k]", "", "j<k", j_lt_k),
            r(3, "X[j,k] X[j,k]", "", "j<k", j_lt_k),
            r(4, "w[j] w[k]", "w[k] w[j]", "j≠k", j_ne_k),
            r(5, "w[l] H[j,k]", "H[j,k] w[l]", "j<k, l≠j,k", l_outside),
            r(6, "w[l] X[j,k]", "X[j,k] w[l]", "j<k, l≠j,k", l_outside),
            r(7, "H[j,k] H[l,t]", "H[l,t] H[j,k]", "j<k, l<t, disjoint", disjoint),
            r(8, "H[j,k] X[l,t]", "X[l,t] H[j,k]", "j<k, l<t, disjoint", disjoint),
            r(9, "X[j,k] X[l,t]", "X[l,t] X[j,k]", "j<k, l<t, disjoint", disjoint),
            r(10, "X[j,k] w[k]", "w[j] X[j,k]", "j<k", j_lt_k),
            r(11, "X[j,k] w[j]", "w[k] X[j,k]", "j<k", j_lt_k),
            r(12, "X[j,k] X[j,l]", "X[k,l] X[j,k]", "j<k<l", j_k_l),
            r(13, "X[j,k] X[l,j]", "X[l,k] X[j,k]", "l<j<k", l_j_k),
            r(14, "X[j,k] H[j,l]", "H[k,l] X[j,k]", "j<k<l", j_k_l),
            r(15, "X[j,k] H[l,j]", "H[l,k] X[j,k]", "l<j<k", l_j_k),
            r(16, "w[j] w[k] X[j,k]", "X[j,k] w[j] w[k]", "j<k", j_lt_k),
            r(17, "w[j] w[k] H[j,k]", "H[j,k] w[j] w[k]", "j<k", j_lt_k),
            r(18, "H[j,k] X[j,k]", "w^4[k] H[j,k]", "j<k", j_lt_k),
            r(19, "H[j,k] w^2[j] H[j,k]", "w^6[j] H[j,k] w^3[j] w^5[k]", "j<k", j_lt_k),
            r(20, "H[j,k] H[l,t] H[j,l] H[k,t]", "H[j,l] H[k,t] H[j,k] H[l,t]", "j<k<l<t", j_k_l_t),
            r(21, "H[j,l] X[j,k]", "X[j,k] H[k,l]", "j<k<l", j_k_l),
            r(22, "H[l,j] X[j,k]", "X[j,k] H[l,k]", "l<j<k", l_j_k),
            r(23, "X[j,k] H[j,k]", "H[j,k] w^4[k]", "j<k", j_lt_k),
            r(24, "w^2[j] H[j,k]", "w^6[k] H[j,k] w^2[k] w^2[j]", "j<k", j_lt_k),
            r(25, "X[j,l] H[k,l]", "H[j,k] w^4[k] X[j,k] X[j,l]", "j<k<l", j_k_l),
            r(26, "H[j,k] w^2[j] H[j,k]", "X[j,k] w^7[k] w[j] H[j,k] w^2[j]", "j<k", j_lt_k),
            r(27, "H[j,k] w[j] X[j,k]", "w[j] w^5[k] H[j,k] w^7[j]", "j<k", j_lt_k),
            r(28, "H[j,k] w^3[j] X[j,k]", "w^7[j] w^3[k] X[j,k] H[j,k] w[j]", "j<k", j_lt_k),
            r(29, "H[j,k] w^2[j] X[j,k]", "w^6[j] w^2[k] X[j,k] H[j,k] w^2[j]", "j<k", j_lt_k),
            r(30, "H[j,k] w[j] X[j,k]", "w^5[j] w[k] X[j,k] H[j,k] w^3[j]", "j<k", j_lt_k),
            r(31, "H[3,4] H[1,2] X[2,3] H[1,2] H[3,4]", "H[1,3] H[2,4] X[2,3] H[2,4] H[1,3]", "", no_cond),
            r(32, "H[3,4] H[1,2] X[2,3] H[1,2] H[3,4]", "H[2,3] H[1,4] X[2,4] H[1,4] H[2,3]", "", no_cond),
        ]
    })
}

/// The schema with the given id (1–32).
pub fn rule(id: u8) -> Result<&'static RuleSchema> {
    all_rules().get((id as usize).wrapping_sub(1)).ok_or(Error::UnknownRule(id))
}

/// The defining relations, ids 1–20, restricted to those that fit in
/// dimension `n`.
pub fn rule_table(n: usize) -> Vec<&'static RuleSchema> {
    all_rules()[..20].iter().filter(|r| r.min_dimension() <= n).collect()
}

/// The derived relations, ids 21–32, restricted to those that fit in
/// dimension `n`.
pub fn derived_rules(n: usize) -> Vec<&'static RuleSchema> {
    all_rules()[20..].iter().filter(|r| r.min_dimension() <= n).collect()
}

/// Which way a rule is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Replace an occurrence of the left side by the right side.
    LR,
    /// Replace an occurrence of the right side by the left side.
    RL,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::LR => Direction::RL,
            Direction::RL => Direction::LR,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LR => "LR",
            Direction::RL => "RL",
        })
    }
}

/// One application of a rule: which rule, which way, where, and with which
/// indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: u8,
    pub dir: Direction,
    pub pos: usize,
    pub subst: Subst,
}

impl RuleInstance {
    pub fn new(rule: u8, dir: Direction, pos: usize, subst: Subst) -> Self {
        RuleInstance { rule, dir, pos, subst }
    }

    /// The same rewrite performed backwards.
    pub fn inverse(self) -> Self {
        RuleInstance { dir: self.dir.flip(), ..self }
    }

    pub fn shifted(self, by: usize) -> Self {
        RuleInstance { pos: self.pos + by, ..self }
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.rule, self.dir, self.pos, self.subst)
    }
}

impl std::str::FromStr for RuleInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let f: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::parse(0, format!("bad derivation step `{s}`"));
        if f.len() != 4 {
            return Err(bad());
        }
        let rule = f[0].parse().map_err(|_| bad())?;
        let dir = match f[1] {
            "LR" => Direction::LR,
            "RL" => Direction::RL,
            _ => return Err(bad()),
        };
        let pos = f[2].parse().map_err(|_| bad())?;
        Ok(RuleInstance { rule, dir, pos, subst: f[3].parse()? })
    }
}

/// Rewrites one occurrence of a rule side inside `w`.
pub fn apply_rule(w: &Word, inst: &RuleInstance) -> Result<Word> {
    let schema = rule(inst.rule)?;
    let (from, to) = schema.instantiate(&inst.subst, inst.dir)?;
    let end = inst.pos + from.len();
    if end > w.len() || w[inst.pos..end] != from[..] {
        return Err(Error::NoMatch { rule: inst.rule, pos: inst.pos });
    }
    Ok(w.splice(inst.pos, end, &to))
}

fn unify(pats: &[Pat], word: &[Generator], s: &mut Subst) -> bool {
    if pats.len() != word.len() {
        return false;
    }
    let mut bind = |i: Idx, v: usize| -> bool {
        match i {
            Idx::Lit(n) => n == v,
            Idx::Var(x) => match s.0[x] {
                Some(b) => b == v,
                None => {
                    s.0[x] = Some(v);
                    true
                }
            },
        }
    };
    for (p, g) in pats.iter().zip(word) {
        let ok = match (*p, *g) {
            (Pat::W(a), Generator::W(j)) => bind(a, j),
            (Pat::X(a, b), Generator::X(j, k)) | (Pat::H(a, b), Generator::H(j, k)) => bind(a, j) && bind(b, k),
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// The substitution under which `window` is exactly the `dir` source side
/// of `schema`, when that side binds every variable and the side condition
/// holds.
pub fn match_side(schema: &RuleSchema, dir: Direction, window: &[Generator]) -> Option<Subst> {
    let pats = match dir {
        Direction::LR => &schema.lhs,
        Direction::RL => &schema.rhs,
    };
    let mut s = Subst::default();
    if !unify(pats, window, &mut s) {
        return None;
    }
    let bound = schema.vars().iter().all(|&v| s.0[v].is_some());
    (bound && schema.admits(&s)).then_some(s)
}

/// Matches a rule instance that turns `from` into `to` (whole windows).
fn match_window(from: &[Generator], to: &[Generator], max_rule: u8) -> Option<(u8, Direction, Subst)> {
    for schema in all_rules().iter().take(max_rule as usize) {
        for dir in [Direction::LR, Direction::RL] {
            let (pf, pt) = match dir {
                Direction::LR => (&schema.lhs, &schema.rhs),
                Direction::RL => (&schema.rhs, &schema.lhs),
            };
            if pf.len() != from.len() || pt.len() != to.len() {
                continue;
            }
            let mut s = Subst::default();
            if unify(pf, from, &mut s) && unify(pt, to, &mut s) && schema.admits(&s) {
                return Some((schema.id, dir, s));
            }
        }
    }
    None
}

/// Finds a single rule instance (with id at most `max_rule`) rewriting
/// `old` into `new`, if one exists.
pub fn find_instance(old: &Word, new: &Word, max_rule: u8) -> Option<RuleInstance> {
    let (a, b) = (old.as_slice(), new.as_slice());
    let mut p = 0;
    while p < a.len() && p < b.len() && a[p] == b[p] {
        p += 1;
    }
    let mut s = 0;
    while s < a.len() - p && s < b.len() - p && a[a.len() - 1 - s] == b[b.len() - 1 - s] {
        s += 1;
    }
    const SLACK: usize = 9;
    for grow in 0..=2 * SLACK {
        for left in 0..=grow.min(SLACK) {
            let right = grow - left;
            if right > SLACK || left > p || right > s {
                continue;
            }
            let start = p - left;
            let (ea, eb) = (a.len() - s + right, b.len() - s + right);
            if let Some((rule, dir, subst)) = match_window(&a[start..ea], &b[start..eb], max_rule) {
                return Some(RuleInstance { rule, dir, pos: start, subst });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn table_sizes() {
        assert_eq!(rule_table(4).len(), 20);
        assert_eq!(derived_rules(4).len(), 12);
        assert_eq!(derived_rules(3).len(), 10);
        assert_eq!(rule_table(3).len(), 16);
    }

    #[test]
    fn apply_rule_examples() {
        let out = apply_rule(&w("H[1,2] H[1,2] X[3,4]"), &RuleInstance::new(2, Direction::LR, 0, Subst::jk(1, 2)));
        assert_eq!(out.unwrap(), w("X[3,4]"));
        let out = apply_rule(&w("w[1] w[2]"), &RuleInstance::new(4, Direction::LR, 0, Subst::jk(1, 2)));
        assert_eq!(out.unwrap(), w("w[2] w[1]"));
        let bad = apply_rule(&w("X[1,2] w[2]"), &RuleInstance::new(10, Direction::LR, 0, Subst::jk(2, 1)));
        assert_eq!(bad, Err(Error::ConstraintViolated { rule: 10 }));
        let miss = apply_rule(&w("X[1,2] w[1]"), &RuleInstance::new(10, Direction::LR, 0, Subst::jk(1, 2)));
        assert_eq!(miss, Err(Error::NoMatch { rule: 10, pos: 0 }));
    }

    #[test]
    fn instance_text_round_trip() {
        let inst = RuleInstance::new(12, Direction::RL, 3, Subst::jkl(1, 2, 4));
        assert_eq!(inst.to_string(), "12 RL 3 j=1,k=2,l=4");
        assert_eq!(inst.to_string().parse::<RuleInstance>().unwrap(), inst);
        let fixed = RuleInstance::new(31, Direction::LR, 0, Subst::default());
        assert_eq!(fixed.to_string().parse::<RuleInstance>().unwrap(), fixed);
    }

    #[test]
    fn find_instance_recovers_insertions() {
        let old = w("X[1,3]");
        let new = w("X[2,3] X[2,3] X[1,3]");
        let inst = find_instance(&old, &new, 20).unwrap();
        assert_eq!(apply_rule(&old, &inst).unwrap(), new);
        let old = w("w^9[2]");
        let inst = find_instance(&old, &w("w[2]"), 20).unwrap();
        assert_eq!(inst.rule, 1);
    }
}
