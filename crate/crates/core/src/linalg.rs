//! Square matrices over `D[ω]`, the two-level generators that act on them,
//! and the level measure that the synthesis algorithm decreases.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::RingElem;

/// A one- or two-level generator with 1-based indices.
///
/// * `X(j, k)` swaps basis states `j < k`.
/// * `H(j, k)` is the Hadamard matrix on states `j < k`.
/// * `W(j)` multiplies state `j` by `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize, usize),
    H(usize, usize),
    W(usize),
}

impl Generator {
    pub fn x(j: usize, k: usize) -> Result<Self> {
        Generator::X(j, k).validated()
    }

    pub fn h(j: usize, k: usize) -> Result<Self> {
        Generator::H(j, k).validated()
    }

    pub fn w(j: usize) -> Result<Self> {
        Generator::W(j).validated()
    }

    /// Checks `1 ≤ j < k`.
    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Generator::X(j, k) | Generator::H(j, k) => j >= 1 && j < k,
            Generator::W(j) => j >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidGenerator(self.to_string()))
        }
    }

    /// The largest index mentioned.
    pub fn extent(&self) -> usize {
        match *self {
            Generator::X(_, k) | Generator::H(_, k) => k,
            Generator::W(j) => j,
        }
    }

    /// The indices mentioned, in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Generator::X(j, k) | Generator::H(j, k) => vec![j, k],
            Generator::W(j) => vec![j],
        }
    }

    /// Whether the generator is one of `X[j,j+1]`, `H[1,2]`, `ω[1]`.
    pub fn is_basic(&self) -> bool {
        match *self {
            Generator::X(j, k) => k == j + 1,
            Generator::H(j, k) => (j, k) == (1, 2),
            Generator::W(j) => j == 1,
        }
    }

    pub fn is_monomial(&self) -> bool {
        !matches!(self, Generator::H(..))
    }

    /// The generator as an `n × n` matrix.
    pub fn matrix(&self, n: usize) -> Result<GenMatrix> {
        let mut m = GenMatrix::identity(n);
        m.apply_generator(*self)?;
        Ok(m)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(j, k) => write!(f, "X[{j},{k}]"),
            Generator::H(j, k) => write!(f, "H[{j},{k}]"),
            Generator::W(j) => write!(f, "w[{j}]"),
        }
    }
}

/// The level `(j, k, m)` of a unitary: pivot column, its lde, and the number
/// of pivot entries attaining that lde.  Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Level {
    pub j: usize,
    pub k: u32,
    pub m: usize,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.j, self.k, self.m)
    }
}

/// A dense `n × n` matrix over `D[ω]`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenMatrix {
    n: usize,
    entries: Vec<RingElem>,
}

impl GenMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![RingElem::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = RingElem::one();
        }
        GenMatrix { n, entries }
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Ok(GenMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &RingElem {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: RingElem) {
        self.entries[row * self.n + col] = v;
    }

    /// Column `j` (1-based).
    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.n).map(|r| self.get(r, j - 1).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, rhs: &GenMatrix) -> Result<GenMatrix> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!("{} vs {}", self.n, rhs.n)));
        }
        let n = self.n;
        let mut out = GenMatrix { n, entries: vec![RingElem::zero(); n * n] };
        for r in 0..n {
            for c in 0..n {
                let mut acc = RingElem::zero();
                for t in 0..n {
                    let a = self.get(r, t);
                    let b = rhs.get(t, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> GenMatrix {
        let n = self.n;
        let mut out = GenMatrix { n, entries: vec![RingElem::zero(); n * n] };
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self).map(|p| p.is_identity()).unwrap_or(false)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn tensor(&self, rhs: &GenMatrix) -> GenMatrix {
        let (a, b) = (self.n, rhs.n);
        let n = a * b;
        let mut out = GenMatrix { n, entries: vec![RingElem::zero(); n * n] };
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.get(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out.set(r1 * b + r2, c1 * b + c2, x * rhs.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    /// Left-multiplies by `g` in place, touching only the rows `g` mentions.
    pub fn apply_generator(&mut self, g: Generator) -> Result<()> {
        let g = g.validated()?;
        if g.extent() > self.n {
            return Err(Error::Dimension(format!("{g} acts outside dimension {}", self.n)));
        }
        let n = self.n;
        match g {
            Generator::X(j, k) => {
                for c in 0..n {
                    self.entries.swap((j - 1) * n + c, (k - 1) * n + c);
                }
            }
            Generator::W(j) => {
                for c in 0..n {
                    let i = (j - 1) * n + c;
                    self.entries[i] = self.entries[i].mul_omega_pow(1);
                }
            }
            Generator::H(j, k) => {
                for c in 0..n {
                    let x = self.get(j - 1, c).clone();
                    let y = self.get(k - 1, c).clone();
                    if x.is_zero() && y.is_zero() {
                        continue;
                    }
                    self.set(j - 1, c, (&x + &y).div_sqrt2());
                    self.set(k - 1, c, (&x - &y).div_sqrt2());
                }
            }
        }
        Ok(())
    }

    /// Left-multiplies by the inverse of `g`.
    pub fn apply_generator_inverse(&mut self, g: Generator) -> Result<()> {
        match g {
            Generator::W(_) => {
                for _ in 0..7 {
                    self.apply_generator(g)?;
                }
                Ok(())
            }
            _ => self.apply_generator(g),
        }
    }

    /// The largest lde among all entries.
    pub fn lde(&self) -> u32 {
        self.entries.iter().map(RingElem::lde).max().unwrap_or(0)
    }

    /// The greatest 1-based `j` with `M e_j ≠ e_j`, or 0 for the identity.
    pub fn pivot_column(&self) -> usize {
        (1..=self.n)
            .rev()
            .find(|&j| {
                (0..self.n).any(|r| {
                    let e = self.get(r, j - 1);
                    if r == j - 1 {
                        !e.is_one()
                    } else {
                        !e.is_zero()
                    }
                })
            })
            .unwrap_or(0)
    }

    /// The level of a unitary matrix; `(0,0,0)` exactly for the identity.
    pub fn level(&self) -> Level {
        let j = self.pivot_column();
        if j == 0 {
            return Level::default();
        }
        let col = self.column(j);
        let k = col.iter().map(RingElem::lde).max().unwrap_or(0);
        let m = if k == 0 { 0 } else { col.iter().filter(|e| e.lde() == k).count() };
        Level { j, k, m }
    }

    pub fn is_monomial(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).filter(|&c| !self.get(r, c).is_zero()).count() == 1)
    }
}

/// Common gates embedded in `U_n(D[ω])`: `n = 2` for one-qubit gates and
/// `n = 4` for CNOT (control on the first qubit).
pub fn clifford_t_gate(name: &str) -> Result<GenMatrix> {
    let one = RingElem::one;
    let z = RingElem::zero;
    let w = RingElem::omega_pow;
    match name.to_ascii_lowercase().as_str() {
        "x" => GenMatrix::from_rows(vec![vec![z(), one()], vec![one(), z()]]),
        "h" => Generator::H(1, 2).matrix(2),
        "s" => GenMatrix::from_rows(vec![vec![one(), z()], vec![z(), w(2)]]),
        "t" => GenMatrix::from_rows(vec![vec![one(), z()], vec![z(), w(1)]]),
        "z" => GenMatrix::from_rows(vec![vec![one(), z()], vec![z(), w(4)]]),
        "cnot" | "cx" => Generator::X(3, 4).matrix(4),
        "w" | "omega" => GenMatrix::from_rows(vec![vec![w(1), z()], vec![z(), w(1)]]),
        other => Err(Error::Precondition(format!("unknown gate `{other}`"))),
    }
}

/// The two-qubit gate set as 4×4 matrices: the global phase `ωI`, then
/// `g1 = g ⊗ I` and `g2 = I ⊗ g` for `g ∈ {H, S, T}`, then CNOT.
pub fn clifford_t_gates() -> Vec<(&'static str, GenMatrix)> {
    let id2 = GenMatrix::identity(2);
    let one = |g: &str| clifford_t_gate(g).expect("known gate");
    let mut out = vec![("OMEGA", one("w").tensor(&id2))];
    for (g, n1, n2) in [("h", "H1", "H2"), ("s", "S1", "S2"), ("t", "T1", "T2")] {
        out.push((n1, one(g).tensor(&id2)));
        out.push((n2, id2.tensor(&one(g))));
    }
    out.push(("CNOT", one("cnot")));
    out
}

/// The names accepted by [`clifford_t_gate`].
pub const GATE_NAMES: [&str; 7] = ["x", "h", "s", "t", "z", "cnot", "w"];

impl fmt::Display for GenMatrix {
    /// Writes the dimension on the first line, then one row per line with
    /// entries separated by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(";"))?;
        }
        Ok(())
    }
}

impl FromStr for GenMatrix {
    type Err = Error;

    /// Reads the text format written by `Display`.  Blank lines and lines
    /// starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines =
            s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
        let n: usize = first.parse().map_err(|_| Error::parse(ln, format!("bad dimension `{first}`")))?;
        if n == 0 {
            return Err(Error::parse(ln, "dimension must be positive"));
        }
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            let row: Vec<RingElem> = line
                .split(';')
                .map(|e| {
                    e.parse::<RingElem>().map_err(|err| match err {
                        Error::Parse { msg, .. } => Error::parse(ln, msg),
                        other => other,
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::parse(ln, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(0, format!("expected {n} rows, found {}", rows.len())));
        }
        GenMatrix::from_rows(rows)
    }
}
