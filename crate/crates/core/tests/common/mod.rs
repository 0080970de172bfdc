//! A floating-point oracle built from the gate definitions alone: complex
//! matrices for generators and words, independent of the exact library.

#![allow(dead_code)]

use domega::linalg::{GenMatrix, Generator};
use domega::ring::{CycInt, RingElem};
use domega::words::Word;
use num_traits::ToPrimitive;

pub type C = (f64, f64);

pub const TOL: f64 = 1e-9;

pub fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

pub fn close(a: C, b: C) -> bool {
    (a.0 - b.0).abs() < TOL && (a.1 - b.1).abs() < TOL
}

/// `e^{iπk/4}`.
pub fn omega(k: i64) -> C {
    let t = std::f64::consts::FRAC_PI_4 * k as f64;
    (t.cos(), t.sin())
}

/// `aω³ + bω² + cω + d` evaluated numerically.
pub fn cycint(a: i64, b: i64, c: i64, d: i64) -> C {
    [(a, 3), (b, 2), (c, 1), (d, 0)].iter().fold((0.0, 0.0), |acc, &(x, k)| cadd(acc, cmul((x as f64, 0.0), omega(k))))
}

pub fn from_cycint(x: &CycInt) -> C {
    let [a, b, c, d] = x.abcd().map(|v| v.to_f64().expect("finite"));
    [(a, 3), (b, 2), (c, 1), (d, 0)].iter().fold((0.0, 0.0), |acc, &(v, k)| cadd(acc, cmul((v, 0.0), omega(k))))
}

pub fn cdiv(a: C, b: C) -> C {
    let n = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
}

/// `num / (1+ω)^k`.
pub fn from_elem(x: &RingElem) -> C {
    let delta = cadd((1.0, 0.0), omega(1));
    (0..x.lde()).fold(from_cycint(x.numerator()), |acc, _| cdiv(acc, delta))
}

pub type CMat = Vec<Vec<C>>;

pub fn identity(n: usize) -> CMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }).collect()).collect()
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold((0.0, 0.0), |acc, t| cadd(acc, cmul(a[i][t], b[t][j])))).collect())
        .collect()
}

pub fn generator(g: Generator, n: usize) -> CMat {
    let mut m = identity(n);
    match g {
        Generator::X(j, k) => {
            m[j - 1][j - 1] = (0.0, 0.0);
            m[k - 1][k - 1] = (0.0, 0.0);
            m[j - 1][k - 1] = (1.0, 0.0);
            m[k - 1][j - 1] = (1.0, 0.0);
        }
        Generator::H(j, k) => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            m[j - 1][j - 1] = (r, 0.0);
            m[j - 1][k - 1] = (r, 0.0);
            m[k - 1][j - 1] = (r, 0.0);
            m[k - 1][k - 1] = (-r, 0.0);
        }
        Generator::W(j) => m[j - 1][j - 1] = omega(1),
    }
    m
}

/// `⟦g₁ ⋯ g_k⟧ = G₁ ⋯ G_k`.
pub fn word(w: &Word, n: usize) -> CMat {
    w.iter().fold(identity(n), |acc, g| matmul(&acc, &generator(*g, n)))
}

pub fn matches(exact: &GenMatrix, oracle: &CMat) -> bool {
    let n = exact.dim();
    (0..n).all(|i| (0..n).all(|j| close(from_elem(exact.get(i, j)), oracle[i][j])))
}
