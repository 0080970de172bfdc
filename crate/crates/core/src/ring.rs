//! Exact arithmetic in the cyclotomic integers `Z[ω]` and the dyadic ring
//! `D[ω] = Z[1/2, ω]`, where `ω = e^{iπ/4}`.
//!
//! A [`CycInt`] stores the coefficients of `aω³ + bω² + cω + d`.  A
//! [`RingElem`] is a fraction `x / δ^k` with `δ = 1 + ω`, kept with the least
//! possible `k`, so that structural equality is value equality and `k` is the
//! least δ-exponent (lde) of the element.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element `aω³ + bω² + cω + d` of `Z[ω]`.
///
/// Coefficients are stored by ascending power of `ω`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CycInt {
    coeffs: [BigInt; 4],
}

impl CycInt {
    /// Builds `aω³ + bω² + cω + d`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        CycInt { coeffs: [d.into(), c.into(), b.into(), a.into()] }
    }

    pub fn zero() -> Self {
        CycInt::default()
    }

    pub fn one() -> Self {
        CycInt::from_int(1)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        CycInt::new(0, 0, 0, v)
    }

    /// `ω^k`, for any integer `k`.
    pub fn omega_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut coeffs: [BigInt; 4] = Default::default();
        if k < 4 {
            coeffs[k] = BigInt::one();
        } else {
            coeffs[k - 4] = -BigInt::one();
        }
        CycInt { coeffs }
    }

    /// The coefficient of `ω^i` for `i` in `0..4`.
    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    /// Coefficients in `(a, b, c, d)` order.
    pub fn abcd(&self) -> [BigInt; 4] {
        [self.coeffs[3].clone(), self.coeffs[2].clone(), self.coeffs[1].clone(), self.coeffs[0].clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Complex conjugate: `ω ↦ ω⁷`.
    pub fn conj(&self) -> Self {
        let [d, c, b, a] = &self.coeffs;
        CycInt { coeffs: [d.clone(), -a, -b, -c] }
    }

    /// Multiplication by `ω`.
    pub fn mul_omega(&self) -> Self {
        let [d, c, b, a] = &self.coeffs;
        CycInt { coeffs: [-a, d.clone(), c.clone(), b.clone()] }
    }

    /// Multiplication by `ω^k`.
    pub fn mul_omega_pow(&self, k: i64) -> Self {
        let mut out = self.clone();
        for _ in 0..k.rem_euclid(8) {
            out = out.mul_omega();
        }
        out
    }

    /// Multiplication by `δ = 1 + ω`.
    pub fn mul_delta(&self) -> Self {
        self + &self.mul_omega()
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CycInt { coeffs: self.coeffs.clone().map(|c| c * s) }
    }

    fn all_even(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_even())
    }

    /// Whether `δ` divides `self`, read off the parity of `a + b + c + d`.
    pub fn divisible_by_delta(&self) -> bool {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc + c).is_even()
    }

    /// Exact division by `δ`, or `None` when `δ ∤ self`.
    ///
    /// Multiplies by the product of the other three Galois conjugates of `δ`,
    /// whose product with `δ` is `2`, then halves.
    pub fn delta_divide(&self) -> Option<Self> {
        let p = self * &delta_cofactor();
        if p.all_even() {
            Some(CycInt { coeffs: p.coeffs.map(|c| c / 2) })
        } else {
            None
        }
    }

    /// Whether `δ^p` divides `self`.
    pub fn divisible_by_delta_pow(&self, p: u32) -> bool {
        let mut x = self.clone();
        for _ in 0..p {
            if x.is_zero() {
                return true;
            }
            match x.delta_divide() {
                Some(y) => x = y,
                None => return false,
            }
        }
        true
    }

    /// Coefficientwise reduction into `{0, 1}`: the class of `self` in `Z[ω]/2`.
    pub fn mod2(&self) -> Self {
        let two = BigInt::from(2);
        CycInt { coeffs: self.coeffs.clone().map(|c| c.mod_floor(&two)) }
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let powers = [(1.0, 0.0), (h, h), (0.0, 1.0), (-h, h)];
        let mut re = 0.0;
        let mut im = 0.0;
        for (c, (pr, pi)) in self.coeffs.iter().zip(powers) {
            let v = bigint_to_f64(c);
            re += v * pr;
            im += v * pi;
        }
        (re, im)
    }
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    v.to_string().parse().unwrap_or(f64::NAN)
}

/// `(1 + ω³)(1 + ω⁵)(1 + ω⁷)`.
fn delta_cofactor() -> CycInt {
    let one = CycInt::one();
    let f = |k| &one + &CycInt::omega_pow(k);
    &(&f(3) * &f(5)) * &f(7)
}

/// `√2 = ω − ω³`.
pub fn sqrt2() -> CycInt {
    CycInt::new(-1, 0, 1, 0)
}

/// `i = ω²`.
pub fn imag_unit() -> CycInt {
    CycInt::new(0, 1, 0, 0)
}

/// `λ = 1 + √2`.
pub fn lambda() -> CycInt {
    CycInt::new(-1, 0, 1, 1)
}

/// `λ⁻¹ = √2 − 1`.
pub fn lambda_inv() -> CycInt {
    CycInt::new(-1, 0, 1, -1)
}

/// `δ = 1 + ω`.
pub fn delta() -> CycInt {
    CycInt::new(0, 0, 1, 1)
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        let mut coeffs = self.coeffs.clone();
        for (c, r) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        CycInt { coeffs }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        let mut coeffs = self.coeffs.clone();
        for (c, r) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= r;
        }
        CycInt { coeffs }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { coeffs: self.coeffs.clone().map(|c| -c) }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let mut coeffs: [BigInt; 4] = Default::default();
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let p = x * y;
                if i + j < 4 {
                    coeffs[i + j] += p;
                } else {
                    coeffs[i + j - 4] -= p;
                }
            }
        }
        CycInt { coeffs }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(CycInt, Add::add, Sub::sub, Mul::mul);

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.abcd();
        if a.is_zero() && b.is_zero() && c.is_zero() {
            write!(f, "{d}")
        } else {
            write!(f, "({a},{b},{c},{d})")
        }
    }
}

/// An element `num / δ^k` of `D[ω]` in lowest terms.
///
/// The invariant is that `k = 0` or `δ ∤ num`; zero is stored with `k = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    num: CycInt,
    k: u32,
}

impl RingElem {
    /// `num / δ^k`, reduced to lowest terms.
    pub fn new(num: CycInt, k: u32) -> Self {
        let mut e = RingElem { num, k };
        e.reduce();
        e
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.delta_divide() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn zero() -> Self {
        RingElem::default()
    }

    pub fn one() -> Self {
        CycInt::one().into()
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        CycInt::from_int(v).into()
    }

    pub fn omega_pow(k: i64) -> Self {
        CycInt::omega_pow(k).into()
    }

    /// `num / 2^l`.
    pub fn from_dyadic(num: CycInt, l: u32) -> Self {
        // 1/2 = ω²λ² / δ⁴
        let half_num = &(&CycInt::omega_pow(2) * &lambda()) * &lambda();
        let mut n = num;
        for _ in 0..l {
            n = &n * &half_num;
        }
        RingElem::new(n, 4 * l)
    }

    /// The numerator in lowest terms.
    pub fn numerator(&self) -> &CycInt {
        &self.num
    }

    /// The least `k` with `δ^k · self ∈ Z[ω]`.
    pub fn lde(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.num == CycInt::one()
    }

    /// The element as a member of `Z[ω]`, if it is one.
    pub fn as_cycint(&self) -> Option<&CycInt> {
        (self.k == 0).then_some(&self.num)
    }

    /// `δ^p · self` as an element of `Z[ω]`, or `None` when `p < lde`.
    pub fn scaled_numerator(&self, p: u32) -> Option<CycInt> {
        if p < self.k {
            return None;
        }
        let mut n = self.num.clone();
        for _ in self.k..p {
            n = n.mul_delta();
        }
        Some(n)
    }

    pub fn conj(&self) -> Self {
        // conj(δ) = δ·ω⁷, so conj(x/δ^k) = conj(x)·ω^k / δ^k.
        RingElem { num: self.num.conj().mul_omega_pow(self.k as i64), k: self.k }
    }

    pub fn mul_omega_pow(&self, m: i64) -> Self {
        RingElem { num: self.num.mul_omega_pow(m), k: self.k }
    }

    /// Division by `√2`, using `1/√2 = ωλ / δ²`.
    pub fn div_sqrt2(&self) -> Self {
        let factor = lambda().mul_omega();
        RingElem::new(&self.num * &factor, self.k + 2)
    }

    pub fn scale_int(&self, s: &BigInt) -> Self {
        RingElem::new(self.num.scale(s), self.k)
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let (re, im) = self.num.to_complex();
        let (dr, di) = delta().to_complex();
        // divide by δ^k
        let mut zr = re;
        let mut zi = im;
        let n2 = dr * dr + di * di;
        for _ in 0..self.k {
            let r = (zr * dr + zi * di) / n2;
            let i = (zi * dr - zr * di) / n2;
            zr = r;
            zi = i;
        }
        (zr, zi)
    }

    /// Writes the element as `(a,b,c,d) / 2^l` with the least `l`.
    pub fn to_dyadic(&self) -> (CycInt, u32) {
        let l = self.k.div_ceil(4);
        let scaled = self.scale_int(&(BigInt::one() << l));
        debug_assert_eq!(scaled.k, 0);
        (scaled.num, l)
    }
}

impl From<CycInt> for RingElem {
    fn from(num: CycInt) -> Self {
        RingElem { num, k: 0 }
    }
}

fn align(x: &RingElem, y: &RingElem) -> (CycInt, CycInt, u32) {
    let k = x.k.max(y.k);
    (x.scaled_numerator(k).unwrap(), y.scaled_numerator(k).unwrap(), k)
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (x, y, k) = align(self, rhs);
        RingElem::new(&x + &y, k)
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        let (x, y, k) = align(self, rhs);
        RingElem::new(&x - &y, k)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { num: -&self.num, k: self.k }
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        if self.is_zero() || rhs.is_zero() {
            return RingElem::zero();
        }
        RingElem::new(&self.num * &rhs.num, self.k + rhs.k)
    }
}

forward_owned!(RingElem, Add::add, Sub::sub, Mul::mul);

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, l) = self.to_dyadic();
        if l == 0 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/2^{l}")
        }
    }
}

impl FromStr for RingElem {
    type Err = Error;

    /// Accepts `(a,b,c,d)`, `(a,b,c,d)/2^l`, an integer `n`, `n/2^l`, or a
    /// decimal denominator such as `/4`.  A denominator that is not a power
    /// of two gives [`Error::NotInRing`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::parse(0, format!("{m}: `{s}`"));
        let (body, den) = match s.rfind('/') {
            Some(i) if !s[..i].ends_with('(') => (s[..i].trim(), Some(s[i + 1..].trim())),
            _ => (s, None),
        };
        let num = if let Some(inner) = body.strip_prefix('(') {
            let inner = inner.strip_suffix(')').ok_or_else(|| bad("unclosed tuple"))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad("expected four coefficients"));
            }
            let v: Vec<BigInt> =
                parts.iter().map(|p| p.parse::<BigInt>().map_err(|_| bad("bad coefficient"))).collect::<Result<_>>()?;
            CycInt::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
        } else {
            CycInt::from_int(body.parse::<BigInt>().map_err(|_| bad("bad integer"))?)
        };
        let l = match den {
            None => 0,
            Some(d) => {
                if let Some(e) = d.strip_prefix("2^") {
                    e.parse::<u32>().map_err(|_| bad("bad exponent"))?
                } else {
                    let v: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
                    if !v.is_positive() {
                        return Err(bad("denominator must be positive"));
                    }
                    let tz = v.trailing_zeros().unwrap_or(0);
                    if v != BigInt::one() << tz {
                        return Err(Error::NotInRing(s.to_string()));
                    }
                    tz as u32
                }
            }
        };
        Ok(RingElem::from_dyadic(num, l))
    }
}

/// A residue class modulo `δ^p`, `p ∈ {1, 2, 3}`, named by its canonical
/// representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub power: u32,
    pub rep: CycInt,
}

/// Canonical representatives of `Z[ω] / δ^p`.
pub fn residue_representatives(p: u32) -> Vec<CycInt> {
    let w = |k| CycInt::omega_pow(k);
    let one = CycInt::one();
    match p {
        1 => vec![CycInt::zero(), one],
        2 => vec![CycInt::zero(), one.clone(), delta(), &delta() + &one],
        3 => vec![one.clone(), w(1), w(2), w(3), CycInt::zero(), &one + &w(1), &one + &w(2), &one + &w(3)],
        _ => Vec::new(),
    }
}

/// The classes of `Z[ω] / δ^p`, found by brute force: the sixteen elements
/// with 0/1 coefficients cover `Z[ω] / 2 = Z[ω] / δ⁴`, and each is kept
/// unless it is congruent to one kept before.
pub fn enumerate_residue_classes(p: u32) -> Vec<CycInt> {
    let mut classes: Vec<CycInt> = Vec::new();
    for bits in 0..16u32 {
        let c = |i: u32| i64::from((bits >> i) & 1);
        let x = CycInt::new(c(0), c(1), c(2), c(3));
        if !classes.iter().any(|y| (&x - y).divisible_by_delta_pow(p)) {
            classes.push(x);
        }
    }
    classes
}

/// The residue of `x` modulo `δ^p` for `p ∈ {1, 2, 3}`.
pub fn residue(x: &CycInt, p: u32) -> Result<Residue> {
    if !(1..=3).contains(&p) {
        return Err(Error::Precondition(format!("residue power {p} not in 1..=3")));
    }
    residue_representatives(p)
        .into_iter()
        .find(|r| (x - r).divisible_by_delta_pow(p))
        .map(|rep| Residue { power: p, rep })
        .ok_or_else(|| Error::internal("residue representatives are incomplete"))
}

/// The `m ∈ 0..4` with `x ≡ ω^m (mod δ³)`, for `x ≢ 0 (mod δ)`.
pub fn omega_exponent_mod_delta3(x: &CycInt) -> Result<u8> {
    if x.divisible_by_delta() {
        return Err(Error::Precondition("element is divisible by delta".into()));
    }
    (0..4u8)
        .find(|&m| (x - &CycInt::omega_pow(m as i64)).divisible_by_delta_pow(3))
        .ok_or_else(|| Error::internal("odd element has no unit residue mod delta^3"))
}

/// Whether `√2` divides `x + x†`.
pub fn check_add_conj(x: &CycInt) -> bool {
    // y/√2 = y·√2/2
    let y = &(x + &x.conj()) * &sqrt2();
    y.all_even()
}

/// `x†x + y†y + z†z + w†w` reduced modulo 2, for entries whose residues
/// modulo `δ²` are `0, 1, δ, δ+1` in some order.
pub fn residue_pattern_sum(x: &CycInt, y: &CycInt, z: &CycInt, w: &CycInt) -> Result<CycInt> {
    let mut seen: Vec<CycInt> = [x, y, z, w].iter().map(|v| residue(v, 2).map(|r| r.rep)).collect::<Result<_>>()?;
    seen.sort_by_key(|c| c.to_string());
    let mut want = residue_representatives(2);
    want.sort_by_key(|c| c.to_string());
    if seen != want {
        return Err(Error::Precondition("residues mod delta^2 are not a permutation of {0,1,δ,δ+1}".into()));
    }
    let sum = [x, y, z, w].iter().fold(CycInt::zero(), |acc, v| &acc + &(&v.conj() * v));
    Ok(sum.mod2())
}
