//! Bit-packed polynomials over GF(2).
//!
//! Bit `i` of the packed words is the coefficient of `z^i`. The word vector is
//! kept normalized (no trailing zero words), so structural equality is
//! polynomial equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::clmul;

/// Word count above which multiplication switches from schoolbook to
/// Karatsuba splitting.
pub const KARATSUBA_THRESHOLD: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("power series inverse needs a nonzero constant term")]
    NotInvertible,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A polynomial in GF(2)[z].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyZ {
    words: Vec<u64>,
}

fn normalize(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

/// `dst ^= src << shift`, growing `dst` as needed.
pub(crate) fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let ws = shift / 64;
    let bs = shift % 64;
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (d, s) in dst[ws..].iter_mut().zip(src) {
            *d ^= *s;
        }
    } else {
        let mut carry = 0u64;
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= (s << bs) | carry;
            carry = s >> (64 - bs);
        }
        dst[ws + src.len()] ^= carry;
    }
}

fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

fn compress64(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

/// `out ^= a * b`; `out` must hold at least `a.len() + b.len()` words.
fn mul_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (n, m) = (a.len(), b.len());
    if m == 0 {
        return;
    }
    if m < KARATSUBA_THRESHOLD {
        clmul::schoolbook(a, b, out);
        return;
    }
    if 2 * m <= n {
        for (i, chunk) in a.chunks(m).enumerate() {
            mul_into(chunk, b, &mut out[i * m..]);
        }
        return;
    }
    let h = n.div_ceil(2);
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h.min(m));

    let mut z0 = vec![0u64; a0.len() + b0.len()];
    mul_into(a0, b0, &mut z0);
    let mut z2 = vec![0u64; a1.len() + b1.len()];
    mul_into(a1, b1, &mut z2);

    let mut sa = a0.to_vec();
    for (x, y) in sa.iter_mut().zip(a1) {
        *x ^= *y;
    }
    let mut sb = b0.to_vec();
    for (x, y) in sb.iter_mut().zip(b1) {
        *x ^= *y;
    }
    let mut z1 = vec![0u64; sa.len() + sb.len()];
    mul_into(&sa, &sb, &mut z1);
    for (x, y) in z1.iter_mut().zip(&z0) {
        *x ^= *y;
    }
    for (x, y) in z1.iter_mut().zip(&z2) {
        *x ^= *y;
    }

    for (o, v) in out.iter_mut().zip(&z0) {
        *o ^= *v;
    }
    for (o, v) in out[h..].iter_mut().zip(&z1) {
        *o ^= *v;
    }
    for (o, v) in out[2 * h..].iter_mut().zip(&z2) {
        *o ^= *v;
    }
}

impl PolyZ {
    pub fn zero() -> Self {
        PolyZ { words: Vec::new() }
    }

    pub fn one() -> Self {
        PolyZ { words: vec![1] }
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        PolyZ { words: vec![2] }
    }

    /// `z^e`.
    pub fn monomial(e: usize) -> Self {
        let mut p = PolyZ::zero();
        p.set(e);
        p
    }

    /// Sum of `z^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = PolyZ::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        normalize(&mut words);
        PolyZ { words }
    }

    /// Bit mask form, bit `i` being the coefficient of `z^i`.
    pub fn from_u64(mask: u64) -> Self {
        PolyZ::from_words(vec![mask])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Degree, or `None` for the zero polynomial (degree minus infinity).
    pub fn deg(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some(self.words.len() * 64 - 1 - last.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// True for 0 and 1.
    pub fn is_constant(&self) -> bool {
        self.deg().unwrap_or(0) == 0
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn toggle(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        normalize(&mut self.words);
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Multiplication by `z^n`.
    pub fn shl(&self, n: usize) -> Self {
        if self.is_zero() {
            return PolyZ::zero();
        }
        let mut out = Vec::with_capacity(self.words.len() + n / 64 + 1);
        xor_shifted(&mut out, &self.words, n);
        PolyZ::from_words(out)
    }

    /// Floor division by `z^n` (drops the `n` lowest coefficients).
    pub fn shr(&self, n: usize) -> Self {
        self.extract(n, self.deg().map_or(0, |d| (d + 1).saturating_sub(n)))
    }

    /// Coefficients `start .. start+len` as a new polynomial.
    pub fn extract(&self, start: usize, len: usize) -> Self {
        if len == 0 || self.is_zero() {
            return PolyZ::zero();
        }
        let ws = start / 64;
        let bs = start % 64;
        let nwords = len.div_ceil(64);
        let mut out = vec![0u64; nwords];
        for (i, o) in out.iter_mut().enumerate() {
            let lo = self.words.get(ws + i).copied().unwrap_or(0);
            let hi = self.words.get(ws + i + 1).copied().unwrap_or(0);
            *o = if bs == 0 {
                lo
            } else {
                (lo >> bs) | (hi << (64 - bs))
            };
        }
        let rem = len % 64;
        if rem != 0 {
            out[nwords - 1] &= (1u64 << rem) - 1;
        }
        PolyZ::from_words(out)
    }

    /// Reduction modulo `z^n`.
    pub fn truncate(&self, n: usize) -> Self {
        self.extract(0, n)
    }

    pub fn mul(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() || other.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        mul_into(&self.words, &other.words, &mut out);
        PolyZ::from_words(out)
    }

    /// Product computed by the quadratic word-level kernel only.
    pub fn mul_schoolbook(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() || other.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        clmul::schoolbook(&self.words, &other.words, &mut out);
        PolyZ::from_words(out)
    }

    /// Frobenius square: coefficient `i` moves to `2i`.
    pub fn square(&self) -> PolyZ {
        let mut out = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            out.push(spread32(w as u32));
            out.push(spread32((w >> 32) as u32));
        }
        PolyZ::from_words(out)
    }

    /// Inverse of [`square`](Self::square); `None` if an odd coefficient is set.
    pub fn sqrt(&self) -> Option<PolyZ> {
        if self.words.iter().any(|w| w & 0xAAAA_AAAA_AAAA_AAAA != 0) {
            return None;
        }
        let mut out = Vec::with_capacity(self.words.len().div_ceil(2));
        for pair in self.words.chunks(2) {
            let lo = compress64(pair[0]) as u64;
            let hi = pair.get(1).map_or(0, |&w| compress64(w) as u64);
            out.push(lo | (hi << 32));
        }
        Some(PolyZ::from_words(out))
    }

    pub fn pow(&self, mut e: u64) -> PolyZ {
        let mut base = self.clone();
        let mut acc = PolyZ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &PolyZ) -> Result<(PolyZ, PolyZ), PolyError> {
        let dd = d.deg().ok_or(PolyError::DivisionByZero)?;
        let mut r = self.words.clone();
        let Some(dn) = self.deg() else {
            return Ok((PolyZ::zero(), PolyZ::zero()));
        };
        if dn < dd {
            return Ok((PolyZ::zero(), self.clone()));
        }
        let mut q = vec![0u64; (dn - dd) / 64 + 1];
        for shift in (0..=dn - dd).rev() {
            let bit = shift + dd;
            if (r[bit / 64] >> (bit % 64)) & 1 == 1 {
                q[shift / 64] |= 1 << (shift % 64);
                xor_shifted(&mut r, &d.words, shift);
            }
        }
        Ok((PolyZ::from_words(q), PolyZ::from_words(r)))
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &PolyZ) -> Result<Option<PolyZ>, PolyError> {
        let (q, r) = self.divrem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn gcd(&self, other: &PolyZ) -> PolyZ {
        let (mut x, mut y) = (self.clone(), other.clone());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x
    }

    /// Formal derivative: odd-exponent terms shift down by one, the rest vanish.
    pub fn derivative(&self) -> PolyZ {
        let odd: Vec<u64> = self
            .words
            .iter()
            .map(|w| w & 0xAAAA_AAAA_AAAA_AAAA)
            .collect();
        PolyZ::from_words(odd).shr(1)
    }

    /// Composition `self(inner(z))` by Horner's rule.
    pub fn compose(&self, inner: &PolyZ) -> PolyZ {
        let Some(d) = self.deg() else {
            return PolyZ::zero();
        };
        let mut acc = PolyZ::zero();
        for i in (0..=d).rev() {
            acc = acc.mul(inner);
            if self.coeff(i) {
                acc += &PolyZ::one();
            }
        }
        acc
    }

    /// `z^n * self(1/z)`; requires `deg self <= n`.
    pub fn reverse(&self, n: usize) -> PolyZ {
        debug_assert!(self.deg().is_none_or(|d| d <= n));
        PolyZ::from_exponents(self.exponents().map(|e| n - e))
    }

    /// Product modulo `z^n`.
    pub fn mul_trunc(&self, other: &PolyZ, n: usize) -> PolyZ {
        self.truncate(n).mul(&other.truncate(n)).truncate(n)
    }

    /// Inverse in GF(2)[[z]] modulo `z^n`, by the characteristic-2 Newton step
    /// `y <- self * y^2`.
    pub fn inv_trunc(&self, n: usize) -> Result<PolyZ, PolyError> {
        if !self.coeff(0) {
            return Err(PolyError::NotInvertible);
        }
        let mut y = PolyZ::one();
        let mut prec = 1usize;
        while prec < n {
            prec = (2 * prec).min(n);
            y = self.mul_trunc(&y.square(), prec);
        }
        Ok(y.truncate(n))
    }

    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".to_string();
        }
        let mut s = String::from("0x");
        let mut started = false;
        for w in self.words.iter().rev() {
            if started {
                s.push_str(&format!("{w:016X}"));
            } else {
                s.push_str(&format!("{w:X}"));
                started = true;
            }
        }
        s
    }
}

impl Add for &PolyZ {
    type Output = PolyZ;
    fn add(self, rhs: &PolyZ) -> PolyZ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PolyZ {
    type Output = PolyZ;
    fn add(mut self, rhs: PolyZ) -> PolyZ {
        self += &rhs;
        self
    }
}

impl AddAssign<&PolyZ> for PolyZ {
    fn add_assign(&mut self, rhs: &PolyZ) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (x, y) in self.words.iter_mut().zip(&rhs.words) {
            *x ^= *y;
        }
        normalize(&mut self.words);
    }
}

impl Mul for &PolyZ {
    type Output = PolyZ;
    fn mul(self, rhs: &PolyZ) -> PolyZ {
        PolyZ::mul(self, rhs)
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let exps: Vec<usize> = self.exponents().collect();
        for (n, &e) in exps.iter().rev().enumerate() {
            if n > 0 {
                f.write_str("+")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("z")?,
                _ => write!(f, "z^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ({self})")
    }
}

/// Parses one monomial `1`, `0`, `z`, `z^k` over the variable `var`.
pub(crate) fn parse_monomial(term: &str, var: char) -> Option<Option<usize>> {
    let t = term.trim();
    match t {
        "0" => return Some(None),
        "1" => return Some(Some(0)),
        _ => {}
    }
    let rest = t.strip_prefix(var)?;
    if rest.is_empty() {
        return Some(Some(1));
    }
    let exp = rest.strip_prefix('^')?;
    let exp = exp.trim_start_matches('{').trim_end_matches('}');
    exp.parse::<usize>().ok().map(Some)
}

impl FromStr for PolyZ {
    type Err = PolyError;

    /// Accepts monomial sums such as `z^3+z+1` or hexadecimal masks such as `0x0B`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PolyError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty input"));
        }
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            if hex.is_empty() {
                return Err(err("empty hex mask"));
            }
            let mut words = Vec::new();
            let digits: Vec<char> = hex.chars().collect();
            for chunk in digits.rchunks(16) {
                let chunk: String = chunk.iter().collect();
                words.push(u64::from_str_radix(&chunk, 16).map_err(|_| err("bad hex digit"))?);
            }
            return Ok(PolyZ::from_words(words));
        }
        let mut p = PolyZ::zero();
        for term in t.split('+') {
            match parse_monomial(term, 'z') {
                Some(Some(e)) => p.toggle(e),
                Some(None) => {}
                None => return Err(err(&format!("bad monomial {term:?}"))),
            }
        }
        Ok(p)
    }
}

impl Serialize for PolyZ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PolyZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PolyZ {
        s.parse().unwrap()
    }

    #[test]
    fn frobenius_and_factorization() {
        assert_eq!(p("z+1").mul(&p("z+1")), p("z^2+1"));
        assert_eq!(p("z^2+z+1").mul(&p("z+1")), p("z^3+1"));
    }

    #[test]
    fn divrem_examples() {
        assert_eq!(
            p("z^3+1").divrem(&p("z+1")).unwrap(),
            (p("z^2+z+1"), p("0"))
        );
        assert_eq!(p("z^3+z").divrem(&p("z^2")).unwrap(), (p("z"), p("z")));
        assert_eq!(
            p("z").divrem(&PolyZ::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn derivative_examples() {
        assert!(p("z^2").derivative().is_zero());
        assert_eq!(p("z^3+z").derivative(), p("z^2+1"));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(PolyZ::zero().deg(), None);
        assert_eq!(PolyZ::one().deg(), Some(0));
        assert!(PolyZ::zero().deg() < PolyZ::one().deg());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("0x0B"), p("z^3+z+1"));
        assert_eq!(p("z^3 + z + 1").to_string(), "z^3+z+1");
        assert_eq!(p("z^3+z+1").to_hex(), "0xB");
        assert_eq!(p("z^2+z^2"), PolyZ::zero());
        assert!("y+1".parse::<PolyZ>().is_err());
        let big = PolyZ::monomial(130) + PolyZ::one();
        assert_eq!(big.to_hex().parse::<PolyZ>().unwrap(), big);
    }

    #[test]
    fn sqrt_inverts_square() {
        let x = p("z^7+z^3+z^2+1");
        assert_eq!(x.square().sqrt(), Some(x));
        assert_eq!(p("z^3").sqrt(), None);
    }

    #[test]
    fn truncated_inverse_of_one_plus_z() {
        let inv = p("z+1").inv_trunc(10).unwrap();
        assert_eq!(inv, PolyZ::from_exponents(0..10));
        assert_eq!(p("z").inv_trunc(4), Err(PolyError::NotInvertible));
    }

    #[test]
    fn extract_and_shifts() {
        let x = PolyZ::from_exponents([0, 5, 64, 70, 200]);
        assert_eq!(x.shl(67).shr(67), x);
        assert_eq!(x.extract(5, 66), PolyZ::from_exponents([0, 59, 65]));
        assert_eq!(x.truncate(65), PolyZ::from_exponents([0, 5, 64]));
    }

    #[test]
    fn compose_and_reverse() {
        assert_eq!(p("z^2+z").compose(&p("z+1")), p("z^2+z"));
        assert_eq!(p("z^3+z").reverse(4), p("z^3+z"));
        assert_eq!(p("z^3+1").reverse(3), p("z^3+1"));
        assert_eq!(p("z^2").reverse(5), p("z^3"));
    }
}
