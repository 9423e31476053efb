//! Bivariate polynomials over GF(2) in the formal symbols `a` and `b`.
//!
//! A [`BiPoly`] is stored as a vector of rows: row `i` is the bit-packed
//! coefficient polynomial (in `b`) of `a^i`. Rows for absent powers of `a`
//! are empty vectors, so sparse objects such as `τ` or `(ab)^n` cost little
//! while the dense tower entries stay word-packed.

mod det;
mod series;
mod tau;

pub use det::{det_cofactor, det_kronecker, MAX_COFACTOR_SIZE};
pub use series::BiSeries;
pub use tau::TauLaurent;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{parse_monomial, xor_shifted, PolyZ};
use crate::ring::{Mat2, Ring};

/// Support size at or below which products use monomial shifts instead of
/// Kronecker packing.
pub const SPARSE_MUL_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiPolyError {
    #[error("determinant by cofactor expansion is limited to {max}x{max}, got {size}x{size}")]
    SizeLimit { size: usize, max: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("series denominator has no constant term")]
    NonUnitDenominator,
    #[error("exponent flip needs degrees at most ({da}, {db})")]
    FlipDegree { da: usize, db: usize },
    #[error("cannot parse bivariate polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A polynomial in GF(2)[a, b].
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    rows: Vec<PolyZ>,
}

impl BiPoly {
    fn from_rows(mut rows: Vec<PolyZ>) -> Self {
        while rows.last().is_some_and(PolyZ::is_zero) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::monomial(0, 0)
    }

    pub fn a() -> Self {
        BiPoly::monomial(1, 0)
    }

    pub fn b() -> Self {
        BiPoly::monomial(0, 1)
    }

    /// `τ = 1 + a + b`.
    pub fn tau() -> Self {
        BiPoly::from_terms([(0, 0), (1, 0), (0, 1)])
    }

    /// `a^i b^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut rows = vec![PolyZ::zero(); i + 1];
        rows[i] = PolyZ::monomial(j);
        BiPoly { rows }
    }

    /// `(ab)^n`.
    pub fn ab_pow(n: usize) -> Self {
        BiPoly::monomial(n, n)
    }

    /// Sum of the given monomials; pairs listed twice cancel.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize)>>(terms: I) -> Self {
        let mut rows: Vec<PolyZ> = Vec::new();
        for (i, j) in terms {
            if rows.len() <= i {
                rows.resize(i + 1, PolyZ::zero());
            }
            rows[i].toggle(j);
        }
        BiPoly::from_rows(rows)
    }

    /// A univariate polynomial in `a` (`b`-free).
    pub fn from_poly_in_a(p: &PolyZ) -> Self {
        BiPoly::from_terms(p.exponents().map(|e| (e, 0)))
    }

    /// A univariate polynomial in `b` (`a`-free).
    pub fn from_poly_in_b(p: &PolyZ) -> Self {
        BiPoly::from_rows(vec![p.clone()])
    }

    pub fn rows(&self) -> &[PolyZ] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rows.len() == 1 && self.rows[0].is_one()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.get(i).is_some_and(|r| r.coeff(j))
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.rows.iter().map(PolyZ::weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Monomials `(i, j)` in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.exponents().map(move |j| (i, j)))
    }

    pub fn deg_a(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_b(&self) -> Option<usize> {
        self.rows.iter().filter_map(PolyZ::deg).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.deg().map(|d| i + d))
            .max()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(other.rows.len());
        let rows = (0..n)
            .map(|i| match (self.rows.get(i), other.rows.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        BiPoly::from_rows(rows)
    }

    /// Multiplication by `a^i b^j`.
    pub fn shift(&self, i: usize, j: usize) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![PolyZ::zero(); i];
        rows.extend(self.rows.iter().map(|r| r.shl(j)));
        BiPoly::from_rows(rows)
    }

    /// Exact division by `a^i b^j`; `None` if some monomial is not divisible.
    pub fn div_monomial(&self, i: usize, j: usize) -> Option<BiPoly> {
        if self.rows.iter().take(i).any(|r| !r.is_zero()) {
            return None;
        }
        let mut rows = Vec::with_capacity(self.rows.len().saturating_sub(i));
        for r in self.rows.iter().skip(i) {
            if r.truncate(j) != PolyZ::zero() {
                return None;
            }
            rows.push(r.shr(j));
        }
        Some(BiPoly::from_rows(rows))
    }

    fn mul_sparse(sparse: &BiPoly, dense: &BiPoly) -> BiPoly {
        let rows_needed = sparse.rows.len() + dense.rows.len() - 1;
        let mut rows: Vec<Vec<u64>> = vec![Vec::new(); rows_needed];
        for (i, j) in sparse.terms() {
            for (r, row) in dense.rows.iter().enumerate() {
                xor_shifted(&mut rows[i + r], row.words(), j);
            }
        }
        BiPoly::from_rows(rows.into_iter().map(PolyZ::from_words).collect())
    }

    /// Kronecker substitution `b -> t`, `a -> t^D` with `D` the smallest power
    /// of two above the `b`-degree of the product.
    fn mul_kronecker(&self, other: &BiPoly) -> BiPoly {
        let bound = self.deg_b().unwrap_or(0) + other.deg_b().unwrap_or(0);
        let gap = (bound + 1).next_power_of_two();
        let x = self.pack(gap);
        let y = other.pack(gap);
        BiPoly::unpack(&x.mul(&y), gap, self.rows.len() + other.rows.len() - 1)
    }

    pub(crate) fn pack(&self, gap: usize) -> PolyZ {
        let mut words = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            xor_shifted(&mut words, r.words(), i * gap);
        }
        PolyZ::from_words(words)
    }

    pub(crate) fn unpack(p: &PolyZ, gap: usize, nrows: usize) -> BiPoly {
        BiPoly::from_rows((0..nrows).map(|i| p.extract(i * gap, gap)).collect())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let (ls, lo) = (self.len(), other.len());
        if ls <= SPARSE_MUL_LIMIT || lo <= SPARSE_MUL_LIMIT {
            return if ls <= lo {
                BiPoly::mul_sparse(self, other)
            } else {
                BiPoly::mul_sparse(other, self)
            };
        }
        self.mul_kronecker(other)
    }

    /// Product computed by the plain double loop over monomials.
    pub fn mul_naive(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        let mut rows: Vec<PolyZ> = Vec::new();
        for (i1, j1) in self.terms() {
            for (i2, j2) in other.terms() {
                let (i, j) = (i1 + i2, j1 + j2);
                if rows.len() <= i {
                    rows.resize(i + 1, PolyZ::zero());
                }
                rows[i].toggle(j);
            }
        }
        if !rows.is_empty() {
            out = BiPoly::from_rows(rows);
        }
        out
    }

    /// Frobenius square `(Σ a^i b^j)^2 = Σ a^{2i} b^{2j}`.
    pub fn square(&self) -> BiPoly {
        let mut rows = vec![PolyZ::zero(); (2 * self.rows.len()).saturating_sub(1)];
        for (i, r) in self.rows.iter().enumerate() {
            rows[2 * i] = r.square();
        }
        BiPoly::from_rows(rows)
    }

    pub fn pow(&self, mut e: u64) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
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

    /// The involution exchanging `a` and `b`.
    pub fn swap(&self) -> BiPoly {
        BiPoly::from_terms(self.terms().map(|(i, j)| (j, i)))
    }

    pub fn is_swap_invariant(&self) -> bool {
        *self == self.swap()
    }

    /// `a^da b^db · x(1/a, 1/b)`.
    pub fn flip(&self, da: usize, db: usize) -> Result<BiPoly, BiPolyError> {
        if self.deg_a().is_some_and(|d| d > da) || self.deg_b().is_some_and(|d| d > db) {
            return Err(BiPolyError::FlipDegree { da, db });
        }
        Ok(BiPoly::from_terms(
            self.terms().map(|(i, j)| (da - i, db - j)),
        ))
    }

    /// Evaluation at `a = pa(z)`, `b = pb(z)`.
    pub fn subst(&self, pa: &PolyZ, pb: &PolyZ) -> PolyZ {
        let mut acc = PolyZ::zero();
        for r in self.rows.iter().rev() {
            acc = acc.mul(pa);
            acc += &r.compose(pb);
        }
        acc
    }

    /// Exact division by `τ = 1 + a + b`, treating `a` as the main variable:
    /// synthetic division by `a + (1 + b)`. `None` on a nonzero remainder.
    pub fn div_tau(&self) -> Option<BiPoly> {
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        let mut rem = self.rows.clone();
        let n = rem.len();
        let mut quot = vec![PolyZ::zero(); n.saturating_sub(1)];
        for i in (1..n).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            let carry = &c + &c.shl(1);
            rem[i - 1] += &carry;
            quot[i - 1] = c;
        }
        rem[0].is_zero().then(|| BiPoly::from_rows(quot))
    }

    /// Keeps only monomials of total degree `<= cap`.
    pub fn truncate_total(&self, cap: usize) -> BiPoly {
        let rows = self
            .rows
            .iter()
            .take(cap + 1)
            .enumerate()
            .map(|(i, r)| r.truncate(cap - i + 1))
            .collect();
        BiPoly::from_rows(rows)
    }

    /// Monomials as CSV lines `i,j`.
    pub fn to_csv(&self) -> String {
        self.terms().map(|(i, j)| format!("{i},{j}\n")).collect()
    }

    pub fn from_csv(s: &str) -> Result<BiPoly, BiPolyError> {
        let err = |line: &str| BiPolyError::Parse {
            input: line.to_string(),
            reason: "expected `i,j`".to_string(),
        };
        let mut terms = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (i, j) = line.split_once(',').ok_or_else(|| err(line))?;
            let i = i.trim().parse().map_err(|_| err(line))?;
            let j = j.trim().parse().map_err(|_| err(line))?;
            terms.push((i, j));
        }
        Ok(BiPoly::from_terms(terms))
    }
}

impl Ring for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        BiPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        BiPoly::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
}

/// 2x2 matrix of bivariate polynomials.
pub type SymMat2 = Mat2<BiPoly>;

/// Entrywise `a <-> b` exchange.
pub fn swap_mat(m: &SymMat2) -> SymMat2 {
    m.map(BiPoly::swap)
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(usize, usize)> = self.terms().collect();
        // descending total degree, then descending power of a
        terms.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i)));
        for (n, (i, j)) in terms.into_iter().enumerate() {
            if n > 0 {
                f.write_str("+")?;
            }
            let part = |v: char, e: usize| match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            match (i, j) {
                (0, 0) => f.write_str("1")?,
                (_, 0) => f.write_str(&part('a', i))?,
                (0, _) => f.write_str(&part('b', j))?,
                _ => write!(f, "{}*{}", part('a', i), part('b', j))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() > 40 {
            write!(
                f,
                "BiPoly({} terms, deg_a {:?}, deg_b {:?})",
                self.len(),
                self.deg_a(),
                self.deg_b()
            )
        } else {
            write!(f, "BiPoly({self})")
        }
    }
}

impl FromStr for BiPoly {
    type Err = BiPolyError;

    /// Parses monomial sums such as `a^2*b^2+b^2+1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| BiPolyError::Parse {
            input: s.to_string(),
            reason,
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut terms = Vec::new();
        for term in t.split('+') {
            let (mut i, mut j) = (0usize, 0usize);
            let mut zero = false;
            for factor in term.split('*') {
                if factor.starts_with('a') {
                    i += parse_monomial(factor, 'a')
                        .flatten()
                        .ok_or_else(|| err(format!("bad factor {factor:?}")))?;
                } else if factor.starts_with('b') {
                    j += parse_monomial(factor, 'b')
                        .flatten()
                        .ok_or_else(|| err(format!("bad factor {factor:?}")))?;
                } else if factor == "0" {
                    zero = true;
                } else if factor != "1" {
                    return Err(err(format!("bad factor {factor:?}")));
                }
            }
            if !zero {
                terms.push((i, j));
            }
        }
        Ok(BiPoly::from_terms(terms))
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn frobenius_square() {
        assert_eq!(bp("a+b").mul(&bp("a+b")), bp("a^2+b^2"));
        assert_eq!(bp("a+b").square(), bp("a^2+b^2"));
    }

    #[test]
    fn m1_upper_left_from_m0_products() {
        let m0 = Mat2::new(BiPoly::one(), BiPoly::a(), BiPoly::a(), BiPoly::zero());
        let m0s = swap_mat(&m0);
        let m1 = m0.mul(&m0s).mul(&m0s).mul(&m0);
        assert_eq!(m1.e[0][0], bp("a^2*b^2+b^2+1"));
    }

    #[test]
    fn swap_examples() {
        assert_eq!(BiPoly::tau().swap(), BiPoly::tau());
        let z1 = bp("a*b+b+1");
        assert_eq!(z1.swap(), bp("a*b+a+1"));
        assert_eq!(z1.swap(), z1.add(&bp("a+b")));
    }

    #[test]
    fn substitution_examples() {
        let z: PolyZ = "z".parse().unwrap();
        let z1: PolyZ = "z+1".parse().unwrap();
        assert!(BiPoly::tau().subst(&z1, &z).is_zero());
        assert_eq!(bp("a*b").subst(&z, &z1), "z^2+z".parse().unwrap());
    }

    #[test]
    fn tau_division() {
        let t = BiPoly::tau();
        let x = bp("a^3*b+a*b^2+b^4+1");
        assert_eq!(x.mul(&t).div_tau(), Some(x.clone()));
        assert_eq!(t.pow(5).div_tau(), Some(t.pow(4)));
        assert_eq!(bp("a*b").div_tau(), None);
    }

    #[test]
    fn flip_and_monomial_division() {
        let x = bp("a^2*b+a+1");
        assert_eq!(x.flip(2, 1).unwrap(), bp("1+a*b+a^2*b"));
        assert!(x.flip(1, 1).is_err());
        assert_eq!(x.shift(2, 3).div_monomial(2, 3), Some(x.clone()));
        assert_eq!(x.div_monomial(1, 0), None);
    }

    #[test]
    fn parse_print_csv() {
        let x = bp("a^2*b^2+b^2+1");
        assert_eq!(x.to_string(), "a^2*b^2+b^2+1");
        assert_eq!(BiPoly::from_csv(&x.to_csv()).unwrap(), x);
        assert_eq!(bp("b*a^3"), BiPoly::monomial(3, 1));
        assert!("a+c".parse::<BiPoly>().is_err());
    }

    #[test]
    fn truncation_by_total_degree() {
        let x = bp("a^3+a^2*b+b^2+a+1");
        assert_eq!(x.truncate_total(2), bp("b^2+a+1"));
    }
}
