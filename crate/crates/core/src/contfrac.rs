//! Continued fractions over GF(2)((z^{-1})).
//!
//! Streams are `[a_0; a_1, a_2, ...]` with `a_0` arbitrary and every later
//! partial quotient nonconstant. Convergents follow the matrix identity
//! `M(a_1) ··· M(a_k) = [[q_k, q_{k-1}], [p'_k, p'_{k-1}]]` with
//! `M(x) = [[x, 1], [1, 0]]`, where `p'` are the numerators of `[0; a_1..]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::PolyZ;
use crate::ring::{Mat2, Ring};
use crate::series::{LaurentZ, Norm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("partial quotient a_{index} is constant")]
    ConstantQuotient { index: usize },
    #[error("horizon exhausted after {extracted} partial quotients")]
    HorizonExhausted { extracted: usize, stream: PQStream },
    #[error("convergent index {index} exceeds stream length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("stream too short: 2·deg q = {available} < precision {precision}")]
    InsufficientStream { available: usize, precision: usize },
    #[error("window {window} exceeds stream length {len}")]
    WindowTooLarge { window: usize, len: usize },
}

/// A partial-quotient sequence `[a_0; a_1, a_2, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PolyZ>", into = "Vec<PolyZ>")]
pub struct PQStream {
    a0: PolyZ,
    quotients: Vec<PolyZ>,
}

impl TryFrom<Vec<PolyZ>> for PQStream {
    type Error = CfError;
    fn try_from(mut v: Vec<PolyZ>) -> Result<Self, CfError> {
        if v.is_empty() {
            return PQStream::new(PolyZ::zero(), Vec::new());
        }
        let a0 = v.remove(0);
        PQStream::new(a0, v)
    }
}

impl From<PQStream> for Vec<PolyZ> {
    fn from(s: PQStream) -> Self {
        std::iter::once(s.a0).chain(s.quotients).collect()
    }
}

impl PQStream {
    pub fn new(a0: PolyZ, quotients: Vec<PolyZ>) -> Result<Self, CfError> {
        if let Some(i) = quotients.iter().position(PolyZ::is_constant) {
            return Err(CfError::ConstantQuotient { index: i + 1 });
        }
        Ok(PQStream { a0, quotients })
    }

    /// `[0; t_0, t_1, ...]` over the first `n` Thue–Morse letters.
    pub fn thue_morse(a: &PolyZ, b: &PolyZ, n: usize) -> Result<Self, CfError> {
        let word = TMWord::prefix(n, a.clone(), b.clone());
        PQStream::new(PolyZ::zero(), word.letters_as_polys())
    }

    pub fn a0(&self) -> &PolyZ {
        &self.a0
    }

    /// `a_1, a_2, ...`.
    pub fn quotients(&self) -> &[PolyZ] {
        &self.quotients
    }

    /// Number of quotients after `a_0`.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn degree_sum(&self, k: usize) -> usize {
        self.quotients[..k]
            .iter()
            .map(|q| q.deg().unwrap_or(0))
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strings serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `p_k / q_k` together with `p_{k-1} / q_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: usize,
    pub p: PolyZ,
    pub q: PolyZ,
    pub p_prev: PolyZ,
    pub q_prev: PolyZ,
}

/// Convergent `k` by the three-term recurrence (the left fold of the
/// quotient matrices, one column at a time).
pub fn cf_convergents(s: &PQStream, k: usize) -> Result<ConvergentPair, CfError> {
    if k > s.len() {
        return Err(CfError::IndexOutOfRange {
            index: k,
            len: s.len(),
        });
    }
    let (mut p_prev, mut p) = (PolyZ::one(), s.a0.clone());
    let (mut q_prev, mut q) = (PolyZ::zero(), PolyZ::one());
    for a in &s.quotients[..k] {
        let p_next = &a.mul(&p) + &p_prev;
        let q_next = &a.mul(&q) + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok(ConvergentPair {
        index: k,
        p,
        q,
        p_prev,
        q_prev,
    })
}

/// Product of the quotient matrices along the Thue–Morse prefix of length
/// `4^level`, built from the blocks `X_{j+1} = X_j Y_j Y_j X_j` where `Y_j`
/// is `X_j` with the letters exchanged.
pub fn tm_block_product<R: Ring>(level: u32, a: &R, b: &R) -> Mat2<R> {
    let mut x = Mat2::quotient(a.clone());
    let mut y = Mat2::quotient(b.clone());
    for _ in 0..level {
        let yy = y.mul(&y);
        let xx = x.mul(&x);
        let nx = x.mul(&yy).mul(&x);
        let ny = y.mul(&xx).mul(&y);
        x = nx;
        y = ny;
    }
    x
}

/// Convergent `4^level` of the Thue–Morse continued fraction over `{a, b}`.
pub fn tm_convergent(level: u32, a: &PolyZ, b: &PolyZ) -> ConvergentPair {
    let m = tm_block_product(level, a, b);
    let [[q, q_prev], [p, p_prev]] = m.e;
    ConvergentPair {
        index: 4usize.pow(level),
        p,
        q,
        p_prev,
        q_prev,
    }
}

/// Value of the continued fraction, exact for exponents `>= -precision`.
pub fn cf_eval(s: &PQStream, precision: usize) -> Result<LaurentZ, CfError> {
    let c = cf_convergents(s, s.len())?;
    let available = 2 * c.q.deg().unwrap_or(0);
    if available < precision {
        return Err(CfError::InsufficientStream {
            available,
            precision,
        });
    }
    // |ξ - p/q| <= 2^{-2 deg q - 1}
    Ok(LaurentZ::from_fraction(&c.p, &c.q, -(precision as i64)).expect("q is nonzero"))
}

/// Continued-fraction expansion of `x`, stopping when the next quotient
/// would depend on coefficients below the horizon.
pub fn cf_expand(x: &LaurentZ, count: usize) -> Result<PQStream, CfError> {
    let exhausted = |a0: PolyZ, qs: Vec<PolyZ>| CfError::HorizonExhausted {
        extracted: qs.len(),
        stream: PQStream { a0, quotients: qs },
    };
    let Ok(a0) = x.poly_part() else {
        return Err(CfError::HorizonExhausted {
            extracted: 0,
            stream: PQStream {
                a0: PolyZ::zero(),
                quotients: Vec::new(),
            },
        });
    };
    let mut quotients = Vec::with_capacity(count);
    let mut cur = x.frac();
    while quotients.len() < count {
        let Ok(inv) = cur.inv() else {
            return Err(exhausted(a0, quotients));
        };
        let Ok(a) = inv.poly_part() else {
            return Err(exhausted(a0, quotients));
        };
        quotients.push(a);
        cur = inv.frac();
    }
    Ok(PQStream { a0, quotients })
}

/// The Thue–Morse word over `{a, b}`: `t_k` is `b` exactly when the binary
/// expansion of `k` has an odd number of ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMWord {
    pub a: PolyZ,
    pub b: PolyZ,
    /// Bit `k` set means `t_k = b`.
    letters: Vec<u64>,
    len: usize,
}

impl TMWord {
    pub fn prefix(n: usize, a: PolyZ, b: PolyZ) -> Self {
        let mut letters = vec![0u64; n.div_ceil(64)];
        for k in 0..n {
            if k.count_ones() % 2 == 1 {
                letters[k / 64] |= 1 << (k % 64);
            }
        }
        TMWord {
            a,
            b,
            letters,
            len: n,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `false` for `a`, `true` for `b`.
    pub fn is_b(&self, k: usize) -> bool {
        (self.letters[k / 64] >> (k % 64)) & 1 == 1
    }

    pub fn letter(&self, k: usize) -> &PolyZ {
        if self.is_b(k) {
            &self.b
        } else {
            &self.a
        }
    }

    pub fn letters_as_polys(&self) -> Vec<PolyZ> {
        (0..self.len).map(|k| self.letter(k).clone()).collect()
    }

    /// The word spelled with `a` and `b`.
    pub fn as_ab_string(&self) -> String {
        (0..self.len)
            .map(|k| if self.is_b(k) { 'b' } else { 'a' })
            .collect()
    }

    pub fn is_palindrome(&self, n: usize) -> bool {
        (0..n / 2).all(|k| self.is_b(k) == self.is_b(n - 1 - k))
    }
}

/// Degree statistics of the first `window` partial quotients `a_1..a_window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub window: usize,
    pub max_degree: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl Spectrum {
    /// Lagrange-constant estimate `2^{-max_degree}`.
    pub fn lagrange_estimate(&self) -> Norm {
        Norm::pow2(-(self.max_degree as i64))
    }
}

pub fn spectrum_window(s: &PQStream, window: usize) -> Result<Spectrum, CfError> {
    if window > s.len() {
        return Err(CfError::WindowTooLarge {
            window,
            len: s.len(),
        });
    }
    let mut histogram = BTreeMap::new();
    for q in &s.quotients[..window] {
        *histogram.entry(q.deg().unwrap_or(0)).or_insert(0) += 1;
    }
    let max_degree = histogram.keys().next_back().copied().unwrap_or(0);
    Ok(Spectrum {
        window,
        max_degree,
        histogram,
    })
}
