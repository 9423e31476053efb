//! Truncated Laurent series in `z^{-1}` over GF(2) with explicit horizons.
//!
//! A [`LaurentZ`] stores the coefficients of the exponents `horizon ..= top`.
//! Every coefficient at an exponent `>= horizon` is exact; nothing is known
//! below. Each operation derives the horizon of its result from the error
//! bound of its operands, and no accessor ever reports a coefficient below it.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::PolyZ;

/// Default number of coefficient positions for series work.
pub const DEFAULT_PRECISION: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series is zero up to its horizon z^{horizon}; it cannot be inverted")]
    ZeroSeries { horizon: i64 },
    #[error("coefficient at odd exponent z^{exponent} is set; the series is not a square")]
    NotASquare { exponent: i64 },
    #[error("polynomial part is not determined: horizon z^{horizon} is above z^0")]
    PolynomialPartUnknown { horizon: i64 },
}

/// The ultrametric absolute value `|x| = 2^exponent`, with `None` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Norm {
    pub exponent: Option<i64>,
}

impl Norm {
    pub const ZERO: Norm = Norm { exponent: None };

    pub fn pow2(exponent: i64) -> Self {
        Norm {
            exponent: Some(exponent),
        }
    }

    pub fn of_poly(p: &PolyZ) -> Self {
        Norm {
            exponent: p.deg().map(|d| d as i64),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }
}

impl std::ops::Mul for Norm {
    type Output = Norm;

    /// `|x|·|y|`: exponents add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Norm) -> Norm {
        match (self.exponent, other.exponent) {
            (Some(a), Some(b)) => Norm::pow2(a + b),
            _ => Norm::ZERO,
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponent.cmp(&other.exponent)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            None => f.write_str("0"),
            Some(e) => write!(f, "2^{e}"),
        }
    }
}

/// Truncated element of GF(2)((z^{-1})).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentZ {
    /// Bit `i` is the coefficient of `z^(horizon + i)`.
    coeffs: PolyZ,
    horizon: i64,
}

impl LaurentZ {
    /// The zero series known down to `horizon`.
    pub fn zero(horizon: i64) -> Self {
        LaurentZ {
            coeffs: PolyZ::zero(),
            horizon,
        }
    }

    /// `coeffs` has bit 0 at exponent `low`; re-anchors it at `horizon`.
    fn from_parts(coeffs: PolyZ, low: i64, horizon: i64) -> Self {
        let coeffs = if horizon >= low {
            coeffs.shr((horizon - low) as usize)
        } else {
            coeffs.shl((low - horizon) as usize)
        };
        LaurentZ { coeffs, horizon }
    }

    /// An exact polynomial viewed as a series, reported down to `horizon`.
    pub fn from_poly(p: &PolyZ, horizon: i64) -> Self {
        if horizon <= 0 {
            LaurentZ {
                coeffs: p.shl((-horizon) as usize),
                horizon,
            }
        } else {
            LaurentZ {
                coeffs: p.shr(horizon as usize),
                horizon,
            }
        }
    }

    /// Sum of `z^e`; exponents below `horizon` are dropped, repeats cancel.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exps: I, horizon: i64) -> Self {
        let coeffs = PolyZ::from_exponents(
            exps.into_iter()
                .filter(|&e| e >= horizon)
                .map(|e| (e - horizon) as usize),
        );
        LaurentZ { coeffs, horizon }
    }

    pub fn monomial(e: i64, horizon: i64) -> Self {
        LaurentZ::from_exponents([e], horizon)
    }

    /// Expansion of the exact fraction `p / q` down to `horizon`.
    pub fn from_fraction(
        p: &PolyZ,
        q: &PolyZ,
        horizon: i64,
    ) -> Result<Self, crate::poly::PolyError> {
        if q.is_zero() {
            return Err(crate::poly::PolyError::DivisionByZero);
        }
        // floor(p z^{-h} / q) carries every exponent >= h exactly.
        let (num, low_shift) = if horizon <= 0 {
            (p.shl((-horizon) as usize), 0)
        } else {
            (p.clone(), horizon as usize)
        };
        let (quot, _) = num.divrem(&q.shl(low_shift))?;
        Ok(LaurentZ {
            coeffs: quot,
            horizon,
        })
    }

    /// Lowest exponent whose coefficient is known exactly.
    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    /// Exponent of the leading term, `None` when zero up to the horizon.
    pub fn top(&self) -> Option<i64> {
        self.coeffs.deg().map(|d| self.horizon + d as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Coefficient of `z^e`, `None` below the horizon.
    pub fn coeff(&self, e: i64) -> Option<bool> {
        (e >= self.horizon).then(|| self.coeffs.coeff((e - self.horizon) as usize))
    }

    /// Exponents with nonzero coefficient, descending.
    pub fn exponents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .coeffs
            .exponents()
            .map(|i| self.horizon + i as i64)
            .collect();
        v.reverse();
        v
    }

    pub fn norm(&self) -> Norm {
        Norm {
            exponent: self.top(),
        }
    }

    /// Raises the horizon, discarding known coefficients below `h`.
    pub fn truncate_to(&self, h: i64) -> Self {
        if h <= self.horizon {
            // lowering would claim unknown coefficients
            return self.clone();
        }
        LaurentZ::from_parts(self.coeffs.clone(), self.horizon, h)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentZ {
            coeffs: self.coeffs.clone(),
            horizon: self.horizon + k,
        }
    }

    pub fn add(&self, other: &LaurentZ) -> LaurentZ {
        let h = self.horizon.max(other.horizon);
        let x = self.truncate_to(h);
        let y = other.truncate_to(h);
        LaurentZ {
            coeffs: &x.coeffs + &y.coeffs,
            horizon: h,
        }
    }

    /// Upper bound for the exponent of the unknown tail plus one: for a
    /// nonzero series the leading exponent, otherwise `horizon - 1`.
    fn magnitude(&self) -> i64 {
        self.top().unwrap_or(self.horizon - 1)
    }

    /// Product. The horizon is the lowest exponent not reached by any of the
    /// cross error terms `X·e_y`, `e_x·Y`, `e_x·e_y`.
    pub fn mul(&self, other: &LaurentZ) -> LaurentZ {
        let h = (self.magnitude() + other.horizon)
            .max(other.magnitude() + self.horizon)
            .max(self.horizon + other.horizon - 1);
        let low = self.horizon + other.horizon;
        LaurentZ::from_parts(self.coeffs.mul(&other.coeffs), low, h)
    }

    /// Frobenius square; exact down to `2·horizon - 1`.
    pub fn square(&self) -> LaurentZ {
        LaurentZ::from_parts(self.coeffs.square(), 2 * self.horizon, 2 * self.horizon - 1)
    }

    /// Product with an exact polynomial; the horizon moves up by `deg p`.
    pub fn mul_poly(&self, p: &PolyZ) -> LaurentZ {
        let Some(d) = p.deg() else {
            return LaurentZ::zero(i64::MIN / 4);
        };
        LaurentZ::from_parts(self.coeffs.mul(p), self.horizon, self.horizon + d as i64)
    }

    pub fn pow(&self, e: u32) -> LaurentZ {
        match e {
            0 => LaurentZ::from_poly(&PolyZ::one(), self.horizon.min(0)),
            1 => self.clone(),
            _ if e.is_multiple_of(2) => self.pow(e / 2).square(),
            _ => self.pow(e - 1).mul(self),
        }
    }

    /// Multiplicative inverse; keeps the number of known coefficients.
    pub fn inv(&self) -> Result<LaurentZ, SeriesError> {
        let t = self.top().ok_or(SeriesError::ZeroSeries {
            horizon: self.horizon,
        })?;
        let d = (t - self.horizon) as usize;
        // 1/x = z^{-h} / X, and z^{2d} = Q X + R with deg R < d.
        let (q, _) = PolyZ::monomial(2 * d)
            .divrem(&self.coeffs)
            .expect("nonzero divisor");
        Ok(LaurentZ {
            coeffs: q,
            horizon: self.horizon - 2 * t,
        })
    }

    /// Square root in characteristic 2: every exponent is halved.
    pub fn sqrt(&self) -> Result<LaurentZ, SeriesError> {
        if let Some(e) = self.exponents().into_iter().find(|e| e.rem_euclid(2) == 1) {
            return Err(SeriesError::NotASquare { exponent: e });
        }
        let h = self.horizon.div_euclid(2) + self.horizon.rem_euclid(2);
        Ok(LaurentZ::from_exponents(
            self.exponents().into_iter().map(|e| e / 2),
            h,
        ))
    }

    /// Formal derivative with respect to `z`.
    pub fn derivative(&self) -> LaurentZ {
        LaurentZ::from_exponents(
            self.exponents()
                .into_iter()
                .filter(|e| e.rem_euclid(2) == 1)
                .map(|e| e - 1),
            self.horizon - 1,
        )
    }

    /// Part with strictly negative exponents.
    pub fn frac(&self) -> LaurentZ {
        if self.horizon >= 0 {
            return LaurentZ::zero(self.horizon);
        }
        LaurentZ {
            coeffs: self.coeffs.truncate((-self.horizon) as usize),
            horizon: self.horizon,
        }
    }

    /// Part with nonnegative exponents, as a polynomial.
    pub fn poly_part(&self) -> Result<PolyZ, SeriesError> {
        if self.horizon > 0 {
            return Err(SeriesError::PolynomialPartUnknown {
                horizon: self.horizon,
            });
        }
        Ok(self.coeffs.shr((-self.horizon) as usize))
    }

    /// Norm of the series and its fractional part.
    pub fn norm_and_frac(&self) -> (Norm, LaurentZ) {
        (self.norm(), self.frac())
    }

    /// True when both series have the same coefficients at every exponent
    /// known to both.
    pub fn agrees_with(&self, other: &LaurentZ) -> bool {
        let h = self.horizon.max(other.horizon);
        self.truncate_to(h).coeffs == other.truncate_to(h).coeffs
    }

    /// Number of coefficient positions from the leading term down to the
    /// horizon.
    pub fn known_terms(&self) -> usize {
        self.top().map_or(0, |t| (t - self.horizon + 1) as usize)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    match e {
        0 => f.write_str("1"),
        1 => f.write_str("z"),
        e if e > 1 => write!(f, "z^{e}"),
        e => write!(f, "z^{{{e}}}"),
    }
}

impl fmt::Display for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in self.exponents().into_iter().enumerate() {
            if n > 0 {
                f.write_str("+")?;
            }
            write_monomial(f, e)?;
        }
        if !self.is_zero() {
            f.write_str("+")?;
        }
        f.write_str("O(")?;
        write_monomial(f, self.horizon - 1)?;
        f.write_str(")")
    }
}

impl fmt::Debug for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentZ({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PolyZ {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_products() {
        let x = LaurentZ::monomial(-1, -40);
        assert_eq!(x.mul(&x).exponents(), vec![-2]);
        let y = LaurentZ::from_exponents([-1, -4, -16], -60);
        assert_eq!(y.mul(&y).exponents(), vec![-2, -8, -32]);
        assert_eq!(y.square().exponents(), vec![-2, -8, -32]);
    }

    #[test]
    fn inverse_examples() {
        let z = LaurentZ::from_poly(&PolyZ::z(), -20);
        let inv = z.inv().unwrap();
        assert_eq!(inv.exponents(), vec![-1]);
        let zp1 = LaurentZ::from_poly(&p("z+1"), -20);
        let inv = zp1.inv().unwrap();
        assert_eq!(inv.top(), Some(-1));
        assert_eq!(
            inv.exponents(),
            (inv.horizon()..=-1).rev().collect::<Vec<_>>()
        );
        assert_eq!(
            LaurentZ::zero(-5).inv(),
            Err(SeriesError::ZeroSeries { horizon: -5 })
        );
    }

    #[test]
    fn sqrt_examples() {
        let x = LaurentZ::monomial(-2, -10);
        assert_eq!(x.sqrt().unwrap().exponents(), vec![-1]);
        let y = LaurentZ::from_poly(&p("z^2+1"), -10);
        assert_eq!(y.sqrt().unwrap().exponents(), vec![1, 0]);
        let odd = LaurentZ::from_exponents([-2, -3], -10);
        assert_eq!(odd.sqrt(), Err(SeriesError::NotASquare { exponent: -3 }));
        // odd horizon: z^{-5} is known, so z^{-3} of the root is not
        assert_eq!(LaurentZ::zero(-5).sqrt().unwrap().horizon(), -2);
    }

    #[test]
    fn norm_and_fractional_part() {
        let x = LaurentZ::from_exponents([2, 0, -1], -10);
        let (n, f) = x.norm_and_frac();
        assert_eq!(n, Norm::pow2(2));
        assert_eq!(f.exponents(), vec![-1]);
        let poly = LaurentZ::from_poly(&p("z^5+z^2+1"), -30);
        assert!(poly.frac().is_zero());
        assert_eq!(poly.poly_part().unwrap(), p("z^5+z^2+1"));
        assert_eq!(LaurentZ::zero(-3).norm(), Norm::ZERO);
    }

    #[test]
    fn fraction_expansion() {
        // 1/(z+1) = z^{-1} + z^{-2} + ...
        let s = LaurentZ::from_fraction(&PolyZ::one(), &p("z+1"), -12).unwrap();
        assert_eq!(s.exponents(), (-12..=-1).rev().collect::<Vec<_>>());
        assert_eq!(s.horizon(), -12);
    }

    #[test]
    fn display_marks_horizon() {
        let x = LaurentZ::from_exponents([1, 0, -1, -3], -4);
        assert_eq!(x.to_string(), "z+1+z^{-1}+z^{-3}+O(z^{-5})");
        assert_eq!(LaurentZ::zero(0).to_string(), "O(z^{-1})");
    }

    #[test]
    fn derivative_in_char_two() {
        let x = LaurentZ::from_exponents([3, 2, -1, -2, -3], -8);
        assert_eq!(x.derivative().exponents(), vec![2, -2, -4]);
        assert_eq!(x.derivative().horizon(), -9);
    }

    #[test]
    fn horizons_propagate() {
        let x = LaurentZ::from_exponents([-1, -3], -10);
        let y = LaurentZ::from_exponents([0, -2], -6);
        let prod = x.mul(&y);
        // max(top_x + h_y, top_y + h_x) = max(-7, -10)
        assert_eq!(prod.horizon(), -7);
        assert_eq!(x.add(&y).horizon(), -6);
        assert_eq!(x.mul_poly(&p("z^3+1")).horizon(), -7);
    }
}
