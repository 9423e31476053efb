use std::fmt;

use super::BiPoly;
use crate::ring::Ring;

/// `numerator · τ^tau_exponent` with `τ = 1 + a + b`.
///
/// Canonical form: the numerator is not divisible by `τ`, and zero is stored
/// with exponent 0. Equality of canonical forms is equality of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauLaurent {
    numerator: BiPoly,
    tau_exponent: i64,
}

impl TauLaurent {
    pub fn new(numerator: BiPoly, tau_exponent: i64) -> Self {
        let mut x = TauLaurent {
            numerator,
            tau_exponent,
        };
        x.canonicalize();
        x
    }

    pub fn zero() -> Self {
        TauLaurent::new(BiPoly::zero(), 0)
    }

    pub fn one() -> Self {
        TauLaurent::new(BiPoly::one(), 0)
    }

    /// `τ^e`.
    pub fn tau_pow(e: i64) -> Self {
        TauLaurent::new(BiPoly::one(), e)
    }

    pub fn from_poly(p: BiPoly) -> Self {
        TauLaurent::new(p, 0)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.tau_exponent = 0;
            return;
        }
        while let Some(q) = self.numerator.div_tau() {
            self.numerator = q;
            self.tau_exponent += 1;
        }
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.numerator
    }

    pub fn tau_exponent(&self) -> i64 {
        self.tau_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &TauLaurent) -> TauLaurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.tau_exponent.min(other.tau_exponent);
        let lift = |x: &TauLaurent| {
            x.numerator
                .mul(&BiPoly::tau().pow((x.tau_exponent - low) as u64))
        };
        TauLaurent::new(lift(self).add(&lift(other)), low)
    }

    pub fn mul(&self, other: &TauLaurent) -> TauLaurent {
        TauLaurent::new(
            self.numerator.mul(&other.numerator),
            self.tau_exponent + other.tau_exponent,
        )
    }

    pub fn square(&self) -> TauLaurent {
        TauLaurent {
            numerator: self.numerator.square(),
            tau_exponent: 2 * self.tau_exponent,
        }
    }

    /// The polynomial `self · τ^shift`, if that is a polynomial.
    pub fn to_poly_times_tau(&self, shift: i64) -> Option<BiPoly> {
        let e = self.tau_exponent + shift;
        (e >= 0).then(|| self.numerator.mul(&BiPoly::tau().pow(e as u64)))
    }

    /// The element as a polynomial, if its τ-exponent is nonnegative.
    pub fn to_poly(&self) -> Option<BiPoly> {
        self.to_poly_times_tau(0)
    }
}

impl Ring for TauLaurent {
    fn zero() -> Self {
        TauLaurent::zero()
    }
    fn one() -> Self {
        TauLaurent::one()
    }
    fn add(&self, other: &Self) -> Self {
        TauLaurent::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TauLaurent::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        TauLaurent::is_zero(self)
    }
}

impl fmt::Display for TauLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·τ^{}", self.numerator, self.tau_exponent)
    }
}
