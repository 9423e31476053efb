use super::{BiPoly, BiPolyError};

/// Element of GF(2)[[a, b]] known up to total degree `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    poly: BiPoly,
    cap: usize,
}

impl BiSeries {
    pub fn new(p: &BiPoly, cap: usize) -> Self {
        BiSeries {
            poly: p.truncate_total(cap),
            cap,
        }
    }

    pub fn zero(cap: usize) -> Self {
        BiSeries::new(&BiPoly::zero(), cap)
    }

    pub fn one(cap: usize) -> Self {
        BiSeries::new(&BiPoly::one(), cap)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Known monomials as a polynomial.
    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<bool> {
        (i + j <= self.cap).then(|| self.poly.contains(i, j))
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let cap = self.cap.min(other.cap);
        BiSeries::new(&self.poly.add(&other.poly), cap)
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let cap = self.cap.min(other.cap);
        let x = self.poly.truncate_total(cap);
        let y = other.poly.truncate_total(cap);
        BiSeries::new(&x.mul(&y), cap)
    }

    pub fn square(&self) -> BiSeries {
        BiSeries::new(&self.poly.square(), self.cap)
    }

    /// Inverse of a series with constant term 1, by the characteristic-2
    /// Newton step `y <- d · y^2`, which squares the error `1 + d·y`.
    pub fn inv(&self) -> Result<BiSeries, BiPolyError> {
        if !self.poly.contains(0, 0) {
            return Err(BiPolyError::NonUnitDenominator);
        }
        let mut y = BiSeries::one(self.cap);
        let mut order = 1usize;
        while order <= self.cap {
            y = self.mul(&y.square());
            order *= 2;
        }
        Ok(y)
    }

    pub fn div(&self, den: &BiSeries) -> Result<BiSeries, BiPolyError> {
        Ok(self.mul(&den.inv()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divide_by_one() {
        let x = BiSeries::new(&"a^3+a*b+b".parse().unwrap(), 10);
        assert_eq!(x.div(&BiSeries::one(10)).unwrap(), x);
    }

    #[test]
    fn geometric_series() {
        let cap = 12;
        let num = BiSeries::new(&BiPoly::a(), cap);
        let den = BiSeries::new(&"1+b".parse().unwrap(), cap);
        let q = num.div(&den).unwrap();
        let expected = BiPoly::from_terms((0..cap).map(|j| (1, j)));
        assert_eq!(q.poly(), &expected);
    }

    #[test]
    fn non_unit_denominator() {
        let den = BiSeries::new(&BiPoly::a(), 5);
        assert_eq!(
            BiSeries::one(5).div(&den),
            Err(BiPolyError::NonUnitDenominator)
        );
    }
}
