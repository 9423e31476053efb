//! Minimal commutative-ring abstraction shared by univariate and bivariate
//! polynomials, plus 2x2 matrices over such rings.

use crate::poly::PolyZ;

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for PolyZ {
    fn zero() -> Self {
        PolyZ::zero()
    }
    fn one() -> Self {
        PolyZ::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        PolyZ::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        PolyZ::is_zero(self)
    }
}

/// Row-major 2x2 matrix `[[e00, e01], [e10, e11]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<R> {
    pub e: [[R; 2]; 2],
}

impl<R: Ring> Mat2<R> {
    pub fn new(e00: R, e01: R, e10: R, e11: R) -> Self {
        Mat2 {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn identity() -> Self {
        Mat2::new(R::one(), R::zero(), R::zero(), R::one())
    }

    /// The continued-fraction step matrix `[[a, 1], [1, 0]]`.
    pub fn quotient(a: R) -> Self {
        Mat2::new(a, R::one(), R::one(), R::zero())
    }

    pub fn mul(&self, o: &Mat2<R>) -> Mat2<R> {
        let [[a, b], [c, d]] = &self.e;
        let [[w, x], [y, z]] = &o.e;
        Mat2::new(
            a.mul(w).add(&b.mul(y)),
            a.mul(x).add(&b.mul(z)),
            c.mul(w).add(&d.mul(y)),
            c.mul(x).add(&d.mul(z)),
        )
    }

    /// Determinant; signs are irrelevant in characteristic 2.
    pub fn det(&self) -> R {
        let [[a, b], [c, d]] = &self.e;
        a.mul(d).add(&b.mul(c))
    }

    pub fn is_symmetric(&self) -> bool {
        self.e[0][1] == self.e[1][0]
    }

    pub fn map<S, F: Fn(&R) -> S>(&self, f: F) -> Mat2<S> {
        let [[a, b], [c, d]] = &self.e;
        Mat2 {
            e: [[f(a), f(b)], [f(c), f(d)]],
        }
    }
}

/// Left-to-right product of a sequence of matrices.
pub fn fold_product<'a, R: Ring + 'a, I: IntoIterator<Item = &'a Mat2<R>>>(mats: I) -> Mat2<R> {
    mats.into_iter().fold(Mat2::identity(), |acc, m| acc.mul(m))
}

/// `Σ_i Π_j terms[i][j]`. With `reversed`, every product and the outer sum
/// are taken in the opposite order; in a commutative ring both agree.
pub fn sum_of_products<R: Ring>(terms: &[Vec<&R>], reversed: bool) -> R {
    let product = |t: &Vec<&R>| -> R {
        let mut it: Box<dyn Iterator<Item = &&R>> = if reversed {
            Box::new(t.iter().rev())
        } else {
            Box::new(t.iter())
        };
        match it.next() {
            None => R::one(),
            Some(first) => it.fold((*first).clone(), |acc, f| acc.mul(f)),
        }
    };
    let mut acc = R::zero();
    if reversed {
        for t in terms.iter().rev() {
            acc = acc.add(&product(t));
        }
    } else {
        for t in terms {
            acc = acc.add(&product(t));
        }
    }
    acc
}
