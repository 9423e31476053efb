//! Numerical and structural checks on the Thue–Morse continued fraction
//! `ξ_{a,b}` for concrete polynomials `a, b` in GF(2)[z].

mod approx;
mod hankel;
mod quartic;
mod riccati;
mod roots;
mod toeplitz;

pub use approx::{
    approx_certificate, approx_experiment, vanishing_search, ApproxRecord, SearchResult,
};
pub use hankel::{
    hankel_determinants, hankel_suite, jacobi_coeffs, jacobi_series, omega_coeffs,
    omega_quartic_check, omega_quartic_coefficients, recover_jacobi, tm_jacobi_u, JacobiFraction,
};
pub use quartic::{epsilon_check, verify_quartic_at_series};
pub use riccati::riccati_check;
pub use roots::{
    baum_sweet_root, mahler_root, reference_roots, spectrum_growth, RefRoot, RootSpectrum,
    SPECTRUM_PRECISION,
};
pub use toeplitz::{hyperquadratic_toeplitz, toeplitz_matrix, verify_coefficient_support};

use thiserror::Error;

use crate::bipoly::BiPolyError;
use crate::contfrac::{cf_eval, CfError, PQStream};
use crate::identity::quartic_coefficients;
use crate::poly::PolyZ;
use crate::series::{LaurentZ, SeriesError};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("precision exhausted while computing {what}; raise the precision")]
    PrecisionExhausted { what: String },
    #[error("need {needed} coefficients, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    BiPoly(#[from] BiPolyError),
}

/// A pair of distinct nonconstant polynomials and the specialized quartic
/// coefficients `A_j(a, b)`.
#[derive(Clone, Debug)]
pub struct QuarticInstance {
    pub a: PolyZ,
    pub b: PolyZ,
    pub coeffs: [PolyZ; 5],
}

impl QuarticInstance {
    pub fn new(a: PolyZ, b: PolyZ) -> Result<Self, AnalysisError> {
        if a.deg().unwrap_or(0) == 0 || b.deg().unwrap_or(0) == 0 {
            return Err(AnalysisError::InvalidAlphabet(format!(
                "a = {a} and b = {b} must both be nonconstant"
            )));
        }
        if a == b {
            return Err(AnalysisError::InvalidAlphabet(format!("a = b = {a}")));
        }
        let coeffs = quartic_coefficients().map(|c| c.subst(&a, &b));
        Ok(QuarticInstance { a, b, coeffs })
    }

    /// `deg a + deg b`.
    pub fn degree(&self) -> usize {
        self.a.deg().unwrap_or(0) + self.b.deg().unwrap_or(0)
    }

    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs.iter().filter_map(PolyZ::deg).max().unwrap_or(0)
    }

    /// Shortest Thue–Morse stream whose last convergent determines `ξ` down
    /// to `z^{-precision}`.
    pub fn stream(&self, precision: usize) -> Result<PQStream, AnalysisError> {
        let (da, db) = (self.a.deg().unwrap_or(0), self.b.deg().unwrap_or(0));
        let mut deg_q = 0;
        let mut n = 0;
        while 2 * deg_q < precision {
            deg_q += if (n as u64).count_ones() % 2 == 1 {
                db
            } else {
                da
            };
            n += 1;
        }
        Ok(PQStream::thue_morse(&self.a, &self.b, n)?)
    }

    /// `ξ_{a,b}` exact down to `z^{-precision}`.
    pub fn xi(&self, precision: usize) -> Result<LaurentZ, AnalysisError> {
        Ok(cf_eval(&self.stream(precision)?, precision)?)
    }
}

impl QuarticInstance {
    /// Parses both polynomials, e.g. `"z^2+z"`.
    pub fn parse(a: &str, b: &str) -> Result<QuarticInstance, AnalysisError> {
        let pa = a
            .parse::<PolyZ>()
            .map_err(|e| AnalysisError::InvalidAlphabet(format!("a: {e}")))?;
        let pb = b
            .parse::<PolyZ>()
            .map_err(|e| AnalysisError::InvalidAlphabet(format!("b: {e}")))?;
        QuarticInstance::new(pa, pb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(QuarticInstance::parse("z", "z").is_err());
        assert!(QuarticInstance::parse("1", "z").is_err());
        assert!(QuarticInstance::parse("z+1", "0").is_err());
        let q = QuarticInstance::parse("z+1", "z").unwrap();
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn stream_is_long_enough() {
        let q = QuarticInstance::parse("z^2+z", "z^3+1").unwrap();
        let x = q.xi(300).unwrap();
        assert_eq!(x.horizon(), -300);
        assert_eq!(x.top(), Some(-2));
    }
}
