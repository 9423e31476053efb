use super::AnalysisError;
use crate::bipoly::{det_cofactor, det_kronecker, BiPoly, MAX_COFACTOR_SIZE};
use crate::cert::{Certificate, Check};
use crate::identity::quartic_coefficients;

/// The `(2^s - 2)`-square banded matrix with entry `A_{2+r-c}` at `(r, c)`.
pub fn toeplitz_matrix(s: u32) -> Vec<Vec<BiPoly>> {
    let m = (1usize << s) - 2;
    let a = quartic_coefficients();
    (0..m)
        .map(|r| {
            (0..m)
                .map(|c| {
                    let k = 2 + r as i64 - c as i64;
                    if (0..=4).contains(&k) {
                        a[k as usize].clone()
                    } else {
                        BiPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Every `A_j` has its terms `a^i b^j` with `i, j <= 4` and `i + j <= 7`,
/// except `a^4 b^4`, which occurs in `A_2` only.
pub fn verify_coefficient_support() -> Certificate {
    let a = quartic_coefficients();
    let mut c = Certificate::new("quartic-coefficient-support");
    for (j, x) in a.iter().enumerate() {
        let has = x.contains(4, 4);
        c.assert(
            format!("a^4b^4 in A_{j}: {}", j == 2),
            has == (j == 2),
            format!("found {has}"),
        );
        let bad: Vec<_> = x
            .terms()
            .filter(|&(i, k)| (i, k) != (4, 4) && (i > 4 || k > 4 || i + k > 7))
            .collect();
        c.assert(
            format!("A_{j} other terms within i,j<=4, i+j<=7"),
            bad.is_empty(),
            format!("{bad:?}"),
        );
    }
    c
}

/// Determinant of the banded Toeplitz matrix for `s` in `2..=4`: nonzero,
/// containing `(ab)^{4m}` and of partial degrees at most `4m`, where
/// `m = 2^s - 2`.
pub fn hyperquadratic_toeplitz(s: u32) -> Result<(Certificate, BiPoly), AnalysisError> {
    if !(2..=4).contains(&s) {
        return Err(AnalysisError::OutOfRange(format!("s = {s} not in 2..=4")));
    }
    let mat = toeplitz_matrix(s);
    let m = mat.len();
    let det = det_kronecker(&mat)?;
    let mut c = Certificate::new(format!("hyperquadratic-toeplitz/s={s}"))
        .param("s", s)
        .param("size", m)
        .param("terms", det.len());
    if m <= MAX_COFACTOR_SIZE {
        let cof = det_cofactor(&mat)?;
        c.push(Check::residual("cofactor + kronecker", &cof.add(&det)));
    } else {
        c.note("size above the cofactor limit; kronecker only");
    }
    if s == 2 {
        let a = quartic_coefficients();
        let closed = a[2].square().add(&a[1].square());
        c.push(Check::residual("det + A_2^2 + A_1^2", &det.add(&closed)));
    }
    let bound = 4 * m;
    c.assert("det nonzero", !det.is_zero(), "0");
    c.assert(
        format!("contains a^{bound} b^{bound}"),
        det.contains(bound, bound),
        "monomial absent",
    );
    let (da, db) = (det.deg_a().unwrap_or(0), det.deg_b().unwrap_or(0));
    c.assert(
        format!("deg_a, deg_b <= {bound}"),
        da <= bound && db <= bound,
        format!("deg_a {da}, deg_b {db}"),
    );
    Ok((c, det))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_structure() {
        assert!(verify_coefficient_support().pass);
    }

    #[test]
    fn small_determinants() {
        for s in 2..=3 {
            let (c, _) = hyperquadratic_toeplitz(s).unwrap();
            assert!(c.pass, "{c:?}");
        }
        assert!(hyperquadratic_toeplitz(5).is_err());
    }
}
