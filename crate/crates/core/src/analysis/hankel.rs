use super::{AnalysisError, QuarticInstance};
use crate::cert::{Certificate, Check};
use crate::linalg::{det, BitVec};
use crate::poly::PolyZ;
use crate::series::LaurentZ;

/// Coefficient sequence of a Jacobi continued fraction with all `v_j = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiFraction {
    /// `u_1, u_2, ...`
    pub u: Vec<bool>,
    /// `c_0, c_1, ...`
    pub c: Vec<bool>,
}

/// The `u` sequence of `ω`: Thue–Morse over `{0,1}` starting `1,0,0,1`.
pub fn tm_jacobi_u(n: usize) -> bool {
    debug_assert!(n >= 1);
    (n - 1).count_ones().is_multiple_of(2)
}

/// `c_0..c_{n-1}` of `1/(1 + u_1x + x²/(1 + u_2x + x²/(...)))` cut at the
/// given depth.
pub fn jacobi_series(u: impl Fn(usize) -> bool, n: usize, depth: usize) -> PolyZ {
    let (mut num, mut den) = (PolyZ::zero(), PolyZ::one());
    for i in (1..=depth).rev() {
        let lin = if u(i) {
            PolyZ::from_u64(0b11)
        } else {
            PolyZ::one()
        };
        let next = &lin.mul(&den) + &num.shl(2);
        num = den;
        den = next.truncate(n);
    }
    let inv = den.inv_trunc(n).expect("constant term is 1");
    num.mul_trunc(&inv, n)
}

fn series_bits(p: &PolyZ, n: usize) -> Vec<bool> {
    (0..n).map(|i| p.coeff(i)).collect()
}

/// `c_0..c_n` of `J(u, 1)`; the truncation depth `⌈n/2⌉ + 2` is confirmed
/// by comparing with a deeper truncation.
pub fn jacobi_coeffs(u: impl Fn(usize) -> bool, n: usize) -> Result<JacobiFraction, AnalysisError> {
    let depth = n.div_ceil(2) + 2;
    let s = jacobi_series(&u, n + 1, depth);
    let deeper = jacobi_series(&u, n + 1, depth + 8);
    if s != deeper {
        return Err(AnalysisError::PrecisionExhausted {
            what: format!("Jacobi fraction at depth {depth}"),
        });
    }
    Ok(JacobiFraction {
        u: (1..=depth).map(&u).collect(),
        c: series_bits(&s, n + 1),
    })
}

/// `H_1..H_{n_max}` by Gaussian elimination on `(c_{i+j})`.
pub fn hankel_determinants(c: &[bool], n_max: usize) -> Result<Vec<bool>, AnalysisError> {
    let needed = (2 * n_max).saturating_sub(1);
    if c.len() < needed {
        return Err(AnalysisError::InsufficientCoefficients {
            needed,
            available: c.len(),
        });
    }
    Ok((1..=n_max)
        .map(|n| {
            let rows: Vec<BitVec> = (0..n)
                .map(|i| BitVec::from_bools(c[i..i + n].iter().copied()))
                .collect();
            det(&rows)
        })
        .collect())
}

/// Recovers `(u_i, v_i)` from the coefficients by repeated inversion:
/// `1/f = 1 + u_1x + v_1x²f_2`. Stops at the first `v_i = 0` or when fewer
/// than three coefficients remain.
pub fn recover_jacobi(c: &[bool]) -> Vec<(bool, bool)> {
    let mut out = Vec::new();
    if c.first() != Some(&true) {
        return out;
    }
    let mut n = c.len();
    let mut f = PolyZ::from_exponents(c.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i));
    while n >= 3 {
        let g = f.inv_trunc(n).expect("constant term is 1");
        let (u, v) = (g.coeff(1), g.coeff(2));
        out.push((u, v));
        if !v {
            break;
        }
        f = g.shr(2);
        n -= 2;
    }
    out
}

/// Hankel and apwenian checks on the coefficient sequence of `ω`.
///
/// `H_n` is computed twice: by elimination on the Hankel matrix and by
/// Heilermann's product `Π v_i^{n-i}` over the recovered `v_i`.
pub fn hankel_suite(n_max: usize, apwenian_max: usize) -> Result<Certificate, AnalysisError> {
    let len = (2 * n_max).max(2 * apwenian_max + 3);
    let jf = jacobi_coeffs(tm_jacobi_u, len - 1)?;
    let c = &jf.c;
    let h = hankel_determinants(c, n_max)?;
    let rec = recover_jacobi(&c[..2 * n_max - 1]);

    let mut cert = Certificate::new("hankel-apwenian")
        .param("n_max", n_max)
        .param("apwenian_max", apwenian_max);
    cert.assert("c_0 = 1", c[0], "c_0 = 0");
    let bad: Vec<usize> = (1..=n_max).filter(|&n| !h[n - 1]).collect();
    cert.assert(
        format!("H_n = 1 for n <= {n_max}"),
        bad.is_empty(),
        format!("H_n = 0 at n = {bad:?}"),
    );
    let heil: Vec<bool> = (1..=n_max)
        .map(|n| rec.len() >= n - 1 && rec[..n - 1].iter().all(|&(_, v)| v))
        .collect();
    cert.assert(
        "elimination agrees with Heilermann's product",
        heil == h,
        "determinant sequences differ",
    );
    let u_ok = rec
        .iter()
        .enumerate()
        .all(|(i, &(u, _))| u == tm_jacobi_u(i + 1));
    cert.assert("recovered u is Thue-Morse", u_ok, "mismatch");
    let apw: Vec<usize> = (0..=apwenian_max)
        .filter(|&n| c[n] != (c[2 * n + 1] ^ c[2 * n + 2]))
        .collect();
    cert.assert(
        format!("c_n = c_(2n+1) + c_(2n+2) for n <= {apwenian_max}"),
        apw.is_empty(),
        format!("fails at {:?}", &apw[..apw.len().min(8)]),
    );
    Ok(cert)
}

/// `g_0..g_4`.
pub fn omega_quartic_coefficients() -> [PolyZ; 5] {
    [
        "x^5+x^3+x^2+x+1",
        "x^6+x^5+x^4+x^3+x^2+x",
        "x^6+1",
        "x^8+x^7+x^6+x^5+x^4+x^3",
        "x^10+x^9+x^8+x^7+x^5+x^4",
    ]
    .map(|s| s.replace('x', "z").parse().expect("valid literal"))
}

/// `c_0..c_{n-1}` of `ω`.
pub fn omega_coeffs(n: usize) -> Result<Vec<bool>, AnalysisError> {
    Ok(jacobi_coeffs(tm_jacobi_u, n.max(1) - 1)?.c)
}

/// The quartic for `ω` modulo `x^precision`, the identity
/// `ω(1/z)/z = ξ_{z+1,z}` on `precision` coefficients, and the agreement of
/// `g_j` with `A_j(z+1, z)` up to a common factor.
pub fn omega_quartic_check(precision: usize) -> Result<Certificate, AnalysisError> {
    if precision < 32 {
        return Err(AnalysisError::OutOfRange(format!(
            "precision {precision} < 32"
        )));
    }
    let c = omega_coeffs(precision)?;
    let w = PolyZ::from_exponents((0..precision).filter(|&i| c[i]));
    let g = omega_quartic_coefficients();
    let mut res = PolyZ::zero();
    let mut pw = PolyZ::one();
    for gj in &g {
        res = &res + &gj.mul_trunc(&pw, precision);
        pw = pw.mul_trunc(&w, precision);
    }
    let mut cert = Certificate::new("omega-quartic").param("precision", precision);
    cert.push(Check::residual(
        format!("sum g_j omega^j mod x^{precision}"),
        &res,
    ));

    let inst = QuarticInstance::new("z+1".parse().expect("literal"), PolyZ::z())?;
    let h = -(precision as i64);
    let from_omega =
        LaurentZ::from_exponents((0..precision).filter(|&i| c[i]).map(|i| -(i as i64) - 1), h);
    let xi = inst.xi(precision)?;
    cert.assert(
        format!("omega(1/z)/z = xi_(z+1,z) to {precision} coefficients"),
        from_omega.agrees_with(&xi) && xi.horizon() <= h,
        "series differ",
    );

    // Σ g_j(1/z) (zξ)^j = 0, times z^10, has coefficients z^j·rev_10(g_j)
    let cj: Vec<PolyZ> = g
        .iter()
        .enumerate()
        .map(|(j, gj)| gj.reverse(10).shl(j))
        .collect();
    let mut prop = true;
    for j in 0..5 {
        for k in j + 1..5 {
            prop &= cj[j].mul(&inst.coeffs[k]) == cj[k].mul(&inst.coeffs[j]);
        }
    }
    cert.assert(
        "z^(10+j) g_j(1/z) proportional to A_j(z+1,z)",
        prop,
        "not proportional",
    );
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_prefix() {
        let u: Vec<bool> = (1..=8).map(tm_jacobi_u).collect();
        assert_eq!(u, [true, false, false, true, false, true, true, false]);
        // 1/(1+x+x²/(1+x²/...)) begins 1 + x + ...
        let jf = jacobi_coeffs(tm_jacobi_u, 7).unwrap();
        assert!(jf.c[0] && jf.c[1]);
    }

    #[test]
    fn zero_u_is_even() {
        let jf = jacobi_coeffs(|_| false, 40).unwrap();
        assert!(jf.c[0]);
        assert!(jf.c.iter().skip(1).step_by(2).all(|b| !b));
    }

    #[test]
    fn recovery_inverts_expansion() {
        let u = |i: usize| i % 3 == 1;
        let jf = jacobi_coeffs(u, 41).unwrap();
        let rec = recover_jacobi(&jf.c);
        assert_eq!(rec.len(), 20);
        for (i, (ui, vi)) in rec.into_iter().enumerate() {
            assert_eq!(ui, u(i + 1));
            assert!(vi);
        }
    }

    #[test]
    fn small_suite() {
        assert!(hankel_suite(16, 64).unwrap().pass);
        assert!(omega_quartic_check(128).unwrap().pass);
        assert!(hankel_determinants(&[true], 2).is_err());
    }
}
