use super::{AnalysisError, QuarticInstance};
use crate::cert::{Certificate, Check};
use crate::contfrac::tm_convergent;
use crate::poly::PolyZ;
use crate::series::LaurentZ;

/// `Σ A_j(a,b) ξ^j` evaluated on the series.
fn quartic_residual(inst: &QuarticInstance, xi: &LaurentZ) -> LaurentZ {
    let mut acc = LaurentZ::from_poly(&inst.coeffs[0], xi.horizon());
    let mut pow = xi.clone();
    for (j, c) in inst.coeffs.iter().enumerate().skip(1) {
        if j > 1 {
            pow = pow.mul(xi);
        }
        acc = acc.add(&pow.mul_poly(c));
    }
    acc
}

/// Checks that `ξ_{a,b}` annihilates the quartic at the given precision.
///
/// The residual is reported zero down to its propagated horizon, and that
/// horizon must reach the fixed margin `precision - 4·max deg A_j - 8`.
pub fn verify_quartic_at_series(
    inst: &QuarticInstance,
    precision: usize,
) -> Result<Certificate, AnalysisError> {
    let xi = inst.xi(precision)?;
    let res = quartic_residual(inst, &xi);
    let margin = precision as i64 - 4 * inst.max_coeff_degree() as i64 - 8;
    let mut c = Certificate::new(format!("quartic-at-series/a={},b={}", inst.a, inst.b))
        .param("a", inst.a.to_string())
        .param("b", inst.b.to_string())
        .param("precision", precision)
        .param("trusted_horizon", res.horizon());
    c.push(Check::residual("sum A_j(a,b) xi^j", &res));
    c.assert(
        "trusted range covers the fixed margin",
        res.horizon() <= -margin,
        format!("horizon z^{} above z^{}", res.horizon(), -margin),
    );
    Ok(c)
}

/// Size of `ε_k = Σ A_j (p_k/q_k)^j` at the convergents of index `k = 4^i`,
/// `i <= k_max`, measured through `E = q_k^4 ε_k`.
///
/// Since `ξ - p_k/q_k` has size `|q_k|^{-2}|b|^{-1}` (the next quotient is
/// `b`) and the derivative of the quartic at `ξ` is `A_1(1+ξ²)`, the exact
/// value is `deg E = 2 deg q_k + deg A_1 - deg b`. The certificate asserts
/// that equality and the bound `|ε_k| <= |ab|^4 |q_k|^{-2}`; whether the
/// sharper `|ε_k| <= |q_k|^{-2}` holds is recorded in the `strict_bound`
/// parameter.
pub fn epsilon_check(inst: &QuarticInstance, k_max: u32) -> Result<Certificate, AnalysisError> {
    if k_max > 6 {
        return Err(AnalysisError::OutOfRange(format!("k_max = {k_max} > 6")));
    }
    let d = inst.degree();
    let da1 = inst.coeffs[1].deg().unwrap_or(0);
    let db = inst.b.deg().unwrap_or(0);
    let mut strict = true;
    let mut excess = Vec::new();
    let mut c = Certificate::new(format!("epsilon-bound/a={},b={}", inst.a, inst.b))
        .param("a", inst.a.to_string())
        .param("b", inst.b.to_string())
        .param("k_max", k_max);
    for k in 1..=k_max {
        let cv = tm_convergent(k, &inst.a, &inst.b);
        let (p, q) = (&cv.p, &cv.q);
        let pp: Vec<PolyZ> = (0..=4).map(|j| p.pow(j)).collect();
        let qp: Vec<PolyZ> = (0..=4).map(|j| q.pow(j)).collect();
        let mut e = PolyZ::zero();
        for j in 0..=4 {
            e = &e + &inst.coeffs[j].mul(&pp[j].mul(&qp[4 - j]));
        }
        let dq = q.deg().unwrap_or(0);
        let de = e.deg();
        let expected = 2 * dq + da1 - db;
        c.assert(
            format!("4^{k}: deg q^4 eps = 2 deg q + deg A_1 - deg b = {expected}"),
            de == Some(expected),
            format!("deg {de:?}"),
        );
        c.assert(
            format!("4^{k}: |eps| <= |ab|^4 |q|^-2"),
            de.is_none_or(|x| x <= 2 * dq + 4 * d),
            format!("deg {de:?}"),
        );
        strict &= de.is_none_or(|x| x <= 2 * dq);
        excess.push(de.map_or(0, |x| x as i64 - 2 * dq as i64));
    }
    Ok(c.param("strict_bound", strict)
        .param("excess_over_strict", excess))
}

#[cfg(test)]
mod tests {
    use super::super::QuarticInstance;
    use super::*;

    #[test]
    fn quartic_vanishes_on_small_pairs() {
        for (a, b) in [("z", "z+1"), ("z^2", "z^2+z+1"), ("z^3+z", "z")] {
            let inst = QuarticInstance::parse(a, b).unwrap();
            let c = verify_quartic_at_series(&inst, 512).unwrap();
            assert!(c.pass, "{c:?}");
            let e = epsilon_check(&inst, 4).unwrap();
            assert!(e.pass, "{e:?}");
            assert_eq!(e.params["strict_bound"], false);
        }
    }

    #[test]
    fn wrong_coefficients_leave_a_residual() {
        let mut inst = QuarticInstance::parse("z", "z+1").unwrap();
        inst.coeffs[1] = &inst.coeffs[1] + &PolyZ::one();
        assert!(!verify_quartic_at_series(&inst, 256).unwrap().pass);
    }
}
