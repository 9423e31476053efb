use super::{AnalysisError, QuarticInstance};
use crate::cert::{Certificate, Check};
use crate::poly::PolyZ;
use crate::series::LaurentZ;

/// Differential checks on `ξ_{a,b}`:
/// `[ab(a+b)ξ]' = (ab)'(1+ξ²)`, the square criterion
/// `ab(a+b)ξ + ab(1+ξ²) ∈ K²`, and the coefficient identities behind them.
pub fn riccati_check(
    inst: &QuarticInstance,
    precision: usize,
) -> Result<Certificate, AnalysisError> {
    let (a, b) = (&inst.a, &inst.b);
    let ab = a.mul(b);
    let s = a + b;
    let abs = ab.mul(&s);
    let xi = inst.xi(precision)?;
    let one = LaurentZ::from_poly(&PolyZ::one(), xi.horizon());
    let one_plus_sq = xi.square().add(&one);

    let lhs = xi.mul_poly(&abs).derivative();
    let rhs = one_plus_sq.mul_poly(&ab.derivative());
    let square = xi.mul_poly(&abs).add(&one_plus_sq.mul_poly(&ab));

    let mut c = Certificate::new(format!("riccati/a={a},b={b}"))
        .param("a", a.to_string())
        .param("b", b.to_string())
        .param("precision", precision);
    c.push(Check::residual(
        "[ab(a+b) xi]' + (ab)'(1+xi^2)",
        &lhs.add(&rhs),
    ));
    let sq = square.sqrt();
    c.assert(
        "ab(a+b) xi + ab(1+xi^2) is a square",
        sq.is_ok(),
        sq.err().map(|e| e.to_string()).unwrap_or_default(),
    );

    let [a0, a1, _, _, a4] = &inst.coeffs;
    let t = &(&s + &ab).square();
    c.push(Check::residual(
        "A_0' + A_4'",
        &(&a0.derivative() + &a4.derivative()),
    ));
    c.push(Check::residual(
        "A_1 + ab(a+b)(a+b+ab)^2",
        &(a1 + &abs.mul(t)),
    ));
    c.push(Check::residual(
        "A_0' + (ab)'(a+b+ab)^2",
        &(&a0.derivative() + &ab.derivative().mul(t)),
    ));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::QuarticInstance;
    use super::*;

    #[test]
    fn riccati_holds() {
        for (a, b) in [("z", "z+1"), ("z^2+1", "z^3+z"), ("z^4+z+1", "z^2")] {
            let c = riccati_check(&QuarticInstance::parse(a, b).unwrap(), 400).unwrap();
            assert!(c.pass, "{c:?}");
        }
    }
}
