use crate::bipoly::{BiPoly, BiPolyError, BiSeries};
use crate::cert::{Certificate, Check, Residual};
use crate::contfrac::TMWord;
use crate::poly::PolyZ;
use crate::ring::sum_of_products;

pub const DEFAULT_ETA_CAP: usize = 64;

/// Numerator and denominator of `t_0 / (1 + t_1 / (1 + ... t_{depth-1}))`
/// with Thue–Morse partial numerators over `{a, b}`.
pub fn eta_convergent(depth: usize) -> (BiPoly, BiPoly) {
    let word = TMWord::prefix(depth, PolyZ::zero(), PolyZ::one());
    let (mut num, mut den) = (BiPoly::zero(), BiPoly::one());
    for i in (0..depth).rev() {
        let t = if word.is_b(i) {
            BiPoly::b()
        } else {
            BiPoly::a()
        };
        // t / (1 + num/den) = t·den / (den + num)
        let next_den = den.add(&num);
        num = t.mul(&den);
        den = next_den;
    }
    (num, den)
}

/// `η` as a power series in `a, b`, exact up to total degree `cap`. The
/// tail beyond depth `d` only affects total degrees above `d`.
pub fn eta_series(cap: usize) -> Result<BiSeries, BiPolyError> {
    eta_series_at_depth(cap, cap + 2)
}

fn eta_series_at_depth(cap: usize, depth: usize) -> Result<BiSeries, BiPolyError> {
    let (num, den) = eta_convergent(depth);
    BiSeries::new(&num, cap).div(&BiSeries::new(&den, cap))
}

/// `a(a+b)³ + ab + (a+b)(a+b+1)η + (a+b+1)η² + η⁴` vanishes up to total
/// degree `cap`.
pub fn verify_ring_eta(cap: usize) -> Result<Certificate, BiPolyError> {
    let mut c = Certificate::new("ring-eta").param("cap", cap as u64);
    if cap < 8 {
        c.assert("cap >= 8", false, format!("cap = {cap}"));
        return Ok(c);
    }
    let eta = eta_series(cap)?;
    let deeper = eta_series_at_depth(cap, cap + 10)?;
    c.assert(
        "two-depth agreement",
        eta == deeper,
        "expansions at depths cap+2 and cap+10 differ",
    );
    c.assert(
        "constant term 0",
        eta.coeff(0, 0) == Some(false),
        "constant term is 1",
    );
    c.assert(
        "coefficient of a is 1",
        eta.coeff(1, 0) == Some(true),
        "coefficient of a is 0",
    );
    let e = eta.poly();
    let bp = |s: &str| s.parse::<BiPoly>().expect("valid literal");
    let c0 = bp("a+b").pow(3).mul(&BiPoly::a()).add(&BiPoly::ab_pow(1));
    let c1 = bp("a+b").mul(&BiPoly::tau());
    let c2 = BiPoly::tau();
    let e2 = e.square();
    let terms = [vec![&c0], vec![&c1, e], vec![&c2, &e2], vec![&e2, &e2]];
    let forward = sum_of_products(&terms, false).truncate_total(cap);
    let backward = sum_of_products(&terms, true).truncate_total(cap);
    if forward == backward {
        c.push(Check::residual(
            "quartic residual to total degree cap",
            &forward,
        ));
    } else {
        c.assert(
            "quartic residual to total degree cap",
            false,
            format!("operand-order mismatch: {}", forward.digest()),
        );
    }
    Ok(c)
}
