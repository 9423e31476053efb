use serde::Serialize;

use super::{AnalysisError, QuarticInstance};
use crate::cert::Certificate;
use crate::contfrac::tm_convergent;
use crate::linalg::{BitVec, Echelon};
use crate::poly::PolyZ;
use crate::series::{LaurentZ, Norm};

/// Approximation data at the convergent of index `k = 4^level`.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxRecord {
    pub level: u32,
    pub k: usize,
    pub q_deg: usize,
    /// Hex encoding of `q_k`.
    pub q_k: String,
    pub norm_q_xi: Norm,
    pub norm_q_xi2: Norm,
    /// `|q_k| · max(‖q_kξ‖, ‖q_kξ²‖) = 1`.
    pub product_check: bool,
    pub norm_qprev_xi: Norm,
    /// `|q_{k-1}ξ - p_{k-1}| = 1/|q_k|`.
    pub prev_check: bool,
}

/// Distance to the nearest polynomial, failing if the fractional part is
/// zero down to the horizon.
fn dist(x: &LaurentZ, what: &str) -> Result<Norm, AnalysisError> {
    let f = x.frac();
    if f.is_zero() {
        return Err(AnalysisError::PrecisionExhausted { what: what.into() });
    }
    Ok(f.norm())
}

/// `‖q_kξ‖` and `‖q_kξ²‖` for `k = 4^ℓ`, `ℓ = 1..=l_max`.
pub fn approx_experiment(
    inst: &QuarticInstance,
    l_max: u32,
) -> Result<Vec<ApproxRecord>, AnalysisError> {
    if l_max > 6 {
        return Err(AnalysisError::OutOfRange(format!("l_max = {l_max} > 6")));
    }
    let dmax = inst.a.deg().max(inst.b.deg()).unwrap_or(0);
    let top = tm_convergent(l_max, &inst.a, &inst.b);
    let precision = 2 * top.q.deg().unwrap_or(0) + 2 * dmax + 32;
    let xi = inst.xi(precision)?;
    let xi2 = xi.square();
    (1..=l_max)
        .map(|level| {
            let cv = tm_convergent(level, &inst.a, &inst.b);
            let q = cv.q;
            let dq = q.deg().unwrap_or(0);
            let n1 = dist(&xi.mul_poly(&q), &format!("|q_k xi| at level {level}"))?;
            let n2 = dist(&xi2.mul_poly(&q), &format!("|q_k xi^2| at level {level}"))?;
            let product_check = Norm::of_poly(&q) * n1.max(n2) == Norm::pow2(0);
            let n0 = dist(
                &xi.mul_poly(&cv.q_prev),
                &format!("|q_(k-1) xi| at level {level}"),
            )?;
            let prev_check = Norm::of_poly(&q) * n0 == Norm::pow2(0);
            Ok(ApproxRecord {
                level,
                k: cv.index,
                q_deg: dq,
                q_k: q.to_hex(),
                norm_q_xi: n1,
                norm_q_xi2: n2,
                product_check,
                norm_qprev_xi: n0,
                prev_check,
            })
        })
        .collect()
}

/// Best vanishing order of `P(ξ) = Σ_{j<=r} B_j ξ^j` over nonzero `B_j`
/// with `deg B_j <= d`.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub degree: usize,
    pub height_bound: usize,
    /// `-e` where `z^e` is the leading term of the optimal `P(ξ)`.
    pub order: i64,
    /// `B_0..B_r` as strings.
    pub coefficients: Vec<String>,
}

/// Exact search for the `P` of degree `r` and coefficient degrees `<= d`
/// minimizing `|P(ξ)|`. Rows for exponents `d, d-1, ...` are added until the
/// coefficient matrix has full column rank; the kernel just before that row
/// is one-dimensional and spans the optimum.
pub fn vanishing_search(xi: &LaurentZ, r: usize, d: usize) -> Result<SearchResult, AnalysisError> {
    let ncols = (r + 1) * (d + 1);
    let mut powers = vec![LaurentZ::from_poly(&PolyZ::one(), xi.horizon())];
    for _ in 0..r {
        let next = powers.last().expect("nonempty").mul(xi);
        powers.push(next);
    }
    let exhausted = |e: i64| AnalysisError::PrecisionExhausted {
        what: format!("vanishing search row z^{e}"),
    };
    let mut ech = Echelon::new(ncols);
    let mut e = d as i64;
    let kernel = loop {
        let mut row = BitVec::zeros(ncols);
        for (j, pw) in powers.iter().enumerate() {
            for t in 0..=d {
                if pw.coeff(e - t as i64).ok_or_else(|| exhausted(e))? {
                    row.set(j * (d + 1) + t, true);
                }
            }
        }
        let before = ech.clone();
        ech.insert(row);
        if ech.rank() == ncols {
            let k = before.kernel();
            debug_assert_eq!(k.len(), 1);
            break k.into_iter().next().expect("kernel of dimension one");
        }
        e -= 1;
    };
    let coeffs: Vec<PolyZ> = (0..=r)
        .map(|j| PolyZ::from_exponents((0..=d).filter(|&t| kernel.get(j * (d + 1) + t))))
        .collect();
    let mut val = LaurentZ::zero(xi.horizon());
    for (c, pw) in coeffs.iter().zip(&powers) {
        val = val.add(&pw.mul_poly(c));
    }
    if val.top() != Some(e) {
        return Err(exhausted(e));
    }
    Ok(SearchResult {
        degree: r,
        height_bound: d,
        order: -e,
        coefficients: coeffs.iter().map(ToString::to_string).collect(),
    })
}

/// Certificate for the norm records plus the degree-2 search at the given
/// height bounds. The search orders are reported; `min_ratio` (if any) is
/// asserted as `order >= min_ratio · d`.
pub fn approx_certificate(
    inst: &QuarticInstance,
    l_max: u32,
    search_degrees: &[usize],
    min_ratio: Option<usize>,
) -> Result<(Certificate, Vec<ApproxRecord>, Vec<SearchResult>), AnalysisError> {
    let recs = approx_experiment(inst, l_max)?;
    let mut c = Certificate::new(format!("approximation/a={},b={}", inst.a, inst.b))
        .param("a", inst.a.to_string())
        .param("b", inst.b.to_string())
        .param("l_max", l_max);
    for r in &recs {
        c.assert(
            format!("level {}: |q| max(|q xi|, |q xi^2|) = 1", r.level),
            r.product_check,
            format!("|q| = 2^{}, {} and {}", r.q_deg, r.norm_q_xi, r.norm_q_xi2),
        );
        c.assert(
            format!("level {}: |q_(k-1) xi - p_(k-1)| = 1/|q_k|", r.level),
            r.prev_check,
            format!("{}", r.norm_qprev_xi),
        );
    }
    let dmax = search_degrees.iter().copied().max().unwrap_or(0);
    let xi = inst.xi(8 * dmax + 64)?;
    let mut found = Vec::new();
    for &d in search_degrees {
        let s = vanishing_search(&xi, 2, d)?;
        c.note(format!("degree 2, height {d}: order {}", s.order));
        if let Some(m) = min_ratio {
            c.assert(
                format!("degree 2, height {d}: order >= {}", m * d),
                s.order >= (m * d) as i64,
                format!("order {}", s.order),
            );
        }
        found.push(s);
    }
    Ok((c, recs, found))
}

#[cfg(test)]
mod tests {
    use super::super::QuarticInstance;
    use super::*;

    #[test]
    fn norm_records() {
        let inst = QuarticInstance::parse("z", "z+1").unwrap();
        for r in approx_experiment(&inst, 3).unwrap() {
            assert!(r.product_check && r.prev_check, "{r:?}");
            assert!(r.norm_q_xi < Norm::pow2(0) && r.norm_q_xi2 < Norm::pow2(0));
        }
    }

    #[test]
    fn search_finds_rational_relation() {
        // ξ = 1/(z+1) satisfies (z+1)ξ + 1 = 0 exactly, so the search runs
        // to the horizon.
        let x = LaurentZ::from_fraction(&PolyZ::one(), &"z+1".parse().unwrap(), -100).unwrap();
        assert!(matches!(
            vanishing_search(&x, 1, 2),
            Err(AnalysisError::PrecisionExhausted { .. })
        ));
    }
}
