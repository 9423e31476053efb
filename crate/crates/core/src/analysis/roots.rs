use serde::Serialize;

use super::AnalysisError;
use crate::cert::{Certificate, Check};
use crate::contfrac::{cf_expand, spectrum_window, CfError, Spectrum};
use crate::poly::PolyZ;
use crate::series::LaurentZ;

/// `Σ_j z^{-4^j}`, the root of `zX⁴ + zX + 1`, exact down to
/// `z^{-precision}`.
pub fn mahler_root(precision: usize) -> LaurentZ {
    let exps = std::iter::successors(Some(1usize), |e| e.checked_mul(4))
        .take_while(|&e| e <= precision)
        .map(|e| -(e as i64));
    LaurentZ::from_exponents(exps, -(precision as i64))
}

/// The root of `zX³ + X + z` with `|X| = 1`, exact down to `z^{-precision}`.
///
/// Writing `X = Σ x_m z^{-m}`, the cubic gives `x_0 = 1` and
/// `x_m = x_{m-1} + Σ_{1<=i<=m/2} x_i x_{m-2i}`.
pub fn baum_sweet_root(precision: usize) -> LaurentZ {
    let mut x = vec![false; precision + 1];
    x[0] = true;
    for m in 1..=precision {
        let mut s = x[m - 1];
        for i in 1..=m / 2 {
            s ^= x[i] & x[m - 2 * i];
        }
        x[m] = s;
    }
    LaurentZ::from_exponents(
        (0..=precision).filter(|&m| x[m]).map(|m| -(m as i64)),
        -(precision as i64),
    )
}

fn mahler_residual(x: &LaurentZ) -> LaurentZ {
    let z = PolyZ::z();
    let one = LaurentZ::from_poly(&PolyZ::one(), x.horizon());
    x.pow(4).mul_poly(&z).add(&x.mul_poly(&z)).add(&one)
}

fn baum_sweet_residual(x: &LaurentZ) -> LaurentZ {
    let z = PolyZ::z();
    let zz = LaurentZ::from_poly(&z, x.horizon());
    x.pow(3).mul_poly(&z).add(x).add(&zz)
}

/// Partial-quotient degree statistics over several prefix lengths.
#[derive(Clone, Debug, Serialize)]
pub struct RootSpectrum {
    pub windows: Vec<Spectrum>,
    /// Number of quotients the precision allowed.
    pub extracted: usize,
}

/// Expands `x` far enough for the largest window and reports each window.
/// Windows beyond the reachable depth are dropped and `extracted` tells how
/// far the expansion got.
pub fn spectrum_growth(x: &LaurentZ, windows: &[usize]) -> Result<RootSpectrum, AnalysisError> {
    let want = windows.iter().copied().max().unwrap_or(0);
    let stream = match cf_expand(x, want) {
        Ok(s) => s,
        Err(CfError::HorizonExhausted { stream, .. }) => stream,
        Err(e) => return Err(e.into()),
    };
    let extracted = stream.len();
    let windows = windows
        .iter()
        .filter(|&&w| w <= extracted)
        .map(|&w| spectrum_window(&stream, w))
        .collect::<Result<_, _>>()?;
    Ok(RootSpectrum { windows, extracted })
}

/// Which reference series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefRoot {
    Mahler,
    BaumSweet,
}

impl std::str::FromStr for RefRoot {
    type Err = AnalysisError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mahler" => Ok(RefRoot::Mahler),
            "baumsweet" | "baum-sweet" => Ok(RefRoot::BaumSweet),
            _ => Err(AnalysisError::OutOfRange(format!("unknown root {s:?}"))),
        }
    }
}

/// Smallest precision used for partial-quotient statistics.
pub const SPECTRUM_PRECISION: usize = 4096;

/// The reference series, its defining-equation residual, and partial
/// quotient statistics. The statistics use a separate expansion at
/// `max(precision, SPECTRUM_PRECISION)`.
///
/// For Mahler's root the certificate records the degree growth over the
/// windows 10, 20, 40. For Baum–Sweet it
/// asserts that the first `bs_window` quotients have degree at most 2.
pub fn reference_roots(
    which: RefRoot,
    precision: usize,
    bs_window: usize,
) -> Result<(LaurentZ, Certificate, RootSpectrum), AnalysisError> {
    if precision < 16 {
        return Err(AnalysisError::OutOfRange(format!(
            "precision {precision} < 16"
        )));
    }
    let sp_prec = precision.max(SPECTRUM_PRECISION);
    match which {
        RefRoot::Mahler => {
            let x = mahler_root(precision);
            let mut c = Certificate::new("reference-root/mahler")
                .param("precision", precision)
                .param("spectrum_precision", sp_prec);
            c.push(Check::residual("zX^4 + zX + 1", &mahler_residual(&x)));
            let support_ok = x.exponents().iter().all(|&e| {
                let m = (-e) as u64;
                m.is_power_of_two() && m.trailing_zeros().is_multiple_of(2)
            });
            c.assert("support is {-4^j}", support_ok, "stray exponent");
            let sp = spectrum_growth(&mahler_root(sp_prec), &[10, 20, 40])?;
            for w in &sp.windows {
                c.note(format!("window {}: max degree {}", w.window, w.max_degree));
            }
            c.note(format!("{} quotients reachable", sp.extracted));
            Ok((x, c, sp))
        }
        RefRoot::BaumSweet => {
            let x = baum_sweet_root(precision);
            let mut c = Certificate::new("reference-root/baum-sweet")
                .param("precision", precision)
                .param("spectrum_precision", sp_prec)
                .param("window", bs_window);
            c.push(Check::residual("zX^3 + X + z", &baum_sweet_residual(&x)));
            let sp = spectrum_growth(&baum_sweet_root(sp_prec), &[bs_window])?;
            match sp.windows.first() {
                Some(w) => c.assert(
                    format!("first {bs_window} partial quotients have degree <= 2"),
                    w.max_degree <= 2,
                    format!("max degree {}", w.max_degree),
                ),
                None => c.assert(
                    format!("first {bs_window} partial quotients have degree <= 2"),
                    false,
                    format!("only {} quotients reachable", sp.extracted),
                ),
            }
            Ok((x, c, sp))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mahler_support() {
        let x = mahler_root(100);
        assert_eq!(x.exponents(), vec![-1, -4, -16, -64]);
        assert!(mahler_residual(&x).is_zero());
    }

    #[test]
    fn baum_sweet_residual_vanishes() {
        let x = baum_sweet_root(300);
        assert_eq!(x.top(), Some(0));
        assert!(baum_sweet_residual(&x).is_zero());
        assert!(baum_sweet_residual(&x.add(&LaurentZ::monomial(-7, -300)))
            .top()
            .is_some());
    }
}
