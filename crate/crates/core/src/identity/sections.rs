use std::fmt::Write as _;

use serde::Serialize;

use crate::bipoly::{BiPoly, BiPolyError, BiSeries};
use crate::cert::Certificate;
use crate::contfrac::TMWord;
use crate::poly::PolyZ;
use crate::ring::{fold_product, Mat2};

/// Monomial `a^i b^j` of the expansion; both exponents are negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Dot {
    pub i: i64,
    pub j: i64,
}

impl Dot {
    fn parity_class(&self) -> (bool, bool) {
        (self.i % 2 == 0, self.j % 2 == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionsReport {
    pub depth: usize,
    /// Monomials of total degree at most this (in `1/a`, `1/b`) are exact.
    pub trusted_degree: usize,
    /// Sorted by total degree, then by the exponent of `a` descending.
    pub dots: Vec<Dot>,
    pub even_even: usize,
    pub odd_odd: usize,
}

impl SectionsReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j\n");
        for d in &self.dots {
            let _ = writeln!(s, "{},{}", d.i, d.j);
        }
        s
    }

    /// Plain scatter plot of the dots; axes are the exponents of `a` and `b`.
    pub fn to_svg(&self) -> String {
        let span = self.trusted_degree.max(1) as f64;
        let (size, margin) = (480.0, 40.0);
        let scale = (size - 2.0 * margin) / span;
        let px = |i: i64| margin + (span + i as f64) * scale;
        let py = |j: i64| margin + (-j as f64) * scale;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (x0, y0) = (px(0), py(0));
        let _ = writeln!(
            s,
            r#"<line x1="{m}" y1="{y0}" x2="{x0}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{e}" stroke="black"/>"#,
            m = margin,
            e = size - margin
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12">exponent of a</text><text x="{}" y="{}" font-size="12">exponent of b</text>"#,
            margin,
            y0 - 8.0,
            x0 + 6.0,
            size - margin + 14.0
        );
        let tick = (self.trusted_degree / 8).max(1);
        for t in (0..=self.trusted_degree).step_by(tick) {
            let t = t as i64;
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="9" text-anchor="middle">{}</text><text x="{}" y="{}" font-size="9">{}</text>"#,
                px(-t),
                y0 - 20.0,
                -t,
                x0 + 4.0,
                py(-t) + 3.0,
                -t
            );
        }
        for d in &self.dots {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="blue"/>"#,
                px(d.i),
                py(d.j)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Support of the expansion of the Thue–Morse continued fraction in
/// negative powers of `a` and `b`, read off the depth-`depth` convergent.
///
/// With `u = 1/a`, `v = 1/b`, the convergent becomes `p̂(u, v) / q̂(u, v)`
/// where `q̂` has constant term 1; the next error term has total degree at
/// least `2·depth + 1` in `u, v`.
pub fn sections_support(depth: usize) -> Result<SectionsReport, BiPolyError> {
    assert!(depth >= 2, "depth must be at least 2");
    let word = TMWord::prefix(depth, PolyZ::zero(), PolyZ::one());
    let mats: Vec<Mat2<BiPoly>> = (0..depth)
        .map(|k| {
            Mat2::quotient(if word.is_b(k) {
                BiPoly::b()
            } else {
                BiPoly::a()
            })
        })
        .collect();
    let m = fold_product(&mats);
    let (q, p) = (&m.e[0][0], &m.e[1][0]);
    let (da, db) = (q.deg_a().unwrap_or(0), q.deg_b().unwrap_or(0));
    let qh = q.flip(da, db)?;
    let ph = p.flip(da, db)?;
    let trusted_degree = 2 * depth - 2;
    let series = BiSeries::new(&ph, trusted_degree).div(&BiSeries::new(&qh, trusted_degree))?;
    let mut dots: Vec<Dot> = series
        .poly()
        .terms()
        .map(|(i, j)| Dot {
            i: -(i as i64),
            j: -(j as i64),
        })
        .collect();
    dots.sort_by_key(|d| (-(d.i + d.j), d.i.abs(), d.j.abs()));
    let even_even = dots
        .iter()
        .filter(|d| d.parity_class() == (true, true))
        .count();
    let odd_odd = dots
        .iter()
        .filter(|d| d.parity_class() == (false, false))
        .count();
    Ok(SectionsReport {
        depth,
        trusted_degree,
        dots,
        even_even,
        odd_odd,
    })
}

/// Parity structure, the leading dots, and stability under deeper
/// expansion.
pub fn verify_sections(depth: usize) -> Result<(Certificate, SectionsReport), BiPolyError> {
    let r = sections_support(depth)?;
    let deeper = sections_support(depth + 4)?;
    let mut c = Certificate::new("sections")
        .param("depth", depth as u64)
        .param("trusted_degree", r.trusted_degree as u64);
    c.assert(
        "no (even, even) dots",
        r.even_even == 0,
        format!("{} dots", r.even_even),
    );
    c.assert(
        "no (odd, odd) dots",
        r.odd_odd == 0,
        format!("{} dots", r.odd_odd),
    );
    let expected = [
        Dot { i: -1, j: 0 },
        Dot { i: -2, j: -1 },
        Dot { i: -2, j: -3 },
    ];
    c.assert(
        "leading dots (-1,0), (-2,-1), (-2,-3)",
        r.dots.len() >= 3 && r.dots[..3] == expected,
        format!("{:?}", &r.dots[..r.dots.len().min(3)]),
    );
    let common: Vec<&Dot> = deeper
        .dots
        .iter()
        .filter(|d| (-(d.i + d.j)) as usize <= r.trusted_degree)
        .collect();
    c.assert(
        "stable under depth + 4",
        common.len() == r.dots.len() && common.into_iter().eq(r.dots.iter()),
        "dot sets differ on the common region",
    );
    Ok((c, r))
}
