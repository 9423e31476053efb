use std::collections::HashMap;

use super::{BiPoly, BiPolyError};
use crate::poly::PolyZ;

/// Largest matrix accepted by [`det_cofactor`].
pub const MAX_COFACTOR_SIZE: usize = 8;

fn check_square(m: &[Vec<BiPoly>]) -> Result<usize, BiPolyError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(BiPolyError::NotSquare);
    }
    Ok(n)
}

/// Determinant by Laplace expansion along the first remaining row. Minors
/// are memoized by their column set; in characteristic 2 no signs appear.
pub fn det_cofactor(m: &[Vec<BiPoly>]) -> Result<BiPoly, BiPolyError> {
    let n = check_square(m)?;
    if n > MAX_COFACTOR_SIZE {
        return Err(BiPolyError::SizeLimit {
            size: n,
            max: MAX_COFACTOR_SIZE,
        });
    }
    if n == 0 {
        return Ok(BiPoly::one());
    }
    let mut memo: HashMap<u32, BiPoly> = HashMap::new();
    Ok(minor(m, (1u32 << n) - 1, &mut memo))
}

fn minor(m: &[Vec<BiPoly>], cols: u32, memo: &mut HashMap<u32, BiPoly>) -> BiPoly {
    if cols == 0 {
        return BiPoly::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let row = m.len() - cols.count_ones() as usize;
    let mut acc = BiPoly::zero();
    for c in 0..m.len() {
        if cols & (1 << c) == 0 || m[row][c].is_zero() {
            continue;
        }
        let sub = minor(m, cols & !(1 << c), memo);
        acc = acc.add(&m[row][c].mul(&sub));
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Determinant of any square matrix: Kronecker substitution into GF(2)[t]
/// followed by fraction-free (Bareiss) elimination with exact divisions.
pub fn det_kronecker(m: &[Vec<BiPoly>]) -> Result<BiPoly, BiPolyError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(BiPoly::one());
    }
    // the determinant's b-degree is at most the sum of the row maxima
    let bound: usize = m
        .iter()
        .map(|r| r.iter().filter_map(BiPoly::deg_b).max().unwrap_or(0))
        .sum();
    let gap = (bound + 1).next_power_of_two();
    let mut a: Vec<Vec<PolyZ>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.pack(gap)).collect())
        .collect();
    let mut prev = PolyZ::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => a.swap(k, r),
                None => return Ok(BiPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k].mul(&a[i][j]) + &a[i][k].mul(&a[k][j]);
                let (q, r) = num.divrem(&prev).expect("pivot is nonzero");
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1];
    let rows = d.deg().map_or(0, |deg| deg / gap + 1);
    Ok(BiPoly::unpack(d, gap, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn identity_has_determinant_one() {
        let n = 5;
        let m: Vec<Vec<BiPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BiPoly::one()
                        } else {
                            BiPoly::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(det_cofactor(&m).unwrap(), BiPoly::one());
        assert_eq!(det_kronecker(&m).unwrap(), BiPoly::one());
    }

    #[test]
    fn two_by_two() {
        let m = vec![vec![bp("a+b"), bp("a*b")], vec![bp("b^3+1"), bp("a^2")]];
        let expected = bp("a^3+a^2*b").add(&bp("a*b^4+a*b"));
        assert_eq!(det_cofactor(&m).unwrap(), expected);
        assert_eq!(det_kronecker(&m).unwrap(), expected);
    }

    #[test]
    fn size_limit() {
        let m = vec![vec![BiPoly::one(); 9]; 9];
        assert_eq!(
            det_cofactor(&m),
            Err(BiPolyError::SizeLimit { size: 9, max: 8 })
        );
        assert!(det_kronecker(&m).unwrap().is_zero());
    }
}
