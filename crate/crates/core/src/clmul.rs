//! Word-level carryless multiplication kernels.

/// 64x64 -> 128 carryless product with a 4-bit window table.
pub fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    let a128 = a as u128;
    for i in 1..16usize {
        table[i] = if i & 1 == 1 {
            table[i - 1] ^ a128
        } else {
            table[i / 2] << 1
        };
    }
    let mut r = 0u128;
    for i in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * i)) & 15) as usize];
    }
    (r as u64, (r >> 64) as u64)
}

fn schoolbook_soft(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul_soft(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn schoolbook_pclmul(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xv = _mm_set_epi64x(0, x as i64);
        for (j, &y) in b.iter().enumerate() {
            let r = _mm_clmulepi64_si128(xv, _mm_set_epi64x(0, y as i64), 0);
            let lo = _mm_cvtsi128_si64(r) as u64;
            let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

/// True when the hardware carryless multiply path is in use.
pub fn hardware_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// `out ^= a * b` by the quadratic word algorithm.
pub fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            unsafe { schoolbook_pclmul(a, b, out) };
            return;
        }
    }
    schoolbook_soft(a, b, out);
}

/// Portable kernel, exposed so tests can compare it with the hardware path.
pub fn schoolbook_portable(a: &[u64], b: &[u64], out: &mut [u64]) {
    schoolbook_soft(a, b, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clmul_naive(a: u64, b: u64) -> u128 {
        (0..64)
            .filter(|i| (b >> i) & 1 == 1)
            .fold(0u128, |acc, i| acc ^ ((a as u128) << i))
    }

    #[test]
    fn soft_matches_bitwise() {
        let mut x = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..200 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let y = x.rotate_left(23) ^ 0xDEAD_BEEF;
            let (lo, hi) = clmul_soft(x, y);
            assert_eq!(((hi as u128) << 64) | lo as u128, clmul_naive(x, y));
        }
        assert_eq!(clmul_soft(u64::MAX, u64::MAX).1, 0x5555_5555_5555_5555);
    }

    #[test]
    fn hardware_matches_portable() {
        let a: Vec<u64> = (1..20u64)
            .map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .collect();
        let b: Vec<u64> = (3..11u64)
            .map(|i| i.wrapping_mul(0xC2B2_AE3D_27D4_EB4F))
            .collect();
        let mut o1 = vec![0; a.len() + b.len()];
        let mut o2 = o1.clone();
        schoolbook(&a, &b, &mut o1);
        schoolbook_portable(&a, &b, &mut o2);
        assert_eq!(o1, o2);
    }
}
