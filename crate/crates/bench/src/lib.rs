//! Deterministic inputs shared by the benchmarks.

use tmcf_core::PolyZ;

/// A dense polynomial with `words` 64-bit words from a fixed xorshift stream.
pub fn dense_poly(words: usize, seed: u64) -> PolyZ {
    let mut s = seed.max(1);
    let v = (0..words)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        })
        .collect();
    PolyZ::from_words(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(dense_poly(4, 7), dense_poly(4, 7));
        assert_ne!(dense_poly(4, 7), dense_poly(4, 8));
        assert!(dense_poly(4, 7).deg().unwrap() > 190);
    }
}
