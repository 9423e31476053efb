//! Linear algebra over GF(2) on bit-packed vectors.

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (x, y) in self.words.iter_mut().zip(&other.words) {
            *x ^= y;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| (x & y).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVec({s})")
    }
}

/// Row echelon basis keyed by lowest set bit; rows are added one at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivots: Vec<Option<BitVec>>,
    rank: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the
    /// row space.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        while let Some(p) = v.lowest() {
            match &self.pivots[p] {
                Some(row) => v.xor_assign(row),
                None => break,
            }
        }
        v
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let mut v = v;
        loop {
            let Some(p) = v.lowest() else {
                return false;
            };
            match &self.pivots[p] {
                Some(row) => v.xor_assign(row),
                None => {
                    self.pivots[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// Basis of the right kernel `{x : r·x = 0 for every row r}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        // back-substitute into reduced form: pivot columns are determined
        // by the free columns
        let mut rows: Vec<(usize, BitVec)> = self
            .pivots
            .iter()
            .enumerate()
            .filter_map(|(p, r)| r.clone().map(|r| (p, r)))
            .collect();
        for i in (0..rows.len()).rev() {
            let (p, ref r) = rows[i];
            let r = r.clone();
            for row in rows[..i].iter_mut() {
                if row.1.get(p) {
                    row.1.xor_assign(&r);
                }
            }
        }
        let is_pivot: Vec<bool> = self.pivots.iter().map(Option::is_some).collect();
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = BitVec::unit(self.ncols, free);
                for (p, r) in &rows {
                    if r.get(free) {
                        x.set(*p, true);
                    }
                }
                x
            })
            .collect()
    }
}

pub fn rank(rows: &[BitVec]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Determinant of a square GF(2) matrix given by rows.
pub fn det(rows: &[BitVec]) -> bool {
    rows.iter().all(|r| r.len() == rows.len()) && rank(rows) == rows.len()
}

pub fn nullspace(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.kernel()
}

/// Column-by-column elimination that reports each new column's linear
/// dependency on the earlier ones.
#[derive(Clone, Debug)]
pub struct ColumnReducer {
    nrows: usize,
    ncols: usize,
    pushed: usize,
    // column vector with the combination of original columns it encodes
    pivots: Vec<Option<(BitVec, BitVec)>>,
}

impl ColumnReducer {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        ColumnReducer {
            nrows,
            ncols,
            pushed: 0,
            pivots: vec![None; nrows],
        }
    }

    pub fn pushed(&self) -> usize {
        self.pushed
    }

    /// Adds the next column. Returns the dependency (a set of column indices,
    /// including the new one, whose columns sum to zero) if there is one.
    pub fn push(&mut self, col: BitVec) -> Option<BitVec> {
        assert_eq!(col.len(), self.nrows);
        assert!(self.pushed < self.ncols, "too many columns");
        let mut v = col;
        let mut combo = BitVec::unit(self.ncols, self.pushed);
        self.pushed += 1;
        loop {
            let Some(p) = v.lowest() else {
                return Some(combo);
            };
            match &self.pivots[p] {
                Some((pv, pc)) => {
                    v.xor_assign(pv);
                    combo.xor_assign(pc);
                }
                None => {
                    self.pivots[p] = Some((v, combo));
                    return None;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bools(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let rows = vec![bv("11010"), bv("01101"), bv("10111")];
        let k = nullspace(&rows, 5);
        assert_eq!(k.len(), 5 - rank(&rows));
        for x in &k {
            for r in &rows {
                assert!(!r.dot(x));
            }
        }
    }

    #[test]
    fn determinant() {
        assert!(det(&[bv("10"), bv("01")]));
        assert!(!det(&[bv("11"), bv("11")]));
        assert!(det(&[bv("110"), bv("011"), bv("001")]));
    }

    #[test]
    fn column_dependencies() {
        let mut c = ColumnReducer::new(3, 4);
        assert_eq!(c.push(bv("110")), None);
        assert_eq!(c.push(bv("011")), None);
        assert_eq!(c.push(bv("101")), Some(bv("1110")));
        assert_eq!(c.push(bv("001")), None);
    }

    #[test]
    fn echelon_rank_growth() {
        let mut e = Echelon::new(3);
        assert!(e.insert(bv("100")));
        assert!(!e.insert(bv("100")));
        assert!(e.insert(bv("110")));
        assert_eq!(e.kernel(), vec![bv("001")]);
    }
}
