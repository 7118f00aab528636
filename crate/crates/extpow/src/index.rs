//! Combinatorics of the index set of the m-th exterior power of `[n]`:
//! m-subsets, lexicographic ranking, permutation signs, insertion signs,
//! and the height function.

use std::fmt;

use crate::Error;

/// Binomial coefficient C(n, k) as u64.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// An m-element subset of `{1..n}`, stored strictly increasing. Labels basis
/// vectors of the exterior power and rows/columns of the big linear group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightIndex {
    n: u32,
    elems: Vec<u32>,
}

impl fmt::Debug for WeightIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl WeightIndex {
    pub fn new(n: u32, elems: &[u32]) -> Result<WeightIndex, Error> {
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidIndex(format!(
                    "elements must be strictly increasing: {:?}",
                    elems
                )));
            }
        }
        for &e in elems {
            if e < 1 || e > n {
                return Err(Error::InvalidIndex(format!("element {e} out of range 1..={n}")));
            }
        }
        Ok(WeightIndex { n, elems: elems.to_vec() })
    }

    /// Build from a possibly unsorted sequence, returning the sorted index and
    /// the sign of the sorting permutation. Errors on repeats.
    pub fn from_unsorted(n: u32, seq: &[u32]) -> Result<(WeightIndex, i32), Error> {
        let sign = perm_sign(seq)?;
        let mut sorted = seq.to_vec();
        sorted.sort_unstable();
        Ok((WeightIndex::new(n, &sorted)?, sign))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.elems.len() as u32
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn contains(&self, v: u32) -> bool {
        self.elems.binary_search(&v).is_ok()
    }

    /// `self \ i ∪ j` as a weight index, if the result is a valid m-subset.
    pub fn replace(&self, i: u32, j: u32) -> Option<WeightIndex> {
        if !self.contains(i) || self.contains(j) || j < 1 || j > self.n {
            return None;
        }
        let mut e: Vec<u32> = self.elems.iter().copied().filter(|&x| x != i).collect();
        e.push(j);
        e.sort_unstable();
        Some(WeightIndex { n: self.n, elems: e })
    }

    /// Set union with a single value not already present.
    pub fn insert(&self, i: u32) -> Result<WeightIndex, Error> {
        if self.contains(i) {
            return Err(Error::InvalidIndex(format!("{i} already in {:?}", self.elems)));
        }
        let mut e = self.elems.clone();
        e.push(i);
        e.sort_unstable();
        WeightIndex::new(self.n, &e)
    }

    /// 0-based position in the lexicographic enumeration of all m-subsets.
    pub fn lex_rank(&self) -> usize {
        let m = self.m();
        let mut rank: u64 = 0;
        let mut prev = 0u32;
        for (pos, &e) in self.elems.iter().enumerate() {
            for skipped in prev + 1..e {
                rank += binomial(self.n - skipped, m - pos as u32 - 1);
            }
            prev = e;
        }
        rank as usize
    }

    /// Inverse of [`lex_rank`]: the k-th m-subset of `{1..n}` in lex order.
    pub fn unrank(n: u32, m: u32, mut k: u64) -> Result<WeightIndex, Error> {
        if k >= binomial(n, m) {
            return Err(Error::InvalidIndex(format!("rank {k} out of range for C({n},{m})")));
        }
        let mut elems = Vec::with_capacity(m as usize);
        let mut next = 1u32;
        for pos in 0..m {
            loop {
                let block = binomial(n - next, m - pos - 1);
                if k < block {
                    elems.push(next);
                    next += 1;
                    break;
                }
                k -= block;
                next += 1;
            }
        }
        WeightIndex::new(n, &elems)
    }

    /// All m-subsets of `{1..n}` in lexicographic order.
    pub fn enumerate(n: u32, m: u32) -> Vec<WeightIndex> {
        let count = binomial(n, m);
        (0..count).map(|k| WeightIndex::unrank(n, m, k).expect("rank in range")).collect()
    }

    /// Digit-string label for n <= 9, comma-separated otherwise.
    pub fn label(&self) -> String {
        if self.n <= 9 {
            self.elems.iter().map(|e| e.to_string()).collect()
        } else {
            self.elems.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

/// A pair of weight indices of the same shape, e.g. the position of a matrix
/// entry in the big group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightPair {
    pub row: WeightIndex,
    pub col: WeightIndex,
}

impl fmt::Debug for WeightPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row.label(), self.col.label())
    }
}

impl WeightPair {
    pub fn new(row: WeightIndex, col: WeightIndex) -> Result<WeightPair, Error> {
        if row.n() != col.n() || row.m() != col.m() {
            return Err(Error::ShapeMismatch);
        }
        Ok(WeightPair { row, col })
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }

    pub fn height(&self) -> u32 {
        height(&self.row, &self.col)
    }
}

/// Sign of the permutation sorting `seq` ascending; errors on repeats.
pub fn perm_sign(seq: &[u32]) -> Result<i32, Error> {
    let mut sign = 1i32;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return Err(Error::InvalidIndex(format!("repeated entry {} in {:?}", seq[i], seq)));
            }
            if seq[i] > seq[j] {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// Sign of inserting `i` into the sorted set `L`: the sign of the sequence
/// `(L..., i)`, i.e. parity of `#{l in L : l > i}`.
///
/// The convention is pinned by the Cauchy-Binet oracle in the wedge tests:
/// products of the closed transvection formula must equal the minor matrix.
/// (Only the product `insert_sign(L,i)*insert_sign(L,j)` is observable, and it
/// is the same under the `#{l < i}` convention.)
pub fn insert_sign(l: &WeightIndex, i: u32) -> Result<i32, Error> {
    if l.contains(i) {
        return Err(Error::InvalidIndex(format!("{i} already in {:?}", l)));
    }
    let above = l.elems().iter().filter(|&&x| x > i).count();
    Ok(if above % 2 == 0 { 1 } else { -1 })
}

/// Height of a pair: cardinality of the intersection.
pub fn height(i: &WeightIndex, j: &WeightIndex) -> u32 {
    i.elems().iter().filter(|e| j.contains(**e)).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_rank_basics() {
        let i = WeightIndex::new(5, &[1, 2]).unwrap();
        assert_eq!(i.lex_rank(), 0);
        let i = WeightIndex::new(5, &[1, 3]).unwrap();
        assert_eq!(i.lex_rank(), 1);
        // Oracle: enumerate all C(6,3)=20 subsets and locate {4,5,6}.
        let all = WeightIndex::enumerate(6, 3);
        assert_eq!(all.len(), 20);
        let last = WeightIndex::new(6, &[4, 5, 6]).unwrap();
        assert_eq!(all.iter().position(|x| *x == last), Some(19));
        assert_eq!(last.lex_rank(), 19);
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for (n, m) in [(5u32, 2u32), (6, 3), (7, 3), (9, 4)] {
            for k in 0..binomial(n, m) {
                let idx = WeightIndex::unrank(n, m, k).unwrap();
                assert_eq!(idx.lex_rank() as u64, k);
            }
        }
    }

    #[test]
    fn enumeration_is_lex_increasing() {
        let all = WeightIndex::enumerate(7, 3);
        assert_eq!(all.len() as u64, binomial(7, 3));
        for w in all.windows(2) {
            assert!(w[0].elems() < w[1].elems());
        }
    }

    #[test]
    fn perm_signs_from_notation() {
        assert_eq!(perm_sign(&[1, 2, 3, 4]).unwrap(), 1);
        assert_eq!(perm_sign(&[1, 3, 4, 2]).unwrap(), 1);
        assert_eq!(perm_sign(&[1, 3, 2, 4]).unwrap(), -1);
        assert_eq!(perm_sign(&[4, 1, 2, 3]).unwrap(), -1);
        assert!(perm_sign(&[1, 1, 2]).is_err());
    }

    #[test]
    fn perm_sign_multiplicative_under_swaps() {
        let mut seq = vec![3u32, 1, 4, 2, 5];
        let mut s = perm_sign(&seq).unwrap();
        for k in 0..4 {
            seq.swap(k, k + 1);
            let s2 = perm_sign(&seq).unwrap();
            assert_eq!(s2, -s);
            s = s2;
        }
    }

    #[test]
    fn insert_signs() {
        let l = WeightIndex::new(7, &[2, 4]).unwrap();
        assert_eq!(insert_sign(&l, 1).unwrap(), 1);
        assert_eq!(insert_sign(&l, 3).unwrap(), -1);
        assert!(insert_sign(&l, 2).is_err());
        let empty = WeightIndex::new(9, &[]).unwrap();
        assert_eq!(insert_sign(&empty, 7).unwrap(), 1);
    }

    #[test]
    fn insert_sign_product_convention_independent() {
        // The observable quantity sign(L,i)*sign(L,j) must agree between the
        // two candidate conventions (#{l>i} vs #{l<i}) for all small cases.
        for n in 3..=7u32 {
            for m in 1..=3.min(n - 1) {
                for l in WeightIndex::enumerate(n, m - 1) {
                    let free: Vec<u32> = (1..=n).filter(|v| !l.contains(*v)).collect();
                    for &i in &free {
                        for &j in &free {
                            if i == j {
                                continue;
                            }
                            let a = insert_sign(&l, i).unwrap() * insert_sign(&l, j).unwrap();
                            let below = |v: u32| l.elems().iter().filter(|&&x| x < v).count();
                            let alt = |v: u32| if below(v) % 2 == 0 { 1 } else { -1 };
                            assert_eq!(a, alt(i) * alt(j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn heights() {
        let i = WeightIndex::new(5, &[1, 2]).unwrap();
        let j = WeightIndex::new(5, &[3, 4]).unwrap();
        assert_eq!(height(&i, &j), 0);
        let i = WeightIndex::new(5, &[1, 3]).unwrap();
        let j = WeightIndex::new(5, &[3, 5]).unwrap();
        assert_eq!(height(&i, &j), 1);
        let d = WeightIndex::new(5, &[1, 2, 3]).unwrap();
        assert_eq!(height(&d, &d), 3);
    }
}
