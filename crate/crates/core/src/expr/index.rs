use std::fmt;

use smallvec::SmallVec;

/// Sorted multi-index of base directions, stored 0-based.
///
/// `y^σ_I` and `ω^σ_I` are always keyed by the sorted representative, so
/// `(1,0)` and `(0,1)` name the same coordinate.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(SmallVec<[u8; 4]>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(SmallVec::new())
    }

    pub fn new<I: IntoIterator<Item = usize>>(entries: I) -> Self {
        let mut v: SmallVec<[u8; 4]> = entries
            .into_iter()
            .map(|i| u8::try_from(i).expect("base index exceeds 255"))
            .collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex::new([i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    /// The index with one more `i`, re-sorted.
    pub fn with(&self, i: usize) -> Self {
        let i = u8::try_from(i).expect("base index exceeds 255");
        let mut v = self.0.clone();
        let pos = v.partition_point(|&e| e <= i);
        v.insert(pos, i);
        MultiIndex(v)
    }

    pub fn union(&self, other: &MultiIndex) -> Self {
        MultiIndex::new(self.iter().chain(other.iter()))
    }

    /// Removes one occurrence of `i`, if present.
    pub fn without(&self, i: usize) -> Option<Self> {
        let pos = self.0.iter().position(|&e| e as usize == i)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    /// `other` as a sub-multiset, returning the complement.
    pub fn minus(&self, other: &MultiIndex) -> Option<Self> {
        let mut out = self.clone();
        for i in other.iter() {
            out = out.without(i)?;
        }
        Some(out)
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&e| e as usize == i).count()
    }

    /// Distinct entries in increasing order.
    pub fn distinct(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.iter().collect();
        out.dedup();
        out
    }

    /// Largest entry, the conventional "last" index of a sorted multi-index.
    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|&i| i as usize)
    }

    /// Number of ordered tuples whose sorted form is `self`.
    pub fn arrangements(&self) -> u64 {
        let mut total = factorial(self.len());
        for i in self.distinct() {
            total /= factorial(self.multiplicity(i));
        }
        total
    }

    /// All sorted multi-indices over `n` directions of exactly length `len`.
    pub fn of_len(n: usize, len: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        fn rec(n: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == len {
                out.push(MultiIndex::new(cur.iter().copied()));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, len, i, cur, out);
                cur.pop();
            }
        }
        rec(n, len, 0, &mut cur, &mut out);
        out
    }

    /// All sorted multi-indices over `n` directions of length at most `max_len`.
    pub fn up_to(n: usize, max_len: usize) -> Vec<MultiIndex> {
        (0..=max_len).flat_map(|l| MultiIndex::of_len(n, l)).collect()
    }

    /// All ordered tuples over `n` directions of length `len`.
    pub fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn with_keeps_sorted() {
        let i = MultiIndex::new([2, 0]);
        assert_eq!(i.with(1), MultiIndex::new([0, 1, 2]));
        assert_eq!(i.with(0).entries_vec(), vec![0, 0, 2]);
    }

    #[test]
    fn arrangements_counts_orderings() {
        assert_eq!(MultiIndex::new([0, 0, 1]).arrangements(), 3);
        assert_eq!(MultiIndex::new([0, 1, 2]).arrangements(), 6);
        assert_eq!(MultiIndex::empty().arrangements(), 1);
    }

    #[test]
    fn enumeration_sizes() {
        // C(n + l - 1, l)
        assert_eq!(MultiIndex::of_len(4, 2).len(), 10);
        assert_eq!(MultiIndex::of_len(2, 3).len(), 4);
        assert_eq!(MultiIndex::up_to(3, 2).len(), 1 + 3 + 6);
    }

    #[test]
    fn minus_is_multiset_difference() {
        let i = MultiIndex::new([0, 0, 1]);
        assert_eq!(i.minus(&MultiIndex::new([0, 1])), Some(MultiIndex::single(0)));
        assert_eq!(i.minus(&MultiIndex::new([1, 1])), None);
    }

    impl MultiIndex {
        fn entries_vec(&self) -> Vec<usize> {
            self.iter().collect()
        }
    }
}
