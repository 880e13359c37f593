use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A subset of the ground set `{0, .., n-1}` stored as a fixed-length bit vector.
///
/// The cardinality is cached and kept in sync by every mutating method.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    words: Vec<u64>,
    len: usize,
    cardinality: usize,
}

impl Solution {
    pub fn empty(len: usize) -> Self {
        Solution {
            words: vec![0; len.div_ceil(64)],
            len,
            cardinality: 0,
        }
    }

    /// Builds a solution from element indices. Panics if an index is out of range.
    pub fn from_elements<I: IntoIterator<Item = usize>>(len: usize, elements: I) -> Self {
        let mut x = Solution::empty(len);
        for e in elements {
            x.insert(e);
        }
        x
    }

    /// Bit `i` of `mask` is element `i`. Requires `len <= 64`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "from_mask supports at most 64 elements");
        assert!(len == 64 || mask >> len == 0, "mask has bits beyond len");
        let mut words = vec![0; len.div_ceil(64)];
        if let Some(w) = words.first_mut() {
            *w = mask;
        }
        Solution {
            words,
            len,
            cardinality: mask.count_ones() as usize,
        }
    }

    /// The low word as a mask; only meaningful for `len <= 64`.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        assert!(e < self.len, "element {e} out of range 0..{}", self.len);
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    /// Returns `true` if the element was absent.
    pub fn insert(&mut self, e: usize) -> bool {
        if self.contains(e) {
            return false;
        }
        self.words[e / 64] |= 1 << (e % 64);
        self.cardinality += 1;
        true
    }

    /// Returns `true` if the element was present.
    pub fn remove(&mut self, e: usize) -> bool {
        if !self.contains(e) {
            return false;
        }
        self.words[e / 64] &= !(1 << (e % 64));
        self.cardinality -= 1;
        true
    }

    pub fn flip(&mut self, e: usize) {
        if !self.remove(e) {
            self.insert(e);
        }
    }

    pub fn with(&self, e: usize) -> Solution {
        let mut y = self.clone();
        y.insert(e);
        y
    }

    pub fn without(&self, e: usize) -> Solution {
        let mut y = self.clone();
        y.remove(e);
        y
    }

    pub fn complement(&self) -> Solution {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if !self.len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
        Solution {
            words,
            len: self.len,
            cardinality: self.len - self.cardinality,
        }
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Elements<'_> {
        Elements {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Orders solutions as the unsigned integers their bit vectors encode
/// (element `n-1` is the most significant bit).
impl Ord for Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            self.words
                .iter()
                .rev()
                .cmp(other.words.iter().rev())
        })
    }
}

impl PartialOrd for Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution(n={}, ", self.len)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

pub struct Elements<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}
