//! Fixed-length bitstrings over the elements of a poset.
//!
//! Element `i` (0-based) lives at significance position `n - 1 - i`, so the
//! first element is the most significant bit and the derived ordering of
//! [`BitSet`] is the ordering of the bitstrings read as binary integers.
//! For `n = 10` the set of elements `{2, 3, 4, 8}` (1-based) is the string
//! `0111000100`, i.e. the integer 452.

use std::fmt;

use num_bigint::BigUint;
use smallvec::SmallVec;

const WORD_BITS: usize = 64;

#[inline]
fn word_of(i: usize) -> usize {
    i / WORD_BITS
}

#[inline]
fn mask_of(i: usize) -> u64 {
    1u64 << (WORD_BITS - 1 - i % WORD_BITS)
}

/// An `n`-bit set. Up to 128 elements are stored inline.
///
/// Two sets only compare meaningfully when they have the same length; all
/// sets handed around by one engine run share the length of the poset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    n: u32,
    words: SmallVec<[u64; 2]>,
}

/// An order ideal identified by its bitstring.
pub type IdealKey = BitSet;

impl BitSet {
    pub fn new(n: usize) -> Self {
        let len = n.div_ceil(WORD_BITS);
        BitSet {
            n: n as u32,
            words: SmallVec::from_elem(0, len),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_padding();
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Self {
        let mut s = Self::new(n);
        for e in elements {
            s.insert(e);
        }
        s
    }

    /// Parses a string of `0`/`1` characters, first character = first element.
    pub fn from_bitstring(bits: &str) -> Option<Self> {
        let chars: Vec<char> = bits.chars().filter(|c| !c.is_whitespace()).collect();
        let mut s = Self::new(chars.len());
        for (i, c) in chars.iter().enumerate() {
            match c {
                '0' => {}
                '1' => s.insert(i),
                _ => return None,
            }
        }
        Some(s)
    }

    fn clear_padding(&mut self) {
        let n = self.n as usize;
        let rem = n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !(u64::MAX >> rem);
            }
        }
    }

    /// Number of positions (the poset size), not the number of members.
    #[inline]
    pub fn width(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.width());
        self.words[word_of(i)] & mask_of(i) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width(), "element {i} out of range for width {}", self.n);
        self.words[word_of(i)] |= mask_of(i);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.width(), "element {i} out of range for width {}", self.n);
        self.words[word_of(i)] &= !mask_of(i);
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    /// Number of members.
    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.clear_padding();
        s
    }

    /// Members in ascending element order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Number of members strictly smaller than `i`.
    pub fn rank(&self, i: usize) -> usize {
        let w = word_of(i);
        let full: usize = self.words[..w].iter().map(|x| x.count_ones() as usize).sum();
        let offset = i % WORD_BITS;
        let partial = if offset == 0 {
            0
        } else {
            (self.words[w] >> (WORD_BITS - offset)).count_ones() as usize
        };
        full + partial
    }

    /// The `0`/`1` string, first element first.
    pub fn to_bitstring(&self) -> String {
        (0..self.width())
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// The canonical integer with the first element most significant.
    pub fn key(&self) -> BigUint {
        let mut v = BigUint::default();
        for i in 0..self.width() {
            v <<= 1u32;
            if self.contains(i) {
                v += 1u32;
            }
        }
        v
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: &[u64]) -> Option<Self> {
        if words.len() != n.div_ceil(WORD_BITS) {
            return None;
        }
        let mut s = BitSet {
            n: n as u32,
            words: SmallVec::from_slice(words),
        };
        let before = s.clone();
        s.clear_padding();
        (s == before).then_some(s)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i + 1)).finish()
    }
}

impl fmt::Display for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let lz = self.current.leading_zeros() as usize;
                self.current &= !(1u64 << (WORD_BITS - 1 - lz));
                return Some(self.word * WORD_BITS + lz);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
