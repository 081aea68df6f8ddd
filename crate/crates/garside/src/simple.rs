//! Permutation braids (the simple elements of the Garside structure on the
//! braid group B_n) and their lattice under the prefix order.
//!
//! A simple braid is a positive braid in which every pair of strands crosses
//! at most once; these are in bijection with permutations of the punctures
//! `1..=n`. Products compose left to right: in `u * v` the braid `u` acts
//! first, so the underlying permutation is `x -> v(u(x))`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Sets of generator or puncture indices, kept ordered for deterministic output.
pub type IndexSet = BTreeSet<usize>;

/// Largest supported strand count (images are stored as bytes).
pub const MAX_STRANDS: usize = 255;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {letter} out of range 1..={max} for {n} strands")]
    LetterOutOfRange { letter: usize, max: usize, n: usize },
    #[error("word is not reduced: some pair of strands crosses twice")]
    NotReduced,
}

/// A permutation braid on `n` strands.
///
/// Internally stores the image array of its permutation: `pi[i]` is the
/// 1-based end position of the strand starting at puncture `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleBraid {
    pi: Vec<u8>,
}

impl SimpleBraid {
    fn assert_n(n: usize) {
        assert!((2..=MAX_STRANDS).contains(&n), "strand count {n} out of range");
    }

    /// The trivial braid on `n` strands.
    pub fn identity(n: usize) -> Self {
        Self::assert_n(n);
        SimpleBraid { pi: (1..=n as u8).collect() }
    }

    /// The positive half twist on `n` strands (the Garside element).
    pub fn delta(n: usize) -> Self {
        Self::assert_n(n);
        SimpleBraid { pi: (1..=n as u8).rev().collect() }
    }

    /// The Artin generator crossing strands `i` and `i + 1` (1-based, `i < n`).
    pub fn sigma(n: usize, i: usize) -> Self {
        Self::assert_n(n);
        assert!(i >= 1 && i < n, "generator index {i} out of range for {n} strands");
        let mut pi: Vec<u8> = (1..=n as u8).collect();
        pi.swap(i - 1, i);
        SimpleBraid { pi }
    }

    /// Builds a simple braid from its 1-based image array.
    ///
    /// Panics if `images` is not a permutation of `1..=n`.
    pub fn from_images(images: &[usize]) -> Self {
        let n = images.len();
        Self::assert_n(n);
        let mut seen = vec![false; n];
        for &v in images {
            assert!(v >= 1 && v <= n && !seen[v - 1], "not a permutation of 1..={n}");
            seen[v - 1] = true;
        }
        SimpleBraid { pi: images.iter().map(|&v| v as u8).collect() }
    }

    /// Reads a positive word and checks that it is reduced, i.e. that its
    /// length equals the crossing number of the induced permutation.
    pub fn from_word(n: usize, letters: &[usize]) -> Result<Self, WordError> {
        Self::assert_n(n);
        // inv[p] = strand currently occupying position p.
        let mut inv: Vec<u8> = (1..=n as u8).collect();
        for &l in letters {
            if l == 0 || l >= n {
                return Err(WordError::LetterOutOfRange { letter: l, max: n - 1, n });
            }
            inv.swap(l - 1, l);
        }
        let mut pi = vec![0u8; n];
        for (pos, &s) in inv.iter().enumerate() {
            pi[(s - 1) as usize] = (pos + 1) as u8;
        }
        let braid = SimpleBraid { pi };
        if braid.inversions() != letters.len() {
            return Err(WordError::NotReduced);
        }
        Ok(braid)
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// End position of the strand starting at puncture `i` (both 1-based).
    pub fn map(&self, i: usize) -> usize {
        self.pi[i - 1] as usize
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.pi.iter().map(|&v| v as usize).collect()
    }

    /// Inverse image array: entry `p` (0-based) is the strand ending at `p + 1`.
    fn inverse_images(&self) -> Vec<u8> {
        let mut inv = vec![0u8; self.pi.len()];
        for (i, &v) in self.pi.iter().enumerate() {
            inv[(v - 1) as usize] = (i + 1) as u8;
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.n();
        self.pi.iter().enumerate().all(|(i, &v)| v as usize == n - i)
    }

    /// Number of crossings, i.e. inversions of the permutation.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.pi.len() {
            for j in i + 1..self.pi.len() {
                if self.pi[i] > self.pi[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Generators that can start the braid: descents of the permutation.
    pub fn starting_set(&self) -> IndexSet {
        (1..self.n()).filter(|&i| self.pi[i - 1] > self.pi[i]).collect()
    }

    /// Generators that can end the braid: descents of the inverse permutation.
    pub fn finishing_set(&self) -> IndexSet {
        let inv = self.inverse_images();
        (1..self.n()).filter(|&i| inv[i - 1] > inv[i]).collect()
    }

    /// Permutation product `self * rhs` (left-to-right composition). This is
    /// the braid product only when the crossings stay reduced, e.g. for
    /// `u * w` with `w` a prefix of the right complement of `u`.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.n(), rhs.n(), "strand count mismatch");
        let pi = self.pi.iter().map(|&v| rhs.pi[(v - 1) as usize]).collect();
        SimpleBraid { pi }
    }

    /// The inverse permutation (not a positive braid; used for bookkeeping).
    pub fn inverse_perm(&self) -> Self {
        SimpleBraid { pi: self.inverse_images() }
    }

    /// Conjugation by the half twist: `tau(s) = delta^-1 s delta`.
    pub fn tau(&self) -> Self {
        let n = self.n();
        let pi = (0..n).map(|i| (n as u8 + 1) - self.pi[n - 1 - i]).collect();
        SimpleBraid { pi }
    }

    /// Right complement `.delta(s) = s^-1 delta`, so that `s * .delta(s) = delta`.
    pub fn right_complement(&self) -> Self {
        let n = self.n() as u8;
        let inv = self.inverse_images();
        SimpleBraid { pi: inv.iter().map(|&v| n + 1 - v).collect() }
    }

    /// Greatest common prefix, computed by greedily extracting common
    /// starting generators.
    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "strand count mismatch");
        let n = self.n();
        let mut a = self.pi.clone();
        let mut b = other.pi.clone();
        // inv tracks the meet built so far, as position -> strand.
        let mut inv: Vec<u8> = (1..=n as u8).collect();
        loop {
            let mut progressed = false;
            for i in 0..n - 1 {
                if a[i] > a[i + 1] && b[i] > b[i + 1] {
                    a.swap(i, i + 1);
                    b.swap(i, i + 1);
                    inv.swap(i, i + 1);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        let mut pi = vec![0u8; n];
        for (pos, &s) in inv.iter().enumerate() {
            pi[(s - 1) as usize] = (pos + 1) as u8;
        }
        SimpleBraid { pi }
    }

    /// Greatest common suffix: the dual of `meet`, extracting common
    /// finishing generators from the right.
    pub fn suffix_meet(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "strand count mismatch");
        let n = self.n();
        let mut ai = self.inverse_images();
        let mut bi = other.inverse_images();
        let mut letters_rev = Vec::new();
        loop {
            let mut progressed = false;
            for i in 0..n - 1 {
                if ai[i] > ai[i + 1] && bi[i] > bi[i + 1] {
                    ai.swap(i, i + 1);
                    bi.swap(i, i + 1);
                    letters_rev.push(i + 1);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        letters_rev.reverse();
        Self::from_word(n, &letters_rev).expect("common suffix is a reduced word")
    }

    /// Least common upper bound in the prefix order.
    pub fn join(&self, other: &Self) -> Self {
        let n = self.n();
        let m = self.right_complement().suffix_meet(&other.right_complement());
        // join = delta * m^-1.
        let minv = m.inverse_images();
        let pi = (0..n).map(|x| minv[n - 1 - x]).collect();
        SimpleBraid { pi }
    }

    /// Prefix-order test `self <= other`.
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        self.meet(other) == *self
    }

    /// Rebalances `(u, v)` so that `u` absorbs as much of `v` as a simple
    /// braid can: returns `(u * w, w^-1 * v)` for `w = meet(.delta(u), v)`.
    /// The product is unchanged and the pair is left weighted afterwards.
    pub fn left_weight_pair(u: &Self, v: &Self) -> (Self, Self) {
        let w = u.right_complement().meet(v);
        if w.is_identity() {
            return (u.clone(), v.clone());
        }
        let u2 = u.compose(&w);
        let winv = w.inverse_images();
        let pi = (0..u.n()).map(|x| v.pi[(winv[x] - 1) as usize]).collect();
        let v2 = SimpleBraid { pi };
        debug_assert_eq!(u2.inversions(), u.inversions() + w.inversions());
        debug_assert_eq!(v2.inversions() + w.inversions(), v.inversions());
        (u2, v2)
    }

    /// The canonical reduced word: repeatedly emit the smallest descent.
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut a = self.pi.clone();
        let mut word = Vec::with_capacity(self.inversions());
        loop {
            let mut descent = None;
            for i in 0..a.len() - 1 {
                if a[i] > a[i + 1] {
                    descent = Some(i);
                    break;
                }
            }
            match descent {
                Some(i) => {
                    word.push(i + 1);
                    a.swap(i, i + 1);
                }
                None => break,
            }
        }
        word
    }

    /// Packs the permutation into an integer key (5 bits per strand).
    /// Only available for `n <= 25`; used by the search frontiers.
    pub fn pack_key(&self) -> u128 {
        debug_assert!(self.n() <= 25, "packed keys support at most 25 strands");
        let mut key = 0u128;
        for &v in &self.pi {
            key = (key << 5) | (v - 1) as u128;
        }
        key
    }
}

impl fmt::Display for SimpleBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let word = self.canonical_word();
        let text: Vec<String> = word.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", text.join(" "))
    }
}

impl fmt::Debug for SimpleBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleBraid{:?}", self.images())
    }
}
