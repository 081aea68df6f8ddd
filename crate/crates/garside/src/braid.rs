//! Braid group elements in left canonical form `delta^k x_1 ... x_l`, where
//! each `x_i` is a simple braid different from the identity and the half
//! twist, and each adjacent pair is left weighted.

use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::simple::{IndexSet, SimpleBraid};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("letter {letter} out of range (expected nonzero magnitude <= {max})")]
    LetterOutOfRange { letter: i64, max: usize },
}

/// A braid on `n` strands, stored in left canonical form. Structural
/// equality of two values is equality in the braid group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Braid {
    n: usize,
    inf: i64,
    factors: Vec<SimpleBraid>,
}

/// Pieces fed to the normalizer: an integral power of the half twist or a
/// permutation braid.
enum Piece {
    Delta(i64),
    Simple(SimpleBraid),
}

/// Pushes all half-twist powers to the front, twisting the simple factors
/// they pass through, then returns `(k, factors)`.
fn flatten(pieces: Vec<Piece>) -> (i64, Vec<SimpleBraid>) {
    let mut inf = 0i64;
    let mut rev: Vec<SimpleBraid> = Vec::new();
    for piece in pieces.into_iter().rev() {
        match piece {
            Piece::Delta(e) => inf += e,
            Piece::Simple(s) => rev.push(if inf.rem_euclid(2) == 1 { s.tau() } else { s }),
        }
    }
    rev.reverse();
    (inf, rev)
}

fn normalize(n: usize, mut inf: i64, mut factors: Vec<SimpleBraid>) -> Braid {
    factors.retain(|f| !f.is_identity());
    let bound = factors.len() * factors.len() + 2;
    let mut sweeps = 0usize;
    loop {
        let mut changed = false;
        // Absorb any full twists into the leading power.
        let mut i = 0;
        while i < factors.len() {
            if factors[i].is_delta() {
                for f in factors.iter_mut().take(i) {
                    *f = f.tau();
                }
                factors.remove(i);
                inf += 1;
                changed = true;
            } else {
                i += 1;
            }
        }
        if factors.len() >= 2 {
            for i in 0..factors.len() - 1 {
                let (u2, v2) = SimpleBraid::left_weight_pair(&factors[i], &factors[i + 1]);
                if u2 != factors[i] {
                    factors[i] = u2;
                    factors[i + 1] = v2;
                    changed = true;
                }
            }
        }
        factors.retain(|f| !f.is_identity());
        if !changed {
            break;
        }
        sweeps += 1;
        debug_assert!(sweeps <= bound, "normalization failed to stabilize");
    }
    Braid { n, inf, factors }
}

impl Braid {
    pub fn identity(n: usize) -> Self {
        SimpleBraid::identity(n); // strand count validation
        Braid { n, inf: 0, factors: Vec::new() }
    }

    pub fn delta_power(n: usize, k: i64) -> Self {
        SimpleBraid::identity(n);
        Braid { n, inf: k, factors: Vec::new() }
    }

    pub fn from_simple(s: SimpleBraid) -> Self {
        let n = s.n();
        normalize(n, 0, vec![s])
    }

    /// Normal form of a word in the Artin generators; letter `i > 0` is
    /// `sigma_i` and `-i` its inverse.
    pub fn normal_form(n: usize, word: &[i64]) -> Result<Self, NormalFormError> {
        SimpleBraid::identity(n);
        let max = n - 1;
        let mut pieces = Vec::with_capacity(word.len());
        for &letter in word {
            let mag = letter.unsigned_abs() as usize;
            if letter == 0 || mag > max {
                return Err(NormalFormError::LetterOutOfRange { letter, max });
            }
            if letter > 0 {
                pieces.push(Piece::Simple(SimpleBraid::sigma(n, mag)));
            } else {
                // sigma_i^-1 = delta^-1 * (delta sigma_i^-1), and the
                // parenthesized element is simple.
                pieces.push(Piece::Delta(-1));
                pieces.push(Piece::Simple(delta_sigma_inv(n, mag)));
            }
        }
        let (inf, factors) = flatten(pieces);
        Ok(normalize(n, inf, factors))
    }

    /// Assembles a braid from a half-twist power and arbitrary simple factors.
    pub fn from_parts(n: usize, inf: i64, factors: Vec<SimpleBraid>) -> Self {
        for f in &factors {
            assert_eq!(f.n(), n, "strand count mismatch");
        }
        normalize(n, inf, factors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Infimum: the leading power of the half twist.
    pub fn inf(&self) -> i64 {
        self.inf
    }

    /// Canonical length: the number of non-trivial simple factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Supremum: `inf + len`.
    pub fn sup(&self) -> i64 {
        self.inf + self.factors.len() as i64
    }

    pub fn factors(&self) -> &[SimpleBraid] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    pub fn multiply(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "strand count mismatch");
        let mut pieces = Vec::with_capacity(self.factors.len() + rhs.factors.len() + 2);
        pieces.push(Piece::Delta(self.inf));
        pieces.extend(self.factors.iter().cloned().map(Piece::Simple));
        pieces.push(Piece::Delta(rhs.inf));
        pieces.extend(rhs.factors.iter().cloned().map(Piece::Simple));
        let (inf, factors) = flatten(pieces);
        normalize(self.n, inf, factors)
    }

    pub fn inverse(&self) -> Self {
        // (delta^k x_1 .. x_l)^-1 = x_l^-1 .. x_1^-1 delta^-k, and each
        // x^-1 = delta^-1 * (delta x^-1) with a simple second piece.
        let mut pieces = Vec::with_capacity(2 * self.factors.len() + 1);
        for f in self.factors.iter().rev() {
            pieces.push(Piece::Delta(-1));
            pieces.push(Piece::Simple(delta_inverse(f)));
        }
        pieces.push(Piece::Delta(-self.inf));
        let (inf, factors) = flatten(pieces);
        normalize(self.n, inf, factors)
    }

    /// Conjugation by the half twist.
    pub fn tau(&self) -> Self {
        let factors = self.factors.iter().map(SimpleBraid::tau).collect();
        // tau preserves left weightedness, so no renormalization is needed.
        Braid { n: self.n, inf: self.inf, factors }
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_with(&self, g: &Self) -> Self {
        g.inverse().multiply(self).multiply(g)
    }

    /// `s^-1 * self * s` for a simple conjugator, fused into one
    /// normalization pass.
    pub fn conjugate_by_simple(&self, s: &SimpleBraid) -> Self {
        assert_eq!(self.n, s.n(), "strand count mismatch");
        if s.is_identity() {
            return self.clone();
        }
        let mut pieces = Vec::with_capacity(self.factors.len() + 4);
        pieces.push(Piece::Delta(-1));
        pieces.push(Piece::Simple(delta_inverse(s)));
        pieces.push(Piece::Delta(self.inf));
        pieces.extend(self.factors.iter().cloned().map(Piece::Simple));
        pieces.push(Piece::Simple(s.clone()));
        let (inf, factors) = flatten(pieces);
        normalize(self.n, inf, factors)
    }

    /// A braid is rigid when it has positive canonical length and the final
    /// factor is left weighted against the twisted first factor, so that
    /// cycling rotates the factors without reshuffling them.
    pub fn is_rigid(&self) -> bool {
        if self.factors.is_empty() {
            return false;
        }
        let first = if self.inf.rem_euclid(2) == 1 {
            self.factors[0].tau()
        } else {
            self.factors[0].clone()
        };
        let last = self.factors.last().unwrap();
        first.starting_set().is_subset(&last.finishing_set())
    }

    /// Starting set, for braids with nonnegative infimum: every generator if
    /// `inf > 0`, otherwise the starting set of the first factor.
    pub fn starting_set(&self) -> IndexSet {
        if self.inf > 0 {
            return (1..self.n).collect();
        }
        match self.factors.first() {
            Some(f) => f.starting_set(),
            None => IndexSet::new(),
        }
    }

    /// Finishing set, dual to `starting_set`.
    pub fn finishing_set(&self) -> IndexSet {
        if self.inf > 0 {
            return (1..self.n).collect();
        }
        match self.factors.last() {
            Some(f) => f.finishing_set(),
            None => IndexSet::new(),
        }
    }

    /// A compact serialization of the normal form, usable as a map key.
    pub fn key(&self) -> String {
        use fmt::Write;
        let mut key = String::new();
        write!(key, "n{};d{}", self.n, self.inf).unwrap();
        for f in &self.factors {
            key.push(';');
            let images = f.images();
            for (i, v) in images.iter().enumerate() {
                if i > 0 {
                    key.push(',');
                }
                write!(key, "{v}").unwrap();
            }
        }
        key
    }

    /// A word in the Artin generators spelling this braid.
    pub fn word(&self) -> Vec<i64> {
        let mut word = Vec::new();
        let delta_word = SimpleBraid::delta(self.n).canonical_word();
        if self.inf >= 0 {
            for _ in 0..self.inf {
                word.extend(delta_word.iter().map(|&l| l as i64));
            }
        } else {
            for _ in 0..-self.inf {
                word.extend(delta_word.iter().rev().map(|&l| -(l as i64)));
            }
        }
        for f in &self.factors {
            word.extend(f.canonical_word().into_iter().map(|l| l as i64));
        }
        word
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "inf": self.inf,
            "factors": self.factors.iter().map(|f| f.canonical_word()).collect::<Vec<_>>(),
        })
    }
}

/// `delta * s^-1` as a permutation braid.
fn delta_inverse(s: &SimpleBraid) -> SimpleBraid {
    s.right_complement().tau()
}

/// `delta * sigma_i^-1` as a permutation braid.
fn delta_sigma_inv(n: usize, i: usize) -> SimpleBraid {
    delta_inverse(&SimpleBraid::sigma(n, i))
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^{}", self.inf)?;
        for factor in &self.factors {
            let letters: Vec<String> =
                factor.canonical_word().iter().map(|l| l.to_string()).collect();
            write!(f, " . {}", letters.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Braid[{self}]")
    }
}

/// Parses a whitespace-separated list of signed letters.
pub fn parse_signed_word(text: &str) -> Result<Vec<i64>, String> {
    text.split_whitespace()
        .map(|tok| tok.parse::<i64>().map_err(|_| format!("bad letter {tok:?}")))
        .collect()
}
