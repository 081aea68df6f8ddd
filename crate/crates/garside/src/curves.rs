//! Standard (round) curves and detection of standard reduction systems.
//!
//! A standard curve encloses a block of consecutive punctures `lo..=hi`.
//! Permutation braids map puncture sets to puncture sets; the image of a
//! standard curve is standard exactly when the image set is again an
//! interval. Tracking curves through all canonical factors gives a finite
//! partial map whose periodic points are the candidates for a reduction
//! system made of round curves: a reducible braid that preserves some family
//! of round curves must leave a trace here, so an empty answer rules such a
//! family out.

use std::collections::BTreeMap;

use crate::braid::Braid;
use crate::simple::SimpleBraid;

/// The isotopy class of a circle around punctures `lo..=hi`, with
/// `1 <= lo < hi <= n` and `hi - lo < n - 1` (the full circle is excluded).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StandardCurve {
    pub lo: usize,
    pub hi: usize,
}

impl StandardCurve {
    pub fn new(n: usize, lo: usize, hi: usize) -> Self {
        assert!(lo >= 1 && lo < hi && hi <= n && hi - lo < n - 1, "bad curve {lo}..{hi} on {n} strands");
        StandardCurve { lo, hi }
    }

    pub fn size(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Image under the half twist: the mirrored interval.
    pub fn mirror(&self, n: usize) -> StandardCurve {
        StandardCurve { lo: n + 1 - self.hi, hi: n + 1 - self.lo }
    }

    /// Disjoint or nested: the corresponding circles can be realized without
    /// intersection.
    pub fn compatible_with(&self, other: &StandardCurve) -> bool {
        let disjoint = self.hi < other.lo || other.hi < self.lo;
        let nested = (self.lo <= other.lo && other.hi <= self.hi)
            || (other.lo <= self.lo && self.hi <= other.hi);
        disjoint || nested
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveImage {
    Standard(StandardCurve),
    NonStandard,
}

/// Every standard curve on `n` strands, ordered lexicographically.
pub fn all_standard_curves(n: usize) -> Vec<StandardCurve> {
    let mut curves = Vec::new();
    for lo in 1..=n {
        for hi in lo + 1..=n {
            if hi - lo < n - 1 {
                curves.push(StandardCurve { lo, hi });
            }
        }
    }
    curves
}

/// Image of a standard curve under a permutation braid.
pub fn curve_image_simple(s: &SimpleBraid, curve: StandardCurve) -> CurveImage {
    let mut min = usize::MAX;
    let mut max = 0usize;
    for p in curve.lo..=curve.hi {
        let image = s.map(p);
        min = min.min(image);
        max = max.max(image);
    }
    if max - min == curve.hi - curve.lo {
        CurveImage::Standard(StandardCurve { lo: min, hi: max })
    } else {
        CurveImage::NonStandard
    }
}

/// Image of a standard curve under a braid in canonical form, factor by
/// factor (half twists first). `None` when any intermediate image fails to
/// be standard.
pub fn curve_image(x: &Braid, curve: StandardCurve) -> Option<StandardCurve> {
    let mut current = curve;
    if x.inf().rem_euclid(2) == 1 {
        current = current.mirror(x.n());
    }
    for factor in x.factors() {
        match curve_image_simple(factor, current) {
            CurveImage::Standard(next) => current = next,
            CurveImage::NonStandard => return None,
        }
    }
    Some(current)
}

/// A periodic standard curve of the factorwise curve map, with its orbit and
/// whether the orbit is pairwise compatible (a candidate reduction system).
#[derive(Clone, Debug)]
pub struct PeriodicCurve {
    pub curve: StandardCurve,
    pub orbit: Vec<StandardCurve>,
    pub compatible: bool,
}

/// All periodic points of the curve map of `x`. An empty result certifies
/// that `x` preserves no family of standard curves.
pub fn find_standard_reduction(x: &Braid) -> Vec<PeriodicCurve> {
    let curves = all_standard_curves(x.n());
    let mut image: BTreeMap<StandardCurve, Option<StandardCurve>> = BTreeMap::new();
    for &c in &curves {
        image.insert(c, curve_image(x, c));
    }
    let mut result = Vec::new();
    for &start in &curves {
        let mut orbit = vec![start];
        let mut current = start;
        let mut periodic = false;
        for _ in 0..curves.len() {
            match image[&current] {
                Some(next) => {
                    if next == start {
                        periodic = true;
                        break;
                    }
                    orbit.push(next);
                    current = next;
                }
                None => break,
            }
        }
        if periodic {
            let compatible = orbit
                .iter()
                .enumerate()
                .all(|(i, a)| orbit[i + 1..].iter().all(|b| a.compatible_with(b)));
            result.push(PeriodicCurve { curve: start, orbit, compatible });
        }
    }
    result
}
