use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A subset of `{0, .., n-1}` as a fixed-width bit set.
///
/// Serialized as `{ "degree": n, "points": [sorted members] }`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    degree: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    degree: usize,
    points: Vec<usize>,
}

impl PointSet {
    pub fn empty(degree: usize) -> Self {
        PointSet {
            degree,
            words: vec![0; degree.div_ceil(64)],
        }
    }

    pub fn full(degree: usize) -> Self {
        let mut s = PointSet::empty(degree);
        for x in 0..degree {
            s.insert(x);
        }
        s
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(degree: usize, points: I) -> Result<Self> {
        let mut s = PointSet::empty(degree);
        for x in points {
            if x >= degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// The subset whose members are the set bits of `mask` (bit `i` = point `i`).
    pub fn from_mask(degree: usize, mask: u64) -> Self {
        assert!(degree <= 64 && (degree == 64 || mask >> degree == 0));
        let mut s = PointSet::empty(degree);
        if degree > 0 {
            s.words[0] = mask;
        }
        s
    }

    /// Bit mask for sets of degree at most 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.degree && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.degree, "point {x} out of range {}", self.degree);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.degree {
            self.words[x / 64] &= !(1 << (x % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn points(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &PointSet) {
        assert_eq!(self.degree, other.degree);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Image of the set under `g`.
    pub fn image(&self, g: &Permutation) -> PointSet {
        let mut out = PointSet::empty(self.degree);
        for x in self.iter() {
            out.insert(g.apply(x));
        }
        out
    }

    /// Whether `g` maps the set onto itself.
    #[inline]
    pub fn is_stabilized_by(&self, g: &Permutation) -> bool {
        self.iter().all(|x| self.contains(g.apply(x)))
    }
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = Error;

    fn try_from(r: PointSetRepr) -> Result<Self> {
        PointSet::from_points(r.degree, r.points)
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(s: PointSet) -> Self {
        PointSetRepr {
            degree: s.degree,
            points: s.points(),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
