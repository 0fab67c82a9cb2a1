//! Permutations of `{0, .., n-1}`.
//!
//! Points are acted on from the right: `x^(ab) = (x^a)^b`. Composition
//! `a * b` therefore means "apply `a` first, then `b`", and conjugation
//! `h^g` is `g⁻¹ h g`. Every module in this crate relies on that convention.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its images, rejecting anything that is not a bijection.
    pub fn from_images<I: IntoIterator<Item = usize>>(images: I) -> Result<Self> {
        let images: Vec<usize> = images.into_iter().collect();
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::PointOutOfRange { point: x, degree: n });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotABijection);
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from a list of cycles; unlisted points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::RepeatedPoint(x));
                }
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.iter().map(|&x| x as usize)).is_ok());
        Permutation { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`: x maps to `other[self[x]]`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        // x^(g⁻¹ h g): for y = x^g⁻¹, x = y^g maps to (y^h)^g.
        for y in 0..self.degree() {
            out[g.images[y] as usize] = g.images[self.images[y] as usize];
        }
        Permutation { images: out }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &a)| other.images[a as usize] == self.images[other.images[x] as usize])
    }

    /// Disjoint cycles of length at least two, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.extend(std::iter::repeat_n(1, self.fixed_points()));
        lens.sort_unstable();
        lens
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len() + self.fixed_points()
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x as usize)
            .count()
    }

    /// Least `k >= 1` with `self^k` the identity.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Right-action product. Panics on degree mismatch; use [`Permutation::compose`]
    /// for a checked version.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch");
        self.then(rhs)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images.into_iter().map(|x| x as usize))
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

/// Parses 0-indexed cycle notation such as `"(0 1 2)(3 4)"`.
///
/// The empty string is the identity. Whitespace may separate cycles.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(err(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                return Err(err(pos, "unterminated cycle"));
            }
            if bytes[pos] == b')' {
                if cycle.is_empty() {
                    return Err(err(pos, "empty cycle"));
                }
                pos += 1;
                break;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(err(pos, "expected a point index"));
            }
            let point: usize = text[start..pos]
                .parse()
                .map_err(|_| err(start, "point index too large"))?;
            if point >= degree {
                return Err(Error::PointOutOfRange { point, degree });
            }
            cycle.push(point);
            if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b')' {
                return Err(err(pos, "expected whitespace or ')'"));
            }
        }
        cycles.push(cycle);
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Formats in cycle notation, omitting fixed points. The identity formats as `""`.
pub fn format_cycles(p: &Permutation) -> String {
    let mut out = String::new();
    for cycle in p.cycles() {
        out.push('(');
        for (i, x) in cycle.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&x.to_string());
        }
        out.push(')');
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("()")
        } else {
            f.write_str(&format_cycles(self))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn parses_three_cycle() {
        assert_eq!(p("(0 1 2)", 3).images(), &[1, 2, 0]);
    }

    #[test]
    fn empty_text_is_identity() {
        assert_eq!(p("", 4).images(), &[0, 1, 2, 3]);
    }

    #[test]
    fn parses_reflection_of_five_points() {
        assert_eq!(p("(1 4)(2 3)", 5).images(), &[0, 4, 3, 2, 1]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_cycles("(0 1", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("0 1)", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("()", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_cycles("(0 x)", 3), Err(Error::Parse { .. })));
        assert_eq!(
            parse_cycles("(0 3)", 3),
            Err(Error::PointOutOfRange { point: 3, degree: 3 })
        );
        assert_eq!(parse_cycles("(0 1)(1 2)", 3), Err(Error::RepeatedPoint(1)));
        assert_eq!(parse_cycles("(0 1 0)", 3), Err(Error::RepeatedPoint(0)));
    }

    #[test]
    fn composition_is_right_action() {
        let t = p("(0 1)", 2);
        assert!((&t * &t).is_identity());

        // x -> ((x)a)b: 0 -> 1 -> 0, 1 -> 2 -> 2, 2 -> 0 -> 1.
        let a = p("(0 1 2)", 3);
        let b = p("(0 1)", 3);
        assert_eq!(a.compose(&b).unwrap(), p("(1 2)", 3));

        let e = Permutation::identity(3);
        assert_eq!(a.compose(&e).unwrap(), a);
        assert_eq!(
            a.compose(&Permutation::identity(4)),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn element_orders() {
        assert_eq!(p("(0 1 2)", 3).order(), 3);
        assert_eq!(p("(0 1)(2 3 4)", 5).order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
    }

    #[test]
    fn conjugation_matches_product() {
        let h = p("(0 1 2)", 4);
        let g = p("(1 3)", 4);
        let expected = &(&g.inverse() * &h) * &g;
        assert_eq!(h.conjugate_by(&g), expected);
        assert_eq!(expected, p("(0 3 2)", 4));
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert_eq!(
            Permutation::from_images([0, 0, 1]),
            Err(Error::NotABijection)
        );
        assert!(Permutation::from_images([0, 5]).is_err());
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..=32)
            .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn cycle_notation_round_trips(q in arb_perm()) {
            let text = format_cycles(&q);
            prop_assert_eq!(parse_cycles(&text, q.degree()).unwrap(), q);
        }

        #[test]
        fn inverse_cancels(q in arb_perm()) {
            prop_assert!((&q * &q.inverse()).is_identity());
            prop_assert!((&q.inverse() * &q).is_identity());
        }

        #[test]
        fn power_by_order_is_identity(q in arb_perm()) {
            prop_assert!(q.pow(q.order()).is_identity());
        }
    }
}
