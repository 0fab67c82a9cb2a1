//! Finite fields GF(p^k) for q <= 64, with table arithmetic.
//!
//! An element with polynomial coefficients `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! has index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Index 0 is zero, index 1 is
//! one and, for k > 1, index p is the class of x.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: usize = 64;

/// Fixed moduli, low coefficient first, monic. Fields of prime order use x.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime divisors of `n` in increasing order.
pub fn prime_divisors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d as u64);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// Writes `q` as `p^k` if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = *prime_divisors(q as u128).first()?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

impl FiniteField {
    /// GF(p^k) with the modulus from the built-in table.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Precondition("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::ResourceLimit(format!(
                "field order {p}^{k} exceeds {MAX_FIELD_ORDER}"
            )));
        }
        let (p, q) = (p as u32, q as usize);
        let modulus: Vec<u32> = if k == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(mp, mk, _)| *mp == p && *mk == k)
                .map(|(_, _, m)| m.to_vec())
                .expect("modulus table covers every q <= 64")
        };

        let digits = |mut a: usize| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = (a % p as usize) as u32;
                    a /= p as usize;
                    d
                })
                .collect()
        };
        let index = |c: &[u32]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * p as usize + d as usize) };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = index(&sum) as u8;

                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // Reduce by the monic modulus from the top down.
                for top in (k as usize..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate() {
                        let slot = top - k as usize + i;
                        prod[slot] = (prod[slot] + (p - c) * m) % p;
                    }
                }
                mul[a * q + b] = index(&prod[..k as usize]) as u8;
            }
        }

        let neg: Vec<u8> = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            let b = (1..q).find(|&b| mul[a * q + b] == 1).ok_or_else(|| {
                Error::Precondition(format!("modulus for GF({p}^{k}) is reducible"))
            })?;
            inv[a] = b as u8;
        }
        let frob = (0..q)
            .map(|a| {
                (0..p).fold(1usize, |acc, _| mul[acc * q + a] as usize) as u8
            })
            .collect();

        Ok(FiniteField { p, k, q, modulus, add, mul, neg, inv, frob })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize] as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize] as u32)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: u32, e: u32) -> u32 {
        (0..e % self.k).fold(a, |x, _| self.frob[x as usize] as u32)
    }

    pub fn multiplicative_order(&self, a: u32) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// Least element index generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        (1..self.q as u32)
            .find(|&a| self.multiplicative_order(a) == Some(self.q - 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Indices `p^j`, the powers `x^j` forming an additive basis over GF(p).
    pub fn additive_basis(&self) -> Vec<u32> {
        (0..self.k).map(|j| self.p.pow(j)).collect()
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl Serialize for FiniteField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldId { p: self.p as u64, k: self.k }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let id = FieldId::deserialize(d)?;
        FiniteField::new(id.p, id.k).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldId {
    p: u64,
    k: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL_FIELDS: &[(u64, u32)] = &[
        (2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (61, 1),
        (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2),
    ];

    fn check_axioms(f: &FiniteField) {
        let q = f.order() as u32;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for &(p, k) in ALL_FIELDS {
            check_axioms(&FiniteField::new(p, k).unwrap());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        for &(p, k) in ALL_FIELDS {
            let f = FiniteField::new(p, k).unwrap();
            let q = f.order() as u32;
            let image: std::collections::HashSet<u32> = (0..q).map(|a| f.frobenius(a, 1)).collect();
            assert_eq!(image.len(), q as usize);
            for a in 0..q {
                assert_eq!(f.frobenius(a, k), a);
                for b in 0..q {
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn gf8_inverses_and_fixed_field() {
        let f = FiniteField::new(2, 3).unwrap();
        assert_eq!(f.order(), 8);
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        for x in 1..8 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        let fixed: Vec<u32> = (0..8).filter(|&x| f.mul(x, x) == x).collect();
        assert_eq!(fixed, vec![0, 1]);
        // x is primitive for x^3 + x + 1.
        assert_eq!(f.primitive_element(), 2);
    }

    #[test]
    fn prime_fields_are_integers_mod_p() {
        let f = FiniteField::new(5, 1).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(a, b), (a + b) % 5);
                assert_eq!(f.mul(a, b), (a * b) % 5);
            }
        }
        assert_eq!(f.primitive_element(), 2);
    }

    #[test]
    fn gf9_and_gf4_moduli() {
        let f9 = FiniteField::new(3, 2).unwrap();
        // x^2 = -1
        assert_eq!(f9.mul(3, 3), 2);
        assert_eq!(f9.multiplicative_order(3), Some(4));
        assert_eq!(f9.multiplicative_order(f9.primitive_element()), Some(8));
        let f4 = FiniteField::new(2, 2).unwrap();
        // x^2 = x + 1
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(4, 1), Err(Error::NotPrime(4)));
        assert!(matches!(FiniteField::new(2, 7), Err(Error::ResourceLimit(_))));
        assert!(matches!(FiniteField::new(67, 1), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(prime_divisors(168), vec![2, 3, 7]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert!(is_prime(61) && !is_prime(1) && !is_prime(91));
    }
}
