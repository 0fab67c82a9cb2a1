//! Subset counting: orbit-union counts, Sylow cover bounds, the Frattini
//! counting certificate, and the seeded random witness search built on it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{stab_p_part, stabilizer_order_table};
use crate::error::{Error, Result};
use crate::group::{orbits, PermGroup};
use crate::perm::Permutation;
use crate::pointset::PointSet;
use crate::sylow::{find_sylow, frattini_subgroup, is_elementary_abelian, p_part, sylow_count};

/// Number of subsets of the domain fixed setwise by `⟨gens⟩`: `2^{#orbits}`.
pub fn subsets_fixed_count(gens: &[Permutation], degree: usize) -> BigUint {
    BigUint::one() << orbits(gens, degree).len()
}

/// Histogram of stabilizer p-parts over all `2^n` subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub p: u64,
    pub degree: usize,
    pub group_p_part: u128,
    /// Every power of p up to `|G|_p` appears as a key, possibly with count 0.
    pub histogram: BTreeMap<u128, u64>,
}

pub fn census(g: &PermGroup, p: u64) -> Result<Census> {
    let order = g.order()?;
    let full = p_part(order, p)?;
    if full == 1 {
        return Err(Error::PrimeDoesNotDivide { p, order });
    }
    let mut histogram = BTreeMap::new();
    let mut power = 1u128;
    while power <= full {
        histogram.insert(power, 0);
        power *= p as u128;
    }
    for count in stabilizer_order_table(g)? {
        *histogram.get_mut(&p_part(count as u128, p)?).expect("divides |G|_p") += 1;
    }
    Ok(Census { p, degree: g.degree(), group_p_part: full, histogram })
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The coarse bound `n_p · 2^{f + (n-f)/p²}`, with the exponent kept as a fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseBound {
    pub z: Permutation,
    pub fixed_points: usize,
    pub exponent_numerator: u64,
    pub exponent_denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SylowCoverBound {
    pub p: u64,
    pub sylow_count: u128,
    pub sylow_orbits: usize,
    /// `n_p · 2^{#orbits(P)}`: at least the number of subsets stabilized by some Sylow.
    #[serde(with = "decimal")]
    pub exact_bound: BigUint,
    /// `None` when the Sylow subgroup is elementary abelian.
    pub coarse: Option<CoarseBound>,
    pub exact_within_coarse: Option<bool>,
}

impl SylowCoverBound {
    /// Whether the Sylow subgroups stabilize fewer than `count` subsets.
    pub fn below(&self, count: &BigUint) -> bool {
        &self.exact_bound < count
    }
}

pub fn sylow_cover_bound(g: &PermGroup, p: u64) -> Result<SylowCoverBound> {
    let data = sylow_count(g, p)?;
    let n = g.degree();
    let sylow = &data.representative;
    let sylow_orbits = sylow.orbit_count();
    let exact_bound = BigUint::from(data.count) << sylow_orbits;
    let (coarse, exact_within_coarse) = if is_elementary_abelian(sylow, p)? {
        (None, None)
    } else {
        let z = crate::sylow::frattini_center_element(sylow, p)?;
        let f = z.fixed_points();
        let pp = p * p;
        let numerator = pp * f as u64 + (n - f) as u64;
        let within = pp * sylow_orbits as u64 <= numerator;
        let coarse = CoarseBound { z, fixed_points: f, exponent_numerator: numerator, exponent_denominator: pp };
        (Some(coarse), Some(within))
    };
    Ok(SylowCoverBound { p, sylow_count: data.count, sylow_orbits, exact_bound, coarse, exact_within_coarse })
}

/// The counting criterion for a non-elementary-abelian Sylow subgroup `P`:
/// moderate if `|G:N_G(P)|^{p²} < 2^{(n-f)(p-1)}`, where `f` counts the fixed
/// points of a central Frattini element `z` of order p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingCertificate {
    pub p: u64,
    pub n: usize,
    pub z: Permutation,
    pub f: usize,
    pub sylow_norm_index: u128,
    pub lhs: u128,
    /// `2^{rhs_exponent_numerator / rhs_exponent_denominator}` is the right-hand side.
    pub rhs_exponent_numerator: u64,
    pub rhs_exponent_denominator: u64,
    #[serde(with = "decimal")]
    pub lhs_power: BigUint,
    #[serde(with = "decimal")]
    pub rhs_power: BigUint,
    pub verdict: bool,
}

pub fn prop31_certificate(g: &PermGroup, p: u64) -> Result<CountingCertificate> {
    let data = sylow_count(g, p)?;
    let sylow = &data.representative;
    if is_elementary_abelian(sylow, p)? {
        return Err(Error::ElementaryAbelian(p));
    }
    let z = crate::sylow::frattini_center_element(sylow, p)?;
    let n = g.degree();
    let f = z.fixed_points();
    let moved = (n - f) as u64;
    let pp = p * p;
    let lhs = data.normalizer_index;
    let lhs_power = BigUint::from(lhs).pow(pp as u32);
    let rhs_power = BigUint::one() << (moved * (p - 1));
    let verdict = lhs_power < rhs_power;
    Ok(CountingCertificate {
        p,
        n,
        z,
        f,
        sylow_norm_index: lhs,
        lhs,
        rhs_exponent_numerator: moved * (p - 1),
        rhs_exponent_denominator: pp,
        lhs_power,
        rhs_power,
        verdict,
    })
}

/// Every orbit of `P` meeting the support of `z` has size at least `p²`.
pub fn orbit_size_floor_check(sylow: &PermGroup, p: u64, z: &Permutation) -> Result<bool> {
    if z.order() != p {
        return Err(Error::Precondition(format!("z must have order {p}")));
    }
    if !sylow.generators().iter().all(|x| x.commutes_with(z)) {
        return Err(Error::Precondition("z is not central in P".into()));
    }
    if !frattini_subgroup(sylow, p)?.contains(z)? {
        return Err(Error::Precondition("z is not in the Frattini subgroup of P".into()));
    }
    let floor = (p * p) as usize;
    Ok(sylow
        .orbits()
        .iter()
        .filter(|o| o.iter().any(|&x| z.apply(x) != x))
        .all(|o| o.len() >= floor))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomWitness {
    pub witness: PointSet,
    pub stab_p_part: u128,
    /// Zero-based index of the successful trial.
    pub trial: u64,
}

/// Unions of `⟨z⟩`-orbits drawn uniformly; trial `i` uses a ChaCha8 generator
/// seeded with `seed + i`. Returns the first Δ whose stabilizer p-part is below `|G|_p`.
pub fn randomized_witness_from_z(
    g: &PermGroup,
    p: u64,
    z: &Permutation,
    trials: u64,
    seed: u64,
) -> Result<Option<RandomWitness>> {
    if z.order() != p {
        return Err(Error::Precondition(format!("z must have order {p}")));
    }
    let full = p_part(g.order()?, p)?;
    let z_orbits = orbits(std::slice::from_ref(z), g.degree());
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
        let mut delta = PointSet::empty(g.degree());
        for orbit in &z_orbits {
            if rng.gen_bool(0.5) {
                orbit.iter().for_each(|&x| delta.insert(x));
            }
        }
        let part = stab_p_part(g, &delta, p)?;
        if part < full {
            return Ok(Some(RandomWitness { witness: delta, stab_p_part: part, trial }));
        }
    }
    Ok(None)
}

/// A Sylow subgroup and its central Frattini element, when one exists.
pub fn sylow_with_z(g: &PermGroup, p: u64) -> Result<(PermGroup, Permutation)> {
    let sylow = find_sylow(g, p)?;
    let z = crate::sylow::frattini_center_element(&sylow, p)?;
    Ok((sylow, z))
}
