//! p-parts, Sylow subgroups and the p-local subgroups `O^{p'}`, `O_{p'}`, `O_p`
//! and `O_{p',p}`.
//!
//! Everything here works on materialized element sets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Maximum number of Sylow conjugates `all_sylows` will materialize.
pub const MAX_SYLOW_COUNT: u128 = 10_000;

/// Largest power of `p` dividing `n`.
pub fn p_part(n: u128, p: u64) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::Precondition("p-part of 0".into()));
    }
    let p = p as u128;
    let mut n = n;
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    Ok(part)
}

fn is_power_of(n: u128, p: u64) -> bool {
    p_part(n, p) == Ok(n)
}

pub fn is_p_element(g: &Permutation, p: u64) -> bool {
    is_power_of(g.order() as u128, p)
}

pub fn is_p_group(g: &PermGroup, p: u64) -> Result<bool> {
    Ok(is_power_of(g.order()?, p))
}

fn require_divides(g: &PermGroup, p: u64) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = g.order()?;
    if order % p as u128 != 0 {
        return Err(Error::PrimeDoesNotDivide { p, order });
    }
    Ok(order)
}

/// A Sylow `p`-subgroup.
///
/// Starts from the least element of largest `p`-power order and repeatedly
/// adjoins the least `y` in `N_G(P) \ P` with `y^p` in `P`.
pub fn find_sylow(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let order = require_divides(g, p)?;
    let target = p_part(order, p)?;
    let elements = g.elements()?;
    let start = elements
        .iter()
        .filter(|x| is_p_element(x, p))
        .max_by(|a, b| a.order().cmp(&b.order()).then_with(|| b.cmp(a)))
        .expect("identity is a p-element");
    let limits = g.limits();
    let mut sylow = PermGroup::generated_by(g.degree(), [start], limits)?;
    while sylow.order()? < target {
        let normalizer = g.normalizer(&sylow)?;
        let sylow_elems = sylow.elements()?;
        let y = normalizer
            .elements()?
            .iter()
            .find(|y| !sylow_elems.contains(y) && sylow_elems.contains(&y.pow(p)))
            .ok_or_else(|| Error::Precondition("no p-element extends P; not a group?".into()))?
            .clone();
        let mut gens = sylow.generators().to_vec();
        gens.push(y);
        sylow = PermGroup::generated_by(g.degree(), &gens, limits)?;
    }
    Ok(sylow)
}

/// One Sylow subgroup together with its conjugacy class.
#[derive(Debug, Clone)]
pub struct SylowData {
    pub p: u64,
    pub representative: PermGroup,
    /// All Sylow subgroups, ordered by their sorted element lists.
    pub conjugates: Option<Vec<PermGroup>>,
    pub count: u128,
    pub normalizer_index: u128,
}

/// The representative from [`find_sylow`] and its normalizer index, without
/// listing the conjugates.
pub fn sylow_count(g: &PermGroup, p: u64) -> Result<SylowData> {
    let representative = find_sylow(g, p)?;
    let normalizer = g.normalizer(&representative)?;
    let index = g.order()? / normalizer.order()?;
    Ok(SylowData {
        p,
        representative,
        conjugates: None,
        count: index,
        normalizer_index: index,
    })
}

/// All Sylow `p`-subgroups, as conjugates of one representative.
pub fn all_sylows(g: &PermGroup, p: u64) -> Result<SylowData> {
    let mut data = sylow_count(g, p)?;
    if data.count > MAX_SYLOW_COUNT {
        return Err(Error::ResourceLimit(format!(
            "{} Sylow {p}-subgroups exceed the bound {MAX_SYLOW_COUNT}",
            data.count
        )));
    }
    let rep_elems: Vec<Permutation> = data.representative.elements()?.iter().cloned().collect();
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    for x in g.elements()?.iter() {
        let mut conj: Vec<Permutation> = rep_elems.iter().map(|h| h.conjugate_by(x)).collect();
        conj.sort_unstable();
        seen.insert(conj);
        if seen.len() as u128 == data.count {
            break;
        }
    }
    if seen.len() as u128 != data.count {
        return Err(Error::Precondition("conjugate count disagrees with normalizer index".into()));
    }
    let mut all: Vec<Vec<Permutation>> = seen.into_iter().collect();
    all.sort_unstable();
    data.conjugates = Some(
        all.into_iter()
            .map(|e| PermGroup::from_closed_set(g.degree(), e, g.limits()))
            .collect(),
    );
    Ok(data)
}

fn require_p_group(g: &PermGroup, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_p_group(g, p)? {
        return Err(Error::NotPGroup(p));
    }
    Ok(())
}

pub fn is_elementary_abelian(group: &PermGroup, p: u64) -> Result<bool> {
    require_p_group(group, p)?;
    Ok(group.is_abelian() && group.elements()?.iter().all(|x| x.pow(p).is_identity()))
}

fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
    a.inverse().then(&b.inverse()).then(a).then(b)
}

/// `Φ(P)`, generated by all `p`-th powers and commutators in the `p`-group `P`.
pub fn frattini_subgroup(group: &PermGroup, p: u64) -> Result<PermGroup> {
    require_p_group(group, p)?;
    let elements = group.elements()?;
    let mut candidates: Vec<Permutation> = elements.iter().map(|x| x.pow(p)).collect();
    for a in elements.iter() {
        for b in elements.iter() {
            candidates.push(commutator(a, b));
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    PermGroup::generated_by(group.degree(), &candidates, group.limits())
}

/// Least element of order `p` in `Φ(P) ∩ Z(P)`.
pub fn frattini_center_element(group: &PermGroup, p: u64) -> Result<Permutation> {
    if is_elementary_abelian(group, p)? {
        return Err(Error::ElementaryAbelian(p));
    }
    let frattini = frattini_subgroup(group, p)?;
    let gens = group.generators();
    frattini
        .elements()?
        .iter()
        .find(|z| z.order() == p && gens.iter().all(|g| g.commutes_with(z)))
        .cloned()
        .ok_or_else(|| Error::Precondition("Φ(P) ∩ Z(P) has no element of order p".into()))
}

/// `O^{p'}(G)`: the subgroup generated by all `p`-elements. Trivial when `p ∤ |G|`.
pub fn o_pprime_residual(g: &PermGroup, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p_elements: Vec<&Permutation> = g.elements()?.iter().filter(|x| is_p_element(x, p)).collect();
    PermGroup::generated_by(g.degree(), p_elements, g.limits())
}

/// Joins, starting from `base`, the normal closures of conjugacy classes whose
/// addition keeps `|M| / |base|` acceptable. The join of two normal subgroups
/// with acceptable quotient is again acceptable, so the greedy pass is exact.
fn greedy_normal_join<F>(g: &PermGroup, base: PermGroup, acceptable: F) -> Result<PermGroup>
where
    F: Fn(u128) -> bool,
{
    let base_order = base.order()?;
    let mut join = base;
    for class in g.conjugacy_classes()? {
        if join.contains(&class[0])? {
            continue;
        }
        let candidates: Vec<&Permutation> = join.generators().iter().chain(class.iter()).collect();
        let merged = PermGroup::generated_by(g.degree(), candidates, g.limits())?;
        if acceptable(merged.order()? / base_order) {
            join = merged;
        }
    }
    Ok(join)
}

/// `O_{p'}(G)`, the largest normal subgroup of order prime to `p`.
pub fn p_prime_core(g: &PermGroup, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    greedy_normal_join(g, PermGroup::trivial(g.degree()), |n| n % p as u128 != 0)
}

/// `O_p(G)`, the largest normal `p`-subgroup.
pub fn op_core(g: &PermGroup, p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    greedy_normal_join(g, PermGroup::trivial(g.degree()), |n| is_power_of(n, p))
}

/// `O_{p',p}(G)`, the preimage of `O_p(G / O_{p'}(G))`.
pub fn opp_core(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let base = p_prime_core(g, p)?;
    greedy_normal_join(g, base, |n| is_power_of(n, p))
}

/// Whether `G = O_{p',p}(G)`.
pub fn is_opp(g: &PermGroup, p: u64) -> Result<bool> {
    Ok(opp_core(g, p)?.order()? == g.order()?)
}
