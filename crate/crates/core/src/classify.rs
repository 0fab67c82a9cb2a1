//! Setwise stabilizers, p-concealment, and the p-moderate / p-extreme decision.
//!
//! A group is p-moderate on its domain when some subset has a stabilizer whose
//! p-part lies strictly between 1 and `|G|_p`, and p-extreme otherwise. The
//! empty set and the whole domain are included in every scan.
//!
//! Witness constructors only propose candidates; [`stab_p_part`] decides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::AffineSpace;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::pointset::PointSet;
use crate::sylow::{all_sylows, p_part};
use crate::zoo::GroupInstance;

/// Largest degree for the exhaustive subset scan.
pub const MAX_EXHAUSTIVE_DEGREE: usize = 22;
/// Largest degree for the Sylow coverage map.
pub const MAX_CONCEALED_DEGREE: usize = 24;
/// Largest `|V|^2` scanned for regular orbits on `V ⊕ V`.
pub const MAX_PAIR_SCAN: usize = 1 << 22;

pub fn setwise_stabilizer(g: &PermGroup, delta: &PointSet) -> Result<PermGroup> {
    check_degree(g, delta)?;
    g.filter_subgroup(|x| delta.is_stabilized_by(x))
}

pub fn stabilizer_order(g: &PermGroup, delta: &PointSet) -> Result<u128> {
    check_degree(g, delta)?;
    Ok(g.elements()?.iter().filter(|x| delta.is_stabilized_by(x)).count() as u128)
}

pub fn stab_p_part(g: &PermGroup, delta: &PointSet, p: u64) -> Result<u128> {
    p_part(stabilizer_order(g, delta)?, p)
}

fn check_degree(g: &PermGroup, delta: &PointSet) -> Result<()> {
    if g.degree() != delta.degree() {
        return Err(Error::DegreeMismatch { left: g.degree(), right: delta.degree() });
    }
    Ok(())
}

/// Whether `1 < |Stab(Δ)|_p < |G|_p`.
pub fn is_moderation_witness(g: &PermGroup, delta: &PointSet, p: u64) -> Result<bool> {
    let full = p_part(g.order()?, p)?;
    let part = stab_p_part(g, delta, p)?;
    Ok(1 < part && part < full)
}

/// Bit masks of the orbits of `⟨gens⟩`, for degree at most 64.
fn orbit_masks(gens: &[Permutation], degree: usize) -> Vec<u64> {
    crate::group::orbits(gens, degree)
        .iter()
        .map(|o| o.iter().fold(0u64, |m, &x| m | 1 << x))
        .collect()
}

/// Calls `f` on every union of the given disjoint masks (Gray-code order).
fn for_each_union(masks: &[u64], mut f: impl FnMut(u64)) {
    let mut current = 0u64;
    f(current);
    for i in 1u64..(1u64 << masks.len()) {
        current ^= masks[i.trailing_zeros() as usize];
        f(current);
    }
}

/// `|Stab_G(Δ)|` for every subset Δ, indexed by bit mask.
///
/// Each element `g` stabilizes exactly the unions of its cycles, so the table is
/// filled by enumerating `2^{cycles(g)}` masks per element rather than testing
/// all `2^n` subsets against all of G.
pub fn stabilizer_order_table(g: &PermGroup) -> Result<Vec<u32>> {
    let n = g.degree();
    if n > MAX_EXHAUSTIVE_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "exhaustive subset scan needs degree <= {MAX_EXHAUSTIVE_DEGREE}, got {n}"
        )));
    }
    let mut table = vec![0u32; 1 << n];
    for x in g.elements()?.iter() {
        let cycles = orbit_masks(std::slice::from_ref(x), n);
        for_each_union(&cycles, |m| table[m as usize] += 1);
    }
    Ok(table)
}

/// Outcome of the Sylow coverage test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concealment {
    pub p: u64,
    pub concealed: bool,
    /// Least subset (in bit-set order) stabilized by no Sylow subgroup.
    pub uncovered: Option<PointSet>,
    pub sylow_count: u128,
    pub covered_subsets: u64,
}

/// Marks every union of P-orbits for every Sylow `P`; concealed iff all `2^n`
/// subsets are marked.
pub fn is_p_concealed(g: &PermGroup, p: u64) -> Result<Concealment> {
    let n = g.degree();
    if n > MAX_CONCEALED_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "coverage map needs degree <= {MAX_CONCEALED_DEGREE}, got {n}"
        )));
    }
    let data = all_sylows(g, p)?;
    let mut covered = vec![0u64; (1usize << n).div_ceil(64)];
    for sylow in data.conjugates.as_deref().unwrap_or_default() {
        for_each_union(&orbit_masks(sylow.generators(), n), |m| {
            covered[(m / 64) as usize] |= 1 << (m % 64);
        });
    }
    let total = 1u64 << n;
    let uncovered = (0..total).find(|&m| covered[(m / 64) as usize] >> (m % 64) & 1 == 0);
    Ok(Concealment {
        p,
        concealed: uncovered.is_none(),
        uncovered: uncovered.map(|m| PointSet::from_mask(n, m)),
        sylow_count: data.count,
        covered_subsets: covered.iter().map(|w| w.count_ones() as u64).sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Constructive,
}

/// Which stage of the search produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `|G|_p = p`, so no p-power lies strictly between 1 and `|G|_p`.
    Degenerate,
    TranslationSubgroup,
    DiagonalPair,
    RegularPairOrbits,
    RegularOrbitInvolution,
    MetacyclicEigenvectors,
    RandomSample,
    ExhaustiveScan,
    /// A subset given by the caller.
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Moderate { witness: PointSet, stab_p_part: u128 },
    /// `concealed` is `None` when the coverage map was out of range.
    Extreme { concealed: Option<bool> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModerationReport {
    pub p: u64,
    pub group_p_part: u128,
    pub status: Status,
    pub strategy: Strategy,
    pub stage: Stage,
    /// Whether every subset of the domain was examined.
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ModerationReport {
    pub fn is_moderate(&self) -> bool {
        matches!(self.status, Status::Moderate { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    /// Random subsets tried by the constructive strategy before scanning.
    pub samples: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, samples: 1000 }
    }
}

/// Uniform random subset; trial `i` uses the generator seeded with `seed + i`.
pub fn random_subset(degree: usize, seed: u64, trial: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
    let mut s = PointSet::empty(degree);
    for x in 0..degree {
        if rng.gen_bool(0.5) {
            s.insert(x);
        }
    }
    s
}

fn concealed_if_small(g: &PermGroup, p: u64) -> Result<Option<bool>> {
    if g.degree() > MAX_CONCEALED_DEGREE {
        return Ok(None);
    }
    Ok(Some(is_p_concealed(g, p)?.concealed))
}

pub fn classify_moderation(
    inst: &GroupInstance,
    p: u64,
    strategy: Strategy,
    options: SearchOptions,
) -> Result<ModerationReport> {
    let g = &inst.group;
    let order = g.order()?;
    let full = p_part(order, p)?;
    if full == 1 {
        return Err(Error::PrimeDoesNotDivide { p, order });
    }
    let n = g.degree();
    if strategy == Strategy::Exhaustive && n > MAX_EXHAUSTIVE_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "exhaustive strategy needs degree <= {MAX_EXHAUSTIVE_DEGREE}, got {n}"
        )));
    }
    let report = |status, stage, exhaustive, note: Option<String>| ModerationReport {
        p,
        group_p_part: full,
        status,
        strategy,
        stage,
        exhaustive,
        note,
    };

    if full == p as u128 {
        return Ok(report(
            Status::Extreme { concealed: concealed_if_small(g, p)? },
            Stage::Degenerate,
            false,
            Some(format!("|G|_{p} = {p}: no p-power lies strictly between 1 and {p}")),
        ));
    }

    if strategy == Strategy::Constructive {
        let mut candidates: Vec<(Stage, PointSet)> = Vec::new();
        if let Some(space) = &inst.affine {
            candidates.extend(constructor_candidates(g, space, p));
        }
        for (stage, delta) in candidates {
            let part = stab_p_part(g, &delta, p)?;
            if 1 < part && part < full {
                return Ok(report(Status::Moderate { witness: delta, stab_p_part: part }, stage, false, None));
            }
        }
        for trial in 0..options.samples as u64 {
            let delta = random_subset(n, options.seed, trial);
            let part = stab_p_part(g, &delta, p)?;
            if 1 < part && part < full {
                return Ok(report(
                    Status::Moderate { witness: delta, stab_p_part: part },
                    Stage::RandomSample,
                    false,
                    Some(format!("random trial {trial}, seed {}", options.seed)),
                ));
            }
        }
        if n > MAX_EXHAUSTIVE_DEGREE {
            return Err(Error::Undecided(n));
        }
    }

    let table = stabilizer_order_table(g)?;
    for (mask, &count) in table.iter().enumerate() {
        let part = p_part(count as u128, p)?;
        if 1 < part && part < full {
            let witness = PointSet::from_mask(n, mask as u64);
            return Ok(report(Status::Moderate { witness, stab_p_part: part }, Stage::ExhaustiveScan, true, None));
        }
    }
    Ok(report(
        Status::Extreme { concealed: concealed_if_small(g, p)? },
        Stage::ExhaustiveScan,
        true,
        None,
    ))
}

/// Candidates from every constructor that applies, in search order.
pub fn constructor_candidates(g: &PermGroup, space: &AffineSpace, p: u64) -> Vec<(Stage, PointSet)> {
    let mut out = Vec::new();
    if let Ok(d) = translation_witness(space, p) {
        out.push((Stage::TranslationSubgroup, d));
    }
    out.push((Stage::DiagonalPair, diagonal_pair_witness(space)));
    if p > 2 {
        if let Ok(ds) = orbit_witness_odd_p(g, space, p) {
            out.extend(ds.into_iter().map(|d| (Stage::RegularPairOrbits, d)));
        }
    } else {
        if let Ok(d) = p2_regular_witness(g, space) {
            out.push((Stage::RegularOrbitInvolution, d));
        }
        if let Ok(d) = metacyclic_witness(g, space) {
            out.push((Stage::MetacyclicEigenvectors, d));
        }
    }
    out
}

/// `Δ = W`, the additive subgroup of order p generated by the least nonzero vector.
pub fn translation_witness(space: &AffineSpace, p: u64) -> Result<PointSet> {
    if space.field.characteristic() as u64 != p {
        return Err(Error::Precondition(format!("{p} does not divide |V| = {}", space.size())));
    }
    if space.size() as u64 == p {
        return Err(Error::Precondition("|V| = p leaves no room for p^2 in |G|".into()));
    }
    let v = 1;
    let mut w = PointSet::empty(space.size());
    let mut x = 0;
    for _ in 0..p {
        w.insert(x);
        x = space.add(x, v);
    }
    Ok(w)
}

/// `{0, (1, .., 1)}`.
pub fn diagonal_pair_witness(space: &AffineSpace) -> PointSet {
    let ones = space.vec_to_point(&vec![1; space.dim]).expect("valid vector");
    PointSet::from_points(space.size(), [0, ones]).expect("in range")
}

/// The stabilizer of `point` in `g`; for an affine group and point 0 this is
/// the linear part `H`.
pub fn point_stabilizer(g: &PermGroup, point: usize) -> Result<PermGroup> {
    g.filter_subgroup(|x| x.apply(point) == point)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularOrbitDomain {
    V,
    VPlusV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularPoint {
    Vector(usize),
    Pair(usize, usize),
}

/// Fixed-point sets of the non-identity elements of `h`.
fn fixed_sets(h: &PermGroup) -> Result<Vec<PointSet>> {
    let n = h.degree();
    Ok(h.elements()?
        .iter()
        .filter(|x| !x.is_identity())
        .map(|x| PointSet::from_points(n, (0..n).filter(|&v| x.apply(v) == v)).unwrap())
        .collect())
}

/// Least vector, or pair in the order `v·|V| + w`, with trivial stabilizer in `h`.
pub fn regular_orbit(h: &PermGroup, domain: RegularOrbitDomain) -> Result<Option<RegularPoint>> {
    match domain {
        RegularOrbitDomain::V => Ok(regular_vector(h)?.map(RegularPoint::Vector)),
        RegularOrbitDomain::VPlusV => Ok(regular_pair(h, false)?.map(|(v, w)| RegularPoint::Pair(v, w))),
    }
}

fn regular_vector(h: &PermGroup) -> Result<Option<usize>> {
    let fixed = fixed_sets(h)?;
    Ok((0..h.degree()).find(|&v| fixed.iter().all(|f| !f.contains(v))))
}

fn regular_pair(h: &PermGroup, nonzero: bool) -> Result<Option<(usize, usize)>> {
    let n = h.degree();
    if n.saturating_mul(n) > MAX_PAIR_SCAN {
        return Err(Error::ResourceLimit(format!("|V|^2 = {} exceeds {MAX_PAIR_SCAN}", n * n)));
    }
    let fixed = fixed_sets(h)?;
    let start = usize::from(nonzero);
    for v in start..n {
        // Only elements fixing v can fix the pair.
        let fixing_v: Vec<&PointSet> = fixed.iter().filter(|f| f.contains(v)).collect();
        if let Some(w) = (start..n).find(|&w| fixing_v.iter().all(|f| !f.contains(w))) {
            return Ok(Some((v, w)));
        }
    }
    Ok(None)
}

fn least_element_of_order(h: &PermGroup, order: u64) -> Result<Permutation> {
    h.elements()?
        .iter()
        .find(|x| x.order() == order)
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("no element of order {order} in H")))
}

fn cyclic_orbit(t: &Permutation, x: usize) -> PointSet {
    let mut s = PointSet::empty(t.degree());
    let mut y = x;
    loop {
        s.insert(y);
        y = t.apply(y);
        if y == x {
            return s;
        }
    }
}

/// Candidates from a regular pair `(v, w)` on `V ⊕ V` and `t ∈ H` of order `p > 2`:
/// `{0} ∪ O1` when the `⟨t⟩`-orbits coincide, otherwise `{0} ∪ O1 ∪ O2` followed
/// by `{0, w} ∪ O1`.
pub fn orbit_witness_odd_p(g: &PermGroup, space: &AffineSpace, p: u64) -> Result<Vec<PointSet>> {
    if p <= 2 {
        return Err(Error::Precondition("orbit witness needs an odd prime".into()));
    }
    let h = point_stabilizer(g, 0)?;
    let t = least_element_of_order(&h, p)?;
    let (mut v, mut w) = regular_pair(&h, true)?
        .ok_or_else(|| Error::Precondition("H has no regular orbit on V ⊕ V".into()))?;
    let moved = |x: usize| t.apply(x) != x;
    match (moved(v), moved(w)) {
        (false, false) => return Err(Error::Precondition("t fixes both v and w".into())),
        (true, false) => w = space.add(v, w),
        (false, true) => v = space.add(v, w),
        (true, true) => {}
    }
    let o1 = cyclic_orbit(&t, v);
    let o2 = cyclic_orbit(&t, w);
    let mut first = o1.clone();
    first.insert(0);
    if o1 == o2 {
        return Ok(vec![first]);
    }
    first.union_with(&o2);
    let mut second = o1;
    second.insert(0);
    second.insert(w);
    Ok(vec![first, second])
}

/// `Γ = {0, v, vt}` for the least regular vector `v` and least involution `t` of `H`.
pub fn p2_regular_witness(g: &PermGroup, _space: &AffineSpace) -> Result<PointSet> {
    let h = point_stabilizer(g, 0)?;
    let v = regular_vector(&h)?.ok_or_else(|| Error::Precondition("H has no regular orbit on V".into()))?;
    let t = least_element_of_order(&h, 2)?;
    PointSet::from_points(g.degree(), [0, v, t.apply(v)])
}

/// `Γ = {0, w, v, -v}` for the least noncentral involution `u` of `H`, with
/// `vu = -v` and `wu = w`, both nonzero and least.
pub fn metacyclic_witness(g: &PermGroup, space: &AffineSpace) -> Result<PointSet> {
    let h = point_stabilizer(g, 0)?;
    let gens = h.generators().to_vec();
    let u = h
        .elements()?
        .iter()
        .find(|x| x.order() == 2 && !gens.iter().all(|y| y.commutes_with(x)))
        .cloned()
        .ok_or_else(|| Error::Precondition("H has no noncentral involution".into()))?;
    let n = space.size();
    let v = (1..n)
        .find(|&x| u.apply(x) == space.neg(x))
        .ok_or_else(|| Error::Precondition("u has no -1 eigenvector".into()))?;
    let w = (1..n)
        .find(|&x| u.apply(x) == x)
        .ok_or_else(|| Error::Precondition("u has no +1 eigenvector".into()))?;
    PointSet::from_points(n, [0, w, v, space.neg(v)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{AffineSpec, SemilinearMap, build_affine};
    use crate::field::FiniteField;
    use crate::group::Limits;
    use crate::zoo::named_group;

    fn inst(name: &str) -> GroupInstance {
        named_group(name).unwrap()
    }

    #[test]
    fn d6_squared_diagonal_stabilizer() {
        let g = inst("Product(D6,D6)").group;
        let delta = PointSet::from_points(9, [0, 4]).unwrap();
        assert_eq!(setwise_stabilizer(&g, &delta).unwrap().order().unwrap(), 2);
        assert_eq!(stab_p_part(&g, &delta, 2).unwrap(), 2);
    }

    #[test]
    fn empty_and_full_sets_are_stabilized_by_everything() {
        let g = inst("AGL(1,5)").group;
        for d in [PointSet::empty(5), PointSet::full(5)] {
            assert_eq!(stabilizer_order(&g, &d).unwrap(), 20);
            assert_eq!(stab_p_part(&g, &d, 2).unwrap(), 4);
        }
    }

    #[test]
    fn agl15_pair_stabilizer() {
        let g = inst("AGL(1,5)").group;
        let delta = PointSet::from_points(5, [0, 1]).unwrap();
        // Brute force over all 20 maps x -> ax + b.
        let brute = (1..5u32)
            .flat_map(|a| (0..5u32).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                let img: Vec<u32> = [0u32, 1].iter().map(|&x| (a * x + b) % 5).collect();
                img.contains(&0) && img.contains(&1)
            })
            .collect::<Vec<_>>();
        assert_eq!(brute, vec![(1, 0), (4, 1)]);
        assert_eq!(stabilizer_order(&g, &delta).unwrap(), 2);
        assert_eq!(stab_p_part(&g, &delta, 2).unwrap(), 2);
    }

    #[test]
    fn stabilizer_table_matches_direct_computation() {
        for name in ["D6", "Sym(4)", "AGL(1,5)", "C4", "AGammaL(1,8)"] {
            let g = inst(name).group;
            let table = stabilizer_order_table(&g).unwrap();
            for (mask, &count) in table.iter().enumerate() {
                let d = PointSet::from_mask(g.degree(), mask as u64);
                assert_eq!(count as u128, stabilizer_order(&g, &d).unwrap(), "{name} {mask}");
            }
        }
    }

    #[test]
    fn concealment() {
        assert!(is_p_concealed(&inst("D6").group, 2).unwrap().concealed);
        assert!(is_p_concealed(&inst("D10").group, 2).unwrap().concealed);
        assert!(is_p_concealed(&inst("J").group, 3).unwrap().concealed);
        let c = is_p_concealed(&inst("AGL(1,5)").group, 2).unwrap();
        assert!(!c.concealed);
        let witness = c.uncovered.unwrap();
        // No Sylow 2-subgroup stabilizes it.
        let data = all_sylows(&inst("AGL(1,5)").group, 2).unwrap();
        for s in data.conjugates.unwrap() {
            assert!(!s.generators().iter().all(|x| witness.is_stabilized_by(x)));
        }
    }

    #[test]
    fn classification_examples() {
        let opts = SearchOptions::default();
        let r = classify_moderation(&inst("Product(D6,D6)"), 2, Strategy::Constructive, opts).unwrap();
        assert_eq!(
            r.status,
            Status::Moderate { witness: PointSet::from_points(9, [0, 4]).unwrap(), stab_p_part: 2 }
        );
        assert_eq!(r.stage, Stage::DiagonalPair);

        let r = classify_moderation(&inst("D6"), 2, Strategy::Exhaustive, opts).unwrap();
        assert_eq!(r.status, Status::Extreme { concealed: Some(true) });

        let r = classify_moderation(&inst("Sym(4)"), 2, Strategy::Exhaustive, opts).unwrap();
        // Brute force: the singleton {0} has stabilizer Sym(3), 2-part 2 < 8.
        assert_eq!(
            r.status,
            Status::Moderate { witness: PointSet::from_points(4, [0]).unwrap(), stab_p_part: 2 }
        );

        assert_eq!(
            classify_moderation(&inst("D6"), 5, Strategy::Exhaustive, opts).unwrap_err(),
            Error::PrimeDoesNotDivide { p: 5, order: 6 }
        );
        assert!(matches!(
            classify_moderation(&inst("AGL(1,23)"), 2, Strategy::Exhaustive, opts),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn translation_witnesses() {
        let g = inst("AGL(2,3)");
        let space = g.affine.as_ref().unwrap();
        let w = translation_witness(space, 3).unwrap();
        assert_eq!(w.points(), vec![0, 1, 2]);

        // V = GF(3)^2 with H = <-I>, order 18.
        let spec = AffineSpec {
            space: space.clone(),
            generators: vec![SemilinearMap::linear(vec![vec![2, 0], vec![0, 2]])],
        };
        let g18 = build_affine(&spec, Limits::default()).unwrap();
        assert_eq!(g18.order().unwrap(), 18);
        let part = stab_p_part(&g18, &w, 3).unwrap();
        assert!((3..9).contains(&part));

        let v4 = inst("Sym(4)");
        assert_eq!(translation_witness(v4.affine.as_ref().unwrap(), 2).unwrap().points(), vec![0, 1]);
        assert!(translation_witness(inst("D6").affine.as_ref().unwrap(), 3).is_err());
        assert!(translation_witness(inst("D6").affine.as_ref().unwrap(), 2).is_err());
    }

    /// Brute-force regular-orbit search over pairs: builds each stabilizer directly.
    fn brute_regular_pair(h: &PermGroup) -> Option<(usize, usize)> {
        let n = h.degree();
        for v in 0..n {
            for w in 0..n {
                let stab = h.elements().unwrap().iter().filter(|x| x.apply(v) == v && x.apply(w) == w).count();
                if stab == 1 {
                    return Some((v, w));
                }
            }
        }
        None
    }

    #[test]
    fn regular_orbits() {
        let d10 = inst("D10").group;
        let h = point_stabilizer(&d10, 0).unwrap();
        assert_eq!(regular_orbit(&h, RegularOrbitDomain::V).unwrap(), Some(RegularPoint::Vector(1)));

        let d6sq = inst("Product(D6,D6)").group;
        let h = point_stabilizer(&d6sq, 0).unwrap();
        assert_eq!(h.order().unwrap(), 4);
        let found = regular_orbit(&h, RegularOrbitDomain::VPlusV).unwrap();
        assert_eq!(brute_regular_pair(&h), Some((0, 4)));
        assert_eq!(found, Some(RegularPoint::Pair(0, 4)));

        let j = inst("J").group;
        let h = point_stabilizer(&j, 0).unwrap();
        assert_eq!(h.order().unwrap(), 21);
        assert_eq!(regular_orbit(&h, RegularOrbitDomain::V).unwrap(), None);
        let pair = regular_orbit(&h, RegularOrbitDomain::VPlusV).unwrap();
        assert_eq!(pair.map(|p| match p { RegularPoint::Pair(v, w) => (v, w), _ => unreachable!() }), brute_regular_pair(&h));
    }

    #[test]
    fn odd_prime_orbit_witness_sizes() {
        for (name, p) in [("AGL(2,3)", 3u64), ("AGL(1,7)", 3), ("AGammaL(1,9)", 3)] {
            let g = inst(name);
            let space = g.affine.as_ref().unwrap();
            let Ok(candidates) = orbit_witness_odd_p(&g.group, space, p) else { continue };
            let sizes: Vec<usize> = candidates.iter().map(PointSet::len).collect();
            let expected = p as usize + 1;
            assert!(sizes == vec![expected] || sizes == vec![2 * expected - 1, expected + 1], "{name}: {sizes:?}");
        }
    }

    #[test]
    fn p2_regular_witness_contains_involution_in_stabilizer() {
        for name in ["AGL(1,5)", "AGL(1,9)", "AGL(1,13)"] {
            let g = inst(name);
            let space = g.affine.as_ref().unwrap();
            let gamma = p2_regular_witness(&g.group, space).unwrap();
            assert_eq!(gamma.len(), 3);
            let h = point_stabilizer(&g.group, 0).unwrap();
            let t = least_element_of_order(&h, 2).unwrap();
            assert!(gamma.is_stabilized_by(&t));
        }
        let j = inst("J");
        assert!(p2_regular_witness(&j.group, j.affine.as_ref().unwrap()).is_err());
    }

    /// `V = GF(11)^2`, `H = <diag(3, 4), swap> × <-I>`: `D10 × C2` with Sylow 2-subgroup
    /// `<swap, -I>` elementary abelian and `O_2(H) = <-I>`.
    fn metacyclic_instance() -> GroupInstance {
        let space = AffineSpace::new(FiniteField::new(11, 1).unwrap(), 2);
        let spec = AffineSpec {
            space: space.clone(),
            generators: vec![
                SemilinearMap::linear(vec![vec![3, 0], vec![0, 4]]),
                SemilinearMap::linear(vec![vec![0, 1], vec![1, 0]]),
                SemilinearMap::linear(vec![vec![10, 0], vec![0, 10]]),
            ],
        };
        GroupInstance {
            label: "GF(11)^2:(D10xC2)".into(),
            group: build_affine(&spec, Limits::default()).unwrap(),
            affine: Some(space),
        }
    }

    #[test]
    fn metacyclic_eigenvector_witness() {
        let g = metacyclic_instance();
        assert_eq!(g.group.order().unwrap(), 121 * 20);
        let space = g.affine.as_ref().unwrap();
        let gamma = metacyclic_witness(&g.group, space).unwrap();
        assert_eq!(gamma.len(), 4);
        let stab = setwise_stabilizer(&g.group, &gamma).unwrap();
        assert_eq!(p_part(stab.order().unwrap(), 2).unwrap(), 2);
        assert_eq!(p_part(g.group.order().unwrap(), 2).unwrap(), 4);
    }

    #[test]
    fn metacyclic_witness_needs_noncentral_involution() {
        let d10 = inst("D10");
        assert!(metacyclic_witness(&d10.group, d10.affine.as_ref().unwrap()).is_err());
    }

    #[test]
    fn random_subsets_are_reproducible() {
        assert_eq!(random_subset(40, 7, 3), random_subset(40, 7, 3));
        assert_ne!(random_subset(40, 7, 3), random_subset(40, 7, 4));
    }
}
