//! Permutation groups given by generators or by an explicit element set.
//!
//! Element sets are materialized lazily by closure and cached. The exact order
//! comes from a Schreier-Sims stabilizer chain when enabled; closure
//! enumeration is the reference it is cross-checked against.

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::unionfind::UnionFind;

pub const DEFAULT_ENUMERATION_BOUND: u128 = 1_000_000;
pub const DEFAULT_MAX_DEGREE: usize = 4096;

/// Resource limits carried by every group and inherited by its subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest order for which all elements may be materialized.
    pub enumeration_bound: u128,
    /// Compute orders with a stabilizer chain instead of enumeration.
    pub use_chain: bool,
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
            use_chain: true,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

/// All elements of a group, sorted by image array, with a hash index.
#[derive(Debug)]
pub struct Elements {
    sorted: Vec<Permutation>,
    index: HashSet<Permutation>,
}

impl Elements {
    fn new(mut sorted: Vec<Permutation>) -> Self {
        sorted.sort_unstable();
        let index = sorted.iter().cloned().collect();
        Elements { sorted, index }
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.sorted
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.sorted.iter()
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains(g)
    }
}

/// Outcome of the block-system search on a transitive group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Primitivity {
    Primitive,
    /// A nontrivial block system, blocks sorted and ordered by least point.
    Blocks(Vec<Vec<usize>>),
}

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    limits: Limits,
    generators: OnceLock<Vec<Permutation>>,
    elements: OnceLock<Arc<Elements>>,
    order: OnceLock<u128>,
    chain: OnceLock<Arc<StabilizerChain>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        PermGroup::with_limits(degree, generators, Limits::default())
    }

    pub fn with_limits(degree: usize, generators: Vec<Permutation>, limits: Limits) -> Result<Self> {
        if degree > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "degree {degree} exceeds the domain bound {}",
                limits.max_degree
            )));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            limits,
            generators: OnceLock::from(generators),
            elements: OnceLock::new(),
            order: OnceLock::new(),
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    /// A group from a set already known to be closed under composition.
    pub(crate) fn from_closed_set(degree: usize, elements: Vec<Permutation>, limits: Limits) -> Self {
        let elements = Elements::new(elements);
        debug_assert!(elements.iter().all(|g| g.degree() == degree));
        PermGroup {
            degree,
            limits,
            generators: OnceLock::new(),
            order: OnceLock::from(elements.len() as u128),
            elements: OnceLock::from(Arc::new(elements)),
            chain: OnceLock::new(),
        }
    }

    /// Subgroup of `self` consisting of the elements satisfying `keep`.
    ///
    /// The caller guarantees the kept set is a subgroup.
    pub(crate) fn filter_subgroup<F: FnMut(&Permutation) -> bool>(&self, mut keep: F) -> Result<Self> {
        let kept = self.elements()?.iter().filter(|g| keep(g)).cloned().collect();
        Ok(PermGroup::from_closed_set(self.degree, kept, self.limits))
    }

    /// Subgroup generated by `candidates`, keeping only the candidates that
    /// enlarge the group so far.
    pub fn generated_by<'a, I>(degree: usize, candidates: I, limits: Limits) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        let (gens, elements) = greedy_generate(degree, candidates, limits.enumeration_bound)?;
        let group = PermGroup::from_closed_set(degree, elements, limits);
        group.generators.set(gens).ok();
        Ok(group)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Generators without the identity. For groups given by an element set,
    /// a small generating set is chosen greedily in element order.
    pub fn generators(&self) -> &[Permutation] {
        self.generators.get_or_init(|| {
            let elements = self.elements.get().expect("element-defined group");
            greedy_generate(self.degree, elements.iter(), u128::MAX)
                .expect("subset of a closed set")
                .0
        })
    }

    /// Exact order.
    pub fn order(&self) -> Result<u128> {
        if let Some(&o) = self.order.get() {
            return Ok(o);
        }
        let o = if self.limits.use_chain {
            self.order_by_chain()?
        } else {
            self.order_by_enumeration()?
        };
        Ok(*self.order.get_or_init(|| o))
    }

    /// Order by closure enumeration; fails rather than exceed the enumeration bound.
    pub fn order_by_enumeration(&self) -> Result<u128> {
        Ok(self.enumerate()?.len() as u128)
    }

    /// Order as the product of basic orbit lengths of a stabilizer chain.
    pub fn order_by_chain(&self) -> Result<u128> {
        self.chain().order()
    }

    fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| Arc::new(StabilizerChain::build(self.generators())))
    }

    /// All elements, materialized once.
    pub fn elements(&self) -> Result<&Elements> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        if self.limits.use_chain {
            let order = self.order()?;
            if order > self.limits.enumeration_bound {
                return Err(Error::ResourceLimit(format!(
                    "order {order} exceeds the enumeration bound {}",
                    self.limits.enumeration_bound
                )));
            }
        }
        let e = self.enumerate()?;
        Ok(self.elements.get_or_init(|| e))
    }

    fn enumerate(&self) -> Result<Arc<Elements>> {
        if let Some(e) = self.elements.get() {
            return Ok(e.clone());
        }
        let set = close(
            vec![self.identity()],
            self.generators(),
            self.limits.enumeration_bound,
        )?;
        Ok(Arc::new(Elements::new(set.into_iter().collect())))
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Ok(false);
        }
        if let Some(e) = self.elements.get() {
            return Ok(e.contains(g));
        }
        if self.limits.use_chain {
            return Ok(self.chain().contains(g));
        }
        Ok(self.elements()?.contains(g))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        for g in self.generators() {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Orbit partition, orbits sorted and ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.generators(), self.degree)
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits().len()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_count() == 1
    }

    /// Finest block system containing `{0, b}` for the least `b` giving a
    /// nontrivial one, or `Primitive`.
    pub fn primitivity_blocks(&self) -> Result<Primitivity> {
        if !self.is_transitive() {
            return Err(Error::Intransitive);
        }
        for beta in 1..self.degree {
            let blocks = minimal_block_system(self.generators(), self.degree, 0, beta);
            if blocks.len() > 1 {
                return Ok(Primitivity::Blocks(blocks));
            }
        }
        Ok(Primitivity::Primitive)
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.primitivity_blocks(), Ok(Primitivity::Primitive))
    }

    /// `{g in self : g⁻¹ H g = H}`.
    pub fn normalizer(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(self)? {
            return Err(Error::NotSubgroup);
        }
        let sub_elems = sub.elements()?;
        let sub_gens = sub.generators();
        self.filter_subgroup(|g| sub_gens.iter().all(|h| sub_elems.contains(&h.conjugate_by(g))))
    }

    pub fn centralizer(&self, g: &Permutation) -> Result<PermGroup> {
        self.filter_subgroup(|h| h.commutes_with(g))
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<Permutation>>> {
        let elements = self.elements()?;
        let gens = self.generators();
        let mut seen: HashSet<&Permutation> = HashSet::with_capacity(elements.len());
        let mut classes = Vec::new();
        for x in elements.iter() {
            if seen.contains(x) {
                continue;
            }
            let mut class: HashSet<Permutation> = HashSet::from([x.clone()]);
            let mut queue = VecDeque::from([x.clone()]);
            while let Some(y) = queue.pop_front() {
                for g in gens {
                    let c = y.conjugate_by(g);
                    if !class.contains(&c) {
                        class.insert(c.clone());
                        queue.push_back(c);
                    }
                }
            }
            let mut class: Vec<Permutation> = class.into_iter().collect();
            class.sort_unstable();
            for c in &class {
                // Borrow from the element list so `seen` outlives the class vector.
                seen.insert(elements.index.get(c).expect("class inside group"));
            }
            classes.push(class);
        }
        Ok(classes)
    }

    /// Direct product acting on pairs `(a, b)` indexed `a * n2 + b`.
    pub fn product_action(&self, other: &PermGroup) -> Result<PermGroup> {
        let (n1, n2) = (self.degree, other.degree);
        let n = n1.saturating_mul(n2);
        let limits = self.limits;
        if n > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "product degree {n} exceeds the domain bound {}",
                limits.max_degree
            )));
        }
        let mut gens = Vec::new();
        for g in self.generators() {
            let images = (0..n)
                .map(|x| (g.apply(x / n2) * n2 + x % n2) as u32)
                .collect();
            gens.push(Permutation::from_images_unchecked(images));
        }
        for g in other.generators() {
            let images = (0..n)
                .map(|x| ((x / n2) * n2 + g.apply(x % n2)) as u32)
                .collect();
            gens.push(Permutation::from_images_unchecked(images));
        }
        PermGroup::with_limits(n, gens, limits)
    }
}

/// Orbit partition of `⟨gens⟩` on `0..degree`.
pub fn orbits(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for x in 0..degree {
            uf.union(x, g.apply(x));
        }
    }
    uf.classes()
}

/// Finest block system in which `a` and `b` share a block.
pub fn minimal_block_system(gens: &[Permutation], degree: usize, a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    let mut queue = VecDeque::new();
    if uf.union(a, b) {
        queue.push_back((a, b));
    }
    while let Some((x, y)) = queue.pop_front() {
        for g in gens {
            let (gx, gy) = (uf.find(g.apply(x)), uf.find(g.apply(y)));
            if gx != gy {
                uf.union(gx, gy);
                queue.push_back((gx, gy));
            }
        }
    }
    uf.classes()
}

/// Closure of `seed` (already closed or just the identity) under right
/// multiplication by `gens`.
fn close(
    seed: Vec<Permutation>,
    gens: &[Permutation],
    bound: u128,
) -> Result<HashSet<Permutation>> {
    let mut set: HashSet<Permutation> = seed.iter().cloned().collect();
    let mut queue: VecDeque<Permutation> = seed.into();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if !set.contains(&y) {
                if set.len() as u128 >= bound {
                    return Err(Error::ResourceLimit(format!(
                        "group order exceeds the enumeration bound {bound}"
                    )));
                }
                set.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(set)
}

/// Walks `candidates` in order, keeping each one not already in the group
/// generated so far. Returns the kept generators and all group elements.
fn greedy_generate<'a, I>(degree: usize, candidates: I, bound: u128) -> Result<(Vec<Permutation>, Vec<Permutation>)>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let mut gens: Vec<Permutation> = Vec::new();
    let mut set: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for c in candidates {
        if set.contains(c) {
            continue;
        }
        gens.push(c.clone());
        // The old set is a subgroup; closing it under all generators yields ⟨old, c⟩.
        set = close(set.into_iter().collect(), &gens, bound)?;
    }
    Ok((gens, set.into_iter().collect()))
}

/// Schreier-Sims stabilizer chain with explicit transversals.
#[derive(Debug)]
struct StabilizerChain {
    levels: Vec<Level>,
}

#[derive(Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `transversal[x]` maps the base point to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            transversal,
            orbit: vec![base],
        }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        // Re-scan the whole orbit: a new generator can reach points from old ones.
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for g in &self.gens {
                let y = g.apply(x);
                if self.transversal[y].is_none() {
                    let u = self.transversal[x].as_ref().unwrap().then(g);
                    self.transversal[y] = Some(u);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

impl StabilizerChain {
    fn build(gens: &[Permutation]) -> Self {
        let mut chain = StabilizerChain { levels: Vec::new() };
        for g in gens {
            chain.add_strong_generator(g.clone(), 0, 0);
        }
        'restart: loop {
            for i in (0..chain.levels.len()).rev() {
                let level = &chain.levels[i];
                for &x in &level.orbit {
                    let ux = level.transversal[x].as_ref().unwrap();
                    for s in &level.gens {
                        let y = s.apply(x);
                        let uy_inv = level.transversal[y].as_ref().unwrap().inverse();
                        let schreier = ux.then(s).then(&uy_inv);
                        let (residue, depth) = chain.sift(schreier, i + 1);
                        if !residue.is_identity() {
                            chain.add_strong_generator(residue, i + 1, depth);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
        chain
    }

    /// Adds `h` to the generator lists of levels `from..=up_to`, creating a new
    /// level when `h` fixes every base point.
    fn add_strong_generator(&mut self, h: Permutation, from: usize, up_to: usize) {
        let degree = h.degree();
        let up_to = up_to.min(self.levels.len());
        if up_to == self.levels.len() {
            let base = (0..degree).find(|&x| h.apply(x) != x).expect("non-identity");
            self.levels.push(Level::new(base, degree));
        }
        for level in &mut self.levels[from..=up_to] {
            level.gens.push(h.clone());
            level.extend_orbit();
        }
    }

    /// Sifts `g` from level `from`; returns the residue and the level where it stopped.
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(level.base);
            match &level.transversal[x] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn contains(&self, g: &Permutation) -> bool {
        self.sift(g.clone(), 0).0.is_identity()
    }

    fn order(&self) -> Result<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .ok_or_else(|| Error::ResourceLimit("group order overflows 128 bits".into()))
        })
    }
}
