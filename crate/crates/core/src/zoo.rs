//! Named groups and the `GroupSpec` document format.
//!
//! Catalog names (case-sensitive):
//!
//! | name | group | degree |
//! |------|-------|--------|
//! | `D6`, `D10`, `Dihedral(2k)` | dihedral group of order 2k on k points | k |
//! | `Cyclic(n)`, `C<n>` | regular cyclic group | n |
//! | `Sym(n)`, `S<n>` | symmetric group | n |
//! | `Trivial(n)` | trivial group | n |
//! | `AGL(d,q)` | affine general linear group | q^d |
//! | `AGammaL(1,q)`, `AΓL(1,q)`, `J` (= `AGammaL(1,8)`) | affine semilinear group | q |
//! | `Product(a,b)` | direct product in product action | deg(a)·deg(b) |
//!
//! Generator order is fixed: translations first (coordinate-major, additive
//! basis `1, x, x^2, ..` within a coordinate), then linear or semilinear parts.

use serde::{Deserialize, Serialize};

use crate::affine::{build_affine, general_linear_generators, AffineSpace, AffineSpec, SemilinearMap};
use crate::error::{Error, Result};
use crate::field::{prime_power, FiniteField};
use crate::group::{Limits, PermGroup};
use crate::perm::{parse_cycles, Permutation};

/// A group together with the affine structure of its domain, when it has one.
#[derive(Debug, Clone)]
pub struct GroupInstance {
    pub label: String,
    pub group: PermGroup,
    /// The domain as `GF(q)^m`, with the group containing all translations.
    pub affine: Option<AffineSpace>,
}

pub fn named_group(name: &str) -> Result<GroupInstance> {
    named_group_with_limits(name, Limits::default())
}

pub fn named_group_with_limits(name: &str, limits: Limits) -> Result<GroupInstance> {
    let term = NameParser::new(name).parse_all()?;
    build_term(&term, limits)
}

/// Every catalog entry used by the test and verification suites, smallest first.
pub fn zoo_names() -> Vec<&'static str> {
    vec![
        "D6", "Sym(4)", "AGL(1,4)", "D10", "AGL(1,5)", "AGL(1,7)", "AGL(1,8)", "AGammaL(1,8)",
        "AGL(1,9)", "AGammaL(1,9)", "AGL(2,3)", "AGL(1,11)", "AGL(1,13)", "AGL(1,16)",
        "AGammaL(1,16)", "Product(D6,D6)",
    ]
}

#[derive(Debug, Clone, PartialEq)]
enum Term {
    Number(u64),
    Call(String, Vec<Term>),
}

struct NameParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> NameParser<'a> {
    fn new(text: &'a str) -> Self {
        NameParser { text, pos: 0 }
    }

    fn unknown(&self) -> Error {
        Error::UnknownGroup(self.text.to_string())
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn parse_all(&mut self) -> Result<Term> {
        let t = self.parse_term()?;
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.unknown());
        }
        Ok(t)
    }

    fn parse_term(&mut self) -> Result<Term> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric()))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.unknown());
        }
        let word = &rest[..len];
        self.pos += len;
        if let Ok(n) = word.parse::<u64>() {
            return Ok(Term::Number(n));
        }
        self.skip_ws();
        let mut args = Vec::new();
        if self.text[self.pos..].starts_with('(') {
            self.pos += 1;
            loop {
                args.push(self.parse_term()?);
                self.skip_ws();
                let rest = &self.text[self.pos..];
                if rest.starts_with(',') {
                    self.pos += 1;
                } else if rest.starts_with(')') {
                    self.pos += 1;
                    break;
                } else {
                    return Err(self.unknown());
                }
            }
        }
        Ok(Term::Call(word.to_string(), args))
    }
}

fn describe(term: &Term) -> String {
    match term {
        Term::Number(n) => n.to_string(),
        Term::Call(name, args) if args.is_empty() => name.clone(),
        Term::Call(name, args) => {
            let inner: Vec<String> = args.iter().map(describe).collect();
            format!("{name}({})", inner.join(","))
        }
    }
}

fn build_term(term: &Term, limits: Limits) -> Result<GroupInstance> {
    let label = describe(term);
    let unknown = || Error::UnknownGroup(label.clone());
    let Term::Call(name, args) = term else {
        return Err(unknown());
    };
    let nums: Option<Vec<u64>> = args
        .iter()
        .map(|a| match a {
            Term::Number(n) => Some(*n),
            _ => None,
        })
        .collect();

    // Shorthands with the parameter glued on: D6, C4, S4.
    let (head, glued) = match name.find(|c: char| c.is_ascii_digit()) {
        Some(i) if args.is_empty() => (&name[..i], name[i..].parse::<u64>().ok()),
        _ => (name.as_str(), None),
    };

    let instance = match (head, glued, nums.as_deref()) {
        ("D", Some(order), _) | ("Dihedral", None, Some(&[order])) => {
            if order < 6 || order % 2 == 1 {
                return Err(unknown());
            }
            dihedral(order as usize / 2, limits)?
        }
        ("C", Some(n), _) | ("Cyclic", None, Some(&[n])) => cyclic(n as usize, limits)?,
        ("S", Some(n), _) | ("Sym", None, Some(&[n])) => symmetric(n as usize, limits)?,
        ("Trivial", None, Some(&[n])) => GroupInstance {
            label: String::new(),
            group: PermGroup::with_limits(n as usize, Vec::new(), limits)?,
            affine: None,
        },
        ("AGL", None, Some(&[d, q])) => {
            let space = space_for(q, d as usize)?;
            let spec = AffineSpec { generators: general_linear_generators(&space), space };
            affine_instance(spec, limits)?
        }
        ("AGammaL" | "AΓL", None, Some(&[1, q])) => semilinear(q, limits)?,
        ("J", None, _) if args.is_empty() => semilinear(8, limits)?,
        ("Product", None, None) if args.len() == 2 => {
            let a = build_term(&args[0], limits)?;
            let b = build_term(&args[1], limits)?;
            product(&a, &b)?
        }
        _ => return Err(unknown()),
    };
    Ok(GroupInstance { label, ..instance })
}

fn space_for(q: u64, dim: usize) -> Result<AffineSpace> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::UnknownGroup(format!("GF({q})")))?;
    if dim == 0 {
        return Err(Error::UnknownGroup("dimension 0".into()));
    }
    Ok(AffineSpace::new(FiniteField::new(p, k)?, dim))
}

fn affine_instance(spec: AffineSpec, limits: Limits) -> Result<GroupInstance> {
    let group = build_affine(&spec, limits)?;
    Ok(GroupInstance { label: String::new(), group, affine: Some(spec.space) })
}

/// `x -> a x^σ + b` over GF(q).
fn semilinear(q: u64, limits: Limits) -> Result<GroupInstance> {
    let space = space_for(q, 1)?;
    let g = space.field.primitive_element();
    let mut generators = Vec::new();
    if g != 1 {
        generators.push(SemilinearMap::linear(vec![vec![g]]));
    }
    if space.field.degree() > 1 {
        generators.push(SemilinearMap::semilinear(vec![vec![1]], 1));
    }
    affine_instance(AffineSpec { space, generators }, limits)
}

fn dihedral(k: usize, limits: Limits) -> Result<GroupInstance> {
    if let Some((p, 1)) = prime_power(k as u64) {
        let space = AffineSpace::new(FiniteField::new(p, 1)?, 1);
        let minus_one = vec![vec![p as u32 - 1]];
        return affine_instance(
            AffineSpec { space, generators: vec![SemilinearMap::linear(minus_one)] },
            limits,
        );
    }
    let rotation = Permutation::from_images((0..k).map(|x| (x + 1) % k))?;
    let reflection = Permutation::from_images((0..k).map(|x| (k - x) % k))?;
    Ok(GroupInstance {
        label: String::new(),
        group: PermGroup::with_limits(k, vec![rotation, reflection], limits)?,
        affine: None,
    })
}

fn cyclic(n: usize, limits: Limits) -> Result<GroupInstance> {
    if n == 0 {
        return Err(Error::UnknownGroup("Cyclic(0)".into()));
    }
    if let Some((p, 1)) = prime_power(n as u64) {
        let space = AffineSpace::new(FiniteField::new(p, 1)?, 1);
        return affine_instance(AffineSpec { space, generators: Vec::new() }, limits);
    }
    let rotation = Permutation::from_images((0..n).map(|x| (x + 1) % n))?;
    Ok(GroupInstance {
        label: String::new(),
        group: PermGroup::with_limits(n, vec![rotation], limits)?,
        affine: None,
    })
}

fn symmetric(n: usize, limits: Limits) -> Result<GroupInstance> {
    if n == 0 {
        return Err(Error::UnknownGroup("Sym(0)".into()));
    }
    let mut gens = Vec::new();
    if n > 1 {
        gens.push(Permutation::from_images((0..n).map(|x| (x + 1) % n))?);
        gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
    }
    // Sym(n) for n <= 4 is AGL of a space on n points, whatever the numbering.
    let affine = match n {
        2 => Some(AffineSpace::new(FiniteField::new(2, 1)?, 1)),
        3 => Some(AffineSpace::new(FiniteField::new(3, 1)?, 1)),
        4 => Some(AffineSpace::new(FiniteField::new(2, 1)?, 2)),
        _ => None,
    };
    Ok(GroupInstance {
        label: String::new(),
        group: PermGroup::with_limits(n, gens, limits)?,
        affine,
    })
}

fn product(a: &GroupInstance, b: &GroupInstance) -> Result<GroupInstance> {
    let group = a.group.product_action(&b.group)?;
    // Index a*|B| + b is the base-q numbering of the concatenated coordinates.
    let affine = match (&a.affine, &b.affine) {
        (Some(x), Some(y)) if x.field == y.field => Some(AffineSpace::new(x.field.clone(), x.dim + y.dim)),
        _ => None,
    };
    Ok(GroupInstance { label: String::new(), group, affine })
}

/// Declarative group description read by the CLI. Exactly one form per document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(NamedDoc),
    Generators(GeneratorsDoc),
    Product(ProductDoc),
    Affine(AffineWrapper),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedDoc {
    pub named: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsDoc {
    pub degree: usize,
    /// Cycle notation strings.
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub product: Box<[GroupSpec; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineWrapper {
    pub affine: AffineDoc,
}

/// `V = GF(p^k)^dim` plus semilinear generators; all translations are added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineDoc {
    pub p: u64,
    pub k: u32,
    pub dim: usize,
    #[serde(default)]
    pub generators: Vec<SemilinearMap>,
}

impl GroupSpec {
    pub fn named(name: &str) -> Self {
        GroupSpec::Named(NamedDoc { named: name.to_string() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn build(&self, limits: Limits) -> Result<GroupInstance> {
        match self {
            GroupSpec::Named(d) => named_group_with_limits(&d.named, limits),
            GroupSpec::Generators(d) => {
                let gens = d
                    .generators
                    .iter()
                    .map(|g| parse_cycles(g, d.degree))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupInstance {
                    label: format!("<{}>", d.generators.join(", ")),
                    group: PermGroup::with_limits(d.degree, gens, limits)?,
                    affine: None,
                })
            }
            GroupSpec::Product(d) => {
                let a = d.product[0].build(limits)?;
                let b = d.product[1].build(limits)?;
                let label = format!("Product({},{})", a.label, b.label);
                Ok(GroupInstance { label, ..product(&a, &b)? })
            }
            GroupSpec::Affine(w) => {
                let d = &w.affine;
                let space = AffineSpace::new(FiniteField::new(d.p, d.k)?, d.dim);
                let label = format!("Affine(GF({}^{})^{})", d.p, d.k, d.dim);
                let spec = AffineSpec { space, generators: d.generators.clone() };
                Ok(GroupInstance { label, ..affine_instance(spec, limits)? })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Primitivity;

    fn order(name: &str) -> u128 {
        named_group(name).unwrap().group.order().unwrap()
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(order("D6"), 6);
        assert_eq!(order("Dihedral(10)"), 10);
        assert_eq!(order("D8"), 8);
        assert_eq!(order("AGammaL(1,8)"), 168);
        assert_eq!(order("J"), 168);
        assert_eq!(order("AΓL(1,9)"), 144);
        assert_eq!(order("AGL(1,5)"), 20);
        assert_eq!(order("AGL(2,3)"), 432);
        assert_eq!(order("Sym(4)"), 24);
        assert_eq!(order("S5"), 120);
        assert_eq!(order("C4"), 4);
        assert_eq!(order("Trivial(5)"), 1);
        assert_eq!(order("Product(D6,D6)"), 36);
        assert_eq!(order("Product(J, J)"), 28224);
    }

    #[test]
    fn agl_one_orders_match_formula() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 25, 27, 32, 49, 64] {
            assert_eq!(order(&format!("AGL(1,{q})")), (q * (q - 1)) as u128, "q = {q}");
        }
    }

    #[test]
    fn semilinear_orders_match_formula() {
        for (q, k) in [(8u64, 3u64), (9, 2), (4, 2), (16, 4), (27, 3)] {
            assert_eq!(order(&format!("AGammaL(1,{q})")), (q * (q - 1) * k) as u128);
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["", "Foo", "AGL(1,6)", "D7", "Product(D6)", "AGammaL(2,8)", "D6)", "Sym(0)"] {
            assert!(named_group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn products_inherit_affine_structure() {
        let g = named_group("Product(D6,D6)").unwrap();
        let space = g.affine.unwrap();
        assert_eq!(space.dim, 2);
        assert_eq!(space.vec_to_point(&[1, 1]).unwrap(), 4);
        assert_eq!(g.group.degree(), 9);
        assert!(named_group("Product(D6,D10)").unwrap().affine.is_none());
    }

    #[test]
    fn d6_affine_matches_generator_form() {
        let affine = named_group("D6").unwrap().group;
        let raw = GroupSpec::from_json(r#"{"degree": 3, "generators": ["(0 1 2)", "(1 2)"]}"#)
            .unwrap()
            .build(Limits::default())
            .unwrap()
            .group;
        assert_eq!(affine.order().unwrap(), raw.order().unwrap());
        assert!(affine.is_primitive() && raw.is_primitive());
        let cycle_types = |g: &PermGroup| {
            let mut v: Vec<Vec<usize>> = g.elements().unwrap().iter().map(|x| x.cycle_type()).collect();
            v.sort();
            v
        };
        assert_eq!(cycle_types(&affine), cycle_types(&raw));
    }

    #[test]
    fn zoo_translations_are_regular() {
        for name in zoo_names() {
            let inst = named_group(name).unwrap();
            let Some(space) = &inst.affine else { continue };
            for x in 0..space.size() {
                let t = space.translation(x);
                assert!(inst.group.contains(&t).unwrap(), "{name}");
                assert_eq!(t.apply(0), x);
            }
        }
    }

    #[test]
    fn primitive_zoo_members() {
        for name in ["D6", "D10", "AGammaL(1,8)", "AGL(2,3)", "AGammaL(1,9)", "Sym(4)"] {
            let g = named_group(name).unwrap().group;
            assert_eq!(g.primitivity_blocks().unwrap(), Primitivity::Primitive, "{name}");
        }
        let prod = named_group("Product(D6,D6)").unwrap().group;
        assert!(matches!(prod.primitivity_blocks().unwrap(), Primitivity::Blocks(_)));
    }

    #[test]
    fn spec_documents() {
        let docs = [
            (r#"{"named": "D6"}"#, 6u128),
            (r#"{"degree": 4, "generators": ["(0 1 2 3)"]}"#, 4),
            (r#"{"product": [{"named": "D6"}, {"degree": 3, "generators": ["(0 1 2)"]}]}"#, 18),
            (
                r#"{"affine": {"p": 2, "k": 3, "dim": 1, "generators": [
                    {"matrix": [[2]]}, {"matrix": [[1]], "automorphism": 1}]}}"#,
                168,
            ),
        ];
        for (text, expected) in docs {
            let spec = GroupSpec::from_json(text).unwrap();
            assert_eq!(spec.build(Limits::default()).unwrap().group.order().unwrap(), expected);
            let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(back, spec);
        }
        for bad in [
            r#"{"named": "D6", "degree": 3}"#,
            r#"{"degree": 3}"#,
            r#"{"product": [{"named": "D6"}]}"#,
            r#"{}"#,
        ] {
            assert!(GroupSpec::from_json(bad).is_err(), "{bad}");
        }
        let singular = GroupSpec::from_json(r#"{"affine": {"p": 3, "k": 1, "dim": 1, "generators": [{"matrix": [[0]]}]}}"#)
            .unwrap();
        assert_eq!(singular.build(Limits::default()).unwrap_err(), Error::NonInvertibleMatrix);
    }
}
