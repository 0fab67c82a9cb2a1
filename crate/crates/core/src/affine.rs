//! Affine and semilinear groups acting on the vectors of `V = GF(q)^m`.
//!
//! Vectors are numbered in base q with the last coordinate least significant,
//! each coordinate contributing its field element index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::{Limits, PermGroup};
use crate::perm::Permutation;

/// The vector space `GF(q)^dim` with its point numbering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpace {
    pub field: FiniteField,
    pub dim: usize,
}

impl AffineSpace {
    pub fn new(field: FiniteField, dim: usize) -> Self {
        AffineSpace { field, dim }
    }

    /// Number of vectors, `q^dim`.
    pub fn size(&self) -> usize {
        self.field.order().pow(self.dim as u32)
    }

    pub fn vec_to_point(&self, coords: &[u32]) -> Result<usize> {
        if coords.len() != self.dim {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        let q = self.field.order();
        coords.iter().try_fold(0usize, |acc, &c| {
            if c as usize >= q {
                Err(Error::PointOutOfRange { point: c as usize, degree: q })
            } else {
                Ok(acc * q + c as usize)
            }
        })
    }

    pub fn point_to_vec(&self, point: usize) -> Result<Vec<u32>> {
        let size = self.size();
        if point >= size {
            return Err(Error::PointOutOfRange { point, degree: size });
        }
        let q = self.field.order();
        let mut coords = vec![0u32; self.dim];
        let mut x = point;
        for c in coords.iter_mut().rev() {
            *c = (x % q) as u32;
            x /= q;
        }
        Ok(coords)
    }

    fn coords(&self, point: usize) -> Vec<u32> {
        self.point_to_vec(point).expect("point in range")
    }

    fn point(&self, coords: &[u32]) -> usize {
        self.vec_to_point(coords).expect("valid coordinates")
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.coords(a), self.coords(b));
        let sum: Vec<u32> = va.iter().zip(&vb).map(|(&x, &y)| self.field.add(x, y)).collect();
        self.point(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let v: Vec<u32> = self.coords(a).iter().map(|&x| self.field.neg(x)).collect();
        self.point(&v)
    }

    pub fn scale(&self, c: u32, a: usize) -> usize {
        let v: Vec<u32> = self.coords(a).iter().map(|&x| self.field.mul(c, x)).collect();
        self.point(&v)
    }

    /// Additive order of a vector: 1 for zero, otherwise the characteristic.
    pub fn additive_order(&self, a: usize) -> u64 {
        if a == 0 {
            1
        } else {
            self.field.characteristic() as u64
        }
    }

    /// Translation `v -> v + b` as a permutation of the points.
    pub fn translation(&self, b: usize) -> Permutation {
        let images = (0..self.size()).map(|x| self.add(x, b) as u32).collect();
        Permutation::from_images_unchecked(images)
    }

    /// Translations by `x^j e_i` for every coordinate `i` and additive basis
    /// element `x^j`; together they generate all of V.
    pub fn translation_generators(&self) -> Vec<Permutation> {
        let mut gens = Vec::new();
        for i in 0..self.dim {
            for c in self.field.additive_basis() {
                let mut v = vec![0u32; self.dim];
                v[i] = c;
                gens.push(self.translation(self.point(&v)));
            }
        }
        gens
    }
}

/// `v -> (v^σ) A + b`, where `σ` raises every coordinate to the power `p^automorphism`
/// and `v` is a row vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearMap {
    pub matrix: Vec<Vec<u32>>,
    #[serde(default)]
    pub automorphism: u32,
    #[serde(default)]
    pub translation: Option<Vec<u32>>,
}

impl SemilinearMap {
    pub fn linear(matrix: Vec<Vec<u32>>) -> Self {
        SemilinearMap { matrix, automorphism: 0, translation: None }
    }

    pub fn semilinear(matrix: Vec<Vec<u32>>, automorphism: u32) -> Self {
        SemilinearMap { matrix, automorphism, translation: None }
    }

    fn validate(&self, space: &AffineSpace) -> Result<()> {
        let q = space.field.order() as u32;
        let m = space.dim;
        if self.matrix.len() != m || self.matrix.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidSpec(format!("matrix must be {m}x{m}")));
        }
        let in_field = |row: &Vec<u32>| row.iter().all(|&c| c < q);
        if !self.matrix.iter().all(in_field) {
            return Err(Error::InvalidSpec("matrix entry outside the field".into()));
        }
        if let Some(b) = &self.translation {
            if b.len() != m || !in_field(b) {
                return Err(Error::InvalidSpec("bad translation vector".into()));
            }
        }
        if !is_invertible(&space.field, &self.matrix) {
            return Err(Error::NonInvertibleMatrix);
        }
        Ok(())
    }

    pub fn apply(&self, space: &AffineSpace, v: &[u32]) -> Vec<u32> {
        let f = &space.field;
        let twisted: Vec<u32> = v.iter().map(|&x| f.frobenius(x, self.automorphism)).collect();
        (0..space.dim)
            .map(|j| {
                let mut acc = self.translation.as_ref().map_or(0, |b| b[j]);
                for (i, &x) in twisted.iter().enumerate() {
                    acc = f.add(acc, f.mul(x, self.matrix[i][j]));
                }
                acc
            })
            .collect()
    }

    pub fn to_permutation(&self, space: &AffineSpace) -> Result<Permutation> {
        self.validate(space)?;
        let images = (0..space.size())
            .map(|x| space.point(&self.apply(space, &space.coords(x))) as u32)
            .collect();
        Ok(Permutation::from_images_unchecked(images))
    }
}

/// Gaussian elimination over the field.
fn is_invertible(f: &FiniteField, matrix: &[Vec<u32>]) -> bool {
    let mut a: Vec<Vec<u32>> = matrix.to_vec();
    let n = a.len();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return false;
        };
        a.swap(col, pivot);
        let inv = f.inv(a[col][col]).unwrap();
        for r in col + 1..n {
            let factor = f.mul(a[r][col], inv);
            if factor == 0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            for (x, &y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
    }
    true
}

/// Declarative affine group `V ⋊ H` with `H` given by semilinear generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSpec {
    pub space: AffineSpace,
    pub generators: Vec<SemilinearMap>,
}

/// The group generated by all translations of V and the spec's maps.
pub fn build_affine(spec: &AffineSpec, limits: Limits) -> Result<PermGroup> {
    let space = &spec.space;
    let size = space.size();
    if size > limits.max_degree {
        return Err(Error::ResourceLimit(format!(
            "|V| = {size} exceeds the domain bound {}",
            limits.max_degree
        )));
    }
    let mut gens = space.translation_generators();
    for map in &spec.generators {
        gens.push(map.to_permutation(space)?);
    }
    PermGroup::with_limits(size, gens, limits)
}

/// Identity matrix scaled by `c`.
pub fn scalar_matrix(dim: usize, c: u32) -> Vec<Vec<u32>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { c } else { 0 }).collect())
        .collect()
}

/// Generators of GL(dim, q): transvections `I + c E_ij` for `c` in the additive
/// basis, plus `diag(g, 1, .., 1)` for a primitive element `g`.
pub fn general_linear_generators(space: &AffineSpace) -> Vec<SemilinearMap> {
    let f = &space.field;
    let m = space.dim;
    let g = f.primitive_element();
    let mut out = Vec::new();
    if g != 1 {
        let mut d = scalar_matrix(m, 1);
        d[0][0] = g;
        out.push(SemilinearMap::linear(d));
    }
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for c in f.additive_basis() {
                let mut t = scalar_matrix(m, 1);
                t[i][j] = c;
                out.push(SemilinearMap::linear(t));
            }
        }
    }
    out
}
