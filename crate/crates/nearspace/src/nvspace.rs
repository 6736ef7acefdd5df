//! Vectors of `R^n` over a nearfield and the canonical form of an
//! `R`-subgroup.
//!
//! The scalar action is on the right, `(v_1, …, v_n) ∘ r =
//! (v_1 ∘ r, …, v_n ∘ r)`, so left distributivity of the nearfield makes
//! every coordinate map `r ↦ v_i ∘ r` additive. An `R`-subgroup — a
//! subset closed under addition and the scalar action — always splits as
//! a direct sum of lines `u_i R` whose supports are mutually disjoint,
//! and [`CanonicalSubgroup`] stores exactly one normalized representative
//! of that splitting: block pivots are the smallest support indices,
//! pivot values are 1, and blocks are sorted by pivot. Field-wise
//! equality of canonical forms then coincides with equality of the
//! underlying element sets.

use crate::ff::FieldElement;
use crate::nearfield::Nearfield;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default cap on materialized element sets.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// An element of `R^n`, stored as nearfield element indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<FieldElement>,
}

impl Vector {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Vector { coords }
    }

    /// Builds a vector from raw element indices, checking them against
    /// the nearfield order.
    pub fn from_indices(nf: &Nearfield, indices: &[u64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len());
        for &i in indices {
            let e = nf.element(i).ok_or(Error::InternalInconsistency(format!(
                "element index {i} out of range for order {}",
                nf.order()
            )))?;
            coords.push(e);
        }
        Ok(Vector { coords })
    }

    pub fn zero(n: usize) -> Self {
        Vector {
            coords: vec![FieldElement::ZERO; n],
        }
    }

    /// Standard basis vector `e_j`.
    pub fn basis(n: usize, j: usize) -> Self {
        let mut v = Vector::zero(n);
        v.coords[j] = FieldElement::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn get(&self, j: usize) -> FieldElement {
        self.coords[j]
    }

    pub(crate) fn set(&mut self, j: usize, v: FieldElement) {
        self.coords[j] = v;
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        });
    }
    Ok(())
}

/// Componentwise sum.
pub fn add(nf: &Nearfield, x: &Vector, y: &Vector) -> Result<Vector> {
    check_dims(x.dim(), y.dim())?;
    Ok(Vector {
        coords: x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(&a, &b)| nf.add(a, b))
            .collect(),
    })
}

/// Right scalar action `v ∘ r`, componentwise.
pub fn scalar_act(nf: &Nearfield, v: &Vector, r: FieldElement) -> Vector {
    Vector {
        coords: v.coords.iter().map(|&c| nf.mul(c, r)).collect(),
    }
}

/// `⟨x, y⟩ = Σ x_i ∘ y_i`, evaluated left to right.
pub fn scalar_product(nf: &Nearfield, x: &Vector, y: &Vector) -> Result<FieldElement> {
    check_dims(x.dim(), y.dim())?;
    let mut acc = FieldElement::ZERO;
    for (&a, &b) in x.coords.iter().zip(&y.coords) {
        acc = nf.add(acc, nf.mul(a, b));
    }
    Ok(acc)
}

/// A vector of weight one or two, normalized so its lowest-index entry
/// is the multiplicative identity. These are the certificates of the
/// orthogonal-set characterization: every `R`-subgroup is the common
/// kernel of a set of simple vectors under the scalar product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleVector {
    n: usize,
    /// One or two `(coordinate, value)` pairs, coordinates strictly
    /// increasing, leading value 1.
    entries: Vec<(usize, FieldElement)>,
}

impl SimpleVector {
    pub fn weight_one(n: usize, j: usize) -> Self {
        debug_assert!(j < n);
        SimpleVector {
            n,
            entries: vec![(j, FieldElement::ONE)],
        }
    }

    pub fn weight_two(n: usize, j: usize, j2: usize, value: FieldElement) -> Self {
        debug_assert!(j < j2 && j2 < n && !value.is_zero());
        SimpleVector {
            n,
            entries: vec![(j, FieldElement::ONE), (j2, value)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, FieldElement)] {
        &self.entries
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn to_vector(&self) -> Vector {
        let mut v = Vector::zero(self.n);
        for &(j, val) in &self.entries {
            v.coords[j] = val;
        }
        v
    }
}

/// One direct summand `u R` of a canonical subgroup: the support and
/// values of `u`, keyed by coordinate, with `values[pivot] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub pivot: usize,
    pub values: BTreeMap<usize, FieldElement>,
}

/// The canonical disjoint-support form `⊕ u_i R` of an `R`-subgroup of
/// `R^n`.
///
/// Coordinates outside every block are forced to zero; the dimension is
/// the number of blocks. Because the normalization picks one
/// representative per scaling/permutation orbit, two canonical forms are
/// field-wise equal exactly when they describe the same element set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalSubgroup {
    n: usize,
    blocks: Vec<Block>,
}

impl CanonicalSubgroup {
    /// Validates and normalizes block order. Rejects overlapping
    /// supports, non-minimal or non-unit pivots, zero values, and
    /// out-of-range coordinates.
    pub fn new(n: usize, mut blocks: Vec<Block>) -> Result<Self> {
        let bad = Error::InternalInconsistency;
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.values.is_empty() {
                return Err(bad("empty block".into()));
            }
            let min = *block.values.keys().next().unwrap();
            if block.pivot != min {
                return Err(bad(format!(
                    "pivot {} is not the smallest support index {min}",
                    block.pivot
                )));
            }
            if block.values[&block.pivot] != FieldElement::ONE {
                return Err(bad(format!("pivot value at {} is not 1", block.pivot)));
            }
            for (&j, &v) in &block.values {
                if j >= n {
                    return Err(bad(format!("coordinate {j} out of range for n = {n}")));
                }
                if v.is_zero() {
                    return Err(bad(format!("zero value stored at coordinate {j}")));
                }
                if seen[j] {
                    return Err(bad(format!("coordinate {j} appears in two blocks")));
                }
                seen[j] = true;
            }
        }
        blocks.sort_by_key(|b| b.pivot);
        Ok(CanonicalSubgroup { n, blocks })
    }

    /// The zero subgroup of `R^n`.
    pub fn zero(n: usize) -> Self {
        CanonicalSubgroup { n, blocks: vec![] }
    }

    /// The full space `R^n`: one singleton block per coordinate.
    pub fn full(n: usize) -> Self {
        let blocks = (0..n)
            .map(|j| Block {
                pivot: j,
                values: BTreeMap::from([(j, FieldElement::ONE)]),
            })
            .collect();
        CanonicalSubgroup { n, blocks }
    }

    /// Canonicalizes a list of nonzero vectors with mutually disjoint
    /// supports into `⊕ u_i R` form: each vector is right-scaled so its
    /// smallest support coordinate is 1.
    pub fn from_disjoint_vectors(nf: &Nearfield, vectors: &[Vector]) -> Result<Self> {
        let n = vectors.first().map_or(0, Vector::dim);
        let mut blocks = Vec::with_capacity(vectors.len());
        for u in vectors {
            check_dims(n, u.dim())?;
            let support = u.support();
            let &pivot = support
                .first()
                .ok_or_else(|| Error::InternalInconsistency("zero basis vector".into()))?;
            let scale = nf.inv(u.get(pivot))?;
            let values = support
                .iter()
                .map(|&j| (j, nf.mul(u.get(j), scale)))
                .collect();
            blocks.push(Block { pivot, values });
        }
        CanonicalSubgroup::new(n, blocks)
    }

    /// Re-runs the structural invariants on a deserialized value and
    /// checks every stored element index against the nearfield order.
    /// Serde builds the struct without going through [`CanonicalSubgroup::new`],
    /// so external input must pass through here.
    pub fn revalidate(&self, nf: &Nearfield) -> Result<CanonicalSubgroup> {
        for b in &self.blocks {
            for &v in b.values.values() {
                if nf.element(v.0 as u64).is_none() {
                    return Err(Error::InternalInconsistency(format!(
                        "element index {} out of range for order {}",
                        v.0,
                        nf.order()
                    )));
                }
            }
        }
        CanonicalSubgroup::new(self.n, self.blocks.clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// The dimension: number of direct summands.
    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Coordinates belonging to no block, forced to zero on members.
    pub fn zero_coordinates(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n];
        for b in &self.blocks {
            for &j in b.values.keys() {
                covered[j] = true;
            }
        }
        covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(j, _)| j)
            .collect()
    }

    /// The block basis vectors `u_i`, densified.
    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.blocks
            .iter()
            .map(|b| {
                let mut v = Vector::zero(self.n);
                for (&j, &val) in &b.values {
                    v.coords[j] = val;
                }
                v
            })
            .collect()
    }

    /// Membership: `v` vanishes outside the blocks, and inside block `i`
    /// it is the scalar multiple `u_i ∘ v_pivot`.
    pub fn contains(&self, nf: &Nearfield, v: &Vector) -> Result<bool> {
        check_dims(self.n, v.dim())?;
        let mut covered = vec![false; self.n];
        for b in &self.blocks {
            let r = v.get(b.pivot);
            for (&j, &u) in &b.values {
                covered[j] = true;
                if v.get(j) != nf.mul(u, r) {
                    return Ok(false);
                }
            }
        }
        for j in 0..self.n {
            if !covered[j] && !v.get(j).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Materializes all `|R|^dim` member vectors, sorted.
    pub fn enumerate(&self, nf: &Nearfield, cap: u64) -> Result<Vec<Vector>> {
        let total = (nf.order() as u128).checked_pow(self.dim() as u32);
        match total {
            Some(t) if t <= cap as u128 => {}
            _ => {
                return Err(Error::TooLarge {
                    size: total.unwrap_or(u128::MAX),
                    cap: cap as u128,
                })
            }
        }
        let mut out = vec![Vector::zero(self.n)];
        for b in &self.blocks {
            let mut next = Vec::with_capacity(out.len() * nf.order() as usize);
            for base in &out {
                for r in nf.elements() {
                    let mut v = base.clone();
                    for (&j, &u) in &b.values {
                        v.coords[j] = nf.mul(u, r);
                    }
                    next.push(v);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Reads the block coordinates of a member: the value at each pivot,
    /// in block order. This is the forward direction of the isomorphism
    /// onto `R^dim`.
    pub fn to_coords(&self, nf: &Nearfield, v: &Vector) -> Result<Vector> {
        if !self.contains(nf, v)? {
            return Err(Error::NotAMember);
        }
        Ok(Vector {
            coords: self.blocks.iter().map(|b| v.get(b.pivot)).collect(),
        })
    }

    /// Rebuilds the member `Σ u_i ∘ w_i` from block coordinates; inverse
    /// of [`CanonicalSubgroup::to_coords`].
    pub fn from_coords(&self, nf: &Nearfield, w: &Vector) -> Result<Vector> {
        check_dims(self.dim(), w.dim())?;
        let mut v = Vector::zero(self.n);
        for (i, b) in self.blocks.iter().enumerate() {
            let r = w.get(i);
            for (&j, &u) in &b.values {
                v.coords[j] = nf.mul(u, r);
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearfield::DicksonPair;

    fn order9() -> Nearfield {
        Nearfield::dickson(DicksonPair::new(3, 2).unwrap()).unwrap()
    }

    fn vec_of(nf: &Nearfield, idx: &[u64]) -> Vector {
        Vector::from_indices(nf, idx).unwrap()
    }

    /// The running dimension-3 example inside `R^5`: blocks spanned by
    /// (1,0,0,1,0), (0,1,1,0,0), (0,0,0,0,1).
    fn sample_subgroup(nf: &Nearfield) -> CanonicalSubgroup {
        CanonicalSubgroup::from_disjoint_vectors(
            nf,
            &[
                vec_of(nf, &[1, 0, 0, 1, 0]),
                vec_of(nf, &[0, 1, 1, 0, 0]),
                vec_of(nf, &[0, 0, 0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn scalar_act_identity_and_zero() {
        let nf = order9();
        let v = vec_of(&nf, &[1, 0, 1]);
        assert_eq!(scalar_act(&nf, &v, FieldElement::ONE), v);
        assert_eq!(scalar_act(&nf, &v, FieldElement::ZERO), Vector::zero(3));
    }

    #[test]
    fn scalar_orbit_of_a_nonzero_vector_has_full_size() {
        let nf = order9();
        let v = vec_of(&nf, &[1, 0, 1]);
        let orbit: std::collections::BTreeSet<_> =
            nf.elements().map(|r| scalar_act(&nf, &v, r)).collect();
        assert_eq!(orbit.len(), 9);
    }

    #[test]
    fn scalar_product_reads_off_basis_coordinates() {
        let nf = order9();
        let x = vec_of(&nf, &[3, 7, 2]);
        for j in 0..3 {
            let e = Vector::basis(3, j);
            assert_eq!(scalar_product(&nf, &e, &x).unwrap(), x.get(j));
        }
        assert_eq!(
            scalar_product(&nf, &Vector::zero(3), &x).unwrap(),
            FieldElement::ZERO
        );
    }

    #[test]
    fn scalar_product_is_asymmetric() {
        // Regression fixture: the first asymmetric pair in index order.
        let nf = order9();
        let mut witness = None;
        'outer: for a in 0..81u64 {
            for b in 0..81u64 {
                let x = vec_of(&nf, &[a % 9, a / 9]);
                let y = vec_of(&nf, &[b % 9, b / 9]);
                if scalar_product(&nf, &x, &y) != scalar_product(&nf, &y, &x) {
                    witness = Some((x, y));
                    break 'outer;
                }
            }
        }
        let (x, y) = witness.expect("order 9 scalar product is not symmetric");
        assert_ne!(
            scalar_product(&nf, &x, &y).unwrap(),
            scalar_product(&nf, &y, &x).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let nf = order9();
        let x = vec_of(&nf, &[1, 0]);
        let y = vec_of(&nf, &[1, 0, 0]);
        assert!(matches!(
            add(&nf, &x, &y),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            scalar_product(&nf, &x, &y),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_of_the_sample_subgroup() {
        let nf = order9();
        let t = sample_subgroup(&nf);
        assert_eq!(t.dim(), 3);
        assert!(t.contains(&nf, &Vector::zero(5)).unwrap());
        for u in t.basis_vectors() {
            assert!(t.contains(&nf, &u).unwrap());
        }
        assert!(t.contains(&nf, &vec_of(&nf, &[1, 0, 0, 1, 1])).unwrap());
        assert!(t.contains(&nf, &vec_of(&nf, &[0, 1, 1, 0, 2])).unwrap());
        // Break the block coupling: coordinate 3 must equal coordinate 0.
        assert!(!t.contains(&nf, &vec_of(&nf, &[1, 0, 0, 2, 0])).unwrap());
        // Coordinate 2 must follow coordinate 1.
        assert!(!t.contains(&nf, &vec_of(&nf, &[0, 0, 1, 0, 0])).unwrap());
    }

    #[test]
    fn enumerate_sizes() {
        let nf = order9();
        assert_eq!(
            CanonicalSubgroup::zero(4).enumerate(&nf, 100).unwrap(),
            vec![Vector::zero(4)]
        );
        let single =
            CanonicalSubgroup::from_disjoint_vectors(&nf, &[vec_of(&nf, &[1, 0, 1])]).unwrap();
        let els = single.enumerate(&nf, 100).unwrap();
        assert_eq!(els.len(), 9);
        for v in &els {
            assert!(single.contains(&nf, v).unwrap());
        }
        let t = sample_subgroup(&nf);
        let els = t.enumerate(&nf, 1000).unwrap();
        assert_eq!(els.len(), 729);
        assert!(els.iter().all(|v| t.contains(&nf, v).unwrap()));
        assert!(matches!(
            t.enumerate(&nf, 100).unwrap_err(),
            Error::TooLarge { .. }
        ));
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let nf = order9();
        let t = CanonicalSubgroup::from_disjoint_vectors(
            &nf,
            &[vec_of(&nf, &[1, 2, 0]), vec_of(&nf, &[0, 0, 5])],
        )
        .unwrap();
        let els: std::collections::BTreeSet<_> =
            t.enumerate(&nf, 1000).unwrap().into_iter().collect();
        // All 729 vectors of R^3, each tested both ways.
        for i in 0..729u64 {
            let v = vec_of(&nf, &[i % 9, (i / 9) % 9, i / 81]);
            assert_eq!(t.contains(&nf, &v).unwrap(), els.contains(&v));
        }
    }

    #[test]
    fn block_coordinates_round_trip() {
        let nf = order9();
        let t = sample_subgroup(&nf);
        assert_eq!(
            t.to_coords(&nf, &Vector::zero(5)).unwrap(),
            Vector::zero(3)
        );
        for (i, u) in t.basis_vectors().iter().enumerate() {
            assert_eq!(t.to_coords(&nf, u).unwrap(), Vector::basis(3, i));
        }
        // Coordinates are read at the pivots; derived by decomposing
        // against the block basis.
        assert_eq!(
            t.to_coords(&nf, &vec_of(&nf, &[1, 0, 0, 1, 1])).unwrap(),
            vec_of(&nf, &[1, 0, 1])
        );
        assert_eq!(
            t.to_coords(&nf, &vec_of(&nf, &[0, 1, 1, 0, 2])).unwrap(),
            vec_of(&nf, &[0, 1, 2])
        );
        for v in t.enumerate(&nf, 1000).unwrap() {
            let w = t.to_coords(&nf, &v).unwrap();
            assert_eq!(t.from_coords(&nf, &w).unwrap(), v);
        }
        assert_eq!(
            t.to_coords(&nf, &vec_of(&nf, &[1, 0, 0, 2, 0])),
            Err(Error::NotAMember)
        );
    }

    #[test]
    fn block_coordinates_are_a_module_morphism() {
        let nf = order9();
        let t = sample_subgroup(&nf);
        let els = t.enumerate(&nf, 1000).unwrap();
        // Bijectivity onto R^3.
        let image: std::collections::BTreeSet<_> =
            els.iter().map(|v| t.to_coords(&nf, v).unwrap()).collect();
        assert_eq!(image.len(), 729);
        // Additivity and scalar compatibility on a deterministic slice.
        for (i, x) in els.iter().step_by(31).enumerate() {
            let y = &els[(i * 97) % els.len()];
            let sum = add(&nf, x, y).unwrap();
            assert_eq!(
                t.to_coords(&nf, &sum).unwrap(),
                add(
                    &nf,
                    &t.to_coords(&nf, x).unwrap(),
                    &t.to_coords(&nf, y).unwrap()
                )
                .unwrap()
            );
            for r in nf.elements() {
                assert_eq!(
                    t.to_coords(&nf, &scalar_act(&nf, x, r)).unwrap(),
                    scalar_act(&nf, &t.to_coords(&nf, x).unwrap(), r)
                );
            }
        }
    }

    #[test]
    fn canonical_equality_is_a_complete_invariant_in_dim_one() {
        // All ten one-dimensional subgroups of R^2 have pairwise distinct
        // element sets.
        let nf = order9();
        let mut subs = Vec::new();
        subs.push(CanonicalSubgroup::from_disjoint_vectors(&nf, &[vec_of(&nf, &[0, 1])]).unwrap());
        for x in 0..9u64 {
            subs.push(
                CanonicalSubgroup::from_disjoint_vectors(&nf, &[vec_of(&nf, &[1, x])]).unwrap(),
            );
        }
        assert_eq!(subs.len(), 10);
        let sets: Vec<std::collections::BTreeSet<_>> = subs
            .iter()
            .map(|t| t.enumerate(&nf, 100).unwrap().into_iter().collect())
            .collect();
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                assert_eq!(subs[i] == subs[j], sets[i] == sets[j]);
            }
        }
    }

    #[test]
    fn invalid_canonical_forms_are_rejected() {
        let one = FieldElement::ONE;
        let two = FieldElement(2);
        // Pivot value != 1.
        assert!(CanonicalSubgroup::new(
            2,
            vec![Block {
                pivot: 0,
                values: BTreeMap::from([(0, two)]),
            }],
        )
        .is_err());
        // Pivot not the smallest support index.
        assert!(CanonicalSubgroup::new(
            2,
            vec![Block {
                pivot: 1,
                values: BTreeMap::from([(0, one), (1, one)]),
            }],
        )
        .is_err());
        // Overlapping supports.
        assert!(CanonicalSubgroup::new(
            2,
            vec![
                Block {
                    pivot: 0,
                    values: BTreeMap::from([(0, one), (1, one)]),
                },
                Block {
                    pivot: 1,
                    values: BTreeMap::from([(1, one)]),
                },
            ],
        )
        .is_err());
        // Out-of-range coordinate.
        assert!(CanonicalSubgroup::new(
            1,
            vec![Block {
                pivot: 1,
                values: BTreeMap::from([(1, one)]),
            }],
        )
        .is_err());
    }

    #[test]
    fn json_shapes_are_stable() {
        let nf = order9();
        let v = vec_of(&nf, &[1, 0, 0, 1, 1]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1,0,0,1,1]");
        let t = sample_subgroup(&nf);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"n":5,"blocks":[{"pivot":0,"values":{"0":1,"3":1}},{"pivot":1,"values":{"1":1,"2":1}},{"pivot":4,"values":{"4":1}}]}"#
        );
        let back: CanonicalSubgroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let back_v: Vector = serde_json::from_str("[1,0,0,1,1]").unwrap();
        assert_eq!(back_v, v);
    }
}
