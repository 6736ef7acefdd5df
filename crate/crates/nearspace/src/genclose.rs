//! The subgroup generated by a set of vectors, computed two independent
//! ways, plus seed sets and the maximal seed matrix.
//!
//! **Column classification** ([`generated_subgroup`]): a simple vector
//! `e` (weight 1 or 2) kills every input vector under the scalar product
//! exactly when one matrix column is identically zero (weight 1) or one
//! column is a left multiple of another (weight 2). The common kernel of
//! all such certificates is the generated subgroup, so grouping the
//! nonzero columns of the input matrix into mutual-left-multiple classes
//! yields its canonical form directly — one block per class — in
//! `O(k·n)` nearfield operations. The derivation is spelled out in the
//! guide chapter on generation.
//!
//! **Linear-combination closure** ([`lc_closure`]): iterate "take all
//! sums of scalar multiples" until a fixpoint. Slow but obviously
//! correct, which makes it the oracle the classification is tested
//! against; it also measures *how many* rounds are needed, the linearity
//! index of the input.

use crate::counting::BigCount;
use crate::ff::FieldElement;
use crate::nearfield::Nearfield;
use crate::nvspace::{scalar_act, CanonicalSubgroup, SimpleVector, Vector};
use crate::{Error, Result};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::RangeInclusive;

/// Canonical form of the generated subgroup together with its
/// orthogonality certificates and the column classes that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenResult {
    pub subgroup: CanonicalSubgroup,
    /// Simple vectors orthogonal to everything in the subgroup: one
    /// weight-1 vector per forced-zero coordinate, and per block one
    /// weight-2 vector linking the pivot to each other block coordinate.
    /// Empty exactly when the subgroup is all of `R^n`.
    pub certificates: Vec<SimpleVector>,
    /// Nonzero input columns grouped into mutual-left-multiple classes,
    /// each sorted, classes ordered by smallest member.
    pub column_classes: Vec<Vec<usize>>,
}

/// Trace of the linear-combination closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureTrace {
    /// Set sizes per round, starting at the inputs plus zero. Sizes
    /// strictly increase until the last entry, which repeats its
    /// predecessor to show stabilization.
    pub levels: Vec<u64>,
    /// Smallest round whose set equals the generated subgroup.
    pub index: u32,
    /// The generated subgroup, materialized and sorted.
    pub elements: Vec<Vector>,
}

fn check_input_dims(n: usize, vectors: &[Vector]) -> Result<()> {
    for v in vectors {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.dim(),
            });
        }
    }
    Ok(())
}

/// Classifies the nonzero columns of the `k × n` input matrix into
/// mutual-left-multiple classes. Returns `(classes, factors)` where
/// `factors[j]` is the left factor taking the class pivot column to
/// column `j` (the block value `u_j`).
fn classify_columns(
    nf: &Nearfield,
    n: usize,
    vectors: &[Vector],
) -> Result<(Vec<Vec<usize>>, Vec<FieldElement>)> {
    let k = vectors.len();
    let mut factors = vec![FieldElement::ZERO; n];
    // Normalized column -> members. The normalization left-multiplies by
    // the inverse of the first nonzero entry, so two columns normalize
    // equally iff each is a left multiple of the other.
    let mut groups: BTreeMap<Vec<FieldElement>, Vec<usize>> = BTreeMap::new();
    for j in 0..n {
        let col: Vec<FieldElement> = vectors.iter().map(|v| v.get(j)).collect();
        if let Some(first) = col.iter().position(|c| !c.is_zero()) {
            let scale = nf.inv(col[first])?;
            let normalized: Vec<FieldElement> = col.iter().map(|&c| nf.mul(scale, c)).collect();
            groups.entry(normalized).or_default().push(j);
        }
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);

    for class in &classes {
        let pivot = class[0];
        for &j in class {
            // u_j is the factor with col_j = u_j ∘ col_pivot, read off
            // any row where the pivot column is nonzero; it must agree
            // across every row or the classification is broken.
            let mut factor = None;
            for t in 0..k {
                let cp = vectors[t].get(pivot);
                let cj = vectors[t].get(j);
                if cp.is_zero() {
                    if !cj.is_zero() {
                        return Err(Error::InternalInconsistency(format!(
                            "column {j} not a left multiple of its class pivot {pivot}"
                        )));
                    }
                    continue;
                }
                let r = nf.mul(cj, nf.inv(cp)?);
                match factor {
                    None => factor = Some(r),
                    Some(prev) if prev != r => {
                        return Err(Error::InternalInconsistency(format!(
                            "inconsistent left factor for column {j} in class of {pivot}"
                        )))
                    }
                    _ => {}
                }
            }
            factors[j] = factor.ok_or_else(|| {
                Error::InternalInconsistency(format!("class pivot {pivot} has a zero column"))
            })?;
        }
    }
    Ok((classes, factors))
}

/// Computes the canonical form of the subgroup generated by `vectors`
/// inside `R^n`, with certificates, by column classification.
pub fn generated_subgroup(nf: &Nearfield, n: usize, vectors: &[Vector]) -> Result<GenResult> {
    check_input_dims(n, vectors)?;
    let (classes, factors) = classify_columns(nf, n, vectors)?;

    let mut blocks = Vec::with_capacity(classes.len());
    let mut covered = vec![false; n];
    for class in &classes {
        let pivot = class[0];
        let values: BTreeMap<usize, FieldElement> =
            class.iter().map(|&j| (j, factors[j])).collect();
        debug_assert_eq!(values[&pivot], FieldElement::ONE);
        for &j in class {
            covered[j] = true;
        }
        blocks.push(crate::nvspace::Block { pivot, values });
    }
    let subgroup = CanonicalSubgroup::new(n, blocks)?;

    let mut certificates = Vec::new();
    for (j, &c) in covered.iter().enumerate() {
        if !c {
            certificates.push(SimpleVector::weight_one(n, j));
        }
    }
    for class in &classes {
        let pivot = class[0];
        for &j in &class[1..] {
            let value = nf.neg(nf.inv(factors[j])?);
            certificates.push(SimpleVector::weight_two(n, pivot, j, value));
        }
    }
    certificates.sort();

    Ok(GenResult {
        subgroup,
        certificates,
        column_classes: classes,
    })
}

/// Vector representation used inside the closure loops. The packed form
/// keeps one bit field per coordinate inside a `u128`, which avoids
/// allocating in the hot path; the dense form covers ambient spaces too
/// wide to pack.
trait VecRepr {
    type Key: Clone + Eq + std::hash::Hash;
    fn pack(&self, v: &Vector) -> Self::Key;
    fn unpack(&self, key: &Self::Key) -> Vector;
    fn add(&self, nf: &Nearfield, a: &Self::Key, b: &Self::Key) -> Self::Key;
    fn act(&self, nf: &Nearfield, a: &Self::Key, r: FieldElement) -> Self::Key;
}

struct PackedRepr {
    n: usize,
    bits: u32,
    mask: u128,
}

impl PackedRepr {
    fn fits(order: u64, n: usize) -> Option<PackedRepr> {
        let bits = 64 - (order - 1).leading_zeros().min(63);
        (bits as usize * n.max(1) <= 128).then_some(PackedRepr {
            n,
            bits,
            mask: (1u128 << bits) - 1,
        })
    }
}

impl VecRepr for PackedRepr {
    type Key = u128;

    fn pack(&self, v: &Vector) -> u128 {
        v.coords()
            .iter()
            .rev()
            .fold(0u128, |acc, c| (acc << self.bits) | c.0 as u128)
    }

    fn unpack(&self, key: &u128) -> Vector {
        Vector::new(
            (0..self.n)
                .map(|j| FieldElement(((key >> (j as u32 * self.bits)) & self.mask) as u32))
                .collect(),
        )
    }

    fn add(&self, nf: &Nearfield, a: &u128, b: &u128) -> u128 {
        let mut out = 0u128;
        for j in 0..self.n {
            let shift = j as u32 * self.bits;
            let x = FieldElement(((a >> shift) & self.mask) as u32);
            let y = FieldElement(((b >> shift) & self.mask) as u32);
            out |= (nf.add(x, y).0 as u128) << shift;
        }
        out
    }

    fn act(&self, nf: &Nearfield, a: &u128, r: FieldElement) -> u128 {
        let mut out = 0u128;
        for j in 0..self.n {
            let shift = j as u32 * self.bits;
            let x = FieldElement(((a >> shift) & self.mask) as u32);
            out |= (nf.mul(x, r).0 as u128) << shift;
        }
        out
    }
}

struct DenseRepr;

impl VecRepr for DenseRepr {
    type Key = Vector;

    fn pack(&self, v: &Vector) -> Vector {
        v.clone()
    }

    fn unpack(&self, key: &Vector) -> Vector {
        key.clone()
    }

    fn add(&self, nf: &Nearfield, a: &Vector, b: &Vector) -> Vector {
        crate::nvspace::add(nf, a, b).expect("equal dims")
    }

    fn act(&self, nf: &Nearfield, a: &Vector, r: FieldElement) -> Vector {
        scalar_act(nf, a, r)
    }
}

fn closure_levels<R: VecRepr>(
    nf: &Nearfield,
    repr: &R,
    zero: R::Key,
    inputs: &[R::Key],
    dim: usize,
    cap: u64,
) -> Result<(Vec<u64>, Vec<R::Key>)> {
    let p = nf.characteristic() as usize;
    let mut current: Vec<R::Key> = Vec::with_capacity(inputs.len() + 1);
    let mut seen: HashSet<R::Key> = HashSet::with_capacity(inputs.len() + 1);
    for key in inputs.iter().chain(std::iter::once(&zero)) {
        if seen.insert(key.clone()) {
            current.push(key.clone());
        }
    }
    let mut levels = vec![current.len() as u64];

    loop {
        let mut multiples: HashSet<R::Key> = HashSet::with_capacity(current.len() * 2);
        for w in &current {
            for r in nf.elements() {
                multiples.insert(repr.act(nf, w, r));
            }
        }

        // Additive span: the ambient group has prime exponent p, so each
        // generator outside the running span multiplies its size by p.
        let mut span: HashSet<R::Key> = HashSet::with_capacity(current.len() * 2);
        let mut list: Vec<R::Key> = vec![zero.clone()];
        span.insert(zero.clone());
        for m in &multiples {
            if span.contains(m) {
                continue;
            }
            if list.len() * p > cap as usize {
                return Err(Error::CapExceeded {
                    dim,
                    size: (list.len() * p) as u128,
                    cap: cap as u128,
                });
            }
            let base_len = list.len();
            let mut shift = m.clone();
            for _ in 1..p {
                for i in 0..base_len {
                    let t = repr.add(nf, &list[i], &shift);
                    span.insert(t.clone());
                    list.push(t);
                }
                shift = repr.add(nf, &shift, m);
            }
        }

        debug_assert!(current.iter().all(|k| span.contains(k)));
        let stabilized = list.len() == current.len();
        levels.push(list.len() as u64);
        current = list;
        if stabilized {
            return Ok((levels, current));
        }
    }
}

/// Closure of a set of vectors under sums of scalar multiples, levels
/// counted until stabilization.
///
/// Level 0 is the input plus the zero vector; level `i + 1` is the
/// additive span of all scalar multiples of level `i`. The trace records
/// the size of every level, the stabilization index, and the final
/// element set — which must equal the generated subgroup computed by
/// column classification, a fact the test suites lean on heavily.
pub fn lc_closure(nf: &Nearfield, n: usize, vectors: &[Vector], cap: u64) -> Result<ClosureTrace> {
    check_input_dims(n, vectors)?;
    let dim = generated_subgroup(nf, n, vectors)?.subgroup.dim();
    let expected = (nf.order() as u128).checked_pow(dim as u32);
    match expected {
        Some(size) if size <= cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                dim,
                size: expected.unwrap_or(u128::MAX),
                cap: cap as u128,
            })
        }
    }

    let (levels, elements) = match PackedRepr::fits(nf.order(), n) {
        Some(repr) => {
            let inputs: Vec<u128> = vectors.iter().map(|v| repr.pack(v)).collect();
            let (levels, keys) =
                closure_levels(nf, &repr, repr.pack(&Vector::zero(n)), &inputs, dim, cap)?;
            (levels, keys.iter().map(|k| repr.unpack(k)).collect())
        }
        None => {
            let inputs: Vec<Vector> = vectors.to_vec();
            closure_levels(nf, &DenseRepr, Vector::zero(n), &inputs, dim, cap)?
        }
    };

    let mut elements: Vec<Vector> = elements;
    elements.sort();

    Ok(ClosureTrace {
        index: (levels.len() - 2) as u32,
        levels,
        elements,
    })
}

/// `(q^k - 1) / (q - 1)`: the maximum dimension of a space that `k`
/// vectors can generate over a proper nearfield of order `q`.
pub fn mdim(q: u64, k: u32) -> BigCount {
    assert!(q >= 2 && k >= 1);
    (BigUint::from(q).pow(k) - 1u32) / (q - 1)
}

/// Smallest `k` with `(q^k - 1)/(q - 1) ≥ l`; 0 when `l = 0`.
pub fn seed_number(q: u64, l: u64) -> u32 {
    assert!(q >= 2);
    if l == 0 {
        return 0;
    }
    let mut k = 1u32;
    let mut reach = 1u128;
    while reach < l as u128 {
        k += 1;
        reach = reach * q as u128 + 1;
    }
    k
}

/// The `k`-row matrix whose columns are every nonzero vector of `R^k`
/// with first nonzero coordinate 1, sorted lexicographically by element
/// index. No two columns are left multiples of each other, so its rows
/// generate the full `(q^k - 1)/(q - 1)`-dimensional space.
pub fn seed_matrix(nf: &Nearfield, k: u32, column_cap: u64) -> Result<Vec<Vector>> {
    let cols_big = mdim(nf.order(), k);
    let n_cols = u64::try_from(&cols_big).ok().filter(|&c| c <= column_cap);
    let Some(n_cols) = n_cols else {
        return Err(Error::TooLarge {
            size: u128::try_from(&cols_big).unwrap_or(u128::MAX),
            cap: column_cap as u128,
        });
    };

    let k = k as usize;
    let mut columns: Vec<Vector> = Vec::with_capacity(n_cols as usize);
    for b in 0..k {
        // First nonzero coordinate at b, value 1, free suffix.
        let free = k - b - 1;
        let total = (nf.order() as u128).pow(free as u32);
        for mut t in 0..total {
            let mut col = Vector::zero(k);
            col.set(b, FieldElement::ONE);
            for j in b + 1..k {
                col.set(j, FieldElement((t % nf.order() as u128) as u32));
                t /= nf.order() as u128;
            }
            columns.push(col);
        }
    }
    columns.sort();
    debug_assert_eq!(columns.len() as u64, n_cols);

    let rows = (0..k)
        .map(|t| Vector::new(columns.iter().map(|c| c.get(t)).collect()))
        .collect();
    Ok(rows)
}

/// A smallest seed set for a canonical subgroup: `seed_number(q, dim)`
/// vectors whose generated subgroup is exactly the input.
///
/// Rows of the seed matrix, truncated to the first `dim` columns,
/// generate the full coordinate space of the blocks; pushing them
/// through the block-coordinate isomorphism lands a seed set inside the
/// subgroup. The result is re-verified by [`generated_subgroup`] before
/// being returned.
pub fn find_seed_set(nf: &Nearfield, t: &CanonicalSubgroup) -> Result<Vec<Vector>> {
    let l = t.dim();
    if l == 0 {
        return Ok(Vec::new());
    }
    let k = seed_number(nf.order(), l as u64);
    let rows = seed_matrix(nf, k, u64::MAX)?;
    let mut seeds = Vec::with_capacity(k as usize);
    for row in &rows {
        let truncated = Vector::new(row.coords()[..l].to_vec());
        seeds.push(t.from_coords(nf, &truncated)?);
    }
    let check = generated_subgroup(nf, t.ambient_dim(), &seeds)?;
    if check.subgroup != *t {
        return Err(Error::InternalInconsistency(
            "seed set does not regenerate its subgroup".into(),
        ));
    }
    Ok(seeds)
}

/// Candidate generation strategy for the linearity-index search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStrategy {
    /// Every multiset of normalized vectors (zero allowed, otherwise
    /// first nonzero coordinate 1) — the index is invariant under right
    /// scaling of the inputs, so normalized tuples cover all values.
    Exhaustive,
    /// `count` uniformly random tuples per `(n, k)` cell, from a seeded
    /// stream that is independent of thread count.
    Random { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchCell {
    pub n: usize,
    pub k: usize,
    pub candidates: u64,
    pub max_index: u32,
}

/// Outcome of a linearity-index search over a grid of `(n, k)` cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub strategy: SearchStrategy,
    pub max_index: u32,
    /// Every inspected tuple achieving `max_index`, sorted and deduped.
    pub witnesses: Vec<Vec<Vector>>,
    /// Instances seen per index value, across all cells.
    pub counts: BTreeMap<u32, u64>,
    pub cells: Vec<SearchCell>,
}

/// All normalized vectors of `R^n`: the zero vector plus every vector
/// whose first nonzero coordinate is 1, sorted.
pub fn normalized_vectors(nf: &Nearfield, n: usize) -> Vec<Vector> {
    let q = nf.order();
    let mut out = vec![Vector::zero(n)];
    for b in 0..n {
        let free = n - b - 1;
        for mut t in 0..(q as u128).pow(free as u32) {
            let mut v = Vector::zero(n);
            v.set(b, FieldElement::ONE);
            for j in b + 1..n {
                v.set(j, FieldElement((t % q as u128) as u32));
                t /= q as u128;
            }
            out.push(v);
        }
    }
    out.sort();
    out
}

fn multisets_of(list: &[Vector], k: usize) -> Vec<Vec<Vector>> {
    fn rec(
        list: &[Vector],
        k: usize,
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<Vector>>,
    ) {
        if stack.len() == k {
            out.push(stack.iter().map(|&i| list[i].clone()).collect());
            return;
        }
        for i in start..list.len() {
            stack.push(i);
            rec(list, k, i, stack, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    rec(list, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Measures the linearity index over a grid of ambient dimensions and
/// tuple sizes, reporting the maximum index observed, every witness
/// tuple achieving it, and counts per index value.
///
/// Deterministic for fixed parameters: candidates are materialized in a
/// canonical order before being scored in parallel, and every witness is
/// re-verified by a fresh closure run.
pub fn search_linearity_index(
    nf: &Nearfield,
    n_range: RangeInclusive<usize>,
    k_range: RangeInclusive<usize>,
    strategy: SearchStrategy,
    cap: u64,
) -> Result<SearchReport> {
    let mut cells = Vec::new();
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut max_index = 0u32;
    let mut witnesses: BTreeSet<Vec<Vector>> = BTreeSet::new();

    for n in n_range.clone() {
        let space = (nf.order() as u128).checked_pow(n as u32);
        match space {
            Some(size) if size <= cap as u128 => {}
            _ => {
                return Err(Error::CapExceeded {
                    dim: n,
                    size: space.unwrap_or(u128::MAX),
                    cap: cap as u128,
                })
            }
        }
        for k in k_range.clone() {
            let candidates: Vec<Vec<Vector>> = match strategy {
                SearchStrategy::Exhaustive => {
                    let normalized = normalized_vectors(nf, n);
                    multisets_of(&normalized, k)
                }
                SearchStrategy::Random { count, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((n as u64) << 32) | k as u64);
                    (0..count)
                        .map(|_| {
                            (0..k)
                                .map(|_| {
                                    Vector::new(
                                        (0..n)
                                            .map(|_| {
                                                FieldElement(rng.gen_range(0..nf.order()) as u32)
                                            })
                                            .collect(),
                                    )
                                })
                                .collect()
                        })
                        .collect()
                }
            };

            let indices: Vec<u32> = candidates
                .par_iter()
                .map(|tuple| Ok(lc_closure(nf, n, tuple, cap)?.index))
                .collect::<Result<_>>()?;

            let mut cell_max = 0u32;
            for (tuple, &index) in candidates.iter().zip(&indices) {
                *counts.entry(index).or_default() += 1;
                cell_max = cell_max.max(index);
                if index > max_index {
                    max_index = index;
                    witnesses.clear();
                }
                if index == max_index {
                    witnesses.insert(tuple.clone());
                }
            }
            cells.push(SearchCell {
                n,
                k,
                candidates: candidates.len() as u64,
                max_index: cell_max,
            });
        }
    }

    // Tuples recorded while the running max was smaller can linger; a
    // fresh closure run per witness drops them and double-checks the
    // rest.
    let witnesses: Vec<Vec<Vector>> = witnesses
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|tuple| {
            let n = tuple.first().map_or(0, Vector::dim);
            lc_closure(nf, n, tuple, cap).map(|t| t.index) == Ok(max_index)
        })
        .collect();

    Ok(SearchReport {
        strategy,
        max_index,
        witnesses,
        counts,
        cells,
    })
}
