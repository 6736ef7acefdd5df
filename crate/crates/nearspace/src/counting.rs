//! Exact counts of `R`-subgroups of `R^n` by dimension.
//!
//! The canonical disjoint-support form turns counting subgroups into
//! counting set partitions: choose the forced-zero coordinates, partition
//! the rest into block supports (a Stirling number of the second kind),
//! and pick the non-pivot block values. Every count here is exact
//! big-integer arithmetic — the tables reach 10^16 and intermediate
//! products go further, so nothing in this module touches floating
//! point.
//!
//! [`brute_count`] is the independent check: it enumerates generator
//! pairs, canonicalizes each generated subgroup, and dedups. Its reach is
//! justified by the seed-number formula — in ambient dimension up to
//! `mdim(q, 2) = q + 1`, every subgroup is generated by at most two
//! vectors, so pair enumeration sees each one.

use crate::ff::FieldElement;
use crate::genclose::{generated_subgroup, mdim};
use crate::nearfield::Nearfield;
use crate::nvspace::{CanonicalSubgroup, Vector};
use crate::{Error, Result};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Mutex;

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Default budget for brute-force pair enumeration: `q^(2n)` pairs.
pub const DEFAULT_PAIR_BUDGET: u64 = 50_000_000;

/// Stirling numbers of the second kind, memoized per process as a
/// growing triangle.
static STIRLING_ROWS: Mutex<Vec<Vec<BigUint>>> = Mutex::new(Vec::new());

/// `{n \brace k}`: partitions of an `n`-set into `k` nonempty parts,
/// from the recurrence `S(n, k) = k·S(n-1, k) + S(n-1, k-1)`.
pub fn stirling2(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigUint::ZERO;
    }
    let n = n as usize;
    let mut rows = STIRLING_ROWS.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigUint::from(1u32)]);
    }
    while rows.len() <= n {
        let prev = rows.last().unwrap();
        let m = rows.len();
        let mut row = vec![BigUint::ZERO; m + 1];
        for j in 1..=m {
            let carry = if j < prev.len() {
                &prev[j] * BigUint::from(j)
            } else {
                BigUint::ZERO
            };
            row[j] = carry + &prev[j - 1];
        }
        rows.push(row);
    }
    rows[n][k as usize].clone()
}

/// Exact binomial coefficient by stepwise multiplicative evaluation.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of `R`-subgroups of `R^n` of dimension `l` over a nearfield of
/// order `q`: sum over the size `d` of the forced-zero coordinate set of
/// `C(n, d) · {n-d \brace l} · (q-1)^(n-d-l)`.
pub fn count_subgroups(q: u64, l: u64, n: u64) -> BigCount {
    assert!(q >= 3, "counting needs a nearfield order of at least 3");
    if l > n {
        return BigUint::ZERO;
    }
    let mut total = BigUint::ZERO;
    for d in 0..=(n - l) {
        total +=
            binomial(n, d) * stirling2(n - d, l) * BigUint::from(q - 1).pow((n - d - l) as u32);
    }
    total
}

/// Number of all `R`-subgroups of `R^n`.
pub fn count_all(q: u64, n: u64) -> BigCount {
    (0..=n).map(|l| count_subgroups(q, l, n)).sum()
}

/// One row of a count table: the per-dimension counts for a fixed `n`
/// plus their total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub n: u64,
    pub counts: Vec<BigCount>,
    pub total: BigCount,
}

/// Per-dimension subgroup counts for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub q: u64,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn build(q: u64, n_max: u64) -> CountTable {
        let rows = (0..=n_max)
            .map(|n| {
                let counts: Vec<BigCount> = (0..=n).map(|l| count_subgroups(q, l, n)).collect();
                let total = counts.iter().sum();
                CountRow { n, counts, total }
            })
            .collect();
        CountTable { q, rows }
    }
}

/// Per-dimension subgroup counts measured by exhaustive generator
/// enumeration: the empty set, every singleton, and every ordered pair
/// of vectors in `R^n`, canonicalized and deduped.
///
/// Requires `n ≤ mdim(q, 2)`, the range in which two generators reach
/// every subgroup, and a pair budget of `q^(2n)`.
pub fn brute_count(nf: &Nearfield, n: u64, pair_budget: u64) -> Result<Vec<u64>> {
    let q = nf.order();
    if BigUint::from(n) > mdim(q, 2) {
        return Err(Error::TooLarge {
            size: n as u128,
            cap: u128::try_from(&mdim(q, 2)).unwrap_or(u128::MAX),
        });
    }
    let pairs = (q as u128).checked_pow(2 * n as u32);
    match pairs {
        Some(p) if p <= pair_budget as u128 => {}
        _ => {
            return Err(Error::TooLarge {
                size: pairs.unwrap_or(u128::MAX),
                cap: pair_budget as u128,
            })
        }
    }
    let pairs = pairs.unwrap() as u64;
    let n = n as usize;

    let decode = |mut idx: u64| -> (Vector, Vector) {
        let mut a = Vector::zero(n);
        let mut b = Vector::zero(n);
        for j in 0..n {
            a.set(j, FieldElement((idx % q) as u32));
            idx /= q;
        }
        for j in 0..n {
            b.set(j, FieldElement((idx % q) as u32));
            idx /= q;
        }
        (a, b)
    };

    let chunk = 1u64 << 16;
    let chunks: u64 = pairs.div_ceil(chunk);
    let mut seen: std::collections::HashSet<(usize, u128)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = std::collections::HashSet::new();
            for idx in c * chunk..((c + 1) * chunk).min(pairs) {
                let (a, b) = decode(idx);
                let sub = generated_subgroup(nf, n, &[a, b])
                    .expect("pair generation cannot fail")
                    .subgroup;
                local.insert((sub.dim(), canonical_key(q, n, &sub)));
            }
            local
        })
        .reduce(std::collections::HashSet::new, |mut acc, s| {
            acc.extend(s);
            acc
        });

    // The empty set and the singletons are subsumed by pairs with a zero
    // partner, but enumerate them anyway; they are cheap.
    let empty = generated_subgroup(nf, n, &[])?.subgroup;
    seen.insert((empty.dim(), canonical_key(q, n, &empty)));
    for idx in 0..q.pow(n as u32) {
        let (a, _) = decode(idx);
        let sub = generated_subgroup(nf, n, &[a])?.subgroup;
        seen.insert((sub.dim(), canonical_key(q, n, &sub)));
    }

    let mut counts = vec![0u64; n + 1];
    for (dim, _) in seen {
        counts[dim] += 1;
    }
    Ok(counts)
}

/// Compact complete key for a canonical form: per coordinate, the
/// 1-based block id (in pivot order, 0 for forced-zero) and the block
/// value. Canonical forms are field-wise unique per subgroup, so equal
/// keys mean equal subgroups.
fn canonical_key(q: u64, n: usize, sub: &CanonicalSubgroup) -> u128 {
    let mut block_of = vec![0u128; n];
    let mut value_of = vec![0u128; n];
    for (i, b) in sub.blocks().iter().enumerate() {
        for (&j, &v) in &b.values {
            block_of[j] = (i + 1) as u128;
            value_of[j] = v.0 as u128;
        }
    }
    let base = (n as u128 + 1) * q as u128;
    let mut key = 0u128;
    for j in 0..n {
        key = key * base + block_of[j] * q as u128 + value_of[j];
    }
    key
}

/// A multiplicity failure: some subgroup was produced by an unexpected
/// number of ordered disjoint-support sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityCounterexample {
    pub subgroup: CanonicalSubgroup,
    pub observed: u64,
    pub expected: u64,
}

/// Outcome of [`double_count_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCountOutcome {
    pub expected_multiplicity: u64,
    pub group_count: u64,
    pub counterexample: Option<MultiplicityCounterexample>,
}

impl DoubleCountOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Enumerates every ordered sequence of `l` nonzero vectors of `R^n`
/// with mutually disjoint supports, groups the sequences by the
/// canonical form of the subgroup they span, and checks that every group
/// has size exactly `l! · (q-1)^l` — the double-counting multiplicity
/// behind the counting formula.
pub fn double_count_check(nf: &Nearfield, n: u64, l: u64) -> Result<DoubleCountOutcome> {
    let q = nf.order();
    let n = n as usize;
    let l = l as usize;
    let mut expected = 1u64;
    for i in 1..=l {
        expected *= i as u64 * (q - 1);
    }

    let mut groups: HashMap<CanonicalSubgroup, u64> = HashMap::new();
    let mut sequence: Vec<Vector> = Vec::with_capacity(l);
    collect_sequences(nf, n, l, 0, &mut sequence, &mut groups)?;

    let group_count = groups.len() as u64;
    let mut failures: Vec<MultiplicityCounterexample> = groups
        .into_iter()
        .filter(|(_, count)| *count != expected)
        .map(|(subgroup, observed)| MultiplicityCounterexample {
            subgroup,
            observed,
            expected,
        })
        .collect();
    failures.sort_by_key(|f| canonical_key(q, n, &f.subgroup));

    Ok(DoubleCountOutcome {
        expected_multiplicity: expected,
        group_count,
        counterexample: failures.into_iter().next(),
    })
}

fn collect_sequences(
    nf: &Nearfield,
    n: usize,
    l: usize,
    used_mask: u32,
    sequence: &mut Vec<Vector>,
    groups: &mut HashMap<CanonicalSubgroup, u64>,
) -> Result<()> {
    if sequence.len() == l {
        let sub = if sequence.is_empty() {
            CanonicalSubgroup::zero(n)
        } else {
            CanonicalSubgroup::from_disjoint_vectors(nf, sequence)?
        };
        *groups.entry(sub).or_default() += 1;
        return Ok(());
    }
    let q = nf.order();
    for idx in 1..q.pow(n as u32) {
        let mut v = Vector::zero(n);
        let mut rest = idx;
        let mut mask = 0u32;
        for j in 0..n {
            let c = (rest % q) as u32;
            rest /= q;
            if c != 0 {
                mask |= 1 << j;
            }
            v.set(j, FieldElement(c));
        }
        if mask & used_mask != 0 {
            continue;
        }
        sequence.push(v);
        collect_sequences(nf, n, l, used_mask | mask, sequence, groups)?;
        sequence.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearfield::DicksonPair;

    fn big(x: u64) -> BigCount {
        BigUint::from(x)
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling2(0, 0), big(1));
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(stirling2(5, 1), big(1));
        assert_eq!(stirling2(5, 5), big(1));
        assert_eq!(stirling2(5, 3), big(25));
        assert_eq!(stirling2(6, 2), big(31));
        assert_eq!(stirling2(3, 0), big(0));
        assert_eq!(stirling2(3, 4), big(0));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(8, 4), big(70));
        assert_eq!(binomial(7, 0), big(1));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(
            binomial(100, 50),
            "100891344545564193334812497256".parse::<BigUint>().unwrap()
        );
    }

    #[test]
    fn per_dimension_counts_match_reference_cells() {
        assert_eq!(count_subgroups(9, 1, 2), big(10));
        assert_eq!(count_subgroups(9, 1, 4), big(820));
        assert_eq!(count_subgroups(9, 2, 6), big(180271));
        assert_eq!(count_subgroups(625, 2, 4), big(2733126));
        assert_eq!(count_subgroups(625, 3, 6), big(21925818740));
        assert_eq!(count_subgroups(64, 1, 7), big(69810262081));
    }

    #[test]
    fn boundary_counts() {
        for q in [9u64, 64, 625] {
            for n in 0..=8u64 {
                assert_eq!(count_subgroups(q, n, n), big(1));
                assert_eq!(count_subgroups(q, 0, n), big(1));
                assert_eq!(count_subgroups(q, n + 1, n), big(0));
            }
        }
    }

    #[test]
    fn totals_match_reference_values() {
        assert_eq!(count_all(9, 4), big(1424));
        assert_eq!(count_all(64, 3), big(4355));
        assert_eq!(count_all(625, 6), big(100264147266880));
    }

    #[test]
    fn table_rows_sum_to_totals() {
        for (q, n_max) in [(9u64, 8u64), (64, 7), (625, 6)] {
            let table = CountTable::build(q, n_max);
            for row in &table.rows {
                assert_eq!(row.counts.iter().sum::<BigCount>(), row.total);
                assert_eq!(row.total, count_all(q, row.n));
            }
        }
    }

    #[test]
    fn counts_respect_the_seed_set_upper_bound() {
        // At most C(q^n, k) subgroups of dimension l, with k the seed
        // number: each has a generating set of that size.
        for (q, n_max) in [(9u64, 8u64), (64, 7), (625, 6)] {
            for n in 0..=n_max {
                for l in 1..=n {
                    let k = seed_number(q, l) as u64;
                    let space = BigUint::from(q).pow(n as u32);
                    let bound = match u64::try_from(&space) {
                        Ok(s) => binomial(s, k),
                        Err(_) => continue,
                    };
                    assert!(count_subgroups(q, l, n) <= bound, "q={q} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn brute_counts_match_the_formula_up_to_n3() {
        let nf = Nearfield::dickson(DicksonPair::new(3, 2).unwrap()).unwrap();
        assert_eq!(
            brute_count(&nf, 1, DEFAULT_PAIR_BUDGET).unwrap(),
            vec![1, 1]
        );
        assert_eq!(
            brute_count(&nf, 2, DEFAULT_PAIR_BUDGET).unwrap(),
            vec![1, 10, 1]
        );
        assert_eq!(
            brute_count(&nf, 3, DEFAULT_PAIR_BUDGET).unwrap(),
            vec![1, 91, 27, 1]
        );
    }

    #[test]
    fn brute_count_budget_is_enforced() {
        let nf = Nearfield::dickson(DicksonPair::new(3, 2).unwrap()).unwrap();
        assert!(matches!(
            brute_count(&nf, 3, 1000).unwrap_err(),
            Error::TooLarge { .. }
        ));
        // Ambient dimension beyond mdim(q, 2) would miss subgroups.
        assert!(matches!(
            brute_count(&nf, 11, u64::MAX).unwrap_err(),
            Error::TooLarge { .. }
        ));
    }

    #[test]
    fn double_counting_multiplicities() {
        let nf = Nearfield::dickson(DicksonPair::new(3, 2).unwrap()).unwrap();
        for (n, l, expected) in [(1, 1, 8), (2, 1, 8), (2, 2, 128), (3, 2, 128)] {
            let outcome = double_count_check(&nf, n, l).unwrap();
            assert!(outcome.passed(), "({n}, {l}): {outcome:?}");
            assert_eq!(outcome.expected_multiplicity, expected);
            // Each group is one dimension-l subgroup, so the group count
            // must reproduce the formula.
            assert_eq!(BigUint::from(outcome.group_count), count_subgroups(9, l, n));
        }
        let outcome = double_count_check(&nf, 2, 0).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.group_count, 1);
        assert_eq!(outcome.expected_multiplicity, 1);
    }
}
