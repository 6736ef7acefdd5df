//! Finite left nearfields built by twisting multiplication in a finite
//! field.
//!
//! A pair `(q, n)` in which every prime divisor of `n` divides `q - 1`
//! (and `4 | n` forces `4 | q - 1`) determines a nearfield of order
//! `q^n`: the additive group of `GF(q^n)` is kept, while the product is
//! `a ∘ b = b^(q^(j(a))) · a`, with the exponent class `j(a)` read off
//! the discrete logarithm of `a`. Twisting by the *left* operand makes
//! the product distribute over sums on the left, because the Frobenius
//! `x ↦ x^(q^j)` is additive. With `n = 1` the twist is trivial and the
//! construction returns the field itself, which is the handy non-proper
//! reference point.
//!
//! No construction is trusted: every build runs the axiom validator and
//! is rejected if any law fails.

use crate::ff::{Field, FieldElement, FieldSpec};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Orders up to this bound keep full multiplication/addition tables;
/// larger orders compute products through the discrete-log twist.
const TABLE_ORDER_CAP: u64 = 4096;

/// Build-time validation is exhaustive while `order^3` stays below this
/// many triples, and falls back to seeded sampling above it.
const BUILD_EXHAUSTIVE_TRIPLES: u128 = 2_000_000;
const BUILD_SAMPLES: u64 = 100_000;
const BUILD_SEED: u64 = 0x5eed;

/// Largest `order^3` accepted for an exhaustive validation run.
const EXHAUSTIVE_TRIPLE_CAP: u128 = 1_000_000_000;

/// Parameters `(q, n)` of the twisted construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DicksonPair {
    pub q: u64,
    pub n: u32,
}

impl DicksonPair {
    /// Validates the pair condition: `q` a prime power, every prime
    /// divisor of `n` divides `q - 1`, and `4 | n` implies `4 | q - 1`.
    pub fn new(q: u64, n: u32) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidDicksonPair {
            q,
            n,
            reason: reason.to_string(),
        };
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        if prime_power_base(q).is_none() {
            return Err(invalid("q is not a prime power"));
        }
        let mut rest = n;
        let mut d = 2u32;
        while d as u64 * d as u64 <= rest as u64 {
            if rest % d == 0 {
                if (q - 1) % d as u64 != 0 {
                    return Err(invalid(&format!("prime {d} of n does not divide q - 1")));
                }
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 && (q - 1) % rest as u64 != 0 {
            return Err(invalid(&format!("prime {rest} of n does not divide q - 1")));
        }
        if n % 4 == 0 && (q - 1) % 4 != 0 {
            return Err(invalid("4 divides n but not q - 1"));
        }
        Ok(DicksonPair { q, n })
    }

    pub fn order(&self) -> u128 {
        (self.q as u128).pow(self.n)
    }

    /// The maximal-twist pair for a given order: the valid pair with the
    /// largest `n`, matching how orders like 64 are usually quoted as
    /// `4^3` rather than `8^2`.
    pub fn for_order(order: u64) -> Result<Self> {
        let (p, e) = prime_power_base(order).ok_or(Error::InvalidDicksonPair {
            q: order,
            n: 0,
            reason: "order is not a prime power".to_string(),
        })?;
        for n in (1..=e).rev() {
            if e % n == 0 {
                let q = p.pow(e / n);
                if let Ok(pair) = DicksonPair::new(q, n) {
                    return Ok(pair);
                }
            }
        }
        unreachable!("(order, 1) is always a valid pair")
    }
}

/// Returns `(p, e)` with `q = p^e`, if `q` is a prime power.
fn prime_power_base(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// How many tuples the validator visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Outcome of one axiom check, with the first counterexample seen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Violated law plus the element indices involved, if any.
    pub counterexample: Option<(String, Vec<u64>)>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            passed: true,
            counterexample: None,
        }
    }

    fn fail(law: &str, elements: &[FieldElement]) -> Self {
        AxiomCheck {
            passed: false,
            counterexample: Some((
                law.to_string(),
                elements.iter().map(|e| e.0 as u64).collect(),
            )),
        }
    }

    fn record(&mut self, law: &str, elements: &[FieldElement]) {
        if self.passed {
            *self = AxiomCheck::fail(law, elements);
        }
    }
}

/// Report of the seven validator checks.
///
/// The first six are axioms that must hold; the seventh records a
/// properness witness `(a, b, c)` with `(a+b)∘c ≠ a∘c + b∘c` when one
/// exists, which separates genuine nearfields from fields in disguise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub order: u64,
    pub mode: ValidationMode,
    pub additive_group: AxiomCheck,
    pub multiplicative_group: AxiomCheck,
    pub left_distributivity: AxiomCheck,
    pub zero_symmetry: AxiomCheck,
    pub neg_one_commutation: AxiomCheck,
    pub paired_zero_distributivity: AxiomCheck,
    pub properness_witness: Option<[u64; 3]>,
    pub checked_triples: u64,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.additive_group.passed
            && self.multiplicative_group.passed
            && self.left_distributivity.passed
            && self.zero_symmetry.passed
            && self.neg_one_commutation.passed
            && self.paired_zero_distributivity.passed
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.additive_group.passed {
            out.push("additive group");
        }
        if !self.multiplicative_group.passed {
            out.push("multiplicative group");
        }
        if !self.left_distributivity.passed {
            out.push("left distributivity");
        }
        if !self.zero_symmetry.passed {
            out.push("zero symmetry");
        }
        if !self.neg_one_commutation.passed {
            out.push("negative-one commutation");
        }
        if !self.paired_zero_distributivity.passed {
            out.push("paired zero distributivity");
        }
        out
    }
}

/// A finite left nearfield: the additive group of `GF(q^n)` with a
/// twisted, left-distributive multiplication.
///
/// Immutable after build; every operation is pure.
#[derive(Debug, Clone)]
pub struct Nearfield {
    pair: DicksonPair,
    order: u64,
    field: Field,
    /// `q = p^mq` inside the carrier `GF(p^(mq * n))`.
    mq: u32,
    /// Exponent class `j(a)` per nonzero element index; entry 0 unused.
    twist: Vec<u32>,
    /// Additive inverse per element index.
    neg: Vec<u32>,
    /// Multiplicative inverse per nonzero element index; entry 0 unused.
    inv: Vec<u32>,
    mul_table: Option<Vec<u16>>,
    add_table: Option<Vec<u16>>,
}

impl Nearfield {
    /// Builds the nearfield for a validated pair and rejects the result
    /// unless the axiom validator passes (exhaustively for small orders,
    /// at a fixed seeded sample above `BUILD_EXHAUSTIVE_TRIPLES`).
    pub fn dickson(pair: DicksonPair) -> Result<Nearfield> {
        let order128 = pair.order();
        if order128 > crate::ff::DEFAULT_ORDER_CAP as u128 {
            return Err(Error::TooLarge {
                size: order128,
                cap: crate::ff::DEFAULT_ORDER_CAP as u128,
            });
        }
        let order = order128 as u64;
        let (p, mq) = prime_power_base(pair.q).expect("pair is validated");
        let field = Field::build(FieldSpec::new(p, mq * pair.n)?)?;

        // psi(t) = (q^t - 1)/(q - 1) mod n = sum of q^i mod n; must be a
        // bijection on 0..n for a valid pair.
        let n = pair.n as u64;
        let mut psi = vec![0u64; pair.n as usize];
        let mut acc = 0u64;
        let mut qp = 1u64;
        for (t, slot) in psi.iter_mut().enumerate() {
            *slot = acc;
            let _ = t;
            acc = (acc + qp) % n;
            qp = qp * (pair.q % n) % n;
        }
        let mut psi_inv = vec![u32::MAX; pair.n as usize];
        for (t, &v) in psi.iter().enumerate() {
            if psi_inv[v as usize] != u32::MAX {
                return Err(Error::InternalInconsistency(format!(
                    "exponent-class map is not a bijection for ({}, {})",
                    pair.q, pair.n
                )));
            }
            psi_inv[v as usize] = t as u32;
        }

        let g = field.generator();
        let mut twist = vec![0u32; order as usize];
        let mut cur = FieldElement::ONE;
        for s in 0..order - 1 {
            twist[cur.0 as usize] = psi_inv[(s % n) as usize];
            cur = field.mul(cur, g);
        }

        let mut neg = vec![0u32; order as usize];
        for a in field.elements() {
            neg[a.0 as usize] = field.neg(a).0;
        }

        let mut nf = Nearfield {
            pair,
            order,
            field,
            mq,
            twist,
            neg,
            inv: Vec::new(),
            mul_table: None,
            add_table: None,
        };

        let mut inv = vec![0u32; order as usize];
        for a in nf.field.elements().skip(1) {
            inv[a.0 as usize] = nf.mul_via_twist(a, FieldElement::ZERO, true).0;
        }
        nf.inv = inv;

        if order <= TABLE_ORDER_CAP {
            let mut mul_table = vec![0u16; (order * order) as usize];
            let mut add_table = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    let fa = FieldElement(a as u32);
                    let fb = FieldElement(b as u32);
                    mul_table[(a * order + b) as usize] =
                        nf.mul_via_twist(fa, fb, false).0 as u16;
                    add_table[(a * order + b) as usize] = nf.field.add(fa, fb).0 as u16;
                }
            }
            nf.mul_table = Some(mul_table);
            nf.add_table = Some(add_table);
        }

        let mode = if (order as u128).pow(3) <= BUILD_EXHAUSTIVE_TRIPLES {
            ValidationMode::Exhaustive
        } else {
            ValidationMode::Sampled {
                count: BUILD_SAMPLES,
                seed: BUILD_SEED,
            }
        };
        let report = nf.validate_axioms(mode)?;
        if !report.all_passed() {
            return Err(Error::AxiomValidationFailed(format!(
                "order {} construction failed: {}",
                order,
                report.failed_checks().join(", ")
            )));
        }
        Ok(nf)
    }

    /// Convenience wrapper for [`Nearfield::dickson`] on the
    /// maximal-twist pair of a given order.
    pub fn of_order(order: u64) -> Result<Nearfield> {
        Nearfield::dickson(DicksonPair::for_order(order)?)
    }

    pub fn pair(&self) -> DicksonPair {
        self.pair
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Characteristic of the additive group.
    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn carrier(&self) -> &Field {
        &self.field
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order as u32).map(FieldElement)
    }

    pub fn element(&self, index: u64) -> Option<FieldElement> {
        (index < self.order).then_some(FieldElement(index as u32))
    }

    pub fn neg_one(&self) -> FieldElement {
        FieldElement(self.neg[1])
    }

    /// `a ∘ b`, via the twist: `b` is raised to `q^(j(a))` with the
    /// carrier Frobenius and then multiplied by `a` in the carrier.
    /// When `invert` is set this solves `a ∘ x = 1` instead.
    fn mul_via_twist(&self, a: FieldElement, b: FieldElement, invert: bool) -> FieldElement {
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let j = self.twist[a.0 as usize];
        if invert {
            // a ∘ x = 1 means x^(q^j) = a^{-1}, undone with the inverse
            // Frobenius q^(n - j).
            let ainv = self.field.inv(a).expect("nonzero");
            let back = (self.pair.n - j) % self.pair.n;
            return self.field.frobenius(ainv, self.mq * back);
        }
        if b.is_zero() {
            return FieldElement::ZERO;
        }
        let tb = self.field.frobenius(b, self.mq * j);
        self.field.mul(tb, a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.mul_table {
            Some(t) => FieldElement(t[(a.0 as u64 * self.order + b.0 as u64) as usize] as u32),
            None => self.mul_via_twist(a, b, false),
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 as u64 * self.order + b.0 as u64) as usize] as u32),
            None => self.field.add(a, b),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inv[a.0 as usize]))
    }

    /// Runs the seven validator checks.
    ///
    /// Failures are reported in the `AxiomReport`, never thrown. The
    /// per-element and per-pair laws are always checked exhaustively
    /// (they are linear or quadratic in the order); the mode governs the
    /// cubic triple scans: additive/multiplicative associativity, left
    /// distributivity, and the properness-witness search.
    pub fn validate_axioms(&self, mode: ValidationMode) -> Result<AxiomReport> {
        let order = self.order;
        if let ValidationMode::Exhaustive = mode {
            if (order as u128).pow(3) > EXHAUSTIVE_TRIPLE_CAP {
                return Err(Error::TooLarge {
                    size: (order as u128).pow(3),
                    cap: EXHAUSTIVE_TRIPLE_CAP,
                });
            }
        }

        let mut additive = AxiomCheck::pass();
        let mut multiplicative = AxiomCheck::pass();
        let mut distributive = AxiomCheck::pass();
        let mut zero_sym = AxiomCheck::pass();
        let mut neg_one_comm = AxiomCheck::pass();
        let mut paired_zero = AxiomCheck::pass();
        let mut witness: Option<[u64; 3]> = None;

        let zero = FieldElement::ZERO;
        let one = FieldElement::ONE;
        let neg_one = self.neg_one();

        // Linear scans: identities, inverses, zero symmetry, the
        // negative-one commutation law.
        for a in self.elements() {
            if self.add(a, zero) != a {
                additive.record("additive identity", &[a]);
            }
            if self.add(a, self.neg(a)) != zero {
                additive.record("additive inverse", &[a]);
            }
            if self.mul(zero, a) != zero || self.mul(a, zero) != zero {
                zero_sym.record("zero symmetry", &[a]);
            }
            let na = self.neg(a);
            if self.mul(neg_one, a) != na || self.mul(a, neg_one) != na {
                neg_one_comm.record("negative-one commutation", &[a]);
            }
            if !a.is_zero() {
                if self.mul(one, a) != a || self.mul(a, one) != a {
                    multiplicative.record("multiplicative identity", &[a]);
                }
                let ai = FieldElement(self.inv[a.0 as usize]);
                if self.mul(a, ai) != one || self.mul(ai, a) != one {
                    multiplicative.record("multiplicative inverse", &[a]);
                }
            }
        }

        // Quadratic scans. The paired zero-distributivity law — products
        // summing to zero stay zero after a common right factor — reduces
        // to (-u)∘c = -(u∘c) over all pairs, since u ranges over every
        // element via u = u∘1.
        let pairs_exhaustive = order * order <= 4_194_304;
        if pairs_exhaustive {
            for a in self.elements() {
                for b in self.elements() {
                    self.check_pair(
                        a,
                        b,
                        &mut additive,
                        &mut multiplicative,
                        &mut paired_zero,
                    );
                }
            }
        }

        let mut checked_triples = 0u64;
        match mode {
            ValidationMode::Exhaustive => {
                for a in self.elements() {
                    for b in self.elements() {
                        for c in self.elements() {
                            self.check_triple(
                                a,
                                b,
                                c,
                                &mut additive,
                                &mut multiplicative,
                                &mut distributive,
                                &mut witness,
                            );
                            checked_triples += 1;
                        }
                    }
                }
            }
            ValidationMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let a = FieldElement(rng.gen_range(0..order) as u32);
                    let b = FieldElement(rng.gen_range(0..order) as u32);
                    let c = FieldElement(rng.gen_range(0..order) as u32);
                    self.check_triple(
                        a,
                        b,
                        c,
                        &mut additive,
                        &mut multiplicative,
                        &mut distributive,
                        &mut witness,
                    );
                    if !pairs_exhaustive {
                        self.check_pair(
                            a,
                            c,
                            &mut additive,
                            &mut multiplicative,
                            &mut paired_zero,
                        );
                    }
                    checked_triples += 1;
                }
            }
        }

        Ok(AxiomReport {
            order,
            mode,
            additive_group: additive,
            multiplicative_group: multiplicative,
            left_distributivity: distributive,
            zero_symmetry: zero_sym,
            neg_one_commutation: neg_one_comm,
            paired_zero_distributivity: paired_zero,
            properness_witness: witness,
            checked_triples,
        })
    }

    fn check_pair(
        &self,
        a: FieldElement,
        b: FieldElement,
        additive: &mut AxiomCheck,
        multiplicative: &mut AxiomCheck,
        paired_zero: &mut AxiomCheck,
    ) {
        if self.add(a, b) != self.add(b, a) {
            additive.record("additive commutativity", &[a, b]);
        }
        if !a.is_zero() && !b.is_zero() && self.mul(a, b).is_zero() {
            multiplicative.record("multiplicative closure", &[a, b]);
        }
        if !self.add(self.mul(a, b), self.mul(self.neg(a), b)).is_zero() {
            paired_zero.record("paired zero distributivity", &[a, b]);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_triple(
        &self,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        additive: &mut AxiomCheck,
        multiplicative: &mut AxiomCheck,
        distributive: &mut AxiomCheck,
        witness: &mut Option<[u64; 3]>,
    ) {
        if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
            additive.record("additive associativity", &[a, b, c]);
        }
        if !a.is_zero()
            && !b.is_zero()
            && !c.is_zero()
            && self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
        {
            multiplicative.record("multiplicative associativity", &[a, b, c]);
        }
        let bc = self.add(b, c);
        if self.mul(a, bc) != self.add(self.mul(a, b), self.mul(a, c)) {
            distributive.record("left distributivity", &[a, b, c]);
        }
        if witness.is_none() {
            let lhs = self.mul(self.add(a, b), c);
            let rhs = self.add(self.mul(a, c), self.mul(b, c));
            if lhs != rhs {
                *witness = Some([a.0 as u64, b.0 as u64, c.0 as u64]);
            }
        }
    }

    /// Table entries recomputed through the twist formula; used by the
    /// consistency tests.
    #[doc(hidden)]
    pub fn mul_uncached(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul_via_twist(a, b, false)
    }
}
