//! Exact arithmetic in finite fields `GF(p^m)`.
//!
//! Elements are encoded as integer indices in `[0, p^m)`: the base-`p`
//! digits of an index are the coefficients of the residue polynomial,
//! digit `i` holding the coefficient of `X^i`. Index 0 is the additive
//! zero and index 1 the multiplicative one under every modulus, and the
//! encoding is a bijection, which makes indices stable dedup keys.
//!
//! Multiplication runs on exp/log tables built once per field; addition
//! works digit-wise on the base-`p` encoding.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest field order built without an explicit cap override.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

/// Parameters of a finite field: a prime `p` and an exponent `m ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
}

impl FieldSpec {
    /// Validates that `p` is prime (trial division) and `m ≥ 1`.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(m >= 1, "field exponent must be at least 1");
        Ok(FieldSpec { p, m })
    }

    /// `p^m`, or an error when it does not fit the cap.
    pub fn order_capped(&self, cap: u64) -> Result<u64> {
        let mut order = 1u128;
        for _ in 0..self.m {
            order *= self.p as u128;
            if order > cap as u128 {
                return Err(Error::TooLarge {
                    size: order,
                    cap: cap as u128,
                });
            }
        }
        Ok(order as u64)
    }
}

/// An element of a finite field, identified by its encoding index.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fully built finite field `GF(p^m)`.
///
/// Immutable after construction; all operations are pure, so a `Field`
/// can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    order: u64,
    /// Monic irreducible modulus, coefficients low-degree-first,
    /// length `m + 1`, leading coefficient 1.
    modulus: Vec<u32>,
    generator: FieldElement,
    /// `exp[i]` = index of `g^i` for `i` in `0..order-1`.
    exp: Vec<u32>,
    /// `log[idx]` for `idx != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

impl Field {
    /// Builds the field with the default order cap.
    ///
    /// The modulus is the lexicographically smallest monic irreducible
    /// polynomial of degree `m` (non-leading coefficients compared
    /// low-degree-first as a base-`p` integer), and the generator is the
    /// smallest-index element of full multiplicative order, so the build
    /// is deterministic for a fixed spec.
    pub fn build(spec: FieldSpec) -> Result<Field> {
        Field::build_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(spec: FieldSpec, cap: u64) -> Result<Field> {
        let order = spec.order_capped(cap)?;
        let p = spec.p as u32;
        let m = spec.m as usize;

        let modulus = smallest_irreducible(p, m);
        debug_assert_eq!(modulus.len(), m + 1);

        // Multiplicative order of a candidate is checked against the
        // prime factors of order - 1 before any tables exist.
        let factors = prime_factors(order - 1);
        let mut generator = FieldElement::ONE;
        for idx in 1..order {
            let a = index_to_poly(idx, p, m);
            if poly_order_is_full(&a, &modulus, p, order, &factors) {
                generator = FieldElement(idx as u32);
                break;
            }
        }

        let mut exp = vec![0u32; (order - 1) as usize];
        let mut log = vec![0u32; order as usize];
        let g = index_to_poly(generator.0 as u64, p, m);
        let mut cur = vec![0u32; m];
        cur[0] = 1;
        for i in 0..(order - 1) as usize {
            let idx = poly_to_index(&cur, p);
            exp[i] = idx as u32;
            log[idx as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }

        let field = Field {
            spec,
            order,
            modulus,
            generator,
            exp,
            log,
        };
        debug_assert!(field.exp.iter().all(|&e| (e as u64) < order));
        Ok(field)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    /// Modulus coefficients, low-degree-first, length `m + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn element(&self, index: u64) -> Option<FieldElement> {
        (index < self.order).then_some(FieldElement(index as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.p;
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x != 0 {
            let d = (p - x % p) % p;
            out += d * place;
            place *= p;
            x /= p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.order - 1;
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n;
        FieldElement(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.order - 1;
        let e = (n - self.log[a.0 as usize] as u64) % n;
        Ok(FieldElement(self.exp[e as usize]))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.is_zero() {
            return if e == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let n = self.order - 1;
        let e = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElement(self.exp[e as usize])
    }

    /// `a^(p^j)`, the `j`-fold Frobenius. Additive and multiplicative.
    pub fn frobenius(&self, a: FieldElement, j: u32) -> FieldElement {
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.order - 1;
        let mut e = 1u64;
        for _ in 0..j {
            e = e * (self.spec.p % n) % n;
        }
        self.pow(a, e)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn index_to_poly(mut idx: u64, p: u32, m: usize) -> Vec<u32> {
    let mut coeffs = vec![0u32; m];
    for c in coeffs.iter_mut() {
        *c = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    coeffs
}

fn poly_to_index(coeffs: &[u32], p: u32) -> u64 {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * p as u64 + c as u64;
    }
    idx
}

/// Product of two residue polynomials modulo the field modulus.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    // Reduce X^m = -(modulus minus leading term), highest degree first.
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for t in 0..m {
            let sub = c * modulus[t] as u64 % p as u64;
            prod[d - m + t] = (prod[d - m + t] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(m);
    prod.iter().map(|&c| c as u32).collect()
}

fn poly_degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` divided by monic `b` over `GF(p)`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = poly_degree(b).expect("divisor must be nonzero");
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < db {
            break;
        }
        let c = r[dr];
        for t in 0..=db {
            let sub = c * b[t] as u64 % p as u64;
            r[dr - db + t] = (r[dr - db + t] + p as u64 - sub) % p as u64;
        }
    }
    r.iter().map(|&c| c as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = poly_degree(f).unwrap();
    if m == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=m/2; any
    // factorization has a factor in that range.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for c in 0..count {
            let mut g = index_to_poly(c, p, d);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if poly_degree(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `m` over
/// `GF(p)`: the non-leading coefficients, read low-degree-first as a
/// base-`p` integer, are minimal.
fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let count = (p as u64).pow(m as u32);
    for c in 0..count {
        let mut f = index_to_poly(c, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn poly_powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut result = vec![0u32; m];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

fn poly_order_is_full(a: &[u32], modulus: &[u32], p: u32, order: u64, factors: &[u64]) -> bool {
    if poly_degree(a).is_none() {
        return false;
    }
    let n = order - 1;
    if n == 1 {
        return true;
    }
    factors.iter().all(|&f| {
        let pw = poly_powmod(a, n / f, modulus, p);
        !(poly_degree(&pw) == Some(0) && pw[0] == 1)
    })
}
