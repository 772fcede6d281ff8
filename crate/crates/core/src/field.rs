//! Exact arithmetic in GF(p^k).
//!
//! A [`FieldDescriptor`] fixes the prime `p`, the degree `k` and a monic
//! irreducible modulus. The modulus is the smallest monic irreducible of
//! degree `k` when the coefficient list `c_0, .., c_{k-1}` is read as a
//! base-`p` number with `c_{k-1}` most significant, so `(2, 3)` always gives
//! `x^3 + x + 1`. Elements are residue vectors of length `k` stored as
//! [`BigUint`]s; the counting hot loops use [`crate::table::LogField`]
//! instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Default cap on the number of elements [`FieldDescriptor::enumerate`]
/// is willing to produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(BigUint),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("prime {0} is outside the supported range (p < 2^64)")]
    PrimeTooLarge(BigUint),
    #[error("field has {size} elements, enumeration budget is {budget}")]
    EnumerationTooLarge { size: BigUint, budget: u64 },
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// Deterministic Miller-Rabin, exact for every `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over GF(p), low degree first. Only what the
/// irreducibility scan needs.
mod fp_poly {
    use num_bigint::BigUint;
    use num_traits::{One, Zero};

    pub(super) fn trim(a: &mut Vec<BigUint>) {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
    }

    pub(super) fn sub(a: &[BigUint], b: &[BigUint], p: &BigUint) -> Vec<BigUint> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            out.push((x + p - y) % p);
        }
        trim(&mut out);
        out
    }

    /// Remainder modulo a polynomial whose leading coefficient is invertible.
    pub(super) fn rem(a: &[BigUint], m: &[BigUint], p: &BigUint) -> Vec<BigUint> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = m[dm].modpow(&(p - 2u32), p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (&r[top] * &lead_inv) % p;
            if !c.is_zero() {
                for (j, mj) in m.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (&r[idx] + p - (&c * mj) % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub(super) fn mul_mod(a: &[BigUint], b: &[BigUint], m: &[BigUint], p: &BigUint) -> Vec<BigUint> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (&prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub(super) fn pow_mod(base: &[BigUint], e: &BigUint, m: &[BigUint], p: &BigUint) -> Vec<BigUint> {
        let mut acc = vec![BigUint::one()];
        let mut b = rem(base, m, p);
        for bit in 0..e.bits() {
            if e.bit(bit) {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
        }
        acc
    }

    pub(super) fn gcd(a: &[BigUint], b: &[BigUint], p: &BigUint) -> Vec<BigUint> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }
}

/// Rabin's test: monic `f` of degree `k` is irreducible iff
/// `x^(p^k) = x mod f` and `gcd(x^(p^(k/l)) - x, f) = 1` for every prime `l | k`.
fn is_irreducible(f: &[BigUint], p: &BigUint) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let x = vec![BigUint::zero(), BigUint::one()];
    // frob[j] = x^(p^j) mod f
    let mut frob = vec![fp_poly::rem(&x, f, p)];
    for j in 0..k {
        let next = fp_poly::pow_mod(&frob[j], p, f, p);
        frob.push(next);
    }
    if !fp_poly::sub(&frob[k], &x, p).is_empty() {
        return false;
    }
    for l in prime_factors_u64(k as u64) {
        let h = fp_poly::sub(&frob[k / l as usize], &x, p);
        let g = fp_poly::gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Immutable description of GF(p^k).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    p: BigUint,
    k: usize,
    modulus: Vec<BigUint>,
    order: BigUint,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl FieldDescriptor {
    /// Builds GF(p^k) with the deterministic modulus described in the module
    /// docs. For `k = 1` the modulus is `x` and elements are plain residues.
    pub fn new(p: &BigUint, k: usize) -> Result<Arc<Self>, FieldError> {
        if k == 0 {
            return Err(FieldError::InvalidDegree);
        }
        let p_small = p.to_u64().ok_or_else(|| FieldError::PrimeTooLarge(p.clone()))?;
        if !is_prime_u64(p_small) {
            return Err(FieldError::CompositeModulus(p.clone()));
        }
        let order = p.pow(k as u32);
        let mut digits = vec![BigUint::zero(); k];
        loop {
            let mut candidate = digits.clone();
            candidate.push(BigUint::one());
            if is_irreducible(&candidate, p) {
                return Ok(Arc::new(FieldDescriptor { p: p.clone(), k, modulus: candidate, order }));
            }
            // next candidate: c_0 is the least significant digit
            let mut i = 0;
            loop {
                digits[i] += 1u32;
                if &digits[i] < p {
                    break;
                }
                digits[i] = BigUint::zero();
                i += 1;
                // every degree has an irreducible, so the scan always stops
                assert!(i < k, "no irreducible polynomial of degree {k} over GF({p})");
            }
        }
    }

    pub fn from_u64(p: u64, k: usize) -> Result<Arc<Self>, FieldError> {
        Self::new(&BigUint::from(p), k)
    }

    pub fn characteristic(&self) -> &BigUint {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Monic modulus, low degree first, length `k + 1`.
    pub fn modulus(&self) -> &[BigUint] {
        &self.modulus
    }

    /// Number of elements `p^k`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: Arc::clone(self), coeffs: vec![BigUint::zero(); self.k] }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    /// Embeds an integer through the prime field.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        let mut e = self.zero();
        let r = BigUint::from(n.unsigned_abs()) % &self.p;
        e.coeffs[0] = if n < 0 && !r.is_zero() { &self.p - r } else { r };
        e
    }

    /// Element with the given residues (reduced mod p, padded or reduced mod
    /// the field modulus as needed).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[BigUint]) -> FieldElement {
        let reduced: Vec<BigUint> = coeffs.iter().map(|c| c % &self.p).collect();
        let mut r = fp_poly::rem(&reduced, &self.modulus, &self.p);
        r.resize(self.k, BigUint::zero());
        FieldElement { field: Arc::clone(self), coeffs: r }
    }

    /// The class of `x`, i.e. the generator of the extension.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        self.from_coeffs(&[BigUint::zero(), BigUint::one()])
    }

    /// Element whose residues are the base-`p` digits of `index`
    /// (`c_0` least significant).
    pub fn from_index(self: &Arc<Self>, index: &BigUint) -> FieldElement {
        let mut coeffs = Vec::with_capacity(self.k);
        let mut rest = index.clone();
        for _ in 0..self.k {
            let (q, r) = rest.div_rem(&self.p);
            coeffs.push(r);
            rest = q;
        }
        FieldElement { field: Arc::clone(self), coeffs }
    }

    /// All `p^k` elements, ordered by their residue vectors compared from
    /// `c_{k-1}` down to `c_0` (the same order used to pick the modulus).
    pub fn enumerate(self: &Arc<Self>, budget: u64) -> Result<Elements, FieldError> {
        if self.order > BigUint::from(budget) {
            return Err(FieldError::EnumerationTooLarge { size: self.order.clone(), budget });
        }
        Ok(Elements { field: Arc::clone(self), next: BigUint::zero() })
    }
}

/// Iterator returned by [`FieldDescriptor::enumerate`].
pub struct Elements {
    field: Arc<FieldDescriptor>,
    next: BigUint,
}

impl Iterator for Elements {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        if self.next >= self.field.order {
            return None;
        }
        let e = self.field.from_index(&self.next);
        self.next += 1u32;
        Some(e)
    }
}

/// An element of a [`FieldDescriptor`]'s field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Arc<FieldDescriptor>,
    coeffs: Vec<BigUint>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Inverse of [`FieldDescriptor::from_index`].
    pub fn index(&self) -> BigUint {
        self.coeffs.iter().rev().fold(BigUint::zero(), |acc, c| acc * &self.field.p + c)
    }

    pub fn same_field(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    pub fn pow(&self, e: &BigUint) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        for bit in 0..e.bits() {
            if e.bit(bit) {
                acc = &acc * &base;
            }
            base = &base * &base;
        }
        acc
    }

    /// `x -> x^p`, the generator of Gal(GF(p^k)/GF(p)).
    pub fn frobenius(&self) -> FieldElement {
        self.pow(&self.field.p)
    }

    /// Multiplicative inverse via `x^(q-2)`; `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(&(&self.field.order - 2u32)))
    }

    /// Multiplicative order, for nonzero elements.
    pub fn multiplicative_order(&self) -> Option<BigUint> {
        if self.is_zero() {
            return None;
        }
        let group = &self.field.order - 1u32;
        let group_u64 = group.to_u64()?;
        let mut ord = group.clone();
        for l in prime_factors_u64(group_u64) {
            let l = BigUint::from(l);
            while (&ord % &l).is_zero() && self.pow(&(&ord / &l)).is_one() {
                ord /= &l;
            }
        }
        Some(ord)
    }

    fn check(&self, other: &FieldElement) {
        assert!(self.same_field(other), "{}", FieldError::FieldMismatch);
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let p = &self.field.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + b) % p).collect();
        FieldElement { field: Arc::clone(&self.field), coeffs }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let p = &self.field.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + p - b) % p).collect();
        FieldElement { field: Arc::clone(&self.field), coeffs }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        let p = &self.field.p;
        let coeffs = self.coeffs.iter().map(|a| (p - a) % p).collect();
        FieldElement { field: Arc::clone(&self.field), coeffs }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let f = &self.field;
        let mut r = fp_poly::mul_mod(&self.coeffs, &rhs.coeffs, &f.modulus, &f.p);
        r.resize(f.k, BigUint::zero());
        FieldElement { field: Arc::clone(f), coeffs: r }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
