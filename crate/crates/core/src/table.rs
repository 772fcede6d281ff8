//! Zech-logarithm representation of a small GF(q), used by the point
//! counter. Nonzero elements are stored as discrete logarithms to a fixed
//! primitive element `g`; addition goes through `zech[n] = log(1 + g^n)`.
//!
//! Tables are derived from a [`FieldDescriptor`] (same modulus, same
//! element indices) and are cross-checked against [`FieldElement`]
//! arithmetic in the tests below.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::field::{FieldDescriptor, FieldElement};

/// Largest field order for which tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 23;

/// Sentinel for the zero element.
pub const ZERO: u32 = u32::MAX;

#[derive(Debug)]
pub struct LogField {
    p: u64,
    q: u64,
    /// `q - 1`, the order of the multiplicative group
    group: u32,
    zech: Vec<u32>,
    /// log of each prime-field residue `0..p`
    prime_logs: Vec<u32>,
    minus_one: u32,
    descriptor: Arc<FieldDescriptor>,
    primitive_index: u64,
}

impl LogField {
    /// Returns `None` when the field is larger than [`MAX_TABLE_ORDER`].
    pub fn new(descriptor: &Arc<FieldDescriptor>) -> Option<LogField> {
        let q = descriptor.order().to_u64().filter(|&q| q <= MAX_TABLE_ORDER)?;
        let p = descriptor.characteristic().to_u64()?;
        let k = descriptor.degree();
        let modulus: Vec<u64> = descriptor.modulus().iter().map(|c| c.to_u64().unwrap()).collect();

        // first primitive element in index order
        let primitive_index = (1..q)
            .find(|&i| {
                let e = descriptor.from_index(&BigUint::from(i));
                e.multiplicative_order().and_then(|o| o.to_u64()) == Some(q - 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let g = digits(primitive_index, p, k);

        let group = (q - 1) as u32;
        let mut exp = vec![0u32; group as usize];
        let mut log = vec![ZERO; q as usize];
        let mut cur = vec![0u64; k];
        cur[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let idx = undigits(&cur, p);
            *slot = idx as u32;
            log[idx as usize] = i as u32;
            cur = mul_digits(&cur, &g, &modulus, p);
        }

        let zech = exp
            .iter()
            .map(|&idx| {
                let idx = idx as u64;
                let c0 = idx % p;
                let bumped = idx - c0 + (c0 + 1) % p;
                log[bumped as usize]
            })
            .collect();
        let prime_logs = (0..p).map(|c| log[c as usize]).collect();
        let minus_one = log[(p - 1) as usize];
        Some(LogField {
            p,
            q,
            group,
            zech,
            prime_logs,
            minus_one,
            descriptor: Arc::clone(descriptor),
            primitive_index,
        })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Element for the prime-field residue `c mod p`.
    #[inline]
    pub fn from_residue(&self, c: u64) -> u32 {
        self.prime_logs[(c % self.p) as usize]
    }

    /// Element id in `0..q`: 0 is zero, `i > 0` is `g^(i-1)`.
    #[inline]
    pub fn from_id(&self, id: u64) -> u32 {
        if id == 0 {
            ZERO
        } else {
            (id - 1) as u32
        }
    }

    #[inline]
    pub fn one(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        (s % self.group as u64) as u32
    }

    #[inline]
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 0;
        }
        if a == ZERO {
            return ZERO;
        }
        ((a as u64 * (e % self.group as u64)) % self.group as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.group - a };
        let z = self.zech[d as usize];
        if z == ZERO {
            return ZERO;
        }
        let s = a as u64 + z as u64;
        (s % self.group as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.mul(a, self.minus_one)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == ZERO {
            return None;
        }
        Some(if a == 0 { 0 } else { self.group - a })
    }

    /// Converts back to the residue-vector representation.
    pub fn to_element(&self, a: u32) -> FieldElement {
        if a == ZERO {
            return self.descriptor.zero();
        }
        let g = self.descriptor.from_index(&BigUint::from(self.primitive_index));
        g.pow(&BigUint::from(a))
    }
}

fn digits(mut index: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(index % p);
        index /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residue vectors modulo the monic `modulus`; `p < 2^32`.
fn mul_digits(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = a.len();
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate().take(k) {
            let idx = top - k + j;
            prod[idx] = (prod[idx] + (p - c) * m % p) % p;
        }
        prod[top] = 0;
    }
    prod.truncate(k);
    prod
}

/// Univariate polynomials over a [`LogField`], low degree first, trimmed.
pub mod upoly {
    use super::{LogField, ZERO};

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&ZERO) {
            a.pop();
        }
    }

    pub fn rem(f: &LogField, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]).expect("trimmed divisor");
        while r.len() > dm {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            let nc = f.neg(c);
            for (j, &mj) in m.iter().enumerate().take(dm) {
                let idx = top - dm + j;
                r[idx] = f.add(r[idx], f.mul(nc, mj));
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(f: &LogField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        rem(f, &prod, m)
    }

    pub fn gcd(f: &LogField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        x
    }

    /// `y^e mod m` for the indeterminate `y`.
    pub fn pow_y_mod(f: &LogField, e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = rem(f, &[f.one()], m);
        let mut base = rem(f, &[ZERO, f.one()], m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(f, &acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = mul_mod(f, &base, &base, m);
            }
        }
        acc
    }

    /// Number of distinct roots in the field: `deg gcd(a, y^q - y)`.
    pub fn count_roots(f: &LogField, a: &[u32]) -> u64 {
        let mut a = a.to_vec();
        trim(&mut a);
        match a.len() {
            0 => f.order(),
            1 => 0,
            2 => 1,
            // odd q: a nonzero element g^k is a square iff k is even
            3 if f.characteristic() != 2 => {
                let four = f.from_residue(4 % f.characteristic());
                let disc = f.sub(f.mul(a[1], a[1]), f.mul(four, f.mul(a[2], a[0])));
                match disc {
                    ZERO => 1,
                    k if k % 2 == 0 => 2,
                    _ => 0,
                }
            }
            _ => {
                let mut h = pow_y_mod(f, f.order(), &a);
                h.resize(h.len().max(2), ZERO);
                h[1] = f.sub(h[1], f.one());
                trim(&mut h);
                if h.is_empty() {
                    return (a.len() - 1) as u64;
                }
                (gcd(f, &a, &h).len() - 1) as u64
            }
        }
    }

    pub fn eval(f: &LogField, a: &[u32], y: u32) -> u32 {
        a.iter().rev().fold(ZERO, |acc, &c| f.add(f.mul(acc, y), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64, k: usize) -> (Arc<FieldDescriptor>, LogField) {
        let d = FieldDescriptor::from_u64(p, k).unwrap();
        let t = LogField::new(&d).unwrap();
        (d, t)
    }

    #[test]
    fn logs_cover_every_nonzero_element_once() {
        let (_, t) = field(3, 4);
        let mut seen = vec![false; 81];
        for id in 1..81 {
            let e = t.to_element(t.from_id(id));
            let idx = e.index().to_usize().unwrap();
            assert!(!seen[idx]);
            seen[idx] = true;
        }
        assert!(!seen[0]);
    }

    #[test]
    fn prime_field_residues() {
        let (d, t) = field(7, 1);
        for c in 0..7 {
            assert_eq!(t.to_element(t.from_residue(c)), d.from_int(c as i64));
        }
        assert_eq!(t.from_residue(0), ZERO);
    }

    #[test]
    fn too_large_field_has_no_table() {
        let d = FieldDescriptor::from_u64(2, 24).unwrap();
        assert!(LogField::new(&d).is_none());
    }

    #[test]
    fn root_counts_match_exhaustive_evaluation() {
        let (_, t) = field(5, 2);
        let polys: Vec<Vec<u32>> = vec![
            vec![t.from_residue(1), ZERO, t.from_residue(1)],
            vec![t.from_residue(4), ZERO, t.from_residue(1)],
            vec![t.from_residue(3), t.from_residue(2), ZERO, t.from_residue(1)],
            vec![ZERO, ZERO, t.from_residue(1)],
            vec![t.from_residue(2)],
            vec![],
        ];
        for a in polys {
            let brute = (0..t.order()).filter(|&id| upoly::eval(&t, &a, t.from_id(id)) == ZERO).count();
            assert_eq!(upoly::count_roots(&t, &a), brute as u64, "{a:?}");
        }
    }

    proptest! {
        #[test]
        fn table_arithmetic_agrees_with_residue_arithmetic(
            pk in prop_oneof![Just((2u64, 5usize)), Just((3, 3)), Just((5, 2)), Just((13, 2)), Just((11, 1))],
            a in any::<u64>(), b in any::<u64>(),
        ) {
            let (_, t) = field(pk.0, pk.1);
            let x = t.from_id(a % t.order());
            let y = t.from_id(b % t.order());
            let (ex, ey) = (t.to_element(x), t.to_element(y));
            prop_assert_eq!(t.to_element(t.add(x, y)), &ex + &ey);
            prop_assert_eq!(t.to_element(t.sub(x, y)), &ex - &ey);
            prop_assert_eq!(t.to_element(t.mul(x, y)), &ex * &ey);
            prop_assert_eq!(t.to_element(t.pow(x, 7)), ex.pow(&BigUint::from(7u32)));
        }

        #[test]
        fn root_count_matches_brute_force(coeffs in proptest::collection::vec(0u64..9, 1..5)) {
            let (_, t) = field(3, 2);
            let a: Vec<u32> = coeffs.iter().map(|&i| t.from_id(i)).collect();
            let brute = (0..t.order()).filter(|&id| upoly::eval(&t, &a, t.from_id(id)) == ZERO).count();
            prop_assert_eq!(upoly::count_roots(&t, &a), brute as u64);
        }
    }
}
