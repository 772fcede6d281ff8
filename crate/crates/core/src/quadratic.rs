//! Real quadratic numbers `a + b sqrt(d)` and sums of square-root classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::series::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticError {
    #[error("operands live in Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(u64, u64),
    #[error("radicand must be positive")]
    NonPositiveRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed quadratic number {0:?}")]
    Parse(String),
}

/// Splits `n = s^2 * d` with `d` squarefree; returns `(s, d)`.
pub fn squarefree_part(n: u64) -> (u64, u64) {
    assert!(n > 0);
    let (mut s, mut d, mut rest) = (1u64, 1u64, n);
    let mut f = 2u64;
    while f.saturating_mul(f) <= rest {
        let mut e = 0;
        while rest % f == 0 {
            rest /= f;
            e += 1;
        }
        s *= f.pow(e / 2);
        if e % 2 == 1 {
            d *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    (s, d * rest)
}

/// `a + b sqrt(d)` with `d` squarefree; `b = 0` forces `d = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadraticNumber {
    /// Normalizing constructor: square factors of `d` move into `b`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<QuadraticNumber, QuadraticError> {
        if d == 0 {
            return Err(QuadraticError::NonPositiveRadicand);
        }
        let (s, d) = squarefree_part(d);
        let b = b * BigRational::from_integer(s.into());
        Ok(if b.is_zero() || d == 1 { QuadraticNumber { a: a + b, b: BigRational::zero(), d: 1 } } else { QuadraticNumber { a, b, d } })
    }

    pub fn rational(a: BigRational) -> QuadraticNumber {
        QuadraticNumber { a, b: BigRational::zero(), d: 1 }
    }

    pub fn int(a: i64) -> QuadraticNumber {
        QuadraticNumber::rational(BigRational::from_integer(a.into()))
    }

    /// `sqrt(n)` for a positive integer `n`.
    pub fn sqrt(n: u64) -> Result<QuadraticNumber, QuadraticError> {
        QuadraticNumber::new(BigRational::zero(), BigRational::one(), n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> QuadraticNumber {
        QuadraticNumber { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// `a^2 - b^2 d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    /// `x + conj(x) = 2a`.
    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    /// True iff the number is a root of a monic integer polynomial.
    pub fn is_algebraic_integer(&self) -> bool {
        if self.is_rational() {
            self.a.is_integer()
        } else {
            self.trace().is_integer() && self.norm().is_integer()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn common_d(&self, o: &QuadraticNumber) -> Result<u64, QuadraticError> {
        match (self.d, o.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(QuadraticError::FieldMismatch(x, y)),
        }
    }

    pub fn add(&self, o: &QuadraticNumber) -> Result<QuadraticNumber, QuadraticError> {
        let d = self.common_d(o)?;
        QuadraticNumber::new(&self.a + &o.a, &self.b + &o.b, d)
    }

    pub fn sub(&self, o: &QuadraticNumber) -> Result<QuadraticNumber, QuadraticError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QuadraticNumber {
        QuadraticNumber { a: -&self.a, b: -&self.b, d: self.d }
    }

    pub fn mul(&self, o: &QuadraticNumber) -> Result<QuadraticNumber, QuadraticError> {
        let d = self.common_d(o)?;
        let dr = BigRational::from_integer(d.into());
        QuadraticNumber::new(&self.a * &o.a + &self.b * &o.b * dr, &self.a * &o.b + &self.b * &o.a, d)
    }

    pub fn inv(&self) -> Result<QuadraticNumber, QuadraticError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(QuadraticError::DivisionByZero);
        }
        QuadraticNumber::new(&self.a / &n, -&self.b / &n, self.d)
    }

    pub fn div(&self, o: &QuadraticNumber) -> Result<QuadraticNumber, QuadraticError> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> QuadraticNumber {
        let mut acc = QuadraticNumber::int(1);
        for _ in 0..e {
            acc = acc.mul(self).expect("powers stay in one field");
        }
        acc
    }

    /// The same value as a sum over square-root classes.
    pub fn to_radicals(&self) -> Radicals {
        let mut r = Radicals::zero();
        r.add_term(1, self.a.clone());
        r.add_term(self.d, self.b.clone());
        r
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = format_rational(&self.b);
        let sep = if self.b.is_negative() { "" } else { "+" };
        write!(f, "{}{}{}√{}", format_rational(&self.a), sep, b, self.d)
    }
}

/// Index of the sign separating `a` from `b` in `"a+b"`, if any.
fn split_point(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    (1..bytes.len()).find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit())
}

fn parse_coeff(s: &str, whole: &str) -> Result<BigRational, QuadraticError> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    match s {
        "" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(s).map_err(|_| QuadraticError::Parse(whole.to_string())),
    }
}

impl FromStr for QuadraticNumber {
    type Err = QuadraticError;

    /// Accepts `"a+b√d"`, `"a-b√d"`, `"b√d"`, `"a"`, with `sqrt` as an
    /// ASCII spelling of `√`. Coefficients are integers or `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuadraticError::Parse(s.to_string());
        let norm: String = s.replace("sqrt", "√").chars().filter(|c| !c.is_whitespace()).collect();
        if norm.is_empty() {
            return Err(bad());
        }
        let Some((left, d)) = norm.split_once('√') else {
            return Ok(QuadraticNumber::rational(parse_rational(&norm).map_err(|_| bad())?));
        };
        let d: u64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        let (a, b) = match split_point(left) {
            Some(i) => (parse_coeff(&left[..i], s)?, parse_coeff(&left[i..], s)?),
            None => (BigRational::zero(), parse_coeff(left, s)?),
        };
        QuadraticNumber::new(a, b, d)
    }
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite sum `sum_d c_d sqrt(d)` over squarefree `d`.
///
/// Square roots of distinct squarefree integers are linearly independent
/// over `Q`, so the coefficient map is a faithful coordinate system; this
/// is what lets modules mix generators from different quadratic fields.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Radicals(BTreeMap<u64, BigRational>);

impl Radicals {
    pub fn zero() -> Radicals {
        Radicals(BTreeMap::new())
    }

    /// Adds `c sqrt(n)` for any positive `n`.
    pub fn add_term(&mut self, n: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let (s, d) = squarefree_part(n);
        let slot = self.0.entry(d).or_insert_with(BigRational::zero);
        *slot += c * BigRational::from_integer(s.into());
        if slot.is_zero() {
            self.0.remove(&d);
        }
    }

    pub fn coeff(&self, d: u64) -> BigRational {
        self.0.get(&d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn mul(&self, o: &Radicals) -> Radicals {
        let mut out = Radicals::zero();
        for (&d1, c1) in &self.0 {
            for (&d2, c2) in &o.0 {
                // sqrt(d1) sqrt(d2) = g sqrt(d1 d2 / g^2) with g = gcd
                let g = d1.gcd(&d2);
                out.add_term((d1 / g) * (d2 / g), c1 * c2 * BigRational::from_integer(BigInt::from(g)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qn(s: &str) -> QuadraticNumber {
        s.parse().unwrap()
    }

    #[test]
    fn normalization() {
        let x = QuadraticNumber::new(q(-1, 1), q(1, 2), 24).unwrap();
        assert_eq!((x.a().clone(), x.b().clone(), x.d()), (q(-1, 1), q(1, 1), 6));
        let r = QuadraticNumber::new(q(1, 1), q(3, 1), 4).unwrap();
        assert_eq!(r, QuadraticNumber::int(7));
        assert_eq!(QuadraticNumber::new(q(2, 1), q(0, 1), 5).unwrap().d(), 1);
        assert_eq!(squarefree_part(72), (6, 2));
        assert_eq!(squarefree_part(1), (1, 1));
        assert_eq!(squarefree_part(97), (1, 97));
    }

    #[test]
    fn string_forms() {
        let x = qn("-1+√6");
        assert_eq!(x.to_string(), "-1/1+1/1√6");
        assert_eq!(qn("-1/1+1/1√6"), x);
        assert_eq!(qn("-1-√6"), x.conj());
        assert_eq!(qn("-1/1-1/1√6"), x.conj());
        assert_eq!(qn("1/2+1/2sqrt5").to_string(), "1/2+1/2√5");
        assert_eq!(qn("√2"), QuadraticNumber::sqrt(2).unwrap());
        assert_eq!(qn("-3/4"), QuadraticNumber::rational(q(-3, 4)));
        assert_eq!(qn("7").to_string(), "7/1+0/1√1");
        assert_eq!(qn("2√8"), qn("4√2"));
        for bad in ["", "√", "1+√0", "a+√2", "1/0", "1+2√-3", "1+2√x"] {
            assert!(bad.parse::<QuadraticNumber>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn arithmetic_and_mismatch() {
        let x = qn("-1+√6");
        assert_eq!(x.mul(&x.conj()).unwrap(), QuadraticNumber::int(-5));
        assert_eq!(x.add(&x.conj()).unwrap(), QuadraticNumber::int(-2));
        assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), QuadraticNumber::int(1));
        assert_eq!(x.mul(&qn("√2")), Err(QuadraticError::FieldMismatch(6, 2)));
        assert!(QuadraticNumber::int(0).inv().is_err());
    }

    #[test]
    fn integrality() {
        assert!(qn("-1+√6").is_algebraic_integer());
        assert!(qn("1/2+1/2√5").is_algebraic_integer());
        assert!(!qn("1/2+1/2√3").is_algebraic_integer());
        assert!(!qn("1/2").is_algebraic_integer());
    }

    #[test]
    fn radicals_multiply() {
        let s2 = qn("√2").to_radicals();
        let s3 = qn("√3").to_radicals();
        let p = s2.mul(&s3);
        assert_eq!(p.coeff(6), q(1, 1));
        assert_eq!(s2.mul(&s2).coeff(1), q(2, 1));
        let s6 = qn("√6").to_radicals();
        assert_eq!(s6.mul(&s2).coeff(3), q(2, 1));
    }

    fn arb_qn() -> impl Strategy<Value = QuadraticNumber> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6, prop_oneof![Just(2u64), Just(3), Just(5), Just(6)])
            .prop_map(|(an, ad, bn, bd, d)| QuadraticNumber::new(q(an, ad), q(bn, bd), d).unwrap())
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(x in arb_qn()) {
            prop_assert_eq!(x.to_string().parse::<QuadraticNumber>().unwrap(), x);
        }

        #[test]
        fn norm_is_multiplicative(x in arb_qn(), y in arb_qn()) {
            prop_assume!(x.d() == y.d() || x.is_rational() || y.is_rational());
            prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * y.norm());
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn radicals_agree_with_field_product(x in arb_qn(), y in arb_qn()) {
            prop_assume!(x.d() == y.d() || x.is_rational() || y.is_rational());
            prop_assert_eq!(x.to_radicals().mul(&y.to_radicals()), x.mul(&y).unwrap().to_radicals());
        }
    }
}
