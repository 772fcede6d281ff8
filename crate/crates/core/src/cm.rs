//! Grössencharacter values for CM elliptic curves over class-number-one
//! imaginary quadratic fields.

use std::fmt;

use num_integer::Roots;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::QuadraticNumber;
use crate::trace::{companion, frobenius_cm, Endomorphism, FrobeniusData};
use crate::series::QPoly;
use crate::variety::{TermDoc, Variety, VarietyDoc, VarietyError};

/// `d` with `Q(sqrt -d)` of class number one.
pub const CLASS_NUMBER_ONE: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("{p} is inert in Q(sqrt -{d})")]
    InertPrime { p: u64, d: u64 },
    #[error("Q(sqrt -{0}) does not have class number one")]
    NotClassNumberOne(u64),
    #[error("no generator over {p} gives {n1} points")]
    NormalizationFailure { p: u64, n1: u64 },
    #[error("element has norm {norm}, expected {q}")]
    NormMismatch { norm: u64, q: u64 },
    #[error("curve {label} has bad reduction at {p}")]
    BadReduction { label: String, p: u64 },
    #[error("malformed CM fixture table: {0}")]
    Parse(String),
}

/// `x + y delta` with `delta = sqrt(-d)` for `d = 1, 2` and
/// `delta = (1 + sqrt(-d))/2` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ImagQuadInteger {
    pub x: i64,
    pub y: i64,
    pub d: u64,
}

impl ImagQuadInteger {
    pub fn new(x: i64, y: i64, d: u64) -> ImagQuadInteger {
        ImagQuadInteger { x, y, d }
    }

    fn half_integral(&self) -> bool {
        self.d % 4 == 3
    }

    /// `delta delta-bar` contribution: `(1 + d)/4` or `d`.
    fn m(&self) -> i128 {
        if self.half_integral() {
            (1 + self.d as i128) / 4
        } else {
            self.d as i128
        }
    }

    pub fn norm(&self) -> u64 {
        let (x, y) = (self.x as i128, self.y as i128);
        let n = if self.half_integral() { x * x + x * y + self.m() * y * y } else { x * x + self.m() * y * y };
        n as u64
    }

    /// `pi + conj(pi)`.
    pub fn trace(&self) -> i64 {
        if self.half_integral() {
            2 * self.x + self.y
        } else {
            2 * self.x
        }
    }

    pub fn conj(&self) -> ImagQuadInteger {
        if self.half_integral() {
            ImagQuadInteger::new(self.x + self.y, -self.y, self.d)
        } else {
            ImagQuadInteger::new(self.x, -self.y, self.d)
        }
    }

    pub fn mul(&self, o: &ImagQuadInteger) -> ImagQuadInteger {
        assert_eq!(self.d, o.d, "elements of different fields");
        let m = self.m() as i64;
        let (x1, y1, x2, y2) = (self.x, self.y, o.x, o.y);
        if self.half_integral() {
            // delta^2 = delta - m
            ImagQuadInteger::new(x1 * x2 - m * y1 * y2, x1 * y2 + x2 * y1 + y1 * y2, self.d)
        } else {
            ImagQuadInteger::new(x1 * x2 - m * y1 * y2, x1 * y2 + x2 * y1, self.d)
        }
    }

    /// Twice the real part.
    fn re2(&self) -> i64 {
        self.trace()
    }

    /// Sort key for the canonical associate: real part `>= 0` first, then
    /// imaginary part `>= 0`.
    fn canonical_key(&self) -> (bool, bool, i64, i64) {
        (self.re2() < 0, self.y < 0, self.x, self.y)
    }
}

impl fmt::Display for ImagQuadInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta = match self.d {
            1 => "i".to_string(),
            d if d % 4 == 3 => format!("(1+√-{d})/2"),
            d => format!("√-{d}"),
        };
        let sign = if self.y < 0 { "-" } else { "+" };
        write!(f, "{}{}{}{}", self.x, sign, self.y.abs(), delta)
    }
}

/// All elements of norm `p` (every associate of every prime above `p`).
pub fn split_prime(p: u64, d: u64) -> Result<Vec<ImagQuadInteger>, CmError> {
    if !CLASS_NUMBER_ONE.contains(&d) {
        return Err(CmError::NotClassNumberOne(d));
    }
    let bound = (4 * p / d.max(1)).sqrt() as i64 + 1;
    let xb = (p.sqrt() as i64) + bound + 1;
    let mut out = Vec::new();
    for y in -bound..=bound {
        for x in -xb..=xb {
            let z = ImagQuadInteger::new(x, y, d);
            if z.norm() == p {
                out.push(z);
            }
        }
    }
    if out.is_empty() {
        return Err(CmError::InertPrime { p, d });
    }
    out.sort_by_key(|z| z.canonical_key());
    Ok(out)
}

/// `y^2 = x^3 + a4 x + a6` with CM by the maximal order of `Q(sqrt -d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CMCurve {
    pub label: String,
    pub d: u64,
    pub a4: i64,
    pub a6: i64,
    pub primes: Vec<u64>,
}

impl CMCurve {
    /// Parses and validates a JSON array of curves.
    pub fn parse_table(json: &str) -> Result<Vec<CMCurve>, CmError> {
        let curves: Vec<CMCurve> = serde_json::from_str(json).map_err(|e| CmError::Parse(e.to_string()))?;
        for c in &curves {
            if !CLASS_NUMBER_ONE.contains(&c.d) {
                return Err(CmError::NotClassNumberOne(c.d));
            }
            if c.primes.iter().any(|&p| !crate::field::is_prime_u64(p)) {
                return Err(CmError::Parse(format!("{}: non-prime in primes", c.label)));
            }
        }
        Ok(curves)
    }

    /// `4 a4^3 + 27 a6^2 != 0 mod p`, and `p > 3` so the short form is valid.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        let pi = p as i128;
        let disc = (4 * (self.a4 as i128).pow(3) + 27 * (self.a6 as i128).pow(2)).rem_euclid(pi);
        p > 3 && disc != 0
    }

    /// The projective model `y^2 z = x^3 + a4 x z^2 + a6 z^3` over `F_p`.
    pub fn variety(&self, p: u64) -> Result<Variety, VarietyError> {
        let t = |exps: [u32; 3], coeff: i64| TermDoc { exps: exps.to_vec(), coeff };
        let terms = vec![t([0, 2, 1], 1), t([3, 0, 0], -1), t([1, 0, 2], -self.a4), t([0, 0, 3], -self.a6)];
        Variety::from_doc(&VarietyDoc { p, num_vars: 3, dim: 1, betti: Some(vec![1, 2, 1]), polys: vec![terms] })
    }
}

/// The value of the Grössencharacter at the prime over `p`: the canonical
/// generator of norm `p` whose trace matches the count `n1 = |E(F_p)|`.
pub fn gross_char(curve: &CMCurve, p: u64, n1: u64) -> Result<ImagQuadInteger, CmError> {
    if !curve.has_good_reduction(p) {
        return Err(CmError::BadReduction { label: curve.label.clone(), p });
    }
    let target = 1 + p as i64 - n1 as i64;
    split_prime(p, curve.d)?
        .into_iter()
        .filter(|z| z.trace() == target)
        .min_by_key(|z| z.canonical_key())
        .ok_or(CmError::NormalizationFailure { p, n1 })
}

/// `1 + q - (psi + conj(psi))`.
pub fn predict_count(psi: &ImagQuadInteger, q: u64) -> Result<i64, CmError> {
    if psi.norm() != q {
        return Err(CmError::NormMismatch { norm: psi.norm(), q });
    }
    Ok(1 + q as i64 - psi.trace())
}

/// `1 + q^2 - (psi^2 + conj(psi)^2)`, the count over `F_{q^2}`.
pub fn predict_count_squared(psi: &ImagQuadInteger, q: u64) -> Result<i64, CmError> {
    if psi.norm() != q {
        return Err(CmError::NormMismatch { norm: psi.norm(), q });
    }
    Ok(1 + (q * q) as i64 - psi.mul(psi).trace())
}

/// Frobenius data with `omega_1 = a/2 + sqrt(a^2 + 4q)/2`, `a = psi + conj(psi)`.
pub fn cm_frobenius_bridge(psi: &ImagQuadInteger, q: u64) -> Result<FrobeniusData, CmError> {
    if psi.norm() != q {
        return Err(CmError::NormMismatch { norm: psi.norm(), q });
    }
    let a = psi.trace();
    let (w, _, _) = frobenius_cm(a, q);
    let omega1 = if w.is_rational() {
        // eigenvalues are rational: keep both on a rank-two group
        Endomorphism::Matrix(companion(&QPoly::from_ints(&[-(q as i64), -a, 1])).expect("monic"))
    } else {
        Endomorphism::Multiplication(w)
    };
    Ok(FrobeniusData::curve(q, omega1))
}

/// `omega_1` of [`cm_frobenius_bridge`] as a number.
pub fn bridge_omega(psi: &ImagQuadInteger, q: u64) -> QuadraticNumber {
    frobenius_cm(psi.trace(), q).0
}
