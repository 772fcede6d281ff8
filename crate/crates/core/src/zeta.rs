//! Zeta functions in factored form: `Z = prod_{i odd} P_i / prod_{i even} P_i`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::QuadraticNumber;
use crate::series::{ps_exp, ps_log, rat, rational_reconstruct, QPoly, RationalFunction, SeriesError, TruncatedSeries};
use crate::trace::FrobeniusData;
use crate::variety::CountSeries;

/// Count terms that must be predicted rather than fitted.
pub const ZETA_HOLDOUT: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("{have} counts given, reconstruction with degree bounds ({num_deg}, {den_deg}) needs R >= {needed}")]
    InsufficientTerms { have: usize, needed: usize, num_deg: usize, den_deg: usize },
    #[error("counts are not the expansion of a rational function with degree bounds ({num_deg}, {den_deg})")]
    NotRational { num_deg: usize, den_deg: usize },
    #[error("factorization mismatch: {0}")]
    FactorizationMismatch(String),
    #[error("eigenvalues in degree {0} do not give a rational characteristic polynomial")]
    IrrationalCharPoly(usize),
    #[error("invalid betti numbers: {0}")]
    BadBetti(String),
    #[error("invalid zeta document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Series(SeriesError),
}

impl From<SeriesError> for ZetaError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NotRational { num_deg, den_deg } => ZetaError::NotRational { num_deg, den_deg },
            other => ZetaError::Series(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaKind {
    Standard,
    Lefschetz,
}

/// Factored zeta function over `F_q` of an `n`-dimensional variety.
///
/// Interior factors that could not be separated are `None`; their product
/// is carried in `residual_numer` (odd indices) and `residual_denom` (even).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredZeta {
    q: u64,
    n: usize,
    kind: ZetaKind,
    factors: Vec<Option<QPoly>>,
    #[serde(default = "QPoly::one", skip_serializing_if = "QPoly::is_one")]
    residual_numer: QPoly,
    #[serde(default = "QPoly::one", skip_serializing_if = "QPoly::is_one")]
    residual_denom: QPoly,
}

fn top_factor(q: u64, n: usize, kind: ZetaKind) -> QPoly {
    let qn = BigRational::from_integer(BigInt::from(q).pow(n as u32));
    match kind {
        ZetaKind::Standard => QPoly::linear(qn),
        ZetaKind::Lefschetz => QPoly::linear(-qn),
    }
}

impl FactoredZeta {
    /// Builds and validates a factored zeta function.
    pub fn new(
        q: u64,
        n: usize,
        kind: ZetaKind,
        factors: Vec<Option<QPoly>>,
        residual_numer: QPoly,
        residual_denom: QPoly,
    ) -> Result<FactoredZeta, ZetaError> {
        let fz = FactoredZeta { q, n, kind, factors, residual_numer, residual_denom };
        fz.validate()?;
        Ok(fz)
    }

    fn validate(&self) -> Result<(), ZetaError> {
        let bad = |m: String| Err(ZetaError::InvalidDocument(m));
        if self.q < 2 {
            return bad(format!("q = {} is not a field size", self.q));
        }
        if self.factors.len() != 2 * self.n + 1 {
            return bad(format!("{} factors for dimension {}", self.factors.len(), self.n));
        }
        if self.factors[0].as_ref() != Some(&QPoly::linear(rat(1))) {
            return bad("P_0 must be 1 - t".into());
        }
        if self.factors[2 * self.n].as_ref() != Some(&top_factor(self.q, self.n, self.kind)) {
            return bad(format!("P_{} does not match the {:?} convention", 2 * self.n, self.kind));
        }
        for (i, f) in self.factors.iter().enumerate() {
            if let Some(f) = f {
                if !f.coeff(0).is_one() {
                    return bad(format!("P_{i}(0) != 1"));
                }
            }
        }
        for (name, r) in [("residual_numer", &self.residual_numer), ("residual_denom", &self.residual_denom)] {
            if !r.coeff(0).is_one() {
                return bad(format!("{name}(0) != 1"));
            }
        }
        let hidden_odd = self.factors.iter().enumerate().any(|(i, f)| i % 2 == 1 && f.is_none());
        let hidden_even = self.factors.iter().enumerate().any(|(i, f)| i % 2 == 0 && f.is_none());
        if (!hidden_odd && !self.residual_numer.is_one()) || (!hidden_even && !self.residual_denom.is_one()) {
            return bad("residual given although every factor of that parity is explicit".into());
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<FactoredZeta, ZetaError> {
        let fz: FactoredZeta = serde_json::from_str(s).map_err(|e| ZetaError::InvalidDocument(e.to_string()))?;
        fz.validate()?;
        Ok(fz)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ZetaKind {
        self.kind
    }

    pub fn factors(&self) -> &[Option<QPoly>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Option<&QPoly> {
        self.factors.get(i).and_then(|f| f.as_ref())
    }

    pub fn residual_numer(&self) -> &QPoly {
        &self.residual_numer
    }

    pub fn residual_denom(&self) -> &QPoly {
        &self.residual_denom
    }

    /// Product of all odd-index factors (with the residual).
    pub fn numerator(&self) -> QPoly {
        self.parity_product(1, &self.residual_numer)
    }

    /// Product of all even-index factors (with the residual).
    pub fn denominator(&self) -> QPoly {
        self.parity_product(0, &self.residual_denom)
    }

    fn parity_product(&self, parity: usize, residual: &QPoly) -> QPoly {
        self.factors
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == parity)
            .filter_map(|(_, f)| f.as_ref())
            .fold(residual.clone(), |acc, f| &acc * f)
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), self.denominator()).expect("denominator has constant term 1")
    }

    /// Copy with `P_i` replaced; used to build negative controls.
    pub fn with_factor(&self, i: usize, p: QPoly) -> FactoredZeta {
        let mut out = self.clone();
        out.factors[i] = Some(p);
        out
    }
}

impl fmt::Display for FactoredZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} zeta over F_{}, dimension {}", self.kind, self.q, self.n)?;
        for (i, p) in self.factors.iter().enumerate() {
            match p {
                Some(p) => writeln!(f, "  P_{i}(t) = {p}")?,
                None => writeln!(f, "  P_{i}(t) = (not separated)")?,
            }
        }
        if !self.residual_numer.is_one() {
            writeln!(f, "  odd residual = {}", self.residual_numer)?;
        }
        if !self.residual_denom.is_one() {
            writeln!(f, "  even residual = {}", self.residual_denom)?;
        }
        Ok(())
    }
}

/// `exp(sum_r N_r t^r / r)` through `t^R`.
pub fn zeta_series(cs: &CountSeries) -> TruncatedSeries {
    let mut f = vec![BigRational::zero()];
    f.extend(cs.counts.iter().enumerate().map(|(i, &n)| BigRational::new(n.into(), (i as u64 + 1).into())));
    ps_exp(&TruncatedSeries::new(f)).expect("constant term is zero")
}

/// Degree bounds `(sum of odd b_i, sum of even b_i)`.
pub fn degree_bounds(betti: &[u64]) -> (usize, usize) {
    let odd = betti.iter().skip(1).step_by(2).sum::<u64>() as usize;
    let even = betti.iter().step_by(2).sum::<u64>() as usize;
    (odd, even)
}

/// Number of counts needed for degree bounds `(m, n)` with `holdout` predicted terms.
pub fn required_terms(num_deg: usize, den_deg: usize, holdout: usize) -> usize {
    num_deg + den_deg + holdout
}

fn check_betti(betti: &[u64], n: usize) -> Result<(), ZetaError> {
    if betti.len() != 2 * n + 1 {
        return Err(ZetaError::BadBetti(format!("{} entries for dimension {n}", betti.len())));
    }
    if betti[0] != 1 || betti[2 * n] != 1 {
        return Err(ZetaError::BadBetti("b_0 and b_2n must be 1".into()));
    }
    Ok(())
}

/// Reconstructs `Z` from counts with Betti numbers as degree bounds.
///
/// The Padé system is solved on the first `sum b_i + 1` coefficients; the
/// remaining (at least two) are checked, so the result predicts them.
pub fn zeta_from_counts(cs: &CountSeries, betti: &[u64], n: usize) -> Result<FactoredZeta, ZetaError> {
    zeta_from_counts_holdout(cs, betti, n, ZETA_HOLDOUT)
}

/// [`zeta_from_counts`] with a caller-chosen number of predicted terms.
pub fn zeta_from_counts_holdout(cs: &CountSeries, betti: &[u64], n: usize, holdout: usize) -> Result<FactoredZeta, ZetaError> {
    check_betti(betti, n)?;
    let (num_deg, den_deg) = degree_bounds(betti);
    let active = |parity: usize| (1..2 * n).filter(|&i| i % 2 == parity && betti[i] > 0).collect::<Vec<_>>();
    reconstruct(cs, n, (num_deg, den_deg), holdout, &active(1), &active(0))
}

/// Reconstruction with explicit bounds and no Betti numbers. All interior
/// indices of a parity are considered active, so only curves split fully.
pub fn zeta_from_counts_with_bounds(
    cs: &CountSeries,
    n: usize,
    num_deg: usize,
    den_deg: usize,
    holdout: usize,
) -> Result<FactoredZeta, ZetaError> {
    let all = |parity: usize| (1..2 * n).filter(|&i| i % 2 == parity).collect::<Vec<_>>();
    reconstruct(cs, n, (num_deg, den_deg), holdout, &all(1), &all(0))
}

fn reconstruct(
    cs: &CountSeries,
    n: usize,
    (num_deg, den_deg): (usize, usize),
    holdout: usize,
    odd_active: &[usize],
    even_active: &[usize],
) -> Result<FactoredZeta, ZetaError> {
    // one checked coefficient is the least the reconstruction accepts
    let needed = required_terms(num_deg, den_deg, holdout.max(1));
    if cs.len() < needed {
        return Err(ZetaError::InsufficientTerms { have: cs.len(), needed, num_deg, den_deg });
    }
    let rf = rational_reconstruct(&zeta_series(cs), num_deg, den_deg)?;
    let outer = &QPoly::linear(rat(1)) * &top_factor(cs.q, n, ZetaKind::Standard);
    let (inner_denom, r) = rf.denom().div_rem(&outer);
    if !r.is_zero() {
        return Err(ZetaError::FactorizationMismatch(format!("denominator {} is not divisible by {}", rf.denom(), outer)));
    }
    let mut factors: Vec<Option<QPoly>> = vec![Some(QPoly::one()); 2 * n + 1];
    factors[0] = Some(QPoly::linear(rat(1)));
    factors[2 * n] = Some(top_factor(cs.q, n, ZetaKind::Standard));
    let mut residual_numer = QPoly::one();
    let mut residual_denom = QPoly::one();
    for (active, poly, residual, parity) in
        [(odd_active, rf.numer().clone(), &mut residual_numer, 1), (even_active, inner_denom, &mut residual_denom, 0)]
    {
        match active {
            [] if poly.is_one() => {}
            [] => {
                return Err(ZetaError::FactorizationMismatch(format!(
                    "{} is left over but no {} cohomology is expected",
                    poly,
                    if parity == 1 { "odd" } else { "even interior" }
                )))
            }
            [i] => factors[*i] = Some(poly),
            many => {
                for &i in many {
                    factors[i] = None;
                }
                // inactive indices of this parity keep P_i = 1
                *residual = poly;
            }
        }
    }
    FactoredZeta::new(cs.q, n, ZetaKind::Standard, factors, residual_numer, residual_denom)
}

/// `prod_j (1 - lambda_j t)` with rational coefficients, or `None`.
fn rational_char_poly(eigs: &[QuadraticNumber]) -> Option<QPoly> {
    let mut ds: Vec<u64> = eigs.iter().map(|e| e.d()).collect();
    ds.sort_unstable();
    ds.dedup();
    let mut total = QPoly::one();
    // each radical class must close up on its own
    for d in ds {
        let mut coeffs = vec![QuadraticNumber::int(1)];
        for e in eigs.iter().filter(|e| e.d() == d) {
            let mut next = vec![QuadraticNumber::int(0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] = next[k].add(c).ok()?;
                next[k + 1] = next[k + 1].sub(&c.mul(e).ok()?).ok()?;
            }
            coeffs = next;
        }
        if coeffs.iter().any(|c| !c.is_rational()) {
            return None;
        }
        total = &total * &QPoly::new(coeffs.iter().map(|c| c.a().clone()).collect());
    }
    Some(total)
}

/// `Z^L` from exact real eigenvalues per degree; `eigs[0] = [1]`, `eigs[2n] = [-q^n]`.
pub fn lefschetz_zeta(eigs: &[Vec<QuadraticNumber>], q: u64, n: usize) -> Result<FactoredZeta, ZetaError> {
    if eigs.len() != 2 * n + 1 {
        return Err(ZetaError::InvalidDocument(format!("{} eigenvalue lists for dimension {n}", eigs.len())));
    }
    let top = QuadraticNumber::rational(BigRational::from_integer(-BigInt::from(q).pow(n as u32)));
    if eigs[0] != [QuadraticNumber::int(1)] || eigs[2 * n] != [top] {
        return Err(ZetaError::InvalidDocument("eigenvalues must be [1] in degree 0 and [-q^n] in the top degree".into()));
    }
    let factors = eigs
        .iter()
        .enumerate()
        .map(|(i, e)| rational_char_poly(e).map(Some).ok_or(ZetaError::IrrationalCharPoly(i)))
        .collect::<Result<Vec<_>, _>>()?;
    FactoredZeta::new(q, n, ZetaKind::Lefschetz, factors, QPoly::one(), QPoly::one())
}

/// `Z^L` with `P_i(t) = det(1 - t omega_i)`.
pub fn lefschetz_from_frobenius(fd: &FrobeniusData) -> Result<FactoredZeta, ZetaError> {
    let factors = fd.omegas().iter().map(|w| Some(w.det_poly())).collect();
    FactoredZeta::new(fd.q(), fd.n(), ZetaKind::Lefschetz, factors, QPoly::one(), QPoly::one())
}

/// Taylor coefficients of `Z` through `t^order`.
pub fn expand(fz: &FactoredZeta, order: usize) -> TruncatedSeries {
    RationalFunction::new(fz.numerator(), fz.denominator()).expect("denominator has constant term 1").expand(order)
}

/// `N_1..N_R` implied by `Z`: `N_r = r [t^r] log Z`.
pub fn implied_counts(fz: &FactoredZeta, max_r: usize) -> Vec<BigRational> {
    let log = ps_log(&expand(fz, max_r)).expect("Z(0) = 1");
    (1..=max_r).map(|r| log.coeff(r) * rat(r as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(s: &str) -> QuadraticNumber {
        s.parse().unwrap()
    }

    fn e1_counts() -> CountSeries {
        CountSeries::new(5, vec![8, 32, 104, 640, 3208, 15392])
    }

    #[test]
    fn projective_line() {
        let cs = CountSeries::new(3, vec![4, 10, 28, 82, 244, 730]);
        let fz = zeta_from_counts(&cs, &[1, 0, 1], 1).unwrap();
        assert_eq!(fz.factor(0), Some(&QPoly::from_ints(&[1, -1])));
        assert_eq!(fz.factor(1), Some(&QPoly::one()));
        assert_eq!(fz.factor(2), Some(&QPoly::from_ints(&[1, -3])));
        // four terms are the minimum: two fitted coefficients plus two checked
        let short = CountSeries::new(3, vec![4, 10, 28, 82]);
        assert_eq!(zeta_from_counts(&short, &[1, 0, 1], 1).unwrap(), fz);
        let shorter = CountSeries::new(3, vec![4, 10, 28]);
        assert!(matches!(zeta_from_counts(&shorter, &[1, 0, 1], 1), Err(ZetaError::InsufficientTerms { needed: 4, .. })));
    }

    #[test]
    fn elliptic_curve() {
        let fz = zeta_from_counts(&e1_counts(), &[1, 2, 1], 1).unwrap();
        assert_eq!(fz.factor(1), Some(&QPoly::from_ints(&[1, 2, 5])));
        assert_eq!(fz.factor(2), Some(&QPoly::from_ints(&[1, -5])));
        let implied: Vec<BigRational> = [8, 32, 104, 640, 3208, 15392, 78184].iter().map(|&n| rat(n)).collect();
        assert_eq!(implied_counts(&fz, 7), implied);
    }

    #[test]
    fn wrong_counts_are_rejected() {
        let mut cs = e1_counts();
        cs.counts[5] += 1;
        assert!(matches!(zeta_from_counts(&cs, &[1, 2, 1], 1), Err(ZetaError::NotRational { .. })));
    }

    #[test]
    fn projective_plane_even_interior() {
        let cs = CountSeries::new(2, vec![7, 21, 73, 273, 1057]);
        let fz = zeta_from_counts(&cs, &[1, 0, 1, 0, 1], 2).unwrap();
        assert_eq!(fz.factor(2), Some(&QPoly::from_ints(&[1, -2])));
        assert_eq!(fz.factor(4), Some(&QPoly::from_ints(&[1, -4])));
        assert_eq!(fz.factor(1), Some(&QPoly::one()));
    }

    #[test]
    fn surface_with_two_odd_groups_is_left_unseparated() {
        // product of two elliptic curves' H^1 factors split across degrees 1 and 3
        let p1 = QPoly::from_ints(&[1, 2, 5]);
        let p3 = QPoly::from_ints(&[1, 10, 125]);
        let p2 = QPoly::from_ints(&[1, -5]);
        let fz = FactoredZeta::new(
            5,
            2,
            ZetaKind::Standard,
            vec![Some(QPoly::from_ints(&[1, -1])), Some(p1), Some(p2), Some(p3), Some(QPoly::from_ints(&[1, -25]))],
            QPoly::one(),
            QPoly::one(),
        )
        .unwrap();
        let counts: Vec<u64> = implied_counts(&fz, 9).iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let back = zeta_from_counts(&CountSeries::new(5, counts), &[1, 2, 1, 2, 1], 2).unwrap();
        assert_eq!(back.factor(1), None);
        assert_eq!(back.factor(2), Some(&QPoly::from_ints(&[1, -5])));
        assert_eq!(back.residual_numer(), &fz.numerator());
        assert_eq!(back.to_rational_function(), fz.to_rational_function());
    }

    #[test]
    fn lefschetz_examples() {
        let e = vec![vec![QuadraticNumber::int(1)], vec![qn("-1+√6"), qn("-1-√6")], vec![QuadraticNumber::int(-5)]];
        let fz = lefschetz_zeta(&e, 5, 1).unwrap();
        assert_eq!(fz.factor(1), Some(&QPoly::from_ints(&[1, 2, -5])));
        assert_eq!(fz.factor(2), Some(&QPoly::from_ints(&[1, 5])));
        let trivial = lefschetz_zeta(&[vec![QuadraticNumber::int(1)], vec![], vec![QuadraticNumber::int(-3)]], 3, 1).unwrap();
        assert_eq!(expand(&trivial, 2).coeffs(), &[rat(1), rat(-2), rat(7)]);
        let bad = lefschetz_zeta(&[vec![QuadraticNumber::int(1)], vec![qn("√2")], vec![QuadraticNumber::int(-3)]], 3, 1);
        assert_eq!(bad, Err(ZetaError::IrrationalCharPoly(1)));
        let mixed = vec![qn("√2"), qn("√3"), qn("-√2"), qn("-√3")];
        assert_eq!(rational_char_poly(&mixed), Some(QPoly::from_ints(&[1, 0, -5, 0, 6])));
    }

    #[test]
    fn expansion_examples() {
        let p1 = zeta_from_counts(&CountSeries::new(3, vec![4, 10, 28, 82]), &[1, 0, 1], 1).unwrap();
        assert_eq!(expand(&p1, 3).coeffs(), &[rat(1), rat(4), rat(13), rat(40)]);
        let e1 = zeta_from_counts(&e1_counts(), &[1, 2, 1], 1).unwrap();
        assert_eq!(expand(&e1, 0).coeffs(), &[rat(1)]);
        assert_eq!(expand(&e1, 2), zeta_series(&CountSeries::new(5, vec![8, 32])));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let fz = zeta_from_counts(&e1_counts(), &[1, 2, 1], 1).unwrap();
        let json = fz.to_json();
        assert_eq!(json, r#"{"q":5,"n":1,"kind":"standard","factors":[["1/1","-1/1"],["1/1","2/1","5/1"],["1/1","-5/1"]]}"#);
        assert_eq!(FactoredZeta::from_json(&json).unwrap(), fz);
        for bad in [
            r#"{"q":5,"n":1,"kind":"standard","factors":[["1/1","-1/1"],["1/1"],["1/1","5/1"]]}"#,
            r#"{"q":5,"n":1,"kind":"standard","factors":[["1/1","-1/1"],["2/1"],["1/1","-5/1"]]}"#,
            r#"{"q":5,"n":1,"kind":"standard","factors":[["1/1","-1/1"],["1/1","-5/1"]]}"#,
            r#"{"q":5,"n":1,"kind":"mixed","factors":[]}"#,
            r#"{"q":5,"n":1,"kind":"standard","factors":[["1/1","-1/1"],["1/1"],["1/1","-5/1"]],"residual_numer":["1/1","1/1"]}"#,
        ] {
            assert!(FactoredZeta::from_json(bad).is_err(), "{bad}");
        }
    }
}
