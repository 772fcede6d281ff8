//! Trace-cohomology groups as Z-modules of real algebraic numbers, and the
//! Frobenius data acting on them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::quadratic::{QuadraticError, QuadraticNumber, Radicals};
use crate::series::{solve_linear, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("generators are linearly dependent over Q (rank {rank} < {count})")]
    RankDeficient { rank: usize, count: usize },
    #[error("the first generator of a trace module must be 1")]
    FirstGeneratorNotOne,
    #[error("{0} is not an algebraic integer")]
    NotAlgebraicInteger(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not of the form x^g h(x + q/x)")]
    NotWeilPolynomial(String),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}

/// `Z g_0 + .. + Z g_k` inside the reals, `g_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceModule {
    gens: Vec<QuadraticNumber>,
    degree_index: usize,
}

/// Radical classes used by `gens`, in increasing order.
fn basis_of(gens: &[Radicals]) -> Vec<u64> {
    let mut b: Vec<u64> = gens.iter().flat_map(|g| g.support().collect::<Vec<_>>()).collect();
    b.sort_unstable();
    b.dedup();
    b
}

fn rank_of(rows: Vec<Vec<BigRational>>) -> usize {
    let mut m = rows;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let delta = &f * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl TraceModule {
    pub fn new(gens: Vec<QuadraticNumber>, degree_index: usize) -> Result<TraceModule, TraceError> {
        if gens.first() != Some(&QuadraticNumber::int(1)) {
            return Err(TraceError::FirstGeneratorNotOne);
        }
        let rads: Vec<Radicals> = gens.iter().map(|g| g.to_radicals()).collect();
        let basis = basis_of(&rads);
        let rows = rads.iter().map(|r| basis.iter().map(|&d| r.coeff(d)).collect()).collect();
        let rank = rank_of(rows);
        if rank < gens.len() {
            return Err(TraceError::RankDeficient { rank, count: gens.len() });
        }
        Ok(TraceModule { gens, degree_index })
    }

    /// The module `Z`, as in degrees `0` and `2n`.
    pub fn integers(degree_index: usize) -> TraceModule {
        TraceModule { gens: vec![QuadraticNumber::int(1)], degree_index }
    }

    /// `Z + Z omega`, on which multiplication by `omega` is stable whenever
    /// `omega` is a quadratic integer.
    pub fn from_frobenius(omega: &QuadraticNumber, degree_index: usize) -> Result<TraceModule, TraceError> {
        TraceModule::new(vec![QuadraticNumber::int(1), omega.clone()], degree_index)
    }

    /// `Z + Z sqrt(d)`.
    pub fn radical_lattice(d: u64, degree_index: usize) -> Result<TraceModule, TraceError> {
        TraceModule::new(vec![QuadraticNumber::int(1), QuadraticNumber::sqrt(d)?], degree_index)
    }

    pub fn gens(&self) -> &[QuadraticNumber] {
        &self.gens
    }

    pub fn degree_index(&self) -> usize {
        self.degree_index
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Integer coordinates of `x` in the generators, if `x` lies in the module.
    pub fn coordinates(&self, x: &Radicals) -> Option<Vec<BigInt>> {
        let rads: Vec<Radicals> = self.gens.iter().map(|g| g.to_radicals()).collect();
        let basis = basis_of(&rads);
        if x.support().any(|d| !basis.contains(&d)) {
            return None;
        }
        let a = basis.iter().map(|&d| rads.iter().map(|g| g.coeff(d)).collect()).collect();
        let b = basis.iter().map(|&d| x.coeff(d)).collect();
        let sol = solve_linear(a, b, rads.len())?;
        sol.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

/// `omega M ⊆ M`, decided by exact integer coordinates of each `omega g`.
pub fn is_endomorphism(omega: &QuadraticNumber, m: &TraceModule) -> bool {
    let w = omega.to_radicals();
    m.gens.iter().all(|g| m.coordinates(&w.mul(&g.to_radicals())).is_some())
}

/// Field trace of an algebraic integer: `2a`, or `a` when rational.
pub fn endo_trace(omega: &QuadraticNumber) -> Result<BigInt, TraceError> {
    if !omega.is_algebraic_integer() {
        return Err(TraceError::NotAlgebraicInteger(omega.to_string()));
    }
    Ok(if omega.is_rational() { omega.a().to_integer() } else { omega.trace().to_integer() })
}

/// `omega = a/2 + sqrt(a^2 + 4q)/2` with its two conjugate eigenvalues.
pub fn frobenius_cm(a_p: i64, q: u64) -> (QuadraticNumber, QuadraticNumber, QuadraticNumber) {
    let disc = (a_p as i128 * a_p as i128 + 4 * q as i128) as u64;
    let half = |n: i64| BigRational::new(n.into(), 2.into());
    let l1 = QuadraticNumber::new(half(a_p), half(1), disc).expect("radicand is positive");
    let l2 = QuadraticNumber::new(half(a_p), half(-1), disc).expect("radicand is positive");
    (l1.clone(), l1, l2)
}

/// `H^1` of a genus-`g` curve: `Z + Z theta_1 + .. + Z theta_{2g-1}`.
pub fn curve_h1(g: usize, thetas: &[QuadraticNumber]) -> Result<TraceModule, TraceError> {
    if g == 0 || thetas.len() != 2 * g - 1 {
        return Err(TraceError::InvalidInput(format!("genus {g} needs {} generators besides 1, got {}", (2 * g).saturating_sub(1), thetas.len())));
    }
    let mut gens = vec![QuadraticNumber::int(1)];
    gens.extend_from_slice(thetas);
    TraceModule::new(gens, 1)
}

pub type IntMatrix = Vec<Vec<BigInt>>;

fn check_square(a: &[Vec<BigInt>]) -> Result<usize, TraceError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(TraceError::InvalidMatrix("not square".into()));
    }
    Ok(n)
}

/// Fraction-free determinant.
pub fn det_bareiss(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sign of `det [[A, I], [I, 0]]` for symmetric positive definite `A`.
pub fn block_sign(a: &[Vec<BigInt>]) -> Result<i32, TraceError> {
    let g = check_square(a)?;
    if g == 0 {
        return Err(TraceError::InvalidMatrix("empty".into()));
    }
    for i in 0..g {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(TraceError::InvalidMatrix("not symmetric".into()));
            }
        }
    }
    // Sylvester: all leading principal minors positive
    for k in 1..=g {
        let minor: IntMatrix = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        if !det_bareiss(&minor).is_positive() {
            return Err(TraceError::InvalidMatrix("not positive definite".into()));
        }
    }
    let mut block = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
    for i in 0..g {
        for j in 0..g {
            block[i][j] = a[i][j].clone();
        }
        block[i][g + i] = BigInt::one();
        block[g + i][i] = BigInt::one();
    }
    let det = det_bareiss(&block);
    Ok(if det.is_negative() { -1 } else { 1 })
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect()).collect()
}

/// `det(I - tA)` via Faddeev-LeVerrier: coefficients of the reversed
/// characteristic polynomial.
pub fn reversed_charpoly(a: &[Vec<BigInt>]) -> QPoly {
    let n = a.len();
    let ar: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
    let mut c = vec![BigRational::one()];
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, l| acc + &ar[i][l] * &m[l][j])).collect())
            .collect();
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[k - 1];
        }
        let tr = (0..n).fold(BigRational::zero(), |acc, i| {
            acc + (0..n).fold(BigRational::zero(), |s, l| s + &ar[i][l] * &next[l][i])
        });
        c.push(-tr / BigRational::from_integer(BigInt::from(k)));
        m = next;
    }
    // charpoly x^n + c_1 x^{n-1} + .. + c_n, so det(I - tA) = sum c_k t^k
    QPoly::new(c)
}

fn int_matrix_to_i64(a: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    a.iter().map(|r| r.iter().map(|x| x.to_i64().expect("matrix entries fit i64")).collect()).collect()
}

/// How the Frobenius acts on one trace-cohomology group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endomorphism {
    /// The group is zero.
    Zero,
    /// Multiplication by a real algebraic number on `Z + Z omega` (or on `Z`
    /// when `omega` is rational).
    Multiplication(QuadraticNumber),
    /// An integer matrix in a chosen Z-basis.
    Matrix(IntMatrix),
}

impl Endomorphism {
    pub fn trace(&self) -> Result<BigInt, TraceError> {
        match self {
            Endomorphism::Zero => Ok(BigInt::zero()),
            Endomorphism::Multiplication(w) => endo_trace(w),
            Endomorphism::Matrix(a) => Ok((0..a.len()).fold(BigInt::zero(), |acc, i| acc + &a[i][i])),
        }
    }

    /// `tr(omega^r)`.
    pub fn power_trace(&self, r: u32) -> Result<BigInt, TraceError> {
        match self {
            Endomorphism::Zero => Ok(BigInt::zero()),
            Endomorphism::Multiplication(w) => endo_trace(&w.pow(r)),
            Endomorphism::Matrix(a) => {
                let n = a.len();
                let mut p: IntMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
                for _ in 0..r {
                    p = mat_mul(&p, a);
                }
                Ok((0..n).fold(BigInt::zero(), |acc, i| acc + &p[i][i]))
            }
        }
    }

    /// `det(1 - t omega)` on the group.
    pub fn det_poly(&self) -> QPoly {
        match self {
            Endomorphism::Zero => QPoly::one(),
            Endomorphism::Multiplication(w) if w.is_rational() => QPoly::linear(w.a().clone()),
            Endomorphism::Multiplication(w) => QPoly::new(vec![BigRational::one(), -w.trace(), w.norm()]),
            Endomorphism::Matrix(a) => reversed_charpoly(a),
        }
    }

    /// Exact eigenvalues when they are quadratic numbers.
    pub fn eigenvalues(&self) -> Option<Vec<QuadraticNumber>> {
        match self {
            Endomorphism::Zero => Some(Vec::new()),
            Endomorphism::Multiplication(w) if w.is_rational() => Some(vec![w.clone()]),
            Endomorphism::Multiplication(w) => Some(vec![w.clone(), w.conj()]),
            Endomorphism::Matrix(_) => None,
        }
    }
}

impl Serialize for Endomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Wire<'a> {
            Zero,
            Multiplication { omega: &'a QuadraticNumber },
            Matrix { rows: Vec<Vec<i64>> },
        }
        match self {
            Endomorphism::Zero => Wire::Zero.serialize(s),
            Endomorphism::Multiplication(w) => Wire::Multiplication { omega: w }.serialize(s),
            Endomorphism::Matrix(a) => Wire::Matrix { rows: int_matrix_to_i64(a) }.serialize(s),
        }
    }
}

/// Frobenius action `omega_0, .., omega_{2n}` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    q: u64,
    n: usize,
    omegas: Vec<Endomorphism>,
}

impl FrobeniusData {
    /// Checks `omega_0 = 1` and `omega_{2n} = -q^n`.
    pub fn new(q: u64, n: usize, omegas: Vec<Endomorphism>) -> Result<FrobeniusData, TraceError> {
        if omegas.len() != 2 * n + 1 {
            return Err(TraceError::InvalidInput(format!("need {} endomorphisms, got {}", 2 * n + 1, omegas.len())));
        }
        let top = BigInt::from(q).pow(n as u32);
        let top = QuadraticNumber::rational(BigRational::from_integer(-top));
        if omegas[0] != Endomorphism::Multiplication(QuadraticNumber::int(1)) {
            return Err(TraceError::InvalidInput("omega_0 must be multiplication by 1".into()));
        }
        if omegas[2 * n] != Endomorphism::Multiplication(top) {
            return Err(TraceError::InvalidInput(format!("omega_{} must be multiplication by -q^n", 2 * n)));
        }
        Ok(FrobeniusData { q, n, omegas })
    }

    /// Curve data with `omega_1` acting on `H^1`.
    pub fn curve(q: u64, omega1: Endomorphism) -> FrobeniusData {
        let ends = vec![
            Endomorphism::Multiplication(QuadraticNumber::int(1)),
            omega1,
            Endomorphism::Multiplication(QuadraticNumber::int(-(q as i64))),
        ];
        FrobeniusData::new(q, 1, ends).expect("curve shape is valid")
    }

    /// Curve data whose `H^1` endomorphism has real eigenvalues `lambda`
    /// paired with the Weil numbers of `p1` by `lambda - q/lambda = alpha + q/alpha`.
    pub fn curve_real_lift(q: u64, p1: &QPoly) -> Result<FrobeniusData, TraceError> {
        if p1.is_one() {
            return Ok(FrobeniusData::curve(q, Endomorphism::Zero));
        }
        let chi_l = real_lift(p1, q)?;
        if chi_l.degree() == 2 {
            // keep the exact number form unless it collapses to a rational,
            // which would act on a rank-one group
            let a = -chi_l.coeff(1);
            let a = a.to_integer().to_i64().ok_or_else(|| TraceError::InvalidInput("trace too large".into()))?;
            let (w, _, _) = frobenius_cm(a, q);
            if !w.is_rational() {
                return Ok(FrobeniusData::curve(q, Endomorphism::Multiplication(w)));
            }
        }
        Ok(FrobeniusData::curve(q, Endomorphism::Matrix(companion(&chi_l)?)))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omegas(&self) -> &[Endomorphism] {
        &self.omegas
    }

    fn interior_sum(&self) -> Result<BigInt, TraceError> {
        let mut s = BigInt::zero();
        for (i, w) in self.omegas.iter().enumerate().take(2 * self.n).skip(1) {
            let t = w.trace()?;
            s += if i % 2 == 0 { t } else { -t };
        }
        Ok(s)
    }
}

/// `1 + q^n + sum_{0<i<2n} (-1)^i tr(omega_i)`.
pub fn point_count_formula(fd: &FrobeniusData) -> Result<BigInt, TraceError> {
    Ok(BigInt::one() + BigInt::from(fd.q).pow(fd.n as u32) + fd.interior_sum()?)
}

/// `1 - q^n + sum_{0<i<2n} (-1)^i tr(omega_i)`.
pub fn lefschetz_number(fd: &FrobeniusData) -> Result<BigInt, TraceError> {
    Ok(BigInt::one() - BigInt::from(fd.q).pow(fd.n as u32) + fd.interior_sum()?)
}

/// Companion matrix of a monic integer polynomial (coefficients low first).
pub fn companion(f: &QPoly) -> Result<IntMatrix, TraceError> {
    let m = f.degree();
    if !f.coeff(m).is_one() || f.coeffs().iter().any(|c| !c.is_integer()) {
        return Err(TraceError::InvalidInput(format!("{f} is not a monic integer polynomial")));
    }
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for i in 1..m {
        a[i][i - 1] = BigInt::one();
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[m - 1] = -f.coeff(i).to_integer();
    }
    Ok(a)
}

/// `(x^2 + s)^j` as a polynomial in `x`.
fn shifted_square_power(s: &BigRational, j: usize) -> QPoly {
    let base = QPoly::new(vec![s.clone(), BigRational::zero(), BigRational::one()]);
    (0..j).fold(QPoly::one(), |acc, _| &acc * &base)
}

fn shift(p: &QPoly, k: usize) -> QPoly {
    let mut c = vec![BigRational::zero(); k];
    c.extend_from_slice(p.coeffs());
    QPoly::new(c)
}

/// From `P(t) = det(1 - t F)` of degree `2g` write `x^{2g} P(1/x) = x^g h(x + q/x)`
/// and return `x^g h(x - q/x)`, the characteristic polynomial whose roots
/// are the real numbers `lambda` with `lambda - q/lambda = alpha + q/alpha`.
pub fn real_lift(p: &QPoly, q: u64) -> Result<QPoly, TraceError> {
    let deg = p.degree();
    if deg % 2 == 1 || !p.coeff(0).is_one() {
        return Err(TraceError::NotWeilPolynomial(p.to_string()));
    }
    let g = deg / 2;
    let qr = BigRational::from_integer(q.into());
    let mut rest = QPoly::new((0..=deg).rev().map(|k| p.coeff(k)).collect());
    let mut h = vec![BigRational::zero(); g + 1];
    for j in (0..=g).rev() {
        let c = rest.coeff(g + j);
        h[j] = c.clone();
        rest = &rest - &shift(&shifted_square_power(&qr, j), g - j).scale(&c);
    }
    if !rest.is_zero() {
        return Err(TraceError::NotWeilPolynomial(p.to_string()));
    }
    let mq = -qr;
    Ok((0..=g).fold(QPoly::zero(), |acc, j| &acc + &shift(&shifted_square_power(&mq, j), g - j).scale(&h[j])))
}
