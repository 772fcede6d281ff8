//! End-to-end analyses: counts, reconstruction, Frobenius data and the
//! full check report for one input document.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cm::{cm_frobenius_bridge, gross_char, predict_count, predict_count_squared, split_prime, CMCurve};
use crate::quadratic::QuadraticNumber;
use crate::series::QPoly;
use crate::trace::{
    frobenius_cm, is_endomorphism, lefschetz_number, point_count_formula, Endomorphism, FrobeniusData, IntMatrix, TraceModule,
};
use crate::variety::{count_series, CountOptions, CountSeries, Variety};
use crate::weil::{
    block_sign_check, endomorphism_checks, index_check, smale_check, trace_consistency, verify_betti, verify_functional_eq,
    verify_rationality, verify_rh_modulus, CheckResult, CheckStatus, VerificationReport, DEFAULT_RH_TOLERANCE,
};
use crate::zeta::{
    degree_bounds, lefschetz_from_frobenius, required_terms, zeta_from_counts_holdout, zeta_from_counts_with_bounds, FactoredZeta,
    ZETA_HOLDOUT,
};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub count: CountOptions,
    /// Counts predicted rather than fitted.
    pub holdout: usize,
    pub tol: f64,
    /// Override for the number of counts `R`.
    pub terms: Option<usize>,
    /// Degree bounds when the document has no Betti numbers.
    pub max_deg: Option<(usize, usize)>,
}

impl Default for Options {
    fn default() -> Self {
        Options { count: CountOptions::default(), holdout: ZETA_HOLDOUT, tol: DEFAULT_RH_TOLERANCE, terms: None, max_deg: None }
    }
}

/// Degree bounds and number of counts for a variety.
pub fn plan_terms(v: &Variety, opts: &Options) -> Result<(usize, usize, usize), Error> {
    let (m, n) = match (opts.max_deg, v.betti()) {
        (Some(b), _) => b,
        (None, Some(betti)) => degree_bounds(betti),
        (None, None) => return Err(Error::Input("the document has no betti numbers; give degree bounds with --max-deg".into())),
    };
    Ok((m, n, opts.terms.unwrap_or(required_terms(m, n, opts.holdout))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaRun {
    pub variety_hash: String,
    pub counts: CountSeries,
    pub zeta: FactoredZeta,
    pub num_deg: usize,
    pub den_deg: usize,
}

impl ZetaRun {
    /// Counts the reconstruction did not fit.
    pub fn held_out(&self) -> usize {
        self.counts.len().saturating_sub(self.num_deg + self.den_deg)
    }
}

/// Counts `N_1..N_R` and reconstructs the zeta function.
pub fn run_zeta(v: &Variety, opts: &Options) -> Result<ZetaRun, Error> {
    let (m, n, r) = plan_terms(v, opts)?;
    let counts = count_series(v, r as u32, &opts.count)?;
    let zeta = match (opts.max_deg, v.betti()) {
        (None, Some(betti)) => zeta_from_counts_holdout(&counts, betti, v.dim(), opts.holdout)?,
        _ => zeta_from_counts_with_bounds(&counts, v.dim(), m, n, opts.holdout)?,
    };
    Ok(ZetaRun { variety_hash: v.content_hash(), counts, zeta, num_deg: m, den_deg: n })
}

fn euler_characteristic(betti: &[u64]) -> i64 {
    betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

fn identity(g: usize) -> IntMatrix {
    (0..g).map(|i| (0..g).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

/// A check evaluated for the record only.
fn as_reported(mut c: CheckResult, prefix: &str) -> CheckResult {
    c.detail = format!("{prefix} ({}): {}", c.status.as_str(), c.detail);
    c.status = CheckStatus::Reported;
    c
}

/// Curve-only checks built on Frobenius data lifted from `P_1`.
fn curve_checks(run: &ZetaRun, opts: &Options, report: &mut VerificationReport) {
    let q = run.zeta.q();
    let Some(p1) = run.zeta.factor(1) else { return };
    let fd = match FrobeniusData::curve_real_lift(q, p1) {
        Ok(fd) => fd,
        Err(e) => {
            report.push(CheckResult::new("trace.frobenius_data", CheckStatus::Fail, e.to_string()));
            return;
        }
    };
    report.extend(trace_consistency(p1, &fd, &run.counts));
    if let (Ok(l), Some(n1)) = (lefschetz_number(&fd), run.counts.get(1)) {
        report.push(index_check(&BigInt::from(n1), &l, q, 1));
    }
    match lefschetz_from_frobenius(&fd) {
        Ok(lef) => {
            report.push(smale_check(&run.zeta, &lef));
            if let Some(l1) = lef.factor(1) {
                let c = verify_rh_modulus("lefschetz.rh_modulus.P1", l1, q, 1, opts.tol);
                report.push(as_reported(c, "negative control"));
            }
        }
        Err(e) => report.push(CheckResult::new("lefschetz.zeta", CheckStatus::Fail, e.to_string())),
    }
    report.extend(endomorphism_checks(&fd, None));
    let g = p1.degree() / 2;
    if g > 0 {
        report.push(block_sign_check("block_sign", &identity(g)));
    }
}

/// Full report for one variety.
pub fn verify_variety(v: &Variety, opts: &Options) -> Result<(ZetaRun, VerificationReport), Error> {
    let run = run_zeta(v, opts)?;
    let mut report = VerificationReport::new();
    report.input("variety_hash", &run.variety_hash);
    report.input("p", v.p());
    report.input("dim", v.dim());
    report.input("counts", run.counts.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    report.input("degree_bounds", format!("({}, {})", run.num_deg, run.den_deg));
    report.input("zeta", run.zeta.to_rational_function());
    report.input("method", opts.count.method);
    report.input("rh_tolerance", opts.tol);
    if let Some(b) = v.betti() {
        report.input("betti", b.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    }

    report.push(verify_rationality(&run.counts, &run.zeta, run.held_out()));
    if let Some(betti) = v.betti() {
        let (c, _) = verify_functional_eq(&run.zeta, euler_characteristic(betti));
        report.push(c);
        report.push(verify_betti(&run.zeta, betti));
    }
    for (i, f) in run.zeta.factors().iter().enumerate() {
        if let Some(f) = f {
            report.push(verify_rh_modulus(&format!("rh_modulus.P{i}"), f, run.zeta.q(), i, opts.tol));
        }
    }
    if v.dim() == 1 {
        curve_checks(&run, opts, &mut report);
    }
    Ok((run, report))
}

fn big(x: &BigInt) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceAnalysis {
    pub q: u64,
    pub frobenius: FrobeniusData,
    pub module: Option<TraceModule>,
    pub eigenvalues: Option<Vec<QuadraticNumber>>,
    pub point_count: String,
    pub lefschetz_number: String,
    pub lefschetz_zeta: FactoredZeta,
    pub report: VerificationReport,
}

fn trace_analysis(q: u64, fd: FrobeniusData, cm_d: Option<u64>, extra: Vec<CheckResult>) -> Result<TraceAnalysis, Error> {
    let n = point_count_formula(&fd)?;
    let l = lefschetz_number(&fd)?;
    let mut report = VerificationReport::new();
    report.input("q", q);
    let diff_ok = &n - &l == BigInt::from(2 * q);
    report.push(
        CheckResult::new("count_minus_lefschetz", CheckStatus::from_bool(diff_ok), format!("N - L = {} - ({}) = {}, 2q = {}", n, l, &n - &l, 2 * q))
            .value("N", &n)
            .value("L", &l),
    );
    report.push(index_check(&n, &l, q, 1));
    let alternate = cm_d.map(|d| ("radical_lattice", TraceModule::radical_lattice(d, 1).map_err(|e| e.to_string())));
    report.extend(endomorphism_checks(&fd, alternate));
    let module = match &fd.omegas()[1] {
        Endomorphism::Multiplication(w) => {
            let m = TraceModule::from_frobenius(w, 1)?;
            let half = QuadraticNumber::rational(BigRational::new(1.into(), 2.into()));
            let rejected = !is_endomorphism(&half, &m);
            report.push(CheckResult::new(
                "endomorphism.half_rejected",
                CheckStatus::from_bool(rejected),
                format!("1/2 on Z + Z omega: {}", if rejected { "not stable" } else { "stable" }),
            ));
            Some(m)
        }
        _ => None,
    };
    let two: IntMatrix = vec![vec![BigInt::from(2)]];
    report.push(block_sign_check("block_sign.g1", &two));
    report.push(block_sign_check("block_sign.g2", &identity(2)));
    report.extend(extra);
    Ok(TraceAnalysis {
        q,
        eigenvalues: fd.omegas()[1].eigenvalues(),
        module,
        point_count: big(&n),
        lefschetz_number: big(&l),
        lefschetz_zeta: lefschetz_from_frobenius(&fd)?,
        frobenius: fd,
        report,
    })
}

/// Trace data of an elliptic curve with Frobenius trace `a_p` over `F_q`.
pub fn trace_from_ap(a_p: i64, q: u64, cm_d: Option<u64>) -> Result<TraceAnalysis, Error> {
    let p1 = QPoly::from_ints(&[1, -a_p, q as i64]);
    let fd = FrobeniusData::curve_real_lift(q, &p1)?;
    let (w, _, _) = frobenius_cm(a_p, q);
    let mut a = trace_analysis(q, fd, cm_d, Vec::new())?;
    a.report.input("a_p", a_p);
    a.report.input("omega", w);
    Ok(a)
}

/// Trace data of a curve, with `P_1` reconstructed from counts.
pub fn trace_from_variety(v: &Variety, opts: &Options, cm_d: Option<u64>) -> Result<TraceAnalysis, Error> {
    if v.dim() != 1 {
        return Err(Error::Input(format!("trace analysis needs a curve, got dimension {}", v.dim())));
    }
    let run = run_zeta(v, opts)?;
    let p1 = run.zeta.factor(1).ok_or_else(|| Error::Input("P_1 was not separated".into()))?.clone();
    let fd = FrobeniusData::curve_real_lift(run.zeta.q(), &p1)?;
    let extra = trace_consistency(&p1, &fd, &run.counts);
    let mut a = trace_analysis(run.zeta.q(), fd, cm_d, extra)?;
    a.report.input("variety_hash", &run.variety_hash);
    a.report.input("P1", &p1);
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LefschetzAnalysis {
    pub counts: CountSeries,
    pub standard: FactoredZeta,
    pub lefschetz: FactoredZeta,
    pub lefschetz_numbers: Vec<String>,
    pub smale: CheckResult,
}

/// `Z`, `Z^L` and the three candidate relations between them.
pub fn lefschetz_variety(v: &Variety, opts: &Options) -> Result<LefschetzAnalysis, Error> {
    if v.dim() != 1 {
        return Err(Error::Input(format!("Lefschetz analysis needs a curve, got dimension {}", v.dim())));
    }
    let run = run_zeta(v, opts)?;
    let p1 = run.zeta.factor(1).ok_or_else(|| Error::Input("P_1 was not separated".into()))?;
    let fd = FrobeniusData::curve_real_lift(run.zeta.q(), p1)?;
    let lef = lefschetz_from_frobenius(&fd)?;
    // L(f^r) = 1 - q^r + ... read off from Z^L
    let lnums = crate::zeta::implied_counts(&lef, run.counts.len()).iter().map(|x| x.to_string()).collect();
    Ok(LefschetzAnalysis { smale: smale_check(&run.zeta, &lef), counts: run.counts, standard: run.zeta, lefschetz: lef, lefschetz_numbers: lnums })
}

fn slug(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Grössencharacter predictions against brute-force counts for each
/// curve and prime of the table.
pub fn cm_report(curves: &[CMCurve], count: &CountOptions) -> Result<VerificationReport, Error> {
    let mut report = VerificationReport::new();
    for curve in curves {
        report.input(&format!("curve.{}", slug(&curve.label)), format!("y^2 = x^3 + {} x + {}, d = {}", curve.a4, curve.a6, curve.d));
        for &p in &curve.primes {
            let prefix = format!("cm.{}.p{p}", slug(&curve.label));
            let v = curve.variety(p)?;
            let cs = count_series(&v, 2, count)?;
            let (n1, n2) = (cs.counts[0], cs.counts[1]);
            let psi = gross_char(curve, p, n1)?;
            let generators = split_prime(p, curve.d)?.len();
            let pred1 = predict_count(&psi, p)?;
            let pred2 = predict_count_squared(&psi, p)?;
            report.push(
                CheckResult::new(format!("{prefix}.count"), CheckStatus::from_bool(pred1 == n1 as i64), format!("1 + p - tr(psi) = {pred1}, N_1 = {n1}"))
                    .value("psi", psi)
                    .value("trace", psi.trace())
                    .value("norm_p_elements", generators),
            );
            report.push(CheckResult::new(
                format!("{prefix}.square_count"),
                CheckStatus::from_bool(pred2 == n2 as i64),
                format!("1 + p^2 - tr(psi^2) = {pred2}, N_2 = {n2}"),
            ));
            let fd = cm_frobenius_bridge(&psi, p)?;
            let formula = point_count_formula(&fd)?;
            let (w, _, _) = frobenius_cm(psi.trace(), p);
            report.push(
                CheckResult::new(
                    format!("{prefix}.bridge"),
                    CheckStatus::from_bool(formula == BigInt::from(pred1)),
                    format!("omega = {w}; 1 + p - tr(omega) = {formula}"),
                )
                .value("omega", &w),
            );
            if !w.is_rational() {
                let m = TraceModule::from_frobenius(&w, 1)?;
                let ok = is_endomorphism(&w, &m);
                report.push(CheckResult::new(format!("{prefix}.endomorphism"), CheckStatus::from_bool(ok), format!("omega on Z + Z omega: {}", if ok { "stable" } else { "not stable" })));
                let lattice = match TraceModule::radical_lattice(curve.d, 1) {
                    Ok(m) => format!("omega on Z + Z sqrt({}): {}", curve.d, if is_endomorphism(&w, &m) { "stable" } else { "not stable" }),
                    Err(e) => format!("Z + Z sqrt({}) is not a rank-two lattice: {e}", curve.d),
                };
                report.push(CheckResult::new(format!("{prefix}.cm_lattice"), CheckStatus::Reported, lattice));
            }
        }
    }
    Ok(report)
}
