//! Projective varieties given by homogeneous polynomial systems over a
//! prime field, and exact point counts over the extensions `F_{p^r}`.
//!
//! Points are enumerated through normalized representatives: the first
//! nonzero coordinate is 1. The representatives with leading position `j`
//! are grouped into lines along the last coordinate. For each line the
//! system restricts to univariate polynomials in that coordinate, and the
//! line contributes either
//!
//! * [`CountMethod::Pointwise`]: the number of field values at which Horner
//!   evaluation of every restricted polynomial is zero, or
//! * [`CountMethod::Fiber`]: the number of distinct roots of the gcd of the
//!   restricted polynomials, read off as `deg gcd(g, y^q - y)`.
//!
//! Both give identical counts; `Fiber` does `O(log q)` work per line instead
//! of `O(q)`, which is what makes curves over `F_{13^6}` countable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{is_prime_u64, FieldDescriptor, FieldElement};
use crate::table::{upoly, LogField, ZERO};

/// Default cap on work units per count (see [`CountOptions::budget`]).
pub const DEFAULT_COUNT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("malformed variety document: {0}")]
    ParseError(String),
    #[error("polynomial {poly} is not homogeneous (monomial degrees {degrees:?})")]
    NotHomogeneous { poly: usize, degrees: Vec<u64> },
    #[error("count over F_{p}^{r} needs {work} work units, budget is {budget}")]
    EnumerationTooLarge { p: u64, r: u32, work: u128, budget: u64 },
}

/// One monomial `coeff * x_0^e_0 ... x_m^e_m` with `coeff` reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coeff: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    terms: Vec<Monomial>,
    degree: u64,
}

impl HomogeneousPoly {
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

/// Wire form of a variety, exactly the JSON accepted by [`Variety::parse`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyDoc {
    pub p: u64,
    pub num_vars: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<u64>>,
    pub polys: Vec<Vec<TermDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exps: Vec<u32>,
    pub coeff: i64,
}

/// A validated projective variety `V(f_1, .., f_s)` in `P^{num_vars - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variety {
    p: u64,
    num_vars: usize,
    dim: usize,
    betti: Option<Vec<u64>>,
    polys: Vec<HomogeneousPoly>,
}

impl Variety {
    /// Parses and validates the JSON document
    /// `{"p", "num_vars", "dim", "betti"?, "polys": [[{"exps", "coeff"}]]}`.
    pub fn parse(json: &str) -> Result<Variety, VarietyError> {
        let doc: VarietyDoc = serde_json::from_str(json).map_err(|e| VarietyError::ParseError(e.to_string()))?;
        Variety::from_doc(&doc)
    }

    pub fn from_doc(doc: &VarietyDoc) -> Result<Variety, VarietyError> {
        let bad = |m: String| Err(VarietyError::ParseError(m));
        if !is_prime_u64(doc.p) {
            return bad(format!("p = {} is not prime", doc.p));
        }
        if doc.num_vars == 0 {
            return bad("num_vars must be at least 1".into());
        }
        if doc.dim >= doc.num_vars {
            return bad(format!("dim {} exceeds the ambient dimension {}", doc.dim, doc.num_vars - 1));
        }
        if let Some(b) = &doc.betti {
            if b.len() != 2 * doc.dim + 1 {
                return bad(format!("betti has {} entries, expected {}", b.len(), 2 * doc.dim + 1));
            }
            if b[0] != 1 || b[2 * doc.dim] != 1 {
                return bad("betti must start and end with 1".into());
            }
        }
        let mut polys = Vec::with_capacity(doc.polys.len());
        for (pi, terms) in doc.polys.iter().enumerate() {
            let mut degrees = Vec::with_capacity(terms.len());
            let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for t in terms {
                if t.exps.len() != doc.num_vars {
                    return bad(format!(
                        "polynomial {pi}: exponent vector of length {} in {} variables",
                        t.exps.len(),
                        doc.num_vars
                    ));
                }
                degrees.push(t.exps.iter().map(|&e| e as u64).sum());
                let c = (t.coeff as i128).rem_euclid(doc.p as i128) as u64;
                let slot = merged.entry(t.exps.clone()).or_insert(0);
                *slot = ((*slot as u128 + c as u128) % doc.p as u128) as u64;
            }
            if degrees.windows(2).any(|w| w[0] != w[1]) {
                return Err(VarietyError::NotHomogeneous { poly: pi, degrees });
            }
            let terms = merged
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(exps, coeff)| Monomial { exps, coeff })
                .collect();
            polys.push(HomogeneousPoly { terms, degree: degrees.first().copied().unwrap_or(0) });
        }
        Ok(Variety { p: doc.p, num_vars: doc.num_vars, dim: doc.dim, betti: doc.betti.clone(), polys })
    }

    /// Canonical document: merged monomials, residues in `0..p`.
    pub fn to_doc(&self) -> VarietyDoc {
        VarietyDoc {
            p: self.p,
            num_vars: self.num_vars,
            dim: self.dim,
            betti: self.betti.clone(),
            polys: self
                .polys
                .iter()
                .map(|f| f.terms.iter().map(|m| TermDoc { exps: m.exps.clone(), coeff: m.coeff as i64 }).collect())
                .collect(),
        }
    }

    /// SHA-256 of the canonical document, hex encoded.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(&self.to_doc()).expect("plain data serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn betti(&self) -> Option<&[u64]> {
        self.betti.as_deref()
    }

    pub fn polys(&self) -> &[HomogeneousPoly] {
        &self.polys
    }
}

/// Exact counts `N_1, .., N_R` with `N_r = |V(F_{q^r})|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSeries {
    pub q: u64,
    pub counts: Vec<u64>,
}

impl CountSeries {
    pub fn new(q: u64, counts: Vec<u64>) -> CountSeries {
        CountSeries { q, counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `N_r` for `r >= 1`.
    pub fn get(&self, r: usize) -> Option<u64> {
        r.checked_sub(1).and_then(|i| self.counts.get(i).copied())
    }

    /// Tab-separated `r`, `N_r` rows with a header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("r\tN_r\n");
        for (i, n) in self.counts.iter().enumerate() {
            out.push_str(&format!("{}\t{}\n", i + 1, n));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMethod {
    Pointwise,
    #[default]
    Fiber,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Pointwise => "pointwise",
            CountMethod::Fiber => "fiber",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum work units: representatives for `Pointwise`, lines for `Fiber`.
    pub budget: u64,
    pub workers: usize,
    pub method: CountMethod,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { budget: DEFAULT_COUNT_BUDGET, workers: 1, method: CountMethod::default() }
    }
}

/// Number of normalized representatives of `P^{n-1}(F_q)`.
fn representatives(q: u128, n: usize) -> u128 {
    (0..n).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1))
}

/// Units of work for counting over a field of order `q`.
fn work_units(q: u128, num_vars: usize, method: CountMethod) -> u128 {
    match method {
        CountMethod::Pointwise => representatives(q, num_vars),
        // one line per leading position with a free coordinate, plus the last point
        CountMethod::Fiber => representatives(q, num_vars.saturating_sub(1)).saturating_add(1),
    }
}

/// `|V(F_{p^r})|`.
pub fn count_projective(v: &Variety, r: u32, opts: &CountOptions) -> Result<u64, VarietyError> {
    if r == 0 {
        return Err(VarietyError::ParseError("extension degree r must be at least 1".into()));
    }
    let q = (v.p as u128).checked_pow(r).unwrap_or(u128::MAX);
    let method = if q > crate::table::MAX_TABLE_ORDER as u128 { CountMethod::Pointwise } else { opts.method };
    let work = work_units(q, v.num_vars, method);
    if work > opts.budget as u128 {
        return Err(VarietyError::EnumerationTooLarge { p: v.p, r, work, budget: opts.budget });
    }
    let field = FieldDescriptor::from_u64(v.p, r as usize).expect("prime checked at parse time");
    match LogField::new(&field) {
        Some(table) => Ok(TableCounter::new(v, &table).count(opts.workers.max(1), method)),
        None => Ok(count_generic(v, &field)),
    }
}

/// `N_1..N_R`; fails at the first `r` over budget.
pub fn count_series(v: &Variety, max_r: u32, opts: &CountOptions) -> Result<CountSeries, VarietyError> {
    let counts = (1..=max_r).map(|r| count_projective(v, r, opts)).collect::<Result<_, _>>()?;
    Ok(CountSeries { q: v.p, counts })
}

/// Reference counter on [`FieldElement`] arithmetic: every representative,
/// every monomial, no tables.
pub fn count_generic(v: &Variety, field: &Arc<FieldDescriptor>) -> u64 {
    let q = field.order().to_u64().expect("budget keeps q small");
    let polys: Vec<Vec<(FieldElement, &[u32])>> = v
        .polys
        .iter()
        .map(|f| f.terms.iter().map(|m| (field.from_int(m.coeff as i64), m.exps.as_slice())).collect())
        .collect();
    let m = v.num_vars;
    let mut total = 0;
    let mut point = vec![field.zero(); m];
    for lead in 0..m {
        for c in point.iter_mut() {
            *c = field.zero();
        }
        point[lead] = field.one();
        let free = m - lead - 1;
        let n = q.pow(free as u32);
        for idx in 0..n {
            let mut rest = idx;
            for slot in point.iter_mut().skip(lead + 1) {
                *slot = field.from_index(&BigUint::from(rest % q));
                rest /= q;
            }
            let on_variety = polys.iter().all(|terms| {
                let mut acc = field.zero();
                for (c, exps) in terms {
                    let mut mono = c.clone();
                    for (x, &e) in point.iter().zip(exps.iter()) {
                        if e > 0 {
                            mono = &mono * &x.pow(&BigUint::from(e));
                        }
                    }
                    acc = &acc + &mono;
                }
                acc.is_zero()
            });
            total += on_variety as u64;
        }
    }
    total
}

/// Precomputed data for the table-driven count.
struct TableCounter<'a> {
    field: &'a LogField,
    num_vars: usize,
    /// per polynomial: (log coeff, exponents of all but the last variable, last exponent)
    polys: Vec<Vec<(u32, Vec<u32>, u32)>>,
    /// per polynomial: degree in the last variable
    last_degree: Vec<usize>,
    /// cumulative number of lines before each leading position
    offsets: Vec<u64>,
}

impl<'a> TableCounter<'a> {
    fn new(v: &Variety, field: &'a LogField) -> TableCounter<'a> {
        let m = v.num_vars;
        // Counts do not change under a permutation of coordinates, so the
        // variable of least degree becomes the fiber variable.
        let fiber = (0..m)
            .rev()
            .min_by_key(|&j| v.polys.iter().flat_map(|f| f.terms.iter().map(move |t| t.exps[j])).max().unwrap_or(0))
            .unwrap_or(0);
        let order: Vec<usize> = (0..m).filter(|&j| j != fiber).chain(std::iter::once(fiber)).collect();
        let polys: Vec<Vec<(u32, Vec<u32>, u32)>> = v
            .polys
            .iter()
            .map(|f| {
                f.terms
                    .iter()
                    .map(|t| (field.from_residue(t.coeff), order[..m - 1].iter().map(|&j| t.exps[j]).collect(), t.exps[fiber]))
                    .collect()
            })
            .collect();
        let last_degree = polys.iter().map(|t| t.iter().map(|x| x.2 as usize).max().unwrap_or(0)).collect();
        let q = field.order();
        let mut offsets = vec![0u64];
        for lead in 0..m {
            let free = m - lead - 1;
            let lines = if free == 0 { 1 } else { q.pow(free as u32 - 1) };
            offsets.push(offsets[lead] + lines);
        }
        TableCounter { field, num_vars: m, polys, last_degree, offsets }
    }

    fn total_units(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    fn count(&self, workers: usize, method: CountMethod) -> u64 {
        let ranges = partition(self.total_units(), workers);
        if ranges.len() <= 1 {
            return ranges.iter().map(|&(a, b)| self.count_range(a, b, method)).sum();
        }
        std::thread::scope(|s| {
            let handles: Vec<_> =
                ranges.iter().map(|&(a, b)| s.spawn(move || self.count_range(a, b, method))).collect();
            handles.into_iter().map(|h| h.join().expect("count worker panicked")).sum()
        })
    }

    fn count_range(&self, start: u64, end: u64, method: CountMethod) -> u64 {
        let f = self.field;
        let q = f.order();
        let m = self.num_vars;
        let mut prefix = vec![ZERO; m.saturating_sub(1)];
        let mut restricted: Vec<Vec<u32>> = self.last_degree.iter().map(|&d| vec![ZERO; d + 1]).collect();
        let mut total = 0;
        for unit in start..end {
            let lead = self.offsets.partition_point(|&o| o <= unit) - 1;
            let local = unit - self.offsets[lead];
            if lead == m - 1 {
                // the single point (0 : .. : 0 : 1)
                let on = self.polys.iter().all(|terms| {
                    let mut acc = ZERO;
                    for (c, exps, _) in terms {
                        if exps.iter().all(|&e| e == 0) {
                            acc = f.add(acc, *c);
                        }
                    }
                    acc == ZERO
                });
                total += on as u64;
                continue;
            }
            // prefix coordinates: zeros, 1 at `lead`, then free ones from `local`
            let mut rest = local;
            for (i, slot) in prefix.iter_mut().enumerate() {
                *slot = match i.cmp(&lead) {
                    std::cmp::Ordering::Less => ZERO,
                    std::cmp::Ordering::Equal => f.one(),
                    std::cmp::Ordering::Greater => {
                        let id = rest % q;
                        rest /= q;
                        f.from_id(id)
                    }
                };
            }
            for (terms, g) in self.polys.iter().zip(restricted.iter_mut()) {
                g.iter_mut().for_each(|c| *c = ZERO);
                for (c, exps, last) in terms {
                    let mut mono = *c;
                    for (&x, &e) in prefix.iter().zip(exps) {
                        if e > 0 {
                            mono = f.mul(mono, f.pow(x, e as u64));
                        }
                    }
                    g[*last as usize] = f.add(g[*last as usize], mono);
                }
            }
            total += match method {
                CountMethod::Pointwise => (0..q)
                    .filter(|&id| {
                        let y = f.from_id(id);
                        restricted.iter().all(|g| upoly::eval(f, g, y) == ZERO)
                    })
                    .count() as u64,
                CountMethod::Fiber => {
                    let mut common: Option<Vec<u32>> = None;
                    for g in &restricted {
                        let mut g = g.clone();
                        upoly::trim(&mut g);
                        if g.is_empty() {
                            continue;
                        }
                        common = Some(match common {
                            None => g,
                            Some(c) => upoly::gcd(f, &c, &g),
                        });
                    }
                    match common {
                        None => q,
                        Some(c) => upoly::count_roots(f, &c),
                    }
                }
            };
        }
        total
    }
}

/// Splits `0..n` into at most `parts` contiguous, nearly equal ranges.
pub fn partition(n: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = (parts.max(1) as u64).min(n.max(1));
    (0..parts).map(|i| (n * i / parts, n * (i + 1) / parts)).filter(|(a, b)| a < b).collect()
}

/// Sum of per-chunk subtotals for an explicit chunking of the line space;
/// used to check that counts do not depend on how the work is split.
pub fn count_projective_chunked(v: &Variety, r: u32, method: CountMethod, chunks: usize) -> Option<u64> {
    let field = FieldDescriptor::from_u64(v.p, r as usize).ok()?;
    let table = LogField::new(&field)?;
    let counter = TableCounter::new(v, &table);
    Some(partition(counter.total_units(), chunks).iter().map(|&(a, b)| counter.count_range(a, b, method)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E1: &str = r#"{"p":5,"num_vars":3,"dim":1,"betti":[1,2,1],
        "polys":[[{"exps":[0,2,1],"coeff":1},{"exps":[3,0,0],"coeff":-1},{"exps":[1,0,2],"coeff":1}]]}"#;

    fn projective_space(p: u64, num_vars: usize) -> Variety {
        Variety::parse(&format!(r#"{{"p":{p},"num_vars":{num_vars},"dim":{},"polys":[]}}"#, num_vars - 1)).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p1 = projective_space(3, 2);
        assert_eq!(p1.polys().len(), 0);
        let e1 = Variety::parse(E1).unwrap();
        assert_eq!(e1.polys().len(), 1);
        assert_eq!(e1.polys()[0].degree(), 3);
        assert_eq!(e1.num_vars(), 3);
        // -1 is stored as p - 1
        assert!(e1.polys()[0].terms().iter().any(|t| t.exps == [3, 0, 0] && t.coeff == 4));
    }

    #[test]
    fn parse_rejects_inhomogeneous_and_malformed() {
        let inhom = r#"{"p":5,"num_vars":3,"dim":1,"polys":[[{"exps":[3,0,0],"coeff":1},{"exps":[1,1,0],"coeff":1}]]}"#;
        assert!(matches!(Variety::parse(inhom), Err(VarietyError::NotHomogeneous { poly: 0, .. })));
        for bad in [
            "{",
            r#"{"p":4,"num_vars":2,"dim":1,"polys":[]}"#,
            r#"{"p":5,"num_vars":0,"dim":0,"polys":[]}"#,
            r#"{"p":5,"num_vars":2,"dim":2,"polys":[]}"#,
            r#"{"p":5,"num_vars":2,"dim":1,"betti":[1,1],"polys":[]}"#,
            r#"{"p":5,"num_vars":2,"dim":1,"betti":[2,0,1],"polys":[]}"#,
            r#"{"p":5,"num_vars":2,"dim":1,"polys":[[{"exps":[1],"coeff":1}]]}"#,
            r#"{"p":5,"num_vars":2,"dim":1,"polys":[],"extra":1}"#,
        ] {
            assert!(matches!(Variety::parse(bad), Err(VarietyError::ParseError(_))), "{bad}");
        }
    }

    #[test]
    fn duplicate_monomials_merge() {
        let v = Variety::parse(
            r#"{"p":3,"num_vars":2,"dim":0,"polys":[[{"exps":[1,0],"coeff":1},{"exps":[1,0],"coeff":2},{"exps":[0,1],"coeff":1}]]}"#,
        )
        .unwrap();
        assert_eq!(v.polys()[0].terms().len(), 1);
    }

    #[test]
    fn projective_space_counts() {
        let opts = CountOptions::default();
        let p1 = projective_space(3, 2);
        assert_eq!(count_series(&p1, 4, &opts).unwrap().counts, [4, 10, 28, 82]);
        let p2 = projective_space(2, 3);
        assert_eq!(count_projective(&p2, 1, &opts).unwrap(), 7);
    }

    #[test]
    fn e1_counts_match_enumeration_and_newton() {
        let e1 = Variety::parse(E1).unwrap();
        for method in [CountMethod::Pointwise, CountMethod::Fiber] {
            let opts = CountOptions { method, ..Default::default() };
            assert_eq!(count_series(&e1, 2, &opts).unwrap().counts, [8, 32]);
        }
        // Newton: a = q + 1 - N_1 = -2, N_2 = q^2 + 1 - (a^2 - 2q)
        let a: i64 = 5 + 1 - 8;
        assert_eq!(25 + 1 - (a * a - 2 * 5), 32);
    }

    #[test]
    fn generic_counter_agrees_with_tables() {
        let e1 = Variety::parse(E1).unwrap();
        let f = FieldDescriptor::from_u64(5, 1).unwrap();
        assert_eq!(count_generic(&e1, &f), 8);
        let f25 = FieldDescriptor::from_u64(5, 2).unwrap();
        assert_eq!(count_generic(&e1, &f25), 32);
    }

    #[test]
    fn budget_is_enforced() {
        let e1 = Variety::parse(E1).unwrap();
        let opts = CountOptions { budget: 31, method: CountMethod::Pointwise, ..Default::default() };
        assert_eq!(count_projective(&e1, 1, &opts).unwrap(), 8);
        let err = count_series(&e1, 2, &opts).unwrap_err();
        assert!(matches!(err, VarietyError::EnumerationTooLarge { r: 2, .. }));
    }

    #[test]
    fn points_at_infinity_and_point_varieties() {
        // x*y = 0 in P^1: the two points (1:0) and (0:1)
        let v = Variety::parse(r#"{"p":7,"num_vars":2,"dim":0,"polys":[[{"exps":[1,1],"coeff":1}]]}"#).unwrap();
        // x^2 + y^2 = 0 over F_7: no points (-1 is not a square), over F_49 two
        let w = Variety::parse(
            r#"{"p":7,"num_vars":2,"dim":0,"polys":[[{"exps":[2,0],"coeff":1},{"exps":[0,2],"coeff":1}]]}"#,
        )
        .unwrap();
        for method in [CountMethod::Pointwise, CountMethod::Fiber] {
            let opts = CountOptions { method, ..Default::default() };
            assert_eq!(count_projective(&v, 1, &opts).unwrap(), 2);
            assert_eq!(count_series(&w, 2, &opts).unwrap().counts, [0, 2]);
        }
        let p0 = projective_space(5, 1);
        assert_eq!(count_projective(&p0, 3, &CountOptions::default()).unwrap(), 1);
    }

    #[test]
    fn hash_is_stable_under_term_order() {
        let a = Variety::parse(E1).unwrap();
        let b = Variety::parse(
            r#"{"p":5,"num_vars":3,"dim":1,"betti":[1,2,1],
            "polys":[[{"exps":[1,0,2],"coeff":6},{"exps":[3,0,0],"coeff":4},{"exps":[0,2,1],"coeff":1}]]}"#,
        )
        .unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn tsv_layout() {
        let cs = CountSeries::new(3, vec![4, 10]);
        assert_eq!(cs.to_tsv(), "r\tN_r\n1\t4\n2\t10\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn empty_system_counts_projective_space(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], nv in 1usize..4, r in 1u32..3) {
            let v = projective_space(p, nv);
            let q = p.pow(r);
            let expected = (q.pow(nv as u32) - 1) / (q - 1);
            let opts = CountOptions { budget: 1 << 30, ..Default::default() };
            prop_assert_eq!(count_projective(&v, r, &opts).unwrap(), expected);
        }

        #[test]
        fn counts_do_not_depend_on_partition(chunks in 1usize..9, workers in 1usize..5) {
            let e1 = Variety::parse(E1).unwrap();
            let reference = count_projective_chunked(&e1, 2, CountMethod::Pointwise, 1).unwrap();
            prop_assert_eq!(count_projective_chunked(&e1, 2, CountMethod::Fiber, chunks), Some(reference));
            let opts = CountOptions { workers, ..Default::default() };
            prop_assert_eq!(count_projective(&e1, 2, &opts).unwrap(), reference);
        }

        #[test]
        fn methods_agree_on_random_plane_cubics(coeffs in proptest::collection::vec(-2i64..3, 10), p in prop_oneof![Just(2u64), Just(3), Just(5)]) {
            let mut terms = Vec::new();
            let mut i = 0;
            for a in 0..=3u32 {
                for b in 0..=(3 - a) {
                    terms.push(format!(r#"{{"exps":[{a},{b},{}],"coeff":{}}}"#, 3 - a - b, coeffs[i]));
                    i += 1;
                }
            }
            let v = Variety::parse(&format!(r#"{{"p":{p},"num_vars":3,"dim":1,"polys":[[{}]]}}"#, terms.join(","))).unwrap();
            let f = FieldDescriptor::from_u64(p, 1).unwrap();
            let brute = count_generic(&v, &f);
            for method in [CountMethod::Pointwise, CountMethod::Fiber] {
                let opts = CountOptions { method, ..Default::default() };
                prop_assert_eq!(count_projective(&v, 1, &opts).unwrap(), brute);
            }
            let f2 = FieldDescriptor::from_u64(p, 2).unwrap();
            let opts = CountOptions::default();
            prop_assert_eq!(count_projective(&v, 2, &opts).unwrap(), count_generic(&v, &f2));
        }

        #[test]
        fn counts_invariant_under_coordinate_permutation(
            coeffs in proptest::collection::vec(-2i64..3, 10),
            perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
            r in 1u32..3,
        ) {
            let build = |perm: &[usize]| {
                let mut terms = Vec::new();
                let mut i = 0;
                for a in 0..=3u32 {
                    for b in 0..=(3 - a) {
                        let e = [a, b, 3 - a - b];
                        terms.push(format!(r#"{{"exps":[{},{},{}],"coeff":{}}}"#, e[perm[0]], e[perm[1]], e[perm[2]], coeffs[i]));
                        i += 1;
                    }
                }
                Variety::parse(&format!(r#"{{"p":3,"num_vars":3,"dim":1,"polys":[[{}]]}}"#, terms.join(","))).unwrap()
            };
            let opts = CountOptions::default();
            prop_assert_eq!(count_projective(&build(&perm), r, &opts).unwrap(), count_projective(&build(&[0, 1, 2]), r, &opts).unwrap());
        }
    }
}
