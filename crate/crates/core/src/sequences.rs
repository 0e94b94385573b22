//! Fraction sequences extracted by lines, Farey sequences, and validators
//! for the mediant and adjacency properties of ordered sequences.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{isqrt, Rational};
use crate::error::{Error, Result};
use crate::geometry::{line_touches, line_touches_with, AffineMode, Fraction, LineSpec};

/// Fractions touched by a line, ascending by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    pub line: LineSpec,
    pub fractions: Vec<Fraction>,
    pub count: usize,
}

impl ExtractionResult {
    fn new(line: LineSpec, fractions: Vec<Fraction>) -> Self {
        let count = fractions.len();
        ExtractionResult { line, fractions, count }
    }
}

/// Farey sequence of order `n`, generated lazily in ascending order with the
/// next-term recurrence (no gcd computations).
#[derive(Clone, Debug)]
pub struct FareyIter {
    n: u64,
    cur: Option<(u64, u64)>,
    next: (u64, u64),
}

impl FareyIter {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "Farey order must be positive");
        FareyIter {
            n,
            cur: Some((0, 1)),
            next: (1, n),
        }
    }
}

impl Iterator for FareyIter {
    type Item = Fraction;

    fn next(&mut self) -> Option<Fraction> {
        let (a, b) = self.cur?;
        if (a, b) == (1, 1) {
            self.cur = None;
        } else {
            let (c, d) = self.next;
            let k = (self.n + b) / d;
            self.cur = Some((c, d));
            self.next = (k * c - a, k * d - b);
        }
        Some(Fraction::new_unchecked(a, b))
    }
}

/// Reduced fractions in `[0, 1]` with denominator at most `n`, ascending.
pub fn farey(n: u64) -> Result<ExtractionResult> {
    if n == 0 {
        return Err(Error::Domain("Farey order must be at least 1".into()));
    }
    let k = Rational::new(1.into(), (u128::from(n) * u128::from(n)).into());
    Ok(ExtractionResult::new(
        LineSpec::Horizontal { k },
        FareyIter::new(n).collect(),
    ))
}

/// Fractions touched by `y = k`: the Farey sequence of order `⌊√(1/k)⌋`,
/// empty when `k > 1`.
pub fn farey_horizontal(k: &Rational) -> Result<ExtractionResult> {
    let line = LineSpec::horizontal(k.clone())?;
    let inv = (k.denom() / k.numer())
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("k = {k} is too small to enumerate")))?;
    let n = isqrt(inv);
    let fractions = if n == 0 {
        Vec::new()
    } else {
        FareyIter::new(n).collect()
    };
    Ok(ExtractionResult::new(line, fractions))
}

/// Fractions touched by `y = x/m`: `0/1` together with every reduced `p/q`,
/// `1 <= p <= q`, `pq <= m`.
///
/// Enumerates `p` with `p² <= m` and `q` in `p..=m/p`, then sorts by value.
pub fn extract_origin(m: u64) -> Result<ExtractionResult> {
    let line = LineSpec::origin(m)?;
    let mut out = Vec::new();
    if line_touches(&line, Fraction::ZERO) {
        out.push(Fraction::ZERO);
    }
    let mut p = 1u64;
    while p * p <= m {
        for q in p..=m / p {
            if p.gcd(&q) == 1 {
                out.push(Fraction::new_unchecked(p, q));
            }
        }
        p += 1;
    }
    out.sort_unstable();
    Ok(ExtractionResult::new(line, out))
}

/// Same set as [`extract_origin`], obtained by testing every reduced
/// fraction with denominator at most `m` against the geometric predicate.
/// Quadratic in `m`; meant as an oracle.
pub fn extract_origin_filter(m: u64) -> Result<ExtractionResult> {
    let line = LineSpec::origin(m)?;
    let fractions = FareyIter::new(m).filter(|f| line_touches(&line, *f)).collect();
    Ok(ExtractionResult::new(line, fractions))
}

/// Same set as [`extract_origin`], produced by walking from each fraction
/// to its successor through unimodular steps.
///
/// Given consecutive `a/b < c/d` with `cb - ad = 1`, every right neighbour
/// of `c/d` is `(kc - a)/(kd - b)`; the successor is the one with the
/// largest `k` whose product `(kc - a)(kd - b)` stays within `m`.
pub fn extract_origin_walk(m: u64) -> Result<ExtractionResult> {
    let line = LineSpec::origin(m)?;
    let mut out = vec![Fraction::ZERO, Fraction::new_unchecked(1, m)];
    let (mut a, mut b) = (0u64, 1u64);
    let (mut c, mut d) = (1u64, m);
    let m128 = u128::from(m);
    let product = |k: u64, a: u64, b: u64, c: u64, d: u64| {
        (u128::from(k) * u128::from(c) - u128::from(a)) * (u128::from(k) * u128::from(d) - u128::from(b))
    };
    while (c, d) != (1, 1) {
        let mut lo = (b + 1).div_ceil(d).max(1);
        let mut hi = (m + b) / d;
        if lo > hi || product(lo, a, b, c, d) > m128 {
            return Err(Error::Internal(format!("no adjacent successor of {c}/{d} for m = {m}")));
        }
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if product(mid, a, b, c, d) <= m128 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let (e, f) = (lo * c - a, lo * d - b);
        (a, b, c, d) = (c, d, e, f);
        out.push(Fraction::new_unchecked(c, d));
    }
    Ok(ExtractionResult::new(line, out))
}

/// Fractions touched by `y = x/m + b`. Only denominators with
/// `m q² b <= m + 1` can qualify under either mode, which bounds the search.
pub fn extract_affine(m: u64, b: &Rational, mode: AffineMode) -> Result<ExtractionResult> {
    let line = LineSpec::affine(m, b.clone())?;
    let (bn, bd) = (b.numer(), b.denom());
    let mut out = Vec::new();
    let mut q = 1u64;
    loop {
        let lhs = num_bigint::BigInt::from(m) * q * q * bn;
        if lhs > num_bigint::BigInt::from(m + 1) * bd {
            break;
        }
        let start = if q == 1 { 0 } else { 1 };
        for p in start..=q {
            if p.gcd(&q) == 1 {
                let f = Fraction::new_unchecked(p, q);
                if line_touches_with(&line, f, mode) {
                    out.push(f);
                }
            }
        }
        q += 1;
    }
    out.sort_unstable();
    Ok(ExtractionResult::new(line, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Mediant,
    Adjacency,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Strictly increasing or strictly decreasing.
fn check_monotone(seq: &[Fraction]) -> Result<()> {
    if seq.len() < 2 {
        return Ok(());
    }
    let ascending = seq[0] < seq[1];
    for (i, w) in seq.windows(2).enumerate() {
        let ok = if ascending { w[0] < w[1] } else { w[0] > w[1] };
        if !ok {
            return Err(Error::NotMonotone { index: i + 1 });
        }
    }
    Ok(())
}

/// `a2 (b1 + b3) == b2 (a1 + a3)`, cross-multiplied, the mediant never
/// reduced.
fn mediant_holds(f1: &Fraction, f2: &Fraction, f3: &Fraction) -> bool {
    let den = u128::from(f1.q()) + u128::from(f3.q());
    let num = u128::from(f1.p()) + u128::from(f3.p());
    match (u128::from(f2.p()).checked_mul(den), u128::from(f2.q()).checked_mul(num)) {
        (Some(l), Some(r)) => l == r,
        _ => BigUint::from(f2.p()) * den == BigUint::from(f2.q()) * num,
    }
}

/// Checks the mediant identity on every consecutive triple. Violations are
/// indexed by the middle term. Sequences shorter than three terms pass
/// vacuously.
pub fn validate_mediant(seq: &[Fraction]) -> Result<ValidationReport> {
    check_monotone(seq)?;
    let violations = seq
        .windows(3)
        .enumerate()
        .filter(|(_, w)| !mediant_holds(&w[0], &w[1], &w[2]))
        .map(|(i, w)| Violation {
            index: i + 1,
            kind: ViolationKind::Mediant,
            detail: format!(
                "{} is not the mediant ({}+{})/({}+{})",
                w[1],
                w[0].p(),
                w[2].p(),
                w[0].q(),
                w[2].q()
            ),
        })
        .collect();
    Ok(ValidationReport::from_violations(violations))
}

/// Checks `|a2 b1 - a1 b2| = 1` on every consecutive pair, indexed by the
/// first element of the pair.
pub fn validate_adjacency(seq: &[Fraction]) -> Result<ValidationReport> {
    check_monotone(seq)?;
    let violations = seq
        .windows(2)
        .enumerate()
        .filter(|(_, w)| !w[0].is_adjacent(&w[1]))
        .map(|(i, w)| Violation {
            index: i,
            kind: ViolationKind::Adjacency,
            detail: format!("{} and {} have cross product {}", w[0], w[1], w[0].cross(&w[1]).abs()),
        })
        .collect();
    Ok(ValidationReport::from_violations(violations))
}

/// Whether a mediant-valid sequence can be traced by a curve through its
/// Ford circles, which holds exactly when some consecutive pair is adjacent.
///
/// With the mediant identity, one adjacent pair forces every pair to be
/// adjacent; a sequence with a mix is reported as an internal error.
pub fn check_reconstructible(seq: &[Fraction]) -> Result<bool> {
    let mediant = validate_mediant(seq)?;
    if let Some(v) = mediant.violations.first() {
        return Err(Error::MediantViolation { index: v.index });
    }
    let adjacency = validate_adjacency(seq)?;
    let pairs = seq.len().saturating_sub(1);
    match adjacency.violations.len() {
        0 => Ok(pairs > 0),
        n if n == pairs => Ok(false),
        _ => Err(Error::Internal(format!(
            "mediant sequence with both adjacent and non-adjacent pairs (first at {})",
            adjacency.violations[0].index
        ))),
    }
}

/// `0/1, 1/32, ...` as a single comma-separated line.
pub fn fractions_to_text(fractions: &[Fraction]) -> String {
    fractions.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// JSON array of `{"p": .., "q": ..}` objects.
pub fn fractions_to_json(fractions: &[Fraction]) -> String {
    serde_json::to_string(fractions).expect("fractions always serialise")
}

pub fn fractions_from_json(s: &str) -> Result<Vec<Fraction>> {
    serde_json::from_str(s).map_err(|e| Error::Domain(format!("bad fraction JSON: {e}")))
}

/// CSV with header `p,q,value`; `value` has 12 decimal places and is
/// informational only.
pub fn fractions_to_csv(fractions: &[Fraction]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["p", "q", "value"]).expect("in-memory write");
    for f in fractions {
        w.write_record([f.p().to_string(), f.q().to_string(), f.to_decimal(12)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn fractions_from_csv(s: &str) -> Result<Vec<Fraction>> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Domain(format!("bad fraction CSV: {e}")))?;
        let field = |i: usize| -> Result<u64> {
            rec.get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Domain(format!("bad CSV record {rec:?}")))
        };
        out.push(Fraction::new(field(0)?, field(1)?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn fr(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn list(s: &str) -> Vec<Fraction> {
        s.split(',').map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn origin_small_cases() {
        assert_eq!(extract_origin(1).unwrap().fractions, list("0/1,1/1"));
        let six = extract_origin(6).unwrap();
        assert_eq!(six.fractions, list("0/1,1/6,1/5,1/4,1/3,1/2,2/3,1/1"));
        assert_eq!(six.count, 8);
        assert!(extract_origin(0).is_err());
    }

    #[test]
    fn generators_agree_on_small_m() {
        for m in 1..=200 {
            let a = extract_origin(m).unwrap();
            assert_eq!(a, extract_origin_filter(m).unwrap(), "filter m={m}");
            assert_eq!(a, extract_origin_walk(m).unwrap(), "walk m={m}");
        }
    }

    #[test]
    fn farey_sequences() {
        assert_eq!(farey(3).unwrap().fractions, list("0/1,1/3,1/2,2/3,1/1"));
        assert_eq!(farey(1).unwrap().fractions, list("0/1,1/1"));
        assert_eq!(farey(5).unwrap().count, 11);
        assert!(farey(0).is_err());
    }

    #[test]
    fn horizontal_lines() {
        let f = |k| farey_horizontal(&k).unwrap().fractions;
        assert_eq!(f(rational(1, 10)), farey(3).unwrap().fractions);
        assert_eq!(f(rational(1, 1)), list("0/1,1/1"));
        assert_eq!(f(rational(1, 25)), farey(5).unwrap().fractions);
        assert!(f(rational(3, 2)).is_empty());
        assert!(farey_horizontal(&rational(0, 1)).is_err());
    }

    #[test]
    fn affine_lines() {
        let half = rational(1, 2);
        assert_eq!(
            extract_affine(1, &half, AffineMode::Exact).unwrap().fractions,
            list("0/1")
        );
        assert_eq!(
            extract_affine(1, &half, AffineMode::Simplified).unwrap().fractions,
            list("0/1")
        );
        assert!(extract_affine(1, &rational(2, 1), AffineMode::Exact).is_err());
        assert!(extract_affine(1, &rational(0, 1), AffineMode::Exact).is_err());

        let ninth = rational(1, 9);
        let exact = extract_affine(1_000_000, &ninth, AffineMode::Exact).unwrap().fractions;
        let simplified = extract_affine(1_000_000, &ninth, AffineMode::Simplified)
            .unwrap()
            .fractions;
        assert_eq!(exact, list("0/1,1/2,1/1"));
        assert_eq!(simplified, exact);
    }

    #[test]
    fn mediant_examples() {
        let counter = list("4/7,9/14,5/7");
        assert!(validate_mediant(&counter).unwrap().ok);
        assert!(validate_mediant(&list("1/3,1/2,2/3")).unwrap().ok);
        let bad = validate_mediant(&list("0/1,1/3,2/3,1/1")).unwrap();
        assert_eq!(bad.violations.iter().map(|v| v.index).collect::<Vec<_>>(), vec![1, 2]);
        assert!(matches!(
            validate_mediant(&list("1/2,1/3,2/3")),
            Err(Error::NotMonotone { index: 2 })
        ));
        // decreasing sequences are accepted
        assert!(validate_mediant(&list("2/3,1/2,1/3")).unwrap().ok);
    }

    #[test]
    fn adjacency_examples() {
        let report = validate_adjacency(&list("4/7,9/14,5/7")).unwrap();
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 2);
        assert!(report.violations[0].detail.contains("cross product 7"));
        assert!(validate_adjacency(&list("0/1,1/1")).unwrap().ok);
    }

    #[test]
    fn reconstructibility() {
        assert!(check_reconstructible(&extract_origin(32).unwrap().fractions).unwrap());
        assert!(!check_reconstructible(&list("4/7,9/14,5/7")).unwrap());
        assert!(check_reconstructible(&list("0/1,1/2,1/1")).unwrap());
        assert!(matches!(
            check_reconstructible(&list("0/1,1/3,1/1")),
            Err(Error::MediantViolation { index: 1 })
        ));
    }

    #[test]
    fn serialisation_formats() {
        let seq = extract_origin(1).unwrap().fractions;
        assert_eq!(fractions_to_json(&seq), r#"[{"p":0,"q":1},{"p":1,"q":1}]"#);
        assert_eq!(
            fractions_to_csv(&seq),
            "p,q,value\n0,1,0.000000000000\n1,1,1.000000000000\n"
        );
        assert_eq!(fractions_to_text(&seq), "0/1, 1/1");
        assert!(fractions_from_json(r#"[{"p":2,"q":4}]"#).is_err());
        assert_eq!(fractions_from_csv(&fractions_to_csv(&seq)).unwrap(), seq);
        assert_eq!(fr(1, 3).to_decimal(12), "0.333333333333");
    }
}
