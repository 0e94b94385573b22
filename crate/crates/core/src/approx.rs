//! Closed-form approximations of the origin-line cardinality, the totient
//! sums they are assembled from, and the empirical error harness.
//!
//! Every approximation has the shape `m/(2ζ(2)) · (ln m + α) + β`, so the
//! three differ only in their `(α, β)` pair.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, Constants, Rational, Real, SieveTables};
use crate::counting::cardinality_table;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approximation {
    A1,
    A2,
    A3,
}

impl Approximation {
    pub const ALL: [Approximation; 3] = [Approximation::A1, Approximation::A2, Approximation::A3];

    /// `(α, β)`.
    pub fn coefficients(self) -> (Real, Real) {
        let c = Constants::get();
        match self {
            Approximation::A1 => (c.first_approximation_alpha(), Real::from(2u64)),
            Approximation::A2 => (
                Real::from(2u64) * &c.euler_gamma - Real::one(),
                Real::one() + Real::one() / &c.zeta2,
            ),
            Approximation::A3 => (Real::one(), Real::zero()),
        }
    }

    pub fn eval(self, m: u64) -> Result<Real> {
        if m < 2 {
            return Err(Error::Domain(format!("approximations need m >= 2, got {m}")));
        }
        let (alpha, beta) = self.coefficients();
        Ok(leading_factor(m) * (Real::ln_u64(m) + alpha) + beta)
    }

    pub fn index(self) -> usize {
        match self {
            Approximation::A1 => 0,
            Approximation::A2 => 1,
            Approximation::A3 => 2,
        }
    }
}

impl fmt::Display for Approximation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approximation::A1 => "a1",
            Approximation::A2 => "a2",
            Approximation::A3 => "a3",
        })
    }
}

/// `m / (2ζ(2))`.
pub fn leading_factor(m: u64) -> Real {
    Real::from(m) / (Real::from(2u64) * &Constants::get().zeta2)
}

pub fn a1(m: u64) -> Result<Real> {
    Approximation::A1.eval(m)
}

pub fn a2(m: u64) -> Result<Real> {
    Approximation::A2.eval(m)
}

pub fn a3(m: u64) -> Result<Real> {
    Approximation::A3.eval(m)
}

fn require_positive(s: u64) -> Result<()> {
    if s == 0 {
        return Err(Error::Domain("argument must be at least 1".into()));
    }
    Ok(())
}

/// `(1/ζ(2)) (ln s + C) - A`.
pub fn phi_over_p2_asymptotic(s: u64) -> Real {
    let c = Constants::get();
    (Real::ln_u64(s) + &c.euler_gamma) / &c.zeta2 - &c.a
}

/// `s² / (2ζ(2))`.
pub fn phi_sum_asymptotic(s: u64) -> Real {
    Real::from(s) * Real::from(s) / (Real::from(2u64) * &Constants::get().zeta2)
}

/// Exact running value of a sum of `φ(q)/q²` terms.
///
/// Held as `num / den` with `den` the lcm of the squared denominators seen so
/// far, so each step costs a few linear-time big-by-small operations instead
/// of a big gcd. Lowest terms are only taken on request.
struct SquareDenominatorSum {
    num: BigInt,
    den: BigInt,
}

impl SquareDenominatorSum {
    fn new() -> Self {
        SquareDenominatorSum {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn add(&mut self, sieve: &SieveTables, q: u64) {
        let q2 = u128::from(q) * u128::from(q);
        let rem: u128 = (&self.den % q2).try_into().expect("remainder below q²");
        let widen = q2 / num_integer::gcd(rem, q2);
        if widen > 1 {
            self.num *= widen;
            self.den *= widen;
        }
        self.num += (&self.den / q2) * sieve.phi(q);
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    fn to_real(&self) -> Real {
        Real::from_ratio(&BigRational::new_raw(self.num.clone(), self.den.clone()))
    }
}

/// `Σ_{p ≤ s} φ(p)/p²`, exactly and by its asymptotic form.
pub fn sum_phi_over_p2(sieve: &SieveTables, s: u64) -> Result<(Rational, Real)> {
    require_positive(s)?;
    let mut sum = SquareDenominatorSum::new();
    (1..=s).for_each(|p| sum.add(sieve, p));
    Ok((sum.to_rational(), phi_over_p2_asymptotic(s)))
}

/// `Σ_{p ≤ s} φ(p)`, exactly and by its asymptotic form.
pub fn sum_phi(sieve: &SieveTables, s: u64) -> Result<(u64, Real)> {
    require_positive(s)?;
    Ok(((1..=s).map(|p| sieve.phi(p)).sum(), phi_sum_asymptotic(s)))
}

/// `Σ_{√m < q ≤ m} φ(q)/q²` against `ln m / (2ζ(2))`.
pub fn sum_phi_over_p2_tail(sieve: &SieveTables, m: u64) -> Result<(Rational, Real)> {
    if m < 4 {
        return Err(Error::Domain(format!("tail sum needs m >= 4, got {m}")));
    }
    let mut sum = SquareDenominatorSum::new();
    (isqrt(m) + 1..=m).for_each(|q| sum.add(sieve, q));
    let exact = sum.to_rational();
    let asymptotic = Real::ln_u64(m) / (Real::from(2u64) * &Constants::get().zeta2);
    Ok((exact, asymptotic))
}

pub fn harmonic(s: u64) -> Result<Rational> {
    require_positive(s)?;
    Ok((1..=s).fold(BigRational::zero(), |acc, k| {
        acc + BigRational::new(BigInt::one(), BigInt::from(k))
    }))
}

pub fn triangular(s: u64) -> Result<u128> {
    require_positive(s)?;
    let s = u128::from(s);
    Ok(s * (s + 1) / 2)
}

/// Worst value of `|exact - asymptotic| · s / ln s` for `Σ φ(p)/p²` over
/// `s` in `from..=to`, paired with the `s` where it occurs.
pub fn phi_over_p2_envelope(sieve: &SieveTables, from: u64, to: u64) -> Result<(Real, u64)> {
    check_sweep(from, to)?;
    let mut running = SquareDenominatorSum::new();
    let mut worst = (Real::zero(), from);
    for s in 1..=to {
        running.add(sieve, s);
        if s >= from {
            let dev = (running.to_real() - phi_over_p2_asymptotic(s)).abs();
            let k = dev * Real::from(s) / Real::ln_u64(s);
            if k > worst.0 {
                worst = (k, s);
            }
        }
    }
    Ok(worst)
}

/// Worst value of `|exact - asymptotic| / (s ln s)` for `Σ φ(p)` over `s`
/// in `from..=to`, paired with the `s` where it occurs.
pub fn phi_sum_envelope(sieve: &SieveTables, from: u64, to: u64) -> Result<(Real, u64)> {
    check_sweep(from, to)?;
    let mut running = 0u64;
    let mut worst = (Real::zero(), from);
    for s in 1..=to {
        running += sieve.phi(s);
        if s >= from {
            let dev = (Real::from(running) - phi_sum_asymptotic(s)).abs();
            let k = dev / (Real::from(s) * Real::ln_u64(s));
            if k > worst.0 {
                worst = (k, s);
            }
        }
    }
    Ok(worst)
}

fn check_sweep(from: u64, to: u64) -> Result<()> {
    if from < 2 || from > to {
        return Err(Error::Domain(format!(
            "sweep range {from}..={to} must satisfy 2 <= from <= to"
        )));
    }
    Ok(())
}

/// Exact cardinality against the three approximations at one `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub m: u64,
    pub exact: u64,
    pub approx: [Real; 3],
    /// `exact - a_i`.
    pub err: [Real; 3],
    /// `|err_i| / √m`.
    pub ratio: [Real; 3],
}

impl ApproxReport {
    pub fn new(m: u64, exact: u64) -> Result<Self> {
        let approx = [a1(m)?, a2(m)?, a3(m)?];
        let err = approx.clone().map(|a| Real::from(exact) - a);
        let root = Real::from(m).sqrt();
        let ratio = err.clone().map(|e| e.abs() / &root);
        Ok(ApproxReport {
            m,
            exact,
            approx,
            err,
            ratio,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSummary {
    pub reports: Vec<ApproxReport>,
    pub max_ratio: [Real; 3],
    pub mean_abs_error: [Real; 3],
    /// Smallest mean absolute error; ties go to the lower index.
    pub best: Approximation,
}

/// Reports for `m = from, from + step, …` up to `to`, with aggregates.
pub fn error_report(sieve: &SieveTables, from: u64, to: u64, step: u64) -> Result<ErrorSummary> {
    if from < 2 || from > to || step == 0 {
        return Err(Error::Domain(format!(
            "report range needs 2 <= from <= to and step >= 1, got {from}..={to} step {step}"
        )));
    }
    let table = cardinality_table(sieve, to);
    let reports = (from..=to)
        .step_by(step as usize)
        .map(|m| ApproxReport::new(m, table[m as usize]))
        .collect::<Result<Vec<_>>>()?;

    let mut max_ratio = [Real::zero(), Real::zero(), Real::zero()];
    let mut total = [Real::zero(), Real::zero(), Real::zero()];
    for r in &reports {
        for i in 0..3 {
            if r.ratio[i] > max_ratio[i] {
                max_ratio[i] = r.ratio[i].clone();
            }
            total[i] = &total[i] + r.err[i].abs();
        }
    }
    let n = Real::from(reports.len() as u64);
    let mean_abs_error = total.map(|t| t / &n);
    let best = Approximation::ALL
        .into_iter()
        .reduce(|best, a| {
            if mean_abs_error[a.index()] < mean_abs_error[best.index()] {
                a
            } else {
                best
            }
        })
        .expect("three candidates");
    Ok(ErrorSummary {
        reports,
        max_ratio,
        mean_abs_error,
        best,
    })
}

/// CSV with header `m,exact,a1,a2,a3,err1,err2,err3,ratio1,ratio2,ratio3`
/// and reals to 9 decimals.
pub fn reports_to_csv(reports: &[ApproxReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "m", "exact", "a1", "a2", "a3", "err1", "err2", "err3", "ratio1", "ratio2", "ratio3",
    ])
    .expect("in-memory write");
    for r in reports {
        let mut row = vec![r.m.to_string(), r.exact.to_string()];
        row.extend(r.approx.iter().chain(&r.err).chain(&r.ratio).map(|x| x.to_decimal(9)));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Regression bounds measured once and then frozen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrozenBounds {
    /// Largest allowed `|exact - a_i(m)| / √m` over `m` in `[2, ratio_max_m]`.
    pub ratio: [f64; 3],
    pub ratio_max_m: u64,
    /// Envelope constant for `Σ φ(p)/p²` against `K ln s / s`.
    pub phi_over_p2: f64,
    /// Envelope constant for `Σ φ(p)` against `K s ln s`.
    pub phi_sum: f64,
    pub sweep_from: u64,
    pub sweep_to: u64,
}

const FROZEN_BOUNDS_JSON: &str = include_str!("../tests/golden/error_bounds.json");

pub fn frozen_bounds() -> FrozenBounds {
    serde_json::from_str(FROZEN_BOUNDS_JSON).expect("golden bounds file is valid")
}
