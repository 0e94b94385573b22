//! Formula-against-brute-force suite behind `ford verify`.
//!
//! The closed forms under test are passed in as [`Formulas`], which lets a
//! deliberately broken formula be swapped in to prove the suite can fail.

use clap::ValueEnum;
use ford_core::arith::{coprime_factor_pairs, SieveTables};
use ford_core::counting::{cardinality_exact, cardinality_mobius, jump, lattice_region_count, s_of};
use ford_core::sequences::{
    extract_origin, extract_origin_filter, extract_origin_walk, farey, validate_adjacency, validate_mediant,
};
use rayon::prelude::*;
use serde_json::json;

pub type Formula = fn(&SieveTables, u64) -> ford_core::Result<u64>;

#[derive(Clone, Copy)]
pub struct Formulas {
    pub jump: Formula,
    pub cardinality: Formula,
}

fn jump_value(sieve: &SieveTables, m: u64) -> ford_core::Result<u64> {
    Ok(jump(sieve, m)?.s_m)
}

fn jump_off_by_one(sieve: &SieveTables, m: u64) -> ford_core::Result<u64> {
    Ok(jump(sieve, m)?.s_m + 1)
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            jump: jump_value,
            cardinality: cardinality_exact,
        }
    }
}

/// Known-bad substitutions for mutation testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    JumpOffByOne,
}

impl Fault {
    pub fn apply(self, formulas: Formulas) -> Formulas {
        match self {
            Fault::JumpOffByOne => Formulas {
                jump: jump_off_by_one,
                ..formulas
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub detail: String,
}

type CheckResult = Result<(), String>;

/// Runs `check` for every `m` in `range`, keeping the failure with the
/// smallest `m` so the report does not depend on scheduling.
fn for_each_m(range: std::ops::RangeInclusive<u64>, check: impl Fn(u64) -> CheckResult + Sync) -> Result<u64, String> {
    let cases = range.clone().count() as u64;
    let first = range
        .into_par_iter()
        .filter_map(|m| check(m).err().map(|e| (m, e)))
        .min_by_key(|(m, _)| *m);
    match first {
        Some((m, e)) => Err(format!("m = {m}: {e}")),
        None => Ok(cases),
    }
}

/// As [`for_each_m`] over `2..=max_m`, which is empty when `max_m < 2`.
fn for_each_m_from_two(max_m: u64, check: impl Fn(u64) -> CheckResult + Sync) -> Result<u64, String> {
    if max_m < 2 {
        return Ok(0);
    }
    for_each_m(2..=max_m, check)
}

fn lib<T>(r: ford_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn generators(m: u64) -> CheckResult {
    let reference = lib(extract_origin(m))?.fractions;
    if lib(extract_origin_filter(m))?.fractions != reference {
        return Err("predicate filter disagrees with enumeration".into());
    }
    if lib(extract_origin_walk(m))?.fractions != reference {
        return Err("adjacent walk disagrees with enumeration".into());
    }
    Ok(())
}

fn theorems(m: u64) -> CheckResult {
    let seq = lib(extract_origin(m))?.fractions;
    if let Some(v) = lib(validate_mediant(&seq))?.violations.first() {
        return Err(format!("mediant fails at index {}: {}", v.index, v.detail));
    }
    if let Some(v) = lib(validate_adjacency(&seq))?.violations.first() {
        return Err(format!("adjacency fails at index {}: {}", v.index, v.detail));
    }
    Ok(())
}

/// Runs every check over `1..=max_m` and stops at the first failing check.
pub fn run_suite(sieve: &SieveTables, max_m: u64, formulas: &Formulas) -> Result<Vec<CheckOutcome>, Failure> {
    let max_m = max_m.max(1);
    let mut outcomes = Vec::new();
    let mut record = |name: &'static str, result: Result<u64, String>| match result {
        Ok(cases) => {
            outcomes.push(CheckOutcome { name, cases });
            Ok(())
        }
        Err(detail) => Err(Failure { check: name, detail }),
    };

    record("generators", for_each_m(1..=max_m, generators))?;

    record(
        "cardinality",
        for_each_m(1..=max_m, |m| {
            let formula = lib((formulas.cardinality)(sieve, m))?;
            let mobius = lib(cardinality_mobius(sieve, m))?;
            let brute = lib(extract_origin(m))?.count as u64;
            if formula == mobius && mobius == brute {
                Ok(())
            } else {
                Err(format!(
                    "formula {formula}, squarefree-divisor sum {mobius}, enumeration {brute}"
                ))
            }
        }),
    )?;

    record(
        "jumps",
        for_each_m_from_two(max_m, |m| {
            let s_m = lib((formulas.jump)(sieve, m))?;
            let pairs = coprime_factor_pairs(m).len() as u64;
            let diff = lib((formulas.cardinality)(sieve, m))? - lib((formulas.cardinality)(sieve, m - 1))?;
            if !s_m.is_power_of_two() || s_m != pairs || s_m != diff {
                return Err(format!(
                    "jump {s_m}, coprime factor pairs {pairs}, cardinality difference {diff}"
                ));
            }
            Ok(())
        }),
    )?;

    record("theorems", for_each_m(1..=max_m, theorems))?;

    record(
        "farey",
        for_each_m(1..=max_m.min(100), |n| {
            let seq = lib(farey(n))?.fractions;
            let ok = lib(validate_mediant(&seq))?.ok && lib(validate_adjacency(&seq))?.ok;
            if ok {
                Ok(())
            } else {
                Err(format!("Farey sequence of order {n} fails validation"))
            }
        }),
    )?;

    record(
        "lattice",
        for_each_m_from_two(max_m, |m| {
            let region = lib(lattice_region_count(m))?;
            let card = lib((formulas.cardinality)(sieve, m))?;
            let s = lib(s_of(m))?;
            let max_p = lib(extract_origin(m))?
                .fractions
                .iter()
                .map(|f| f.p())
                .max()
                .unwrap_or(0);
            if region.visible_points + 1 != card {
                return Err(format!(
                    "{} visible lattice points against cardinality {card}",
                    region.visible_points
                ));
            }
            if s != max_p {
                return Err(format!("s = {s} but the largest numerator is {max_p}"));
            }
            Ok(())
        }),
    )?;

    Ok(outcomes)
}

pub fn outcomes_to_text(max_m: u64, outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!("ok   {:<12} {} cases\n", o.name, o.cases));
    }
    out.push_str(&format!("verify: {} checks passed for m <= {max_m}\n", outcomes.len()));
    out
}

pub fn outcomes_to_json(max_m: u64, outcomes: &[CheckOutcome]) -> String {
    let checks: Vec<_> = outcomes
        .iter()
        .map(|o| json!({"name": o.name, "cases": o.cases}))
        .collect();
    json!({"max_m": max_m, "ok": true, "checks": checks}).to_string()
}
