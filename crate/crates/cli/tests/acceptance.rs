//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every tolerance and time limit is a named
//! constant below.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ford_cli::{run_with, Settings};
use ford_core::approx::{error_report, frozen_bounds, phi_over_p2_envelope, phi_sum_envelope, Approximation};
use ford_core::arith::{build_sieves, coprime_factor_pairs, phi_x, rational, Constants, SieveTables};
use ford_core::counting::{
    cardinality_exact, cardinality_mobius, cardinality_table, jump, lattice_region_count, visible_ratio,
};
use ford_core::geometry::{AffineMode, Fraction};
use ford_core::sequences::{
    check_reconstructible, extract_affine, extract_origin, extract_origin_filter, extract_origin_walk, farey,
    farey_horizontal, validate_adjacency, validate_mediant,
};
use rayon::prelude::*;

const F32_LISTING: &str = "0/1, 1/32, 1/31, 1/30, 1/29, 1/28, 1/27, 1/26, 1/25, 1/24, 1/23, 1/22, 1/21, \
1/20, 1/19, 1/18, 1/17, 1/16, 1/15, 1/14, 1/13, 1/12, 1/11, 1/10, 1/9, 1/8, 2/15, 1/7, 2/13, 1/6, 2/11, \
1/5, 2/9, 1/4, 2/7, 3/10, 1/3, 3/8, 2/5, 3/7, 1/2, 4/7, 3/5, 2/3, 3/4, 4/5, 5/6, 1/1";
const F32_LEN: usize = 48;

const LIMIT_GOLDEN: Duration = Duration::from_secs(1);
const LIMIT_ORACLES: Duration = Duration::from_secs(60);
const LIMIT_JUMPS: Duration = Duration::from_secs(30);
const LIMIT_APPENDIX: Duration = Duration::from_secs(60);

const GENERATOR_MAX_M: u64 = 2000;
const CARDINALITY_MAX_M: u64 = 10_000;
const JUMP_MAX_M: u64 = 100_000;
const THEOREM_MAX_M: u64 = 2000;
const THEOREM_MAX_FAREY: u64 = 100;
const HORIZONTAL_MAX_N: u64 = 50;
const AFFINE_M: u64 = 1_000_000;
const AFFINE_N: u64 = 3;
const APPENDIX_MAX_N: u64 = 500;
const APPENDIX_MAX_X: u64 = 10_000;
const VISIBLE_R: u64 = 1000;
const VISIBLE_LIMIT: f64 = 0.6079;
const VISIBLE_TOL: f64 = 0.002;
const REGION_MAX_M: u64 = 2000;
const QUALITY_FROM: u64 = 1000;
const QUALITY_TO: u64 = 10_000;
const ALPHA1_TARGET: f64 = 3.2944;
const ALPHA1_TOL: f64 = 1e-4;
const RATIO_FROM: u64 = 2;
const RATIO_TO: u64 = 10_000;
const SWEEP_FROM: u64 = 10;
const SWEEP_TO: u64 = 10_000;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs())
    })
}

/// Smallest failing `m` in the range, if any.
fn first_failure(
    range: std::ops::RangeInclusive<u64>,
    check: impl Fn(u64) -> Result<(), String> + Sync,
) -> Result<(), String> {
    match range
        .into_par_iter()
        .filter_map(|m| check(m).err().map(|e| (m, e)))
        .min_by_key(|(m, _)| *m)
    {
        Some((m, e)) => Err(format!("m = {m}: {e}")),
        None => Ok(()),
    }
}

fn golden_sequence() -> Outcome {
    let start = Instant::now();
    let result = run_with(["ford", "extract", "--m", "32"], &Settings::default());
    let elapsed = start.elapsed();
    ensure(result.exit_code == 0, || format!("exit code {}", result.exit_code))?;
    let text = String::from_utf8(result.stdout).map_err(|e| e.to_string())?;
    let got = text.trim_end_matches('\n');
    ensure(got.split(", ").count() == F32_LEN, || {
        format!("{} fractions", got.split(", ").count())
    })?;
    ensure(got == F32_LISTING, || format!("listing differs: {got}"))?;
    within(elapsed, LIMIT_GOLDEN)?;
    Ok(format!("48 fractions in {:.3} s", elapsed.as_secs_f64()))
}

fn oracle_equivalence(sieve: &SieveTables) -> Outcome {
    let start = Instant::now();
    first_failure(1..=GENERATOR_MAX_M, |m| {
        let reference = extract_origin(m).map_err(|e| e.to_string())?.fractions;
        ensure(
            extract_origin_filter(m).map_err(|e| e.to_string())?.fractions == reference,
            || "predicate filter differs".into(),
        )?;
        ensure(
            extract_origin_walk(m).map_err(|e| e.to_string())?.fractions == reference,
            || "adjacent walk differs".into(),
        )
    })?;
    first_failure(1..=CARDINALITY_MAX_M, |m| {
        let exact = cardinality_exact(sieve, m).map_err(|e| e.to_string())?;
        let mobius = cardinality_mobius(sieve, m).map_err(|e| e.to_string())?;
        let brute = extract_origin(m).map_err(|e| e.to_string())?.count as u64;
        ensure(exact == mobius && mobius == brute, || {
            format!("{exact} / {mobius} / {brute}")
        })
    })?;
    let elapsed = start.elapsed();
    within(elapsed, LIMIT_ORACLES)?;
    Ok(format!(
        "three generators agree for m <= {GENERATOR_MAX_M}, three counts for m <= {CARDINALITY_MAX_M}, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn jump_formula(sieve: &SieveTables) -> Outcome {
    let start = Instant::now();
    let table = cardinality_table(sieve, JUMP_MAX_M);
    first_failure(2..=JUMP_MAX_M, |m| {
        let rec = jump(sieve, m).map_err(|e| e.to_string())?;
        let pairs = coprime_factor_pairs(m).len() as u64;
        let formula = 1u64 << (rec.omega_m - 1);
        let diff = table[m as usize] - table[m as usize - 1];
        ensure(rec.s_m == pairs && pairs == formula && formula == diff, || {
            format!(
                "jump {}, pairs {pairs}, 2^(omega-1) {formula}, difference {diff}",
                rec.s_m
            )
        })
    })?;
    let elapsed = start.elapsed();
    within(elapsed, LIMIT_JUMPS)?;
    Ok(format!("2 <= m <= {JUMP_MAX_M} in {:.1} s", elapsed.as_secs_f64()))
}

fn theorem_suites() -> Outcome {
    let validate = |seq: &[Fraction]| -> Result<(), String> {
        let mediant = validate_mediant(seq).map_err(|e| e.to_string())?;
        ensure(mediant.ok, || {
            format!("mediant fails at {:?}", mediant.violations.first())
        })?;
        let adjacency = validate_adjacency(seq).map_err(|e| e.to_string())?;
        ensure(adjacency.ok, || {
            format!("adjacency fails at {:?}", adjacency.violations.first())
        })
    };
    first_failure(1..=THEOREM_MAX_M, |m| {
        validate(&extract_origin(m).map_err(|e| e.to_string())?.fractions)
    })?;
    first_failure(1..=THEOREM_MAX_FAREY, |n| {
        validate(&farey(n).map_err(|e| e.to_string())?.fractions)
    })
    .map_err(|e| format!("farey {e}"))?;

    let frac = |p, q| Fraction::new(p, q).unwrap();
    let counter = [frac(4, 7), frac(9, 14), frac(5, 7)];
    ensure(validate_mediant(&counter).map_err(|e| e.to_string())?.ok, || {
        "counterexample fails mediant".into()
    })?;
    let adjacency = validate_adjacency(&counter).map_err(|e| e.to_string())?;
    ensure(!adjacency.ok && adjacency.violations.len() == 2, || {
        "counterexample passes adjacency".into()
    })?;
    ensure(check_reconstructible(&counter) == Ok(false), || {
        "counterexample reported reconstructible".into()
    })?;
    Ok(format!(
        "m <= {THEOREM_MAX_M}, Farey n <= {THEOREM_MAX_FAREY}; 4/7, 9/14, 5/7 is mediant-valid, not adjacent"
    ))
}

fn line_limits() -> Outcome {
    for n in 1..=HORIZONTAL_MAX_N {
        let k = rational(1, (n * n) as i64);
        let got = farey_horizontal(&k).map_err(|e| e.to_string())?.fractions;
        ensure(got == farey(n).map_err(|e| e.to_string())?.fractions, || {
            format!("y = 1/{} differs", n * n)
        })?;
    }
    let b = rational(1, (AFFINE_N * AFFINE_N) as i64);
    let got: BTreeSet<Fraction> = extract_affine(AFFINE_M, &b, AffineMode::Exact)
        .map_err(|e| e.to_string())?
        .fractions
        .into_iter()
        .collect();
    let reference: BTreeSet<Fraction> = farey(AFFINE_N)
        .map_err(|e| e.to_string())?
        .fractions
        .into_iter()
        .collect();
    let diff: Vec<Fraction> = got.symmetric_difference(&reference).copied().collect();
    ensure(diff.iter().all(|f| f.q() == AFFINE_N), || {
        format!("discrepancies beyond q = {AFFINE_N}: {diff:?}")
    })?;
    let listed: Vec<String> = diff.iter().map(|f| f.to_string()).collect();
    Ok(format!(
        "horizontal n <= {HORIZONTAL_MAX_N}; affine m = {AFFINE_M}, b = 1/{}: boundary discrepancies [{}]",
        AFFINE_N * AFFINE_N,
        listed.join(", ")
    ))
}

fn appendix_bound(sieve: &SieveTables) -> Outcome {
    let start = Instant::now();
    first_failure(1..=APPENDIX_MAX_N, |n| {
        let phi = i128::from(sieve.phi(n));
        let n_big = i128::from(n);
        for x in 1..=APPENDIX_MAX_X {
            // |phi_x - x φ(n)/n| < φ(n), multiplied through by n
            let gap = (i128::from(phi_x(x, n)) * n_big - i128::from(x) * phi).abs();
            ensure(gap < phi * n_big, || format!("x = {x}"))?;
        }
        Ok(())
    })?;
    let elapsed = start.elapsed();
    within(elapsed, LIMIT_APPENDIX)?;
    Ok(format!(
        "n <= {APPENDIX_MAX_N}, x <= {APPENDIX_MAX_X} in {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn visible_points(sieve: &SieveTables) -> Outcome {
    let ratio = visible_ratio(VISIBLE_R).map_err(|e| e.to_string())?;
    ensure((ratio - VISIBLE_LIMIT).abs() <= VISIBLE_TOL, || {
        format!("ratio {ratio}")
    })?;
    first_failure(2..=REGION_MAX_M, |m| {
        let region = lattice_region_count(m).map_err(|e| e.to_string())?;
        let card = cardinality_exact(sieve, m).map_err(|e| e.to_string())?;
        ensure(region.visible_points + 1 == card, || {
            format!("{} visible, cardinality {card}", region.visible_points)
        })
    })?;
    Ok(format!(
        "ratio({VISIBLE_R}) = {ratio:.6}; regions agree for m <= {REGION_MAX_M}"
    ))
}

fn approximation_quality(sieve: &SieveTables) -> Outcome {
    let quality = error_report(sieve, QUALITY_FROM, QUALITY_TO, 1).map_err(|e| e.to_string())?;
    ensure(quality.best == Approximation::A3, || {
        format!("best is {}", quality.best)
    })?;

    let alpha = Constants::get().first_approximation_alpha().to_f64();
    ensure((alpha - ALPHA1_TARGET).abs() <= ALPHA1_TOL, || {
        format!("alpha1 = {alpha}")
    })?;

    let bounds = frozen_bounds();
    ensure(bounds.ratio_max_m == RATIO_TO, || {
        "golden file covers a different range".into()
    })?;
    let sweep = error_report(sieve, RATIO_FROM, RATIO_TO, 1).map_err(|e| e.to_string())?;
    for (i, (measured, frozen)) in sweep.max_ratio.iter().zip(bounds.ratio).enumerate() {
        ensure(*measured <= frozen, || {
            format!("K{} measured {measured} above frozen {frozen}", i + 1)
        })?;
    }
    let measured: Vec<String> = sweep.max_ratio.iter().map(|k| k.to_decimal(4)).collect();
    Ok(format!(
        "best a3; alpha1 = {alpha:.6}; max |err|/sqrt(m) = [{}] within {:?}",
        measured.join(", "),
        bounds.ratio
    ))
}

fn ingredient_sweeps(sieve: &SieveTables) -> Outcome {
    let bounds = frozen_bounds();
    ensure(bounds.sweep_from == SWEEP_FROM && bounds.sweep_to == SWEEP_TO, || {
        "golden file covers a different range".into()
    })?;
    let (k11, at11) = phi_over_p2_envelope(sieve, SWEEP_FROM, SWEEP_TO).map_err(|e| e.to_string())?;
    let (k12, at12) = phi_sum_envelope(sieve, SWEEP_FROM, SWEEP_TO).map_err(|e| e.to_string())?;
    ensure(k11 <= bounds.phi_over_p2, || {
        format!("phi/p^2 envelope {k11} above {}", bounds.phi_over_p2)
    })?;
    ensure(k12 <= bounds.phi_sum, || {
        format!("phi sum envelope {k12} above {}", bounds.phi_sum)
    })?;
    Ok(format!(
        "K = {} (s = {at11}) <= {}, K = {} (s = {at12}) <= {}",
        k11.to_decimal(5),
        bounds.phi_over_p2,
        k12.to_decimal(5),
        bounds.phi_sum
    ))
}

fn main() -> ExitCode {
    let sieve = build_sieves(JUMP_MAX_M).expect("sieve fits the default budget");
    let criteria: Vec<Criterion> = vec![
        ("golden sequence", Box::new(golden_sequence)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&sieve))),
        ("jump formula", Box::new(|| jump_formula(&sieve))),
        ("mediant and adjacency", Box::new(theorem_suites)),
        ("horizontal and affine limits", Box::new(line_limits)),
        ("relative-prime count bound", Box::new(|| appendix_bound(&sieve))),
        ("visible points", Box::new(|| visible_points(&sieve))),
        ("approximation quality", Box::new(|| approximation_quality(&sieve))),
        ("ingredient sweeps", Box::new(|| ingredient_sweeps(&sieve))),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}  {name:<28} {secs:>7.2} s  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}  {name:<28} {secs:>7.2} s  {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
