//! Cardinalities of the origin-line sequences, their jumps, and the lattice
//! point counts behind them.

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::arith::SieveTables;
use crate::error::{Error, Result};
use crate::sequences::extract_origin;

/// Growth of the origin-line sequence from `m - 1` to `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JumpRecord {
    pub m: u64,
    pub s_m: u64,
    pub omega_m: u32,
}

fn require_positive(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    Ok(())
}

/// `2^(ω(m) - 1)`, or 1 for `m = 1` where the formula does not apply.
pub fn jump(sieve: &SieveTables, m: u64) -> Result<JumpRecord> {
    require_positive(m)?;
    let omega_m = sieve.omega(m);
    let s_m = if m == 1 { 1 } else { 1u64 << (omega_m - 1) };
    Ok(JumpRecord { m, s_m, omega_m })
}

/// `Σ_{j=2}^{m} 2^(ω(j) - 1) + 2`.
pub fn cardinality_exact(sieve: &SieveTables, m: u64) -> Result<u64> {
    require_positive(m)?;
    Ok((2..=m).map(|j| 1u64 << (sieve.omega(j) - 1)).sum::<u64>() + 2)
}

/// `½ Σ_{j=2}^{m} Σ_{d | j} μ²(d) + 2`.
///
/// The double sum is reordered over `d`: each squarefree `d <= m` divides
/// `⌊m/d⌋` of the `j` in `1..=m`, and the `j = 1` term (which is 1) is
/// removed afterwards.
pub fn cardinality_mobius(sieve: &SieveTables, m: u64) -> Result<u64> {
    require_positive(m)?;
    let double_sum: u64 = (1..=m).filter(|&d| sieve.mu(d) != 0).map(|d| m / d).sum::<u64>() - 1;
    if !double_sum.is_multiple_of(2) {
        return Err(Error::Internal(format!(
            "odd squarefree-divisor sum {double_sum} at m = {m}"
        )));
    }
    Ok(double_sum / 2 + 2)
}

/// Length of the explicitly generated sequence.
pub fn cardinality_brute(m: u64) -> Result<u64> {
    Ok(extract_origin(m)?.count as u64)
}

/// `table[m]` is the cardinality for `m` in `1..=max_m`; `table[0]` is 0.
pub fn cardinality_table(sieve: &SieveTables, max_m: u64) -> Vec<u64> {
    let mut table = vec![0u64; max_m as usize + 1];
    if max_m >= 1 {
        table[1] = 2;
    }
    for m in 2..=max_m {
        table[m as usize] = table[m as usize - 1] + (1u64 << (sieve.omega(m) - 1));
    }
    table
}

/// The largest `s` with `s(s + 1) <= m`, by integer square root:
/// `s = ⌊(√(4m + 1) - 1) / 2⌋`.
pub fn s_of(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Domain(format!("s(m) needs m >= 2, got {m}")));
    }
    let root = (4 * u128::from(m) + 1).sqrt();
    Ok(((root - 1) / 2) as u64)
}

/// Lattice points `(p, q)` with `1 <= p <= s`, `p <= q <= m/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegionCount {
    pub m: u64,
    pub s: u64,
    pub total_points: u64,
    pub visible_points: u64,
}

pub fn lattice_region_count(m: u64) -> Result<RegionCount> {
    let s = s_of(m)?;
    let mut total_points = 0;
    let mut visible_points = 0;
    for p in 1..=s {
        let top = m / p;
        total_points += top - p + 1;
        visible_points += (p..=top).filter(|q| p.gcd(q) == 1).count() as u64;
    }
    Ok(RegionCount {
        m,
        s,
        total_points,
        visible_points,
    })
}

/// Share of coprime pairs in `[1, r]²`, counted pair by pair.
pub fn visible_ratio(r: u64) -> Result<f64> {
    require_positive(r)?;
    let visible: u64 = (1..=r).map(|a| (1..=r).filter(|b| a.gcd(b) == 1).count() as u64).sum();
    Ok(visible as f64 / (r as f64 * r as f64))
}

/// One row of the jump table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JumpRow {
    pub m: u64,
    pub omega: u32,
    pub jump: u64,
    pub cardinality: u64,
}

pub fn jump_rows(sieve: &SieveTables, from: u64, to: u64) -> Result<Vec<JumpRow>> {
    require_positive(from)?;
    if from > to {
        return Err(Error::Domain(format!("empty range {from}..{to}")));
    }
    let mut cardinality = cardinality_exact(sieve, from)?;
    let mut rows = Vec::with_capacity((to - from + 1) as usize);
    for m in from..=to {
        let rec = jump(sieve, m)?;
        if m > from {
            cardinality += rec.s_m;
        }
        rows.push(JumpRow {
            m,
            omega: rec.omega_m,
            jump: rec.s_m,
            cardinality,
        });
    }
    Ok(rows)
}

/// CSV with header `m,omega,jump,cardinality`.
pub fn jump_rows_to_csv(rows: &[JumpRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    if rows.is_empty() {
        w.write_record(["m", "omega", "jump", "cardinality"])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}
