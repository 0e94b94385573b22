use std::sync::OnceLock;

use num_bigint::BigInt;

use super::real::{Real, FRAC_BITS};

/// Number of terms behind [`FROZEN_A`].
pub const A_TERMS: u64 = 10_000_000;

/// `Σ_{n ≤ 10^7} μ(n) ln(n) / n²`, as produced by [`constant_a`]`(A_TERMS)`.
/// The full series differs from this by at most [`a_tail_bound`]`(A_TERMS)`
/// (about 1.7e-6).
pub const FROZEN_A: &str = "-0.346494734542628431631170729";

const EULER_GAMMA: &str = "0.57721566490153286060651209008240243104215933593992";

/// Constants shared by the approximation formulas.
#[derive(Debug, Clone)]
pub struct Constants {
    pub zeta2: Real,
    pub euler_gamma: Real,
    /// Partial sum of `μ(n) ln(n) / n²` over `n ≤ a_terms`.
    pub a: Real,
    pub a_terms: u64,
    /// Upper bound on the truncation error of `a`.
    pub a_tail_bound: Real,
}

impl Constants {
    pub fn get() -> &'static Constants {
        static CONSTANTS: OnceLock<Constants> = OnceLock::new();
        CONSTANTS.get_or_init(|| {
            let pi = pi();
            Constants {
                zeta2: &pi * &pi / Real::from(6u64),
                euler_gamma: Real::parse_decimal(EULER_GAMMA).expect("valid literal"),
                a: Real::parse_decimal(FROZEN_A).expect("valid literal"),
                a_terms: A_TERMS,
                a_tail_bound: a_tail_bound(A_TERMS),
            }
        })
    }

    /// `1 + 2C - 2Aζ(2)`.
    pub fn first_approximation_alpha(&self) -> Real {
        let two = Real::from(2u64);
        Real::one() + &two * &self.euler_gamma - &two * &self.a * &self.zeta2
    }
}

const PI_SCALE: u32 = 124;

fn atan_inv_raw(k: u64) -> i128 {
    let k = i128::from(k);
    let k2 = k * k;
    let mut term = (1i128 << PI_SCALE) / k;
    let mut sum = term;
    let mut j = 1i128;
    loop {
        term /= k2;
        if term == 0 {
            break;
        }
        let t = term / (2 * j + 1);
        if j % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        j += 1;
    }
    sum
}

/// π from Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi() -> Real {
    let raw = 16 * atan_inv_raw(5) - 4 * atan_inv_raw(239);
    let shift = PI_SCALE - FRAC_BITS;
    Real::from_raw((BigInt::from(raw) + (BigInt::from(1) << (shift - 1))) >> shift)
}

/// `(ln N + 1) / N`, which dominates `Σ_{n > N} ln(n) / n²` for `N ≥ 2`.
pub fn a_tail_bound(terms: u64) -> Real {
    (Real::ln_u64(terms) + Real::one()) / Real::from(terms)
}

const LN_SCALE: u32 = 120;

/// Partial sum `Σ_{n ≤ terms} μ(n) ln(n) / n²`.
///
/// One linear sieve pass records the smallest prime factor of every `n`;
/// `ln p` for each new prime comes from `ln(p - 1)` (already known through
/// its factorisation) plus `2 atanh(1 / (2p - 1))`, so no general-purpose
/// logarithm is ever evaluated. Accumulation is in 120-bit fixed point.
pub fn constant_a(terms: u64) -> Real {
    assert!(terms >= 1, "at least one term");
    let n = usize::try_from(terms).expect("term count fits in memory");

    // spf[i] = 1 + index into `primes` of the smallest prime factor of i
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    let mut ln_primes: Vec<u128> = Vec::new();
    let mut sum: i128 = 0;

    let ln_of = |mut x: usize, spf: &[u32], primes: &[u32], ln_primes: &[u128]| -> (u128, bool, u32) {
        let mut ln = 0u128;
        let mut last = 0u32;
        let mut squarefree = true;
        let mut count = 0u32;
        while x > 1 {
            let idx = (spf[x] - 1) as usize;
            let p = primes[idx];
            if p == last {
                squarefree = false;
            }
            last = p;
            count += 1;
            ln += ln_primes[idx];
            x /= p as usize;
        }
        (ln, squarefree, count)
    };

    for i in 2..=n {
        if spf[i] == 0 {
            let ln_prev = ln_of(i - 1, &spf, &primes, &ln_primes).0;
            let step = if i == 2 {
                2 * super::real::atanh_inv_raw(3, LN_SCALE)
            } else {
                2 * super::real::atanh_inv_raw(2 * i as u64 - 1, LN_SCALE)
            };
            primes.push(i as u32);
            ln_primes.push(ln_prev + step);
            spf[i] = primes.len() as u32;
        }
        let spf_i = spf[i] as usize;
        for (idx, &p) in primes.iter().enumerate() {
            let ip = i * p as usize;
            if ip > n || idx >= spf_i {
                break;
            }
            spf[ip] = idx as u32 + 1;
        }

        let (ln, squarefree, count) = ln_of(i, &spf, &primes, &ln_primes);
        if squarefree {
            let term = (ln / (i as u128 * i as u128)) as i128;
            if count % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
    }

    let shift = LN_SCALE - FRAC_BITS;
    Real::from_raw((BigInt::from(sum) + (BigInt::from(1) << (shift - 1))) >> shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_zeta2_digits() {
        assert_eq!(pi().to_decimal(24), "3.141592653589793238462643");
        assert_eq!(Constants::get().zeta2.to_decimal(10), "1.6449340668");
        assert_eq!(Constants::get().euler_gamma.to_decimal(10), "0.5772156649");
    }

    #[test]
    fn small_partial_sums() {
        assert_eq!(constant_a(1), Real::zero());
        // -ln2/4 - ln3/9 + 0 (n=4) - ln5/25
        let expected = -(Real::ln_u64(2) / Real::from(4u64))
            - Real::ln_u64(3) / Real::from(9u64)
            - Real::ln_u64(5) / Real::from(25u64);
        let got = constant_a(5);
        assert!((&got - &expected).abs().raw() <= &BigInt::from(256));
    }

    #[test]
    fn partial_sum_converges_to_frozen_value() {
        let constants = Constants::get();
        let a6 = constant_a(1_000_000);
        let diff = (&a6 - &constants.a).abs();
        assert!(diff < 1e-5, "diff {diff}");
        assert!(constants.a < -0.3464 && constants.a > -0.3466);
    }

    #[test]
    fn frozen_value_is_reproducible() {
        let recomputed = constant_a(A_TERMS);
        let diff = (&recomputed - &Constants::get().a).abs();
        assert!(diff < 1e-26, "diff {diff}");
        assert!(Constants::get().a_tail_bound < 1.8e-6);
    }

    #[test]
    fn first_alpha_matches_reported_value() {
        let alpha = Constants::get().first_approximation_alpha();
        assert!((alpha.to_f64() - 3.2944).abs() <= 1e-4, "{alpha}");
    }
}
