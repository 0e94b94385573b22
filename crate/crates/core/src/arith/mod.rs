//! Integer and rational primitives plus the arithmetic functions (φ, μ, ω)
//! the counting formulas are built from.

mod constants;
mod real;
mod sieve;

pub use constants::{a_tail_bound, constant_a, pi, Constants, A_TERMS, FROZEN_A};
pub use real::{Real, FRAC_BITS};
pub use sieve::{build_sieves, build_sieves_with_budget, SieveTables, DEFAULT_MEMORY_BUDGET, DEFAULT_SIEVE_LIMIT};

use num_integer::Roots;

use crate::error::{Error, Result};

/// Exact rational with arbitrary-precision numerator and denominator.
/// Always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdOfZeros);
    }
    Ok(num_integer::gcd(a, b))
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// Prime factorisation by trial division, ascending primes with exponents.
/// `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize(0)");
    let mut out = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    let mut p = 3;
    while p <= n / p {
        push(&mut n, p);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every `(p, q)` with `p * q = m`, `gcd(p, q) = 1` and `p <= q`, by
/// ascending `p`. Found by direct search over `p <= √m`.
pub fn coprime_factor_pairs(m: u64) -> Vec<(u64, u64)> {
    assert!(m >= 1, "m must be positive");
    (1..=isqrt(m))
        .filter(|&p| m.is_multiple_of(p))
        .map(|p| (p, m / p))
        .filter(|&(p, q)| num_integer::gcd(p, q) == 1)
        .collect()
}

/// Number of `j` in `1..=x` coprime to `n`, as `Σ_{d | n} μ(d) ⌊x/d⌋`
/// over the squarefree divisors of `n`.
pub fn phi_x(x: u64, n: u64) -> u64 {
    assert!(n >= 1, "n must be positive");
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let mut total: i128 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let mut d = 1u64;
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
            }
        }
        let term = i128::from(x / d);
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u64
}
