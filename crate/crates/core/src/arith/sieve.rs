use crate::error::{Error, Result};

use super::factorize;

/// Default number of integers covered by [`build_sieves`].
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;

/// Default memory ceiling for sieve construction (1 GiB).
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

// phi (u32) + mu (i8) + omega (u8), plus the prime list amortised.
const BYTES_PER_ENTRY: u64 = 7;

/// Tables of Euler's totient, the Möbius function and the number of
/// distinct prime factors for every `n <= limit`.
///
/// Lookups past `limit` fall back to trial-division factorisation, so the
/// accessors are correct for every positive argument; the limit only
/// controls what is precomputed. Index 0 is unused and holds zeros.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: u64,
    phi: Vec<u32>,
    mu: Vec<i8>,
    omega: Vec<u8>,
}

/// Builds the tables for `1..=limit` with the default memory budget.
pub fn build_sieves(limit: u64) -> Result<SieveTables> {
    build_sieves_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

/// Linear (Euler) sieve: each composite is visited exactly once through its
/// smallest prime factor, so the construction is O(limit).
pub fn build_sieves_with_budget(limit: u64, budget: u64) -> Result<SieveTables> {
    if limit == 0 {
        return Err(Error::Domain("sieve limit must be at least 1".into()));
    }
    let bytes = limit.saturating_mul(BYTES_PER_ENTRY);
    if bytes > budget || limit >= u64::from(u32::MAX) {
        return Err(Error::SieveBudget { limit, bytes, budget });
    }

    let n = limit as usize;
    let mut phi = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut omega = vec![0u8; n + 1];
    let mut primes: Vec<u32> = Vec::new();

    phi[1] = 1;
    mu[1] = 1;
    for i in 2..=n {
        if phi[i] == 0 {
            primes.push(i as u32);
            phi[i] = i as u32 - 1;
            mu[i] = -1;
            omega[i] = 1;
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u32;
                mu[ip] = 0;
                omega[ip] = omega[i];
                break;
            }
            phi[ip] = phi[i] * (p as u32 - 1);
            mu[ip] = -mu[i];
            omega[ip] = omega[i] + 1;
        }
    }

    Ok(SieveTables { limit, phi, mu, omega })
}

impl SieveTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn phi(&self, n: u64) -> u64 {
        assert!(n >= 1, "phi is defined for positive integers");
        if n <= self.limit {
            return u64::from(self.phi[n as usize]);
        }
        factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
    }

    pub fn mu(&self, n: u64) -> i8 {
        assert!(n >= 1, "mu is defined for positive integers");
        if n <= self.limit {
            return self.mu[n as usize];
        }
        let factors = factorize(n);
        if factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn omega(&self, n: u64) -> u32 {
        assert!(n >= 1, "omega is defined for positive integers");
        if n <= self.limit {
            return u32::from(self.omega[n as usize]);
        }
        factorize(n).len() as u32
    }

    /// Raw totient table, `phi_table()[n] = φ(n)` for `1 <= n <= limit`.
    pub fn phi_table(&self) -> &[u32] {
        &self.phi
    }

    pub fn mu_table(&self) -> &[i8] {
        &self.mu
    }

    pub fn omega_table(&self) -> &[u8] {
        &self.omega
    }
}
