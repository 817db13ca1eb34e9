//! Integer-side multiplicative number theory: factorization of small
//! integers by trial division, Möbius and Euler functions, divisor lists.
//!
//! Everything here runs at desk scale (the sweep keeps q^m - 1 tiny), so
//! trial division is the whole algorithm.

use crate::error::{Error, Result};

/// Largest integer accepted by [`factor_int`]; trial division stays fast
/// well past the sweep limit, but inputs are bounded to keep the contract
/// explicit.
pub const FACTOR_BOUND: u64 = 1 << 32;

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInt {
    pub value: u64,
    /// `(prime, exponent)` pairs sorted by prime; empty for 1.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    /// Re-expands the factorization; used by tests and internal assertions.
    pub fn expand(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factors `n ≥ 1` by trial division.
pub fn factor_int(n: u64) -> Result<FactoredInt> {
    if n == 0 || n > FACTOR_BOUND {
        return Err(Error::OutOfRange(n));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0u32;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInt { value: n, factors })
}

/// Möbius function μ(n); μ(1) = 1.
pub fn mu_int(n: u64) -> i64 {
    let f = factor_int(n).expect("mu_int: n within factoring bound");
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient φ(n); φ(1) = 1.
pub fn phi_int(n: u64) -> u64 {
    let f = factor_int(n).expect("phi_int: n within factoring bound");
    f.factors
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * (p.pow(e) - p.pow(e - 1)))
}

/// All divisors of `n` in ascending order.
pub fn divisors_int(n: u64) -> Vec<u64> {
    let f = factor_int(n).expect("divisors_int: n within factoring bound");
    let mut divs = vec![1u64];
    for &(p, e) in &f.factors {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
