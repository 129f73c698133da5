//! Integer factorization, divisors and Euler's totient.
//!
//! Everything here works on `u64` with trial division, which is plenty for
//! group orders in the low millions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive integer together with its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn new(value: u64) -> Result<Self> {
        factorize(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// True for `p * q` with `p != q` prime.
    pub fn is_semiprime_distinct(&self) -> bool {
        self.factors.len() == 2 && self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Total number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, e)| u64::from(e) + 1)
            .product()
    }

    /// All divisors in ascending order, built from the factorization.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
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
}

pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3u64;
    while p.checked_mul(p).is_some_and(|sq| sq <= rest) {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

pub fn totient(n: u64) -> Result<u64> {
    Ok(factorize(n)?.totient())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

/// Divisors strictly between 1 and `n`, ascending.
pub fn proper_divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if n == 1 {
        return Err(Error::OutOfRange("proper divisors need n >= 2".into()));
    }
    let mut d = divisors(n)?;
    d.pop();
    d.remove(0);
    Ok(d)
}

/// Checks the identity `sum_{d | n} phi(d) = n`.
pub fn totient_sum_check(n: u64) -> bool {
    let Ok(divs) = divisors(n) else {
        return false;
    };
    let mut sum = 0u64;
    for d in divs {
        match totient(d).ok().and_then(|t| sum.checked_add(t)) {
            Some(s) => sum = s,
            None => return false,
        }
    }
    sum == n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.is_prime()).unwrap_or(false)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `base^exp` with overflow reported as an error.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}
