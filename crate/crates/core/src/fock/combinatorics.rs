//! Factorials and binomials used by the Fock-basis element formulas.
//!
//! Factorials up to 20! are exact `u64` values; larger ones go through
//! log-gamma.

use crate::error::{Error, Result};

const EXACT_LIMIT: usize = 20;

const FACTORIALS: [u64; EXACT_LIMIT + 1] = {
    let mut table = [1u64; EXACT_LIMIT + 1];
    let mut i = 1;
    while i <= EXACT_LIMIT {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

pub fn ln_factorial(n: usize) -> f64 {
    if n <= EXACT_LIMIT {
        libm::log(FACTORIALS[n] as f64)
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

pub fn factorial(n: usize) -> f64 {
    if n <= EXACT_LIMIT {
        FACTORIALS[n] as f64
    } else {
        libm::exp(ln_factorial(n))
    }
}

/// `sqrt(prod a_i! / prod b_j!)`, evaluated in log space once either side
/// leaves the exact range.
pub fn sqrt_factorial_ratio(num: &[u32], den: &[u32]) -> f64 {
    let exact = num.iter().chain(den).all(|&n| n as usize <= EXACT_LIMIT);
    if exact {
        let mut ratio = 1.0;
        for &n in num {
            ratio *= FACTORIALS[n as usize] as f64;
        }
        for &n in den {
            ratio /= FACTORIALS[n as usize] as f64;
        }
        libm::sqrt(ratio)
    } else {
        let ln: f64 = num.iter().map(|&n| ln_factorial(n as usize)).sum::<f64>()
            - den.iter().map(|&n| ln_factorial(n as usize)).sum::<f64>();
        libm::exp(0.5 * ln)
    }
}

/// Binomial coefficient as a float; exact for the ranges used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    libm::round(acc)
}

/// Exact binomial coefficient, reporting overflow instead of wrapping.
pub fn binomial_exact(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial coefficient"))
}
