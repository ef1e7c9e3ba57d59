use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::CMatrix;

/// Largest asymmetry accepted before symmetrizing, relative to the largest entry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dimension up to which [`hafnian`] uses the subset dynamic program.
pub const DP_LIMIT: usize = 20;

fn symmetrized(x: &CMatrix) -> Result<CMatrix> {
    let (rows, cols) = x.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows % 2 != 0 {
        return Err(Error::OddDimension(rows));
    }
    let scale = x.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let deviation = x
        .iter()
        .zip(x.transpose().iter())
        .fold(0.0f64, |a, (p, q)| a.max((p - q).norm()));
    if deviation > SYMMETRY_TOLERANCE * scale {
        return Err(Error::NotSymmetric { deviation });
    }
    Ok((x + x.transpose()) * Complex64::new(0.5, 0.0))
}

/// Hafnian by explicit enumeration of the `(2K - 1)!!` perfect matchings.
pub fn hafnian_reference(x: &CMatrix) -> Result<Complex64> {
    let x = symmetrized(x)?;
    let mut remaining: Vec<usize> = (0..x.nrows()).collect();
    Ok(matchings(&x, &mut remaining))
}

fn matchings(x: &CMatrix, remaining: &mut Vec<usize>) -> Complex64 {
    if remaining.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let first = remaining.remove(0);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..remaining.len() {
        let partner = remaining.remove(k);
        total += x[(first, partner)] * matchings(x, remaining);
        remaining.insert(k, partner);
    }
    remaining.insert(0, first);
    total
}

/// Hafnian. Pairs the lowest remaining index with every other one, memoizing
/// over subsets, which costs `O(2^(2K) K)` time; above [`DP_LIMIT`] it falls
/// back to the matching enumeration.
pub fn hafnian(x: &CMatrix) -> Result<Complex64> {
    let n = x.nrows();
    if n > DP_LIMIT {
        return hafnian_reference(x);
    }
    let x = symmetrized(x)?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let full = (1usize << n) - 1;
    let mut table = vec![Complex64::new(0.0, 0.0); 1 << n];
    table[0] = Complex64::new(1.0, 0.0);
    for mask in 1..=full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc += x[(i, j)] * table[rest & !(1 << j)];
        }
        table[mask] = acc;
    }
    Ok(table[full])
}
