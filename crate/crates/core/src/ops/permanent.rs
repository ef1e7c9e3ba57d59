use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::combinatorics::binomial;
use crate::ops::passive::CMatrix;

/// Matrix permanent. Ryser's formula with Gray-code ordering, `O(2^n n)`;
/// sizes up to 3 use the expanded definition.
pub fn permanent(a: &CMatrix) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    Ok(match n {
        0 => Complex64::new(1.0, 0.0),
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] + a[(0, 1)] * a[(1, 0)],
        3 => {
            a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] + a[(1, 2)] * a[(2, 1)])
                + a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] + a[(1, 2)] * a[(2, 0)])
                + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] + a[(1, 1)] * a[(2, 0)])
        }
        _ => ryser(a),
    })
}

fn ryser(a: &CMatrix) -> Complex64 {
    let n = a.nrows();
    assert!(n < 64, "permanent of a {n}x{n} matrix is out of reach");
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut included = vec![false; n];
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let sign = if included[j] { -1.0 } else { 1.0 };
        included[j] = !included[j];
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += a[(i, j)] * sign;
        }
        let prod: Complex64 = row_sums.iter().product();
        // Gray code k has popcount(k ^ (k >> 1)) columns selected.
        let size = (k ^ (k >> 1)).count_ones() as usize;
        if (n - size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

/// Permanent of the matrix with row `i` repeated `rows[i]` times and column
/// `j` repeated `cols[j]` times, without materializing it.
///
/// Uses the multiset form of Ryser's formula
/// `sum_s (-1)^(n - |s|) prod_j C(c_j, s_j) prod_i (sum_j s_j a_ij)^(r_i)`,
/// iterating over whichever side has fewer sub-multisets. The alternating sum
/// loses accuracy at large photon numbers, so this is intended for desk-scale
/// patterns.
pub fn permanent_repeated(a: &CMatrix, rows: &[u32], cols: &[u32]) -> Result<Complex64> {
    if rows.len() != a.nrows() || cols.len() != a.ncols() {
        return Err(Error::ModeMismatch {
            expected: a.nrows(),
            found: rows.len(),
        });
    }
    let n: u32 = rows.iter().sum();
    if n != cols.iter().sum::<u32>() {
        return Err(Error::InvalidPattern(alloc::format!(
            "row multiplicities sum to {n}, columns to {}",
            cols.iter().sum::<u32>()
        )));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let combos = |c: &[u32]| c.iter().map(|&x| x as f64 + 1.0).product::<f64>();
    if combos(rows) < combos(cols) {
        Ok(repeated_ryser(&a.transpose(), cols, rows))
    } else {
        Ok(repeated_ryser(a, rows, cols))
    }
}

fn repeated_ryser(a: &CMatrix, rows: &[u32], cols: &[u32]) -> Complex64 {
    let active_rows: Vec<usize> = (0..rows.len()).filter(|&i| rows[i] > 0).collect();
    let active_cols: Vec<usize> = (0..cols.len()).filter(|&j| cols[j] > 0).collect();
    let n: u32 = rows.iter().sum();

    let mut s = vec![0u32; active_cols.len()];
    let mut row_sums = vec![Complex64::new(0.0, 0.0); active_rows.len()];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        // Odometer increment over s_j in 0..=c_j, updating row sums in place.
        let mut pos = 0;
        loop {
            if pos == active_cols.len() {
                return total;
            }
            let j = active_cols[pos];
            if s[pos] < cols[j] {
                s[pos] += 1;
                for (r, &i) in active_rows.iter().enumerate() {
                    row_sums[r] += a[(i, j)];
                }
                break;
            }
            let back = s[pos] as f64;
            for (r, &i) in active_rows.iter().enumerate() {
                row_sums[r] -= a[(i, j)] * back;
            }
            s[pos] = 0;
            pos += 1;
        }

        let size: u32 = s.iter().sum();
        let mut weight = 1.0;
        for (pos, &j) in active_cols.iter().enumerate() {
            weight *= binomial(cols[j] as usize, s[pos] as usize);
        }
        let mut prod = Complex64::new(weight, 0.0);
        for (r, &i) in active_rows.iter().enumerate() {
            prod *= row_sums[r].powu(rows[i]);
        }
        if (n - size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
}

/// Expands multiplicities into the explicit repeated-index list.
#[cfg(test)]
pub(crate) fn repeat_indices(counts: &[u32]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| core::iter::repeat_n(i, c as usize))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::oracle::permanent_naive;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn small_cases() {
        let a = CMatrix::from_row_slice(1, 1, &[Complex64::new(2.0, 1.0)]);
        assert_eq!(permanent(&a).unwrap(), Complex64::new(2.0, 1.0));
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        assert_eq!(permanent(&a).unwrap(), c(10.0));
        let ones = CMatrix::from_element(3, 3, c(1.0));
        assert_eq!(permanent(&ones).unwrap(), c(6.0));
        assert_eq!(permanent(&CMatrix::zeros(0, 0)).unwrap(), c(1.0));
        assert!(permanent(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn ryser_on_all_ones() {
        for n in 4..9usize {
            let ones = CMatrix::from_element(n, n, c(1.0));
            let expected: f64 = (1..=n).map(|k| k as f64).product();
            assert!((permanent(&ones).unwrap().re - expected).abs() < 1e-9 * expected);
        }
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| CMatrix::from_iterator(n, n, v.into_iter().map(|(a, b)| Complex64::new(a, b))))
    }

    proptest! {
        #[test]
        fn ryser_matches_definition(a in (1usize..7).prop_flat_map(arb_matrix)) {
            let fast = permanent(&a).unwrap();
            let slow = permanent_naive(&a).unwrap();
            prop_assert!((fast - slow).norm() < 1e-10);
        }

        #[test]
        fn repeated_matches_explicit(
            a in arb_matrix(3),
            rows in proptest::collection::vec(0u32..3, 3),
        ) {
            let n: u32 = rows.iter().sum();
            // Spread the same total over columns in a fixed way.
            let mut cols = [0u32; 3];
            for k in 0..n { cols[(k as usize * 2) % 3] += 1; }
            let sub = {
                let ri = repeat_indices(&rows);
                let ci = repeat_indices(&cols);
                CMatrix::from_fn(ri.len(), ci.len(), |x, y| a[(ri[x], ci[y])])
            };
            let direct = permanent(&sub).unwrap();
            let fast = permanent_repeated(&a, &rows, &cols).unwrap();
            prop_assert!((direct - fast).norm() < 1e-10);
        }
    }
}
