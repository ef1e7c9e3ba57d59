use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::combinatorics::factorial;
use crate::fock::OccupationPattern;
use crate::ops::{CMatrix, PassiveUnitary};
use crate::phase_space::covariance::{evolve_covariance, sigma_b};
use crate::phase_space::hafnian::hafnian;
use crate::phase_space::symplectic::SymplecticMatrix;
#[allow(unused_imports)]
use num_traits::Float;

/// Condition number of the shifted covariance above which it is treated as
/// singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Probability of the pattern `m` at the outputs of the B-side circuit `W_B`,
/// with the A side traced out:
/// `p(m) = Haf(A_m) / (prod m_i! sqrt(det sigma_Q))`, where
/// `sigma_Q = S_B sigma_B S_B† + I/2`, `A = [[0, I], [I, 0]] (I - sigma_Q^-1)`
/// and `A_m` repeats rows and columns `i` and `i + M` `m_i` times (dropping
/// them when `m_i = 0`).
pub fn marginal_probability(m: &OccupationPattern, xi: f64, t_list: &[f64], w_b: &PassiveUnitary) -> Result<f64> {
    let modes = 2 * t_list.len();
    for found in [m.modes(), w_b.dimension()] {
        if found != modes {
            return Err(Error::ModeMismatch { expected: modes, found });
        }
    }
    let sigma_in = sigma_b(xi, t_list)?;
    let sigma_out = evolve_covariance(&SymplecticMatrix::from_passive(w_b), &sigma_in)?;
    let id = CMatrix::identity(2 * modes, 2 * modes);
    let sigma_q = sigma_out.matrix() + &id * Complex64::new(0.5, 0.0);

    let singular = sigma_q.singular_values();
    let (hi, lo) = singular
        .iter()
        .fold((0.0f64, f64::INFINITY), |(h, l), &s| (h.max(s), l.min(s)));
    let condition = hi / lo;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Singular { condition });
    }
    let lu = sigma_q.lu();
    let det = lu.determinant();
    let inv = lu.try_inverse().ok_or(Error::Singular { condition })?;

    let mut swap = CMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        swap[(i, i + modes)] = Complex64::new(1.0, 0.0);
        swap[(i + modes, i)] = Complex64::new(1.0, 0.0);
    }
    let a = swap * (id - inv);

    let counts = m.counts();
    let mut idx: Vec<usize> = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        idx.extend(core::iter::repeat_n(i, c as usize));
    }
    for (i, &c) in counts.iter().enumerate() {
        idx.extend(core::iter::repeat_n(i + modes, c as usize));
    }
    let a_m = CMatrix::from_fn(idx.len(), idx.len(), |r, c| a[(idx[r], idx[c])]);
    let haf = hafnian(&a_m)?;
    let norm: f64 = counts.iter().map(|&c| factorial(c as usize)).product();
    Ok(haf.re / (norm * det.re.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_shell;

    #[test]
    fn vacuum_without_squeezing() {
        let u = PassiveUnitary::dft(2);
        let p = marginal_probability(&OccupationPattern::vacuum(2), 0.0, &[0.6], &u).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scattershot_limit_is_thermal() {
        let xi: f64 = 0.4;
        let u = PassiveUnitary::dft(4);
        for n in 0..4u32 {
            for m in enumerate_shell(4, n) {
                let p = marginal_probability(&m, xi, &[1.0, 1.0], &u).unwrap();
                let expected = (1.0 - xi * xi).powi(4) * xi.powi(2 * n as i32);
                assert!((p - expected).abs() < 1e-13, "{m}: {p} vs {expected}");
            }
        }
    }

    #[test]
    fn sums_to_at_most_one() {
        let u = PassiveUnitary::dft(2);
        let total: f64 = (0..10u32)
            .flat_map(|n| enumerate_shell(2, n))
            .map(|m| marginal_probability(&m, 0.4, &[0.7], &u).unwrap())
            .sum();
        assert!(total <= 1.0 + 1e-12 && total > 0.99, "{total}");
    }

    #[test]
    fn mode_mismatch() {
        let u = PassiveUnitary::dft(3);
        assert!(marginal_probability(&OccupationPattern::vacuum(2), 0.4, &[0.7], &u).is_err());
    }
}
