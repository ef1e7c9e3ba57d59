use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{FockAmplitudeMap, OccupationPattern};
use crate::ops::param::check_xi;
#[allow(unused_imports)]
use num_traits::Float;

/// Two-mode squeezed vacuum `sqrt(1 - xi^2) sum_n xi^n |n, n>`, truncated at
/// `n <= cutoff`. The norm squared is `1 - xi^(2 (cutoff + 1))`.
pub fn tms_state(xi: f64, cutoff: u32) -> Result<FockAmplitudeMap> {
    check_xi(xi)?;
    let mut state = FockAmplitudeMap::new(2, cutoff);
    let norm = (1.0 - xi * xi).sqrt();
    let mut amp = norm;
    for n in 0..=cutoff {
        state.insert(OccupationPattern::new(alloc::vec![n, n]), Complex64::new(amp, 0.0))?;
        amp *= xi;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = tms_state(0.0, 5).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&[0, 0].into()).re, 1.0);

        let s = tms_state(0.5, 8).unwrap();
        let a = s.get(&[2, 2].into()).re;
        assert!((a - 0.75f64.sqrt() * 0.25).abs() < 1e-15);
        assert!((s.norm_sqr() - (1.0 - 0.5f64.powi(18))).abs() < 1e-15);

        assert!(tms_state(1.0, 3).is_err());
        assert!(tms_state(-0.1, 3).is_err());
    }

    #[test]
    fn amplitudes_decrease_geometrically() {
        for xi in [0.1, 0.5, 0.95] {
            let s = tms_state(xi, 12).unwrap();
            for n in 0..12u32 {
                let a = s.get(&[n, n].into()).re;
                let b = s.get(&[n + 1, n + 1].into()).re;
                assert!(a > 0.0 && b > 0.0 && b < a);
                assert!((b / a - xi).abs() < 1e-12);
            }
        }
    }
}
