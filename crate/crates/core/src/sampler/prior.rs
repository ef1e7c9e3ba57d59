use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_range, Result};
use crate::fock::combinatorics::binomial;
use crate::fock::{enumerate_box, enumerate_shell, OccupationPattern};
#[allow(unused_imports)]
use num_traits::Float;

/// The distribution `p~_0(m)` of input patterns for the time-unfolded
/// circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum PriorSpec {
    /// Uniform over all patterns with `total` photons.
    UniformShell { total: u32 },
    /// All weight on one pattern.
    Fixed { pattern: OccupationPattern },
    /// Independent geometric (thermal) occupations with the given mean,
    /// truncated at `mode_cutoff` photons per mode and renormalized.
    Gibbs { mean_occupation: f64, mode_cutoff: u32 },
}

impl PriorSpec {
    pub fn uniform_shell(total: u32) -> Self {
        Self::UniformShell { total }
    }

    pub fn fixed(pattern: OccupationPattern) -> Self {
        Self::Fixed { pattern }
    }

    pub fn gibbs(mean_occupation: f64, mode_cutoff: u32) -> Result<Self> {
        check_range(
            "mean_occupation",
            mean_occupation,
            mean_occupation > 0.0,
            "must be positive",
        )?;
        Ok(Self::Gibbs {
            mean_occupation,
            mode_cutoff,
        })
    }

    /// `p~_0(m)`.
    pub fn probability(&self, m: &OccupationPattern) -> f64 {
        match self {
            Self::UniformShell { total } => {
                if m.total() == *total {
                    let n = *total as usize;
                    1.0 / binomial(n + m.modes() - 1, n)
                } else {
                    0.0
                }
            }
            Self::Fixed { pattern } => {
                if m == pattern {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Gibbs {
                mean_occupation,
                mode_cutoff,
            } => {
                if m.max_entry() > *mode_cutoff {
                    return 0.0;
                }
                let q = mean_occupation / (1.0 + mean_occupation);
                let z = (1.0 - q.powi(*mode_cutoff as i32 + 1)) / (1.0 - q);
                m.counts().iter().map(|&n| q.powi(n as i32) / z).product()
            }
        }
    }

    /// Every pattern of `modes` modes with nonzero prior probability.
    pub fn support(&self, modes: usize) -> Vec<OccupationPattern> {
        match self {
            Self::UniformShell { total } => enumerate_shell(modes, *total),
            Self::Fixed { pattern } if pattern.modes() == modes => vec![pattern.clone()],
            Self::Fixed { .. } => Vec::new(),
            Self::Gibbs { mode_cutoff, .. } => enumerate_box(modes, *mode_cutoff),
        }
    }
}

/// [`PriorSpec::probability`] as a free function.
pub fn prior_probability(prior: &PriorSpec, m: &OccupationPattern) -> f64 {
    prior.probability(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_shell() {
        let prior = PriorSpec::uniform_shell(2);
        assert!((prior.probability(&[1, 1].into()) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(prior.probability(&[1, 0].into()), 0.0);
        let total: f64 = prior.support(4).iter().map(|m| prior.probability(m)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fixed() {
        let prior = PriorSpec::fixed([1, 0].into());
        assert_eq!(prior.probability(&[1, 0].into()), 1.0);
        assert_eq!(prior.probability(&[0, 1].into()), 0.0);
        assert!(prior.support(3).is_empty());
    }

    #[test]
    fn gibbs_normalizes_over_the_box() {
        let prior = PriorSpec::gibbs(0.7, 5).unwrap();
        let total: f64 = prior.support(3).iter().map(|m| prior.probability(m)).sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert_eq!(prior.probability(&[6, 0, 0].into()), 0.0);
        assert!(PriorSpec::gibbs(0.0, 5).is_err());
    }

    #[test]
    fn gibbs_is_thermal_per_mode() {
        // Ratio of successive occupations is nbar / (1 + nbar).
        let prior = PriorSpec::gibbs(2.0, 30).unwrap();
        let r = prior.probability(&[3, 1].into()) / prior.probability(&[2, 1].into());
        assert!((r - 2.0 / 3.0).abs() < 1e-14);
    }
}
