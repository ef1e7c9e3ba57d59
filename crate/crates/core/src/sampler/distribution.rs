use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::Rng;

use crate::circuit::spec::deinterleave;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fock::{shell_cardinality, OccupationPattern};
use crate::ops::apply_passive;
use crate::sampler::prior::PriorSpec;
#[allow(unused_imports)]
use num_traits::Float;

/// Default cap on the number of outcomes a materialized distribution may hold.
pub const DEFAULT_OUTCOME_LIMIT: usize = 1_000_000;

/// Allowed gap between `mass + tail` and 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// A detection event: `k` on the A side, `m` on the B side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub k: OccupationPattern,
    pub m: OccupationPattern,
}

impl Outcome {
    pub fn new(k: OccupationPattern, m: OccupationPattern) -> Self {
        Self { k, m }
    }

    pub fn n_a(&self) -> u32 {
        self.k.total()
    }

    pub fn n_b(&self) -> u32 {
        self.m.total()
    }
}

/// Ordered by `N_A + N_B`, then `k`, then `m`.
impl Ord for Outcome {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n_a() + self.n_b())
            .cmp(&(other.n_a() + other.n_b()))
            .then_with(|| self.k.cmp(&other.k))
            .then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for Outcome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} m={}", self.k, self.m)
    }
}

/// A finite table of outcome probabilities plus the mass left out of it.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    entries: Vec<(Outcome, f64)>,
    cumulative: Vec<f64>,
    tail: f64,
}

impl OutcomeDistribution {
    /// Requires nonnegative probabilities, distinct outcomes, and
    /// `sum + tail = 1` within [`NORMALIZATION_TOLERANCE`].
    pub fn new(mut entries: Vec<(Outcome, f64)>, tail: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (_, p) in &entries {
            if !(p.is_finite() && *p >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "probability",
                    value: *p,
                    reason: "must be finite and nonnegative",
                });
            }
        }
        if !(tail.is_finite() && tail >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "tail",
                value: tail,
                reason: "must be finite and nonnegative",
            });
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPattern(alloc::format!("duplicate outcome {}", w[0].0)));
        }
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for (_, p) in &entries {
            acc += p;
            cumulative.push(acc);
        }
        let residual = (acc + tail - 1.0).abs();
        if residual > NORMALIZATION_TOLERANCE {
            return Err(Error::Consistency {
                check: "probabilities plus tail sum to one",
                residual,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        Ok(Self {
            entries,
            cumulative,
            tail,
        })
    }

    /// Rescales `entries` to unit mass. Returns the distribution and the
    /// mass before rescaling.
    pub fn normalized(entries: Vec<(Outcome, f64)>) -> Result<(Self, f64)> {
        let mass: f64 = entries.iter().map(|(_, p)| p).sum();
        if !(mass > 0.0) {
            return Err(Error::EmptyDistribution);
        }
        let scaled = entries.into_iter().map(|(o, p)| (o, p / mass)).collect();
        Ok((Self::new(scaled, 0.0)?, mass))
    }

    pub fn entries(&self) -> &[(Outcome, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability not represented by any entry.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Sum of the tabulated probabilities.
    pub fn mass(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    pub fn probability(&self, outcome: &Outcome) -> f64 {
        self.entries
            .binary_search_by(|(o, _)| o.cmp(outcome))
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// Inverse-CDF draw from the tabulated entries, conditioned on missing
    /// the tail.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &Outcome {
        let u = rng.random::<f64>() * self.mass();
        let i = self.cumulative.partition_point(|&c| c <= u);
        &self.entries[i.min(self.entries.len() - 1)].0
    }
}

/// [`OutcomeDistribution::draw`], cloning the outcome.
pub fn draw_device_sample<R: Rng + ?Sized>(dist: &OutcomeDistribution, rng: &mut R) -> Outcome {
    dist.draw(rng).clone()
}

/// Number of patterns the device can emit with sources truncated at
/// `cutoff`: every shell of `2N` photons on `2M` modes for `N <= M cutoff`.
fn reachable_outcomes(modes: usize, cutoff: u32) -> Option<u64> {
    (0..=modes as u32 * cutoff).try_fold(0u64, |acc, n| {
        acc.checked_add(shell_cardinality(2 * modes, 2 * n).ok()?)
    })
}

/// The full output distribution `p(k, m)` of `U_G`, obtained by evolving the
/// truncated source state. The tail is the source mass above the cutoff,
/// `1 - (1 - xi^(2(cutoff+1)))^M`.
pub fn exact_device_distribution(circuit: &Circuit, limit: usize) -> Result<OutcomeDistribution> {
    let modes = circuit.modes();
    let cutoff = circuit.spec().cutoff();
    let reachable = reachable_outcomes(modes, cutoff).unwrap_or(u64::MAX);
    if reachable > limit as u64 {
        return Err(Error::TooLarge {
            what: "device outcome set",
            size: usize::try_from(reachable).unwrap_or(usize::MAX),
            limit,
        });
    }
    let output = apply_passive(circuit.ug(), &circuit.input_state()?)?;
    let entries = output
        .iter()
        .map(|(pattern, amp)| {
            let (k, m) = deinterleave(pattern);
            (Outcome::new(k, m), amp.norm_sqr())
        })
        .filter(|(_, p)| *p > 0.0)
        .collect();
    let xi2 = circuit.spec().xi().powi(2);
    let tail = 1.0 - (1.0 - xi2.powi(cutoff as i32 + 1)).powi(modes as i32);
    OutcomeDistribution::new(entries, tail)
}

/// The exact MIS target `p~(k, m) = p~_0(m) p~(k|m)`.
#[derive(Clone, Debug)]
pub struct TargetDistribution {
    pub distribution: OutcomeDistribution,
    /// `1 - (mass before normalization)`: the target mass outside the
    /// truncated outcome set.
    pub residual: f64,
}

/// Tabulates the target over the outcomes the device can produce: `m` in the
/// prior's support, `N_A` of the same parity as `N_B`, and
/// `N_A + N_B <= 2 M cutoff`. With `xi = 0` the device only emits vacuum and
/// the target is restricted accordingly; an empty restriction is an error.
pub fn target_distribution(circuit: &Circuit, prior: &PriorSpec) -> Result<TargetDistribution> {
    let modes = circuit.modes();
    let max_detected = 2 * modes as u32 * circuit.spec().cutoff();
    let device_is_dark = circuit.spec().xi() == 0.0;
    let mut entries = Vec::new();
    for m in prior.support(modes) {
        let p0 = prior.probability(&m);
        let n_b = m.total();
        if p0 == 0.0 || n_b > max_detected || (device_is_dark && n_b > 0) {
            continue;
        }
        let top = if device_is_dark { 0 } else { max_detected - n_b };
        let output = circuit.unfolded_output(&m, (n_b % 2..=top).step_by(2))?;
        for (k, amp) in output.iter() {
            let p = p0 * amp.norm_sqr();
            if p > 0.0 {
                entries.push((Outcome::new(k.clone(), m.clone()), p));
            }
        }
    }
    let (distribution, mass) = OutcomeDistribution::normalized(entries)?;
    Ok(TargetDistribution {
        distribution,
        residual: 1.0 - mass,
    })
}

/// `1/2 sum |freq - prob|` over the union of supports. The exact tail is not
/// attributed to any outcome and is left out.
pub fn total_variation_distance<'a>(
    samples: impl IntoIterator<Item = &'a Outcome>,
    exact: &OutcomeDistribution,
) -> f64 {
    let mut counts: BTreeMap<&Outcome, usize> = BTreeMap::new();
    let mut n = 0usize;
    for s in samples {
        *counts.entry(s).or_default() += 1;
        n += 1;
    }
    let n = n.max(1) as f64;
    let mut acc = 0.0;
    for (o, p) in exact.entries() {
        let f = counts.remove(o).unwrap_or(0) as f64 / n;
        acc += (f - p).abs();
    }
    acc += counts.values().map(|&c| c as f64 / n).sum::<f64>();
    0.5 * acc
}
