use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Result;
use crate::fock::combinatorics::binomial_exact;

/// Photon counts over a set of modes.
///
/// Patterns are ordered lexicographically *descending* in the first differing
/// coordinate, so `(2,0) < (1,1) < (0,2)`. Every enumeration and every
/// materialized distribution in the crate uses this order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OccupationPattern(Vec<u32>);

impl OccupationPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    /// A single photon in `mode`.
    pub fn unit(modes: usize, mode: usize) -> Self {
        let mut counts = vec![0; modes];
        counts[mode] = 1;
        Self(counts)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn counts_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.0
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut counts = Vec::with_capacity(self.0.len() + other.0.len());
        counts.extend_from_slice(&self.0);
        counts.extend_from_slice(&other.0);
        Self(counts)
    }

    /// Splits off the first `at` modes.
    pub fn split(&self, at: usize) -> (Self, Self) {
        (Self(self.0[..at].to_vec()), Self(self.0[at..].to_vec()))
    }

    /// Picks the given modes, in order.
    pub fn select(&self, modes: &[usize]) -> Self {
        Self(modes.iter().map(|&i| self.0[i]).collect())
    }
}

impl From<Vec<u32>> for OccupationPattern {
    fn from(counts: Vec<u32>) -> Self {
        Self(counts)
    }
}

impl<const N: usize> From<[u32; N]> for OccupationPattern {
    fn from(counts: [u32; N]) -> Self {
        Self(counts.to_vec())
    }
}

impl Ord for OccupationPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for OccupationPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OccupationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OccupationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// All patterns of `modes` modes holding exactly `total_photons` photons, in
/// canonical (descending lexicographic) order.
///
/// # Panics
/// If `modes == 0`.
pub fn enumerate_shell(modes: usize, total_photons: u32) -> Vec<OccupationPattern> {
    assert!(modes >= 1, "a shell needs at least one mode");
    let mut out = Vec::new();
    let mut counts = vec![0u32; modes];
    fill_shell(&mut counts, 0, total_photons, &mut out);
    out
}

fn fill_shell(counts: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<OccupationPattern>) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        out.push(OccupationPattern(counts.to_vec()));
        return;
    }
    for c in (0..=remaining).rev() {
        counts[pos] = c;
        fill_shell(counts, pos + 1, remaining - c, out);
    }
    counts[pos] = 0;
}

/// Number of patterns in a shell, `C(N + M - 1, N)`.
pub fn shell_cardinality(modes: usize, total_photons: u32) -> Result<u64> {
    assert!(modes >= 1, "a shell needs at least one mode");
    let n = total_photons as u64;
    binomial_exact(n + modes as u64 - 1, n)
}

/// Patterns whose entries are all at most `cutoff`, grouped by photon number
/// and in canonical order within each shell.
pub fn enumerate_box(modes: usize, cutoff: u32) -> Vec<OccupationPattern> {
    let max_total = cutoff * modes as u32;
    (0..=max_total)
        .flat_map(|n| enumerate_shell(modes, n))
        .filter(|p| p.max_entry() <= cutoff)
        .collect()
}
