use alloc::collections::btree_map::{self, BTreeMap};
use alloc::format;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::OccupationPattern;

/// Amplitudes below this magnitude are not stored unless configured otherwise.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-15;

/// Sparse Fock-space vector with a per-mode photon cutoff.
///
/// Absent patterns read as zero. Apart from the cutoff itself, the drop
/// tolerance is the only place amplitudes are silently discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct FockAmplitudeMap {
    modes: usize,
    cutoff: u32,
    drop_tolerance: f64,
    entries: BTreeMap<OccupationPattern, Complex64>,
}

impl FockAmplitudeMap {
    pub fn new(modes: usize, cutoff: u32) -> Self {
        assert!(modes >= 1, "a Fock state needs at least one mode");
        Self {
            modes,
            cutoff,
            drop_tolerance: DEFAULT_DROP_TOLERANCE,
            entries: BTreeMap::new(),
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        let mut state = Self::new(modes, 0);
        state
            .entries
            .insert(OccupationPattern::vacuum(modes), Complex64::new(1.0, 0.0));
        state
    }

    /// The basis vector `|pattern>`, with the cutoff set to its largest entry.
    pub fn basis(pattern: OccupationPattern) -> Self {
        let mut state = Self::new(pattern.modes(), pattern.max_entry());
        state.entries.insert(pattern, Complex64::new(1.0, 0.0));
        state
    }

    pub fn with_drop_tolerance(mut self, tolerance: f64) -> Self {
        self.drop_tolerance = tolerance;
        self.prune();
        self
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn drop_tolerance(&self) -> f64 {
        self.drop_tolerance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn validate(&self, pattern: &OccupationPattern) -> Result<()> {
        if pattern.modes() != self.modes {
            return Err(Error::ModeMismatch {
                expected: self.modes,
                found: pattern.modes(),
            });
        }
        if pattern.max_entry() > self.cutoff {
            return Err(Error::InvalidPattern(format!(
                "{pattern} exceeds the per-mode cutoff {}",
                self.cutoff
            )));
        }
        Ok(())
    }

    /// Sets the amplitude of `pattern`, replacing any previous value.
    pub fn insert(&mut self, pattern: OccupationPattern, amplitude: Complex64) -> Result<()> {
        self.validate(&pattern)?;
        if amplitude.norm() < self.drop_tolerance {
            self.entries.remove(&pattern);
        } else {
            self.entries.insert(pattern, amplitude);
        }
        Ok(())
    }

    /// Adds to the amplitude of `pattern`. Nothing is dropped until [`prune`].
    ///
    /// [`prune`]: Self::prune
    pub fn accumulate(&mut self, pattern: OccupationPattern, amplitude: Complex64) -> Result<()> {
        self.validate(&pattern)?;
        *self.entries.entry(pattern).or_default() += amplitude;
        Ok(())
    }

    /// Removes every amplitude below the drop tolerance.
    pub fn prune(&mut self) {
        let tol = self.drop_tolerance;
        self.entries.retain(|_, a| a.norm() >= tol);
    }

    pub fn get(&self, pattern: &OccupationPattern) -> Complex64 {
        self.entries.get(pattern).copied().unwrap_or_default()
    }

    /// Entries in canonical pattern order.
    pub fn iter(&self) -> btree_map::Iter<'_, OccupationPattern, Complex64> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }

    /// Builds a map directly from entries whose patterns the caller has
    /// already validated.
    pub(crate) fn from_raw(
        modes: usize,
        cutoff: u32,
        drop_tolerance: f64,
        entries: BTreeMap<OccupationPattern, Complex64>,
    ) -> Self {
        let mut state = Self {
            modes,
            cutoff,
            drop_tolerance,
            entries,
        };
        state.prune();
        state
    }

    /// `<a|b> = sum_p conj(a[p]) b[p]`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch {
                expected: self.modes,
                found: other.modes,
            });
        }
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, a) in small.iter() {
            if let Some(b) = large.entries.get(p) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// `a ⊗ b` on `a.modes + b.modes` modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut entries = BTreeMap::new();
        for (p, a) in self.iter() {
            for (q, b) in other.iter() {
                entries.insert(p.concat(q), a * b);
            }
        }
        Self::from_raw(
            self.modes + other.modes,
            self.cutoff.max(other.cutoff),
            self.drop_tolerance.min(other.drop_tolerance),
            entries,
        )
    }
}
