//! Occupation patterns and sparse Fock-space vectors.

pub mod combinatorics;
mod pattern;
mod state;

pub use pattern::{enumerate_box, enumerate_shell, shell_cardinality, OccupationPattern};
pub use state::{FockAmplitudeMap, DEFAULT_DROP_TOLERANCE};
