//! The device circuit, its time-unfolded counterpart, and exact
//! probabilities at desk scale.

mod device;
pub mod spec;
mod spec2;
mod unfolded;

pub use device::{balanced_row, build_ug_mode_matrix, input_state, prefactor_a, source_pattern, Circuit};
pub use spec::{GaussianCircuitSpec, GaussianCircuitSpec2};
pub use spec2::{single_mode_conditional, Circuit2, Half, HalfCircuit};
