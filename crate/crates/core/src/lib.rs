//! Exact simulation kernels for Gaussian circuits reproduced with
//! time-unfolded linear optics: Fock-space elements, phase-space
//! decompositions, circuit assembly and independence sampling.
#![no_std]
// Modules import `num_traits::Float` for f64 math. When std is in the build
// graph its inherent methods shadow the trait and the import goes unused.
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod error;
pub mod fock;
pub mod ops;
pub mod phase_space;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
