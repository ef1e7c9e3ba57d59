//! Phase-space description of Gaussian states and transformations.

mod bloch_messiah;
mod covariance;
mod hafnian;
mod marginal;
mod symplectic;

pub use bloch_messiah::{bloch_messiah, BlochMessiahFactors, RECONSTRUCTION_TOLERANCE};
pub use covariance::{evolve_covariance, sigma_b, CovarianceMatrix};
pub use hafnian::{hafnian, hafnian_reference};
pub use marginal::{marginal_probability, MAX_CONDITION};
pub use symplectic::{random_symplectic, sigma, symplectic_primitive, SymplecticMatrix, SYMPLECTIC_TOLERANCE};
