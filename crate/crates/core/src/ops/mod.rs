//! Fock-basis elements of beam splitters, interferometers and squeezers.

mod apply;
mod elements;
pub mod oracle;
mod param;
mod passive;
mod permanent;
mod tms;

pub use apply::apply_passive;
pub(crate) use elements::matrix_element;
pub use elements::{
    bs_element, interferometer_element, pairs_below, sandwich_element, sector_matrix, ss_element, ss_matrix,
    ts_element_dual, two_mode_element, Pair, SANDWICH_CHECK_SIZE, SANDWICH_FACTORIZATION_TOLERANCE,
};
pub use oracle::ts_element_oracle;
pub(crate) use param::{check_transmissivity, check_xi};
pub use param::{gain_from_transmissivity, r_from_gain, r_from_transmissivity, r_from_xi, xi_from_r, SqueezerParam};
pub(crate) use passive::{max_abs, unitarity_deviation};
pub use passive::{CMatrix, PassiveUnitary, UNITARITY_TOLERANCE};
pub use permanent::{permanent, permanent_repeated};
pub use tms::tms_state;
