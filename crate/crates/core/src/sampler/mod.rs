//! Exact sampling of device outcomes and the independence sampler that
//! turns them into samples of the simulated Gaussian circuit.

mod distribution;
mod mis;
mod prior;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use distribution::{
    draw_device_sample, exact_device_distribution, target_distribution, total_variation_distance, Outcome,
    OutcomeDistribution, TargetDistribution, DEFAULT_OUTCOME_LIMIT, NORMALIZATION_TOLERANCE,
};
pub use mis::{
    mis_accept_probability, run_mis_chain, ChainRun, MisChainState, MisSettings, ProposalSource, SampleRecord,
    DEFAULT_BURN_IN, DEFAULT_MAX_INIT_DRAWS,
};
pub use prior::{prior_probability, PriorSpec};

/// The generator for chain `chain` under `master_seed`: ChaCha8 seeded from
/// the master seed, on its own stream.
pub fn chain_rng(master_seed: u64, chain: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(chain);
    rng
}
