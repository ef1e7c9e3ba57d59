//! Metropolised independence sampling with device outcomes as proposals.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ops::check_xi;
use crate::sampler::distribution::{Outcome, OutcomeDistribution};
use crate::sampler::prior::PriorSpec;
#[allow(unused_imports)]
use num_traits::Float;

pub const DEFAULT_BURN_IN: usize = 1000;
pub const DEFAULT_MAX_INIT_DRAWS: usize = 100_000;

/// Anything that yields independent device outcomes.
pub trait ProposalSource {
    fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome;
}

impl ProposalSource for OutcomeDistribution {
    fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        self.draw(rng).clone()
    }
}

/// `T = min(1, xi^(Delta_A + Delta_B) p~_0(m') / p~_0(m))` with
/// `Delta = sum(current) - sum(proposal)`.
pub fn mis_accept_probability(xi: f64, prior: &PriorSpec, current: &Outcome, proposal: &Outcome) -> Result<f64> {
    let p_cur = prior.probability(&current.m);
    if p_cur == 0.0 {
        return Err(Error::ZeroPriorState);
    }
    let p_new = prior.probability(&proposal.m);
    if p_new == 0.0 {
        return Ok(0.0);
    }
    let delta = (current.n_a() + current.n_b()) as i32 - (proposal.n_a() + proposal.n_b()) as i32;
    Ok((xi.powi(delta) * p_new / p_cur).min(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MisSettings {
    pub burn_in: usize,
    pub n_samples: usize,
    /// Device draws allowed while looking for a starting state in the prior's support.
    pub max_init_draws: usize,
}

impl Default for MisSettings {
    fn default() -> Self {
        Self {
            burn_in: DEFAULT_BURN_IN,
            n_samples: 10_000,
            max_init_draws: DEFAULT_MAX_INIT_DRAWS,
        }
    }
}

/// One retained chain step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub chain: u64,
    pub step: u64,
    pub outcome: Outcome,
    pub accepted: bool,
}

/// The state of one chain. `current` always has nonzero prior probability.
#[derive(Clone, Debug, PartialEq)]
pub struct MisChainState {
    current: Outcome,
    steps: u64,
    accepted: u64,
    in_support_steps: u64,
    stream: u64,
}

impl MisChainState {
    pub fn new(current: Outcome, prior: &PriorSpec, stream: u64) -> Result<Self> {
        if prior.probability(&current.m) == 0.0 {
            return Err(Error::ZeroPriorState);
        }
        Ok(Self {
            current,
            steps: 0,
            accepted: 0,
            in_support_steps: 0,
            stream,
        })
    }

    pub fn current(&self) -> &Outcome {
        &self.current
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Steps whose proposal had nonzero prior probability.
    pub fn in_support_steps(&self) -> u64 {
        self.in_support_steps
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Accepted fraction of all proposals.
    pub fn acceptance_rate(&self) -> f64 {
        ratio(self.accepted, self.steps)
    }

    /// Accepted fraction of proposals inside the prior's support. Proposals
    /// outside it are always rejected, so this is the rate the shell-prior
    /// bound speaks about.
    pub fn in_support_acceptance_rate(&self) -> f64 {
        ratio(self.accepted, self.in_support_steps)
    }

    /// One Metropolis step. Returns whether `proposal` was accepted.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        proposal: Outcome,
        xi: f64,
        prior: &PriorSpec,
        rng: &mut R,
    ) -> Result<bool> {
        let t = mis_accept_probability(xi, prior, &self.current, &proposal)?;
        self.steps += 1;
        if prior.probability(&proposal.m) > 0.0 {
            self.in_support_steps += 1;
        }
        let accept = t >= 1.0 || rng.random::<f64>() < t;
        if accept {
            self.accepted += 1;
            self.current = proposal;
        }
        Ok(accept)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug)]
pub struct ChainRun {
    pub records: Vec<SampleRecord>,
    pub state: MisChainState,
    /// Device draws spent finding the starting state.
    pub init_draws: usize,
}

impl ChainRun {
    pub fn samples(&self) -> impl Iterator<Item = &Outcome> {
        self.records.iter().map(|r| &r.outcome)
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.state.acceptance_rate()
    }
}

/// Runs one chain: start at the first proposal in the prior's support, take
/// `burn_in` unrecorded steps, then record `n_samples` steps. A rejected step
/// records the current state again.
pub fn run_mis_chain<S: ProposalSource, R: Rng + ?Sized>(
    device: &S,
    prior: &PriorSpec,
    xi: f64,
    settings: &MisSettings,
    chain: u64,
    rng: &mut R,
) -> Result<ChainRun> {
    check_xi(xi)?;
    let mut init_draws = 0;
    let start = loop {
        if init_draws == settings.max_init_draws {
            return Err(Error::InitializationFailed { draws: init_draws });
        }
        init_draws += 1;
        let o = device.propose(rng);
        if prior.probability(&o.m) > 0.0 {
            break o;
        }
    };
    let mut state = MisChainState::new(start, prior, chain)?;
    let mut records = Vec::with_capacity(settings.n_samples);
    for i in 0..settings.burn_in + settings.n_samples {
        let proposal = device.propose(rng);
        let accepted = state.step(proposal, xi, prior, rng)?;
        if i >= settings.burn_in {
            records.push(SampleRecord {
                chain,
                step: i as u64 + 1,
                outcome: state.current().clone(),
                accepted,
            });
        }
    }
    Ok(ChainRun {
        records,
        state,
        init_draws,
    })
}
