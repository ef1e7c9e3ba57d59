//! Numerical identity checks run by the `verify` command. Each check
//! compares an implementation path against an independent one (or a closed
//! form) at fixed reference parameters.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, GaussianCircuitSpec};
use crate::error::{Error, Result};
use crate::fock::enumerate_shell;
use crate::ops::oracle::{SingleModeSqueezerOracle, TwoModeSqueezerOracle};
use crate::ops::{pairs_below, r_from_transmissivity, sandwich_element, ts_element_dual, CMatrix, PassiveUnitary};
use crate::phase_space::{bloch_messiah, hafnian, hafnian_reference, marginal_probability, random_symplectic};
use crate::sampler::{
    chain_rng, exact_device_distribution, run_mis_chain, MisSettings, PriorSpec, DEFAULT_OUTCOME_LIMIT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Sandwich,
    Factorization,
    BlochMessiah,
    Hafnian,
    Marginal,
    AcceptanceBound,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Duality,
        Suite::Sandwich,
        Suite::Factorization,
        Suite::BlochMessiah,
        Suite::Hafnian,
        Suite::Marginal,
        Suite::AcceptanceBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Sandwich => "sandwich",
            Suite::Factorization => "factorization",
            Suite::BlochMessiah => "bloch-messiah",
            Suite::Hafnian => "hafnian",
            Suite::Marginal => "marginal",
            Suite::AcceptanceBound => "acceptance-bound",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidPattern(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// An error that must not exceed the bound.
    AtMost,
    /// A rate that must reach the bound.
    AtLeast,
}

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub comparison: Comparison,
}

impl Check {
    fn at_most(suite: Suite, name: String, value: f64, bound: f64) -> Self {
        Self {
            suite,
            name,
            value,
            bound,
            comparison: Comparison::AtMost,
        }
    }

    fn at_least(suite: Suite, name: String, value: f64, bound: f64) -> Self {
        Self {
            suite,
            name,
            value,
            bound,
            comparison: Comparison::AtLeast,
        }
    }

    pub fn passed(&self) -> bool {
        self.value.is_finite()
            && match self.comparison {
                Comparison::AtMost => self.value <= self.bound,
                Comparison::AtLeast => self.value >= self.bound,
            }
    }
}

/// Oracle truncation used for the duality rows; the exponential's matrix
/// elements are converged to machine precision there for `t >= 0.3`.
pub const DUALITY_ORACLE_CUTOFF: u32 = 60;

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Duality => duality(),
        Suite::Sandwich => sandwich(),
        Suite::Factorization => factorization(),
        Suite::BlochMessiah => bloch_messiah_round_trip(),
        Suite::Hafnian => hafnians(),
        Suite::Marginal => marginal(),
        Suite::AcceptanceBound => acceptance_bound(),
    }
}

fn duality() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for t in [0.3, 0.5, 0.9] {
        let oracle = TwoModeSqueezerOracle::new(r_from_transmissivity(t), DUALITY_ORACLE_CUTOFF)?;
        let mut worst: f64 = 0.0;
        for o in pairs_below(6) {
            for i in pairs_below(6) {
                worst = worst.max((ts_element_dual(t, o, i)? - oracle.element(o, i)?).abs());
            }
        }
        out.push(Check::at_most(
            Suite::Duality,
            format!("TS(1/t) dual vs exp generator, t={t}"),
            worst,
            1e-10,
        ));
    }
    Ok(out)
}

fn sandwich() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for t in [0.5, 0.8] {
        let r = r_from_transmissivity(t);
        let plus = SingleModeSqueezerOracle::new(r, 100)?;
        let minus = SingleModeSqueezerOracle::new(-r, 100)?;
        let mut worst: f64 = 0.0;
        for o in pairs_below(5) {
            for i in pairs_below(5) {
                let product = plus.element(o[0], i[0])? * minus.element(o[1], i[1])?;
                worst = worst.max((sandwich_element(t, o, i)? - product).abs());
            }
        }
        out.push(Check::at_most(
            Suite::Sandwich,
            format!("BS TS BS^T vs S(r) x S(-r), t={t}"),
            worst,
            1e-8,
        ));
    }
    Ok(out)
}

fn random_circuit(modes: usize, xi: f64, cutoff: u32, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_list = (0..modes / 2).map(|_| rng.random_range(0.2..0.95)).collect();
    let u_a = PassiveUnitary::haar_random(modes, &mut rng);
    let u_b = PassiveUnitary::haar_random(modes, &mut rng);
    Circuit::new(GaussianCircuitSpec::new(xi, t_list, u_a, u_b, cutoff)?)
}

/// `max |p(k, m) - A p~(k|m)|` over `N_A + N_B <= max_total`.
pub fn factorization_residual(circuit: &Circuit, max_total: u32) -> Result<f64> {
    let modes = circuit.modes();
    let mut worst: f64 = 0.0;
    for n_a in 0..=max_total {
        for n_b in 0..=max_total - n_a {
            let a = circuit.prefactor_a(n_a, n_b);
            for k in enumerate_shell(modes, n_a) {
                for m in enumerate_shell(modes, n_b) {
                    let joint = circuit.joint_probability(&k, &m)?;
                    let cond = circuit.conditional_probability_tilde(&k, &m)?;
                    worst = worst.max((joint - a * cond).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn factorization() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (modes, seed) in [(2, 11), (4, 12)] {
        let c = random_circuit(modes, 0.4, 4, seed)?;
        out.push(Check::at_most(
            Suite::Factorization,
            format!("p(k,m) vs A p~(k|m), M={modes}, N_A+N_B<=4"),
            factorization_residual(&c, 4)?,
            1e-9,
        ));
    }
    Ok(out)
}

fn bloch_messiah_round_trip() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut residual: f64 = 0.0;
    let mut passivity: f64 = 0.0;
    for i in 0..100 {
        let s = random_symplectic(2 + i % 3, 12, &mut rng);
        let f = bloch_messiah(&s)?;
        residual = residual.max(f.residual);
        passivity = passivity
            .max(f.s1.passivity_deviation())
            .max(f.s2.passivity_deviation());
    }
    Ok(vec![
        Check::at_most(
            Suite::BlochMessiah,
            "reconstruction, 100 random symplectics, M in {2,3,4}".into(),
            residual,
            1e-10,
        ),
        Check::at_most(Suite::BlochMessiah, "passivity of S1, S2".into(), passivity, 1e-10),
    ])
}

fn hafnians() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut out = Vec::new();
    for n in [2usize, 4, 6, 8] {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let mut x = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    x[(i, j)] = z;
                    x[(j, i)] = z;
                }
            }
            worst = worst.max((hafnian(&x)? - hafnian_reference(&x)?).norm());
        }
        out.push(Check::at_most(
            Suite::Hafnian,
            format!("subset recursion vs matchings, 2K={n}"),
            worst,
            1e-12,
        ));
    }
    for (n, expected) in [(4usize, 3.0), (6, 15.0), (8, 105.0)] {
        let ones = CMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
        out.push(Check::at_most(
            Suite::Hafnian,
            format!("all-ones 2K={n} is (2K-1)!!"),
            (hafnian(&ones)? - expected).norm(),
            0.0,
        ));
    }
    Ok(out)
}

fn marginal() -> Result<Vec<Check>> {
    let xi: f64 = 0.4;
    // Source truncation 10 leaves 1 - (1 - xi^22)^2 < 1e-8 of the mass.
    let spec = GaussianCircuitSpec::new(xi, vec![0.7], PassiveUnitary::dft(2), PassiveUnitary::identity(2), 10)?;
    let circuit = Circuit::new(spec)?;
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let mut worst: f64 = 0.0;
    for n_b in 0..=3 {
        for m in enumerate_shell(2, n_b) {
            let summed: f64 = device.entries().iter().filter(|(o, _)| o.m == m).map(|(_, p)| p).sum();
            let haf = marginal_probability(&m, xi, &[0.7], circuit.w_b())?;
            worst = worst.max((haf - summed).abs());
        }
    }
    let mut thermal: f64 = 0.0;
    for n in 0..=3 {
        for m in enumerate_shell(2, n) {
            let p = marginal_probability(&m, xi, &[1.0], circuit.w_b())?;
            thermal = thermal.max((p - (1.0 - xi * xi).powi(2) * xi.powi(2 * n as i32)).abs());
        }
    }
    Ok(vec![
        Check::at_most(
            Suite::Marginal,
            "hafnian marginal vs sum_k p(k,m), M=2, N_B<=3".into(),
            worst,
            1e-6,
        ),
        Check::at_most(Suite::Marginal, "t=1 thermal marginal".into(), thermal, 1e-14),
    ])
}

/// Proposals within the shell needed before an acceptance rate is reported.
pub const ACCEPTANCE_PROPOSALS: u64 = 10_000;

/// `0.5 - 3 sqrt(0.25 / n)`.
pub fn acceptance_threshold(proposals: u64) -> f64 {
    0.5 - 3.0 * (0.25 / proposals as f64).sqrt()
}

/// The in-shell acceptance of a chain whose current state follows the target,
/// and the mean of `min(1, xi^Delta_A)` over pairs of independent device
/// draws in the shell. Returns `(chain rate, chain proposals, pair rate)`.
pub fn acceptance_rates(xi: f64, t: f64, shell: u32, seed: u64) -> Result<(f64, u64, f64)> {
    let spec = GaussianCircuitSpec::new(xi, vec![t], PassiveUnitary::dft(2), PassiveUnitary::identity(2), 8)?;
    let circuit = Circuit::new(spec)?;
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let prior = PriorSpec::uniform_shell(shell);

    let mut rng = chain_rng(seed, 0);
    let mut steps = 20_000;
    let run = loop {
        let settings = MisSettings {
            burn_in: 1000,
            n_samples: steps,
            ..MisSettings::default()
        };
        let run = run_mis_chain(&device, &prior, xi, &settings, 0, &mut rng)?;
        if run.state.in_support_steps() >= ACCEPTANCE_PROPOSALS {
            break run;
        }
        steps *= 4;
    };

    let mut rng = chain_rng(seed, 1);
    let mut pairs = 0u64;
    let mut total = 0.0;
    let mut pending: Option<u32> = None;
    while pairs < ACCEPTANCE_PROPOSALS {
        let o = device.draw(&mut rng);
        if o.n_b() != shell {
            continue;
        }
        match pending.take() {
            None => pending = Some(o.n_a()),
            Some(current) => {
                total += xi.powi(current as i32 - o.n_a() as i32).min(1.0);
                pairs += 1;
            }
        }
    }
    Ok((
        run.state.in_support_acceptance_rate(),
        run.state.in_support_steps(),
        total / pairs as f64,
    ))
}

fn acceptance_bound() -> Result<Vec<Check>> {
    let (chain, proposals, pairs) = acceptance_rates(0.4, 0.7, 2, 5)?;
    Ok(vec![
        Check::at_least(
            Suite::AcceptanceBound,
            format!("MIS chain in-shell acceptance, xi=0.4 t=0.7 N=2 ({proposals} proposals)"),
            chain,
            acceptance_threshold(proposals),
        ),
        Check::at_least(
            Suite::AcceptanceBound,
            format!("independent device pairs in shell, xi=0.4 t=0.7 N=2 ({ACCEPTANCE_PROPOSALS} pairs)"),
            pairs,
            acceptance_threshold(ACCEPTANCE_PROPOSALS),
        ),
    ])
}
