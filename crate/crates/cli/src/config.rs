//! Experiment configuration: the TOML schema, unitary presets, and the
//! validated form every command works from.
//!
//! Values are resolved in the order command-line flag, then config file,
//! then built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use unfold_core::circuit::{Circuit, Circuit2, GaussianCircuitSpec, GaussianCircuitSpec2};
use unfold_core::fock::OccupationPattern;
use unfold_core::ops::PassiveUnitary;
use unfold_core::sampler::{MisSettings, PriorSpec, DEFAULT_BURN_IN, DEFAULT_MAX_INIT_DRAWS};

use crate::matrix::{read_matrix, MatrixFileError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse config {path}: {source}")]
    Parse { path: String, source: Box<toml::de::Error> },
    #[error("unitary `{name}` ({source_desc}): {source}")]
    MatrixFile {
        name: &'static str,
        source_desc: String,
        source: MatrixFileError,
    },
    #[error("unitary `{name}` ({source_desc}): {source}")]
    Unitary {
        name: &'static str,
        source_desc: String,
        source: unfold_core::Error,
    },
    #[error("invalid circuit: {0}")]
    Circuit(unfold_core::Error),
    #[error("invalid prior: {0}")]
    Prior(String),
    #[error("{0}")]
    Missing(&'static str),
    #[error("invalid {name}: {reason}")]
    Invalid { name: &'static str, reason: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    cutoff: Option<u32>,
    output: Option<PathBuf>,
    circuit: RawCircuit,
    prior: Option<RawPrior>,
    #[serde(default)]
    sampler: RawSampler,
}

/// Either `u_a`/`u_b` (one passive circuit per side) or the four
/// `v_*` unitaries of a split circuit.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    xi: f64,
    t_list: Vec<f64>,
    u_a: Option<String>,
    u_b: Option<String>,
    v_a: Option<String>,
    v_a_prime: Option<String>,
    v_b: Option<String>,
    v_b_prime: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawPrior {
    UniformShell { total: u32 },
    Fixed { pattern: Vec<u32> },
    Gibbs { mean_occupation: f64, mode_cutoff: u32 },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampler {
    burn_in: Option<usize>,
    n_samples: Option<usize>,
    n_chains: Option<usize>,
    master_seed: Option<u64>,
    max_init_draws: Option<usize>,
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub cutoff: Option<u32>,
    pub samples: Option<usize>,
    pub burn_in: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum CircuitConfig {
    Single(GaussianCircuitSpec),
    Split(GaussianCircuitSpec2),
}

impl CircuitConfig {
    pub fn modes(&self) -> usize {
        match self {
            CircuitConfig::Single(s) => s.modes(),
            CircuitConfig::Split(s) => s.modes(),
        }
    }

    pub fn xi(&self) -> f64 {
        match self {
            CircuitConfig::Single(s) => s.xi(),
            CircuitConfig::Split(s) => s.xi(),
        }
    }

    pub fn t_list(&self) -> &[f64] {
        match self {
            CircuitConfig::Single(s) => s.t_list(),
            CircuitConfig::Split(s) => s.t_list(),
        }
    }

    pub fn cutoff(&self) -> u32 {
        match self {
            CircuitConfig::Single(s) => s.cutoff(),
            CircuitConfig::Split(s) => s.cutoff(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CircuitConfig::Single(_) => "single",
            CircuitConfig::Split(_) => "split",
        }
    }

    /// The single-side circuit; a split circuit is flattened.
    pub fn circuit(&self) -> unfold_core::Result<Circuit> {
        match self {
            CircuitConfig::Single(s) => Circuit::new(s.clone()),
            CircuitConfig::Split(s) => Ok(Circuit2::new(s.clone())?.flat().clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub settings: MisSettings,
    pub n_chains: usize,
    pub master_seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub circuit: CircuitConfig,
    pub prior: Option<PriorSpec>,
    pub sampler: SamplerConfig,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides).map_err(|e| match e {
            ConfigError::Parse { source, .. } => ConfigError::Parse {
                path: path.display().to_string(),
                source,
            },
            e => e,
        })
    }

    /// Parses and validates a config; matrix paths resolve against `base`.
    pub fn parse(text: &str, base: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: "<inline>".into(),
            source: Box::new(source),
        })?;
        let cutoff = overrides
            .cutoff
            .or(raw.cutoff)
            .ok_or(ConfigError::Missing("no source cutoff: set `cutoff` or pass --cutoff"))?;
        let circuit = build_circuit(&raw.circuit, cutoff, base)?;
        let prior = raw.prior.map(|p| build_prior(p, circuit.modes())).transpose()?;

        let s = raw.sampler;
        let n_samples = overrides
            .samples
            .or(s.n_samples)
            .unwrap_or(MisSettings::default().n_samples);
        let n_chains = s.n_chains.unwrap_or(1);
        let max_init_draws = s.max_init_draws.unwrap_or(DEFAULT_MAX_INIT_DRAWS);
        for (name, value) in [
            ("sampler.n_samples", n_samples),
            ("sampler.n_chains", n_chains),
            ("sampler.max_init_draws", max_init_draws),
        ] {
            if value == 0 {
                return Err(ConfigError::Invalid {
                    name,
                    reason: "must be at least 1".into(),
                });
            }
        }
        let sampler = SamplerConfig {
            settings: MisSettings {
                burn_in: overrides.burn_in.or(s.burn_in).unwrap_or(DEFAULT_BURN_IN),
                n_samples,
                max_init_draws,
            },
            n_chains,
            master_seed: overrides.seed.or(s.master_seed).unwrap_or(0),
        };
        Ok(Self {
            circuit,
            prior,
            sampler,
            output: overrides.output.clone().or(raw.output.map(|p| base.join(p))),
        })
    }
}

/// JSON description of the circuit parameters (not the unitaries).
pub fn circuit_header(c: &CircuitConfig) -> serde_json::Value {
    serde_json::json!({
        "kind": c.kind(),
        "modes": c.modes(),
        "xi": c.xi(),
        "t_list": c.t_list(),
        "cutoff": c.cutoff(),
    })
}

pub fn prior_value(p: &PriorSpec) -> serde_json::Value {
    match p {
        PriorSpec::UniformShell { total } => serde_json::json!({"kind": "uniform_shell", "total": total}),
        PriorSpec::Fixed { pattern } => serde_json::json!({"kind": "fixed", "pattern": pattern.counts()}),
        PriorSpec::Gibbs {
            mean_occupation,
            mode_cutoff,
        } => serde_json::json!({
            "kind": "gibbs",
            "mean_occupation": mean_occupation,
            "mode_cutoff": mode_cutoff,
        }),
    }
}

fn build_circuit(raw: &RawCircuit, cutoff: u32, base: &Path) -> Result<CircuitConfig, ConfigError> {
    let half = raw.t_list.len();
    let single = [&raw.u_a, &raw.u_b];
    let split = [&raw.v_a, &raw.v_a_prime, &raw.v_b, &raw.v_b_prime];
    let has_single = single.iter().any(|u| u.is_some());
    let has_split = split.iter().any(|u| u.is_some());
    match (has_single, has_split) {
        (true, false) => {
            let [u_a, u_b] = [("u_a", &raw.u_a), ("u_b", &raw.u_b)].map(|(name, v)| {
                let v = v
                    .as_deref()
                    .ok_or(ConfigError::Missing("circuit needs both `u_a` and `u_b`"))?;
                load_unitary(name, v, 2 * half, base)
            });
            let spec = GaussianCircuitSpec::new(raw.xi, raw.t_list.clone(), u_a?, u_b?, cutoff)
                .map_err(ConfigError::Circuit)?;
            Ok(CircuitConfig::Single(spec))
        }
        (false, true) => {
            let names = ["v_a", "v_a_prime", "v_b", "v_b_prime"];
            let mut unitaries = Vec::with_capacity(4);
            for (name, v) in names.into_iter().zip(split) {
                let v = v.as_deref().ok_or(ConfigError::Missing(
                    "split circuit needs `v_a`, `v_a_prime`, `v_b` and `v_b_prime`",
                ))?;
                unitaries.push(load_unitary(name, v, half, base)?);
            }
            let unitaries: [PassiveUnitary; 4] = unitaries.try_into().expect("four unitaries");
            let spec = GaussianCircuitSpec2::new(raw.xi, raw.t_list.clone(), unitaries, cutoff)
                .map_err(ConfigError::Circuit)?;
            Ok(CircuitConfig::Split(spec))
        }
        (true, true) => Err(ConfigError::Missing(
            "circuit mixes `u_a`/`u_b` with the split-circuit `v_*` unitaries",
        )),
        (false, false) => Err(ConfigError::Missing(
            "circuit needs `u_a` and `u_b` (or the four `v_*` unitaries)",
        )),
    }
}

/// Resolves a preset (`identity`, `dft`, `random:<seed>`) or a matrix file
/// path relative to `base`.
pub fn load_unitary(name: &'static str, value: &str, modes: usize, base: &Path) -> Result<PassiveUnitary, ConfigError> {
    let u = match value {
        "identity" => PassiveUnitary::identity(modes),
        "dft" => PassiveUnitary::dft(modes),
        v if v.starts_with("random:") => {
            let seed = v["random:".len()..].parse::<u64>().map_err(|_| ConfigError::Invalid {
                name,
                reason: format!("`{v}` needs an unsigned integer seed"),
            })?;
            PassiveUnitary::haar_random(modes, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        path => {
            let path = base.join(path);
            let source_desc = path.display().to_string();
            let m = read_matrix(&path).map_err(|source| ConfigError::MatrixFile {
                name,
                source_desc: source_desc.clone(),
                source,
            })?;
            PassiveUnitary::new(m).map_err(|source| ConfigError::Unitary {
                name,
                source_desc,
                source,
            })?
        }
    };
    if u.dimension() != modes {
        return Err(ConfigError::Invalid {
            name,
            reason: format!("{} modes, but the circuit needs {modes}", u.dimension()),
        });
    }
    Ok(u)
}

fn build_prior(raw: RawPrior, modes: usize) -> Result<PriorSpec, ConfigError> {
    match raw {
        RawPrior::UniformShell { total } => Ok(PriorSpec::uniform_shell(total)),
        RawPrior::Fixed { pattern } => {
            if pattern.len() != modes {
                return Err(ConfigError::Prior(format!(
                    "fixed pattern has {} modes, the circuit has {modes}",
                    pattern.len()
                )));
            }
            Ok(PriorSpec::fixed(OccupationPattern::new(pattern)))
        }
        RawPrior::Gibbs {
            mean_occupation,
            mode_cutoff,
        } => PriorSpec::gibbs(mean_occupation, mode_cutoff).map_err(|e| ConfigError::Prior(e.to_string())),
    }
}
