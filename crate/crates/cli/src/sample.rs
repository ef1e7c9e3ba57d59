use std::thread;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use serde_json::json;
use unfold_core::sampler::{
    chain_rng, exact_device_distribution, run_mis_chain, target_distribution, total_variation_distance, ChainRun,
    OutcomeDistribution, PriorSpec, DEFAULT_OUTCOME_LIMIT,
};

use crate::config::{circuit_header, prior_value, ConfigError, ExperimentConfig, SamplerConfig};
use crate::output::{push_json_line, sci, table, Bundle};

#[derive(Serialize)]
struct Record<'a> {
    chain: u64,
    step: u64,
    k: &'a [u32],
    m: &'a [u32],
    accepted: bool,
}

#[derive(Serialize)]
struct ChainSummary {
    chain: u64,
    master_seed: u64,
    stream: u64,
    init_draws: usize,
    steps: u64,
    accepted: u64,
    acceptance_rate: f64,
    in_support_steps: u64,
    in_support_acceptance_rate: f64,
    tvd: Option<f64>,
}

/// Runs every chain on its own RNG stream. Chains are spread over at most
/// `n_chains` worker threads and returned in chain order, so the output does
/// not depend on scheduling.
fn run_chains(
    device: &OutcomeDistribution,
    prior: &PriorSpec,
    xi: f64,
    sampler: &SamplerConfig,
) -> Result<Vec<ChainRun>> {
    let n = sampler.n_chains;
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(n);
    let mut runs: Vec<(usize, unfold_core::Result<ChainRun>)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|c| {
                            let mut rng = chain_rng(sampler.master_seed, c as u64);
                            (
                                c,
                                run_mis_chain(device, prior, xi, &sampler.settings, c as u64, &mut rng),
                            )
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("chain worker panicked"))
            .collect()
    });
    runs.sort_by_key(|(c, _)| *c);
    runs.into_iter()
        .map(|(c, r)| r.with_context(|| format!("chain {c}")))
        .collect()
}

/// MIS sample stream and diagnostics. Files: `samples.jsonl`,
/// `summary.txt`, `summary.json`.
pub fn sample(cfg: &ExperimentConfig) -> Result<Bundle> {
    let prior = cfg
        .prior
        .as_ref()
        .ok_or(ConfigError::Missing("sampling needs a [prior] section"))?;
    let circuit = cfg.circuit.circuit()?;
    let xi = cfg.circuit.xi();
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let runs = run_chains(&device, prior, xi, &cfg.sampler)?;
    // The exact target is only a diagnostic: when it cannot be tabulated the
    // summary says why instead of failing the run.
    let target = target_distribution(&circuit, prior).map_err(|e| anyhow!(e));

    let s = &cfg.sampler;
    let mut stream = Vec::new();
    push_json_line(
        &mut stream,
        &json!({
            "format": "unfold-samples",
            "version": 1,
            "circuit": circuit_header(&cfg.circuit),
            "prior": prior_value(prior),
            "master_seed": s.master_seed,
            "n_chains": s.n_chains,
            "burn_in": s.settings.burn_in,
            "n_samples": s.settings.n_samples,
            "rng": "chacha8, stream = chain",
        }),
    )?;
    for run in &runs {
        for r in &run.records {
            push_json_line(
                &mut stream,
                &Record {
                    chain: r.chain,
                    step: r.step,
                    k: r.outcome.k.counts(),
                    m: r.outcome.m.counts(),
                    accepted: r.accepted,
                },
            )?;
        }
    }

    let tvd_of = |samples: Vec<_>| {
        target
            .as_ref()
            .ok()
            .map(|t| total_variation_distance(samples, &t.distribution))
    };
    let chains: Vec<ChainSummary> = runs
        .iter()
        .map(|run| ChainSummary {
            chain: run.state.stream(),
            master_seed: s.master_seed,
            stream: run.state.stream(),
            init_draws: run.init_draws,
            steps: run.state.steps(),
            accepted: run.state.accepted(),
            acceptance_rate: run.state.acceptance_rate(),
            in_support_steps: run.state.in_support_steps(),
            in_support_acceptance_rate: run.state.in_support_acceptance_rate(),
            tvd: tvd_of(run.samples().collect()),
        })
        .collect();
    let steps: u64 = chains.iter().map(|c| c.steps).sum();
    let accepted: u64 = chains.iter().map(|c| c.accepted).sum();
    let in_support: u64 = chains.iter().map(|c| c.in_support_steps).sum();
    let in_support_accepted: f64 = chains
        .iter()
        .map(|c| (c.in_support_acceptance_rate * c.in_support_steps as f64).round())
        .sum();
    let ratio = |a: f64, b: u64| if b == 0 { 0.0 } else { a / b as f64 };
    let acceptance = ratio(accepted as f64, steps);
    let in_support_acceptance = ratio(in_support_accepted, in_support);
    let pooled_tvd = tvd_of(runs.iter().flat_map(|r| r.samples()).collect());

    let mut text = format!(
        "circuit                {} M={} xi={} t_list={:?} cutoff={}\n\
         chains                 {} x ({} burn-in + {} samples), master seed {}\n\
         acceptance             {acceptance:.4} over {steps} steps\n\
         in-support acceptance  {in_support_acceptance:.4} over {in_support} proposals\n",
        cfg.circuit.kind(),
        cfg.circuit.modes(),
        xi,
        cfg.circuit.t_list(),
        cfg.circuit.cutoff(),
        s.n_chains,
        s.settings.burn_in,
        s.settings.n_samples,
        s.master_seed,
    );
    match (&target, pooled_tvd) {
        (Ok(t), Some(tvd)) => {
            text += &format!(
                "TVD vs exact target    {tvd:.4} (target residual {})\n",
                sci(t.residual)
            );
        }
        (Err(e), _) => text += &format!("TVD vs exact target    unavailable: {e}\n"),
        (Ok(_), None) => unreachable!("a tabulated target always yields a TVD"),
    }
    text.push('\n');
    let rows: Vec<Vec<String>> = chains
        .iter()
        .map(|c| {
            vec![
                c.chain.to_string(),
                format!("{}/{}", c.master_seed, c.stream),
                c.init_draws.to_string(),
                format!("{:.4}", c.acceptance_rate),
                format!("{:.4}", c.in_support_acceptance_rate),
                c.tvd.map_or("-".into(), |t| format!("{t:.4}")),
            ]
        })
        .collect();
    text += &table(
        &["chain", "seed/stream", "init draws", "acceptance", "in-support", "TVD"],
        &rows,
    );

    let mut bundle = Bundle::default();
    bundle.add("samples.jsonl", stream);
    bundle.add("summary.txt", text);
    bundle.add_json(
        "summary.json",
        &json!({
            "circuit": circuit_header(&cfg.circuit),
            "prior": prior_value(prior),
            "master_seed": s.master_seed,
            "burn_in": s.settings.burn_in,
            "n_samples": s.settings.n_samples,
            "acceptance_rate": acceptance,
            "in_support_acceptance_rate": in_support_acceptance,
            "tvd": pooled_tvd,
            "tvd_unavailable": target.as_ref().err().map(|e| e.to_string()),
            "target_residual": target.as_ref().ok().map(|t| t.residual),
            "chains": chains,
        }),
    )?;
    Ok(bundle)
}
