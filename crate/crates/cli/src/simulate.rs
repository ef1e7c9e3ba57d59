use std::collections::{BTreeMap, BTreeSet};

use anyhow::Result;
use serde::Serialize;
use serde_json::json;
use unfold_core::circuit::{Circuit2, Half};
use unfold_core::fock::OccupationPattern;
use unfold_core::sampler::{exact_device_distribution, target_distribution, Outcome, DEFAULT_OUTCOME_LIMIT};

use crate::config::{circuit_header, prior_value, CircuitConfig, ExperimentConfig};
use crate::output::{push_json_line, sci, table, Bundle};

#[derive(Serialize)]
struct Line<'a> {
    k: &'a [u32],
    m: &'a [u32],
    p: f64,
    a: f64,
    p_tilde_conditional: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_tilde_unprimed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_tilde_primed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_tilde: Option<f64>,
    residual: f64,
}

#[derive(Default, Serialize)]
struct SectorRow {
    n_a: u32,
    n_b: u32,
    a: f64,
    outcomes: usize,
    max_residual: f64,
}

/// Splits a local pattern into its even-indexed (unprimed) and odd-indexed
/// (primed) halves.
fn halves(p: &OccupationPattern) -> (OccupationPattern, OccupationPattern) {
    let c = p.counts();
    (
        c.iter().step_by(2).copied().collect::<Vec<_>>().into(),
        c.iter().skip(1).step_by(2).copied().collect::<Vec<_>>().into(),
    )
}

/// Exact device distribution, target, prefactor table and per-outcome
/// factorization residuals. Files: `distribution.jsonl`, `report.txt`,
/// `report.json`.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Bundle> {
    let circuit = cfg.circuit.circuit()?;
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let split = match &cfg.circuit {
        CircuitConfig::Split(spec) => {
            let c2 = Circuit2::new(spec.clone())?;
            let top = device
                .entries()
                .iter()
                .map(|(o, _)| o.n_a().max(o.n_b()))
                .max()
                .unwrap_or(0);
            let halves = (
                c2.half_circuit(Half::Unprimed, top)?,
                c2.half_circuit(Half::Primed, top)?,
            );
            Some((c2, halves))
        }
        CircuitConfig::Single(_) => None,
    };
    let target = cfg
        .prior
        .as_ref()
        .map(|prior| target_distribution(&circuit, prior))
        .transpose()?;

    // p~(k|m) for every device outcome, one unfolded evolution per m.
    let mut wanted: BTreeMap<&OccupationPattern, BTreeSet<u32>> = BTreeMap::new();
    for (o, _) in device.entries() {
        wanted.entry(&o.m).or_default().insert(o.n_a());
    }
    let mut conditional: BTreeMap<(&OccupationPattern, OccupationPattern), f64> = BTreeMap::new();
    for (m, n_as) in wanted {
        for (k, amp) in circuit.unfolded_output(m, n_as)?.iter() {
            conditional.insert((m, k.clone()), amp.norm_sqr());
        }
    }

    let mut lines = Vec::new();
    push_json_line(
        &mut lines,
        &json!({
            "format": "unfold-simulate",
            "version": 1,
            "circuit": circuit_header(&cfg.circuit),
            "prior": cfg.prior.as_ref().map(prior_value),
            "outcomes": device.len(),
            "device_tail": device.tail(),
            "target_residual": target.as_ref().map(|t| t.residual),
        }),
    )?;
    let mut sectors: BTreeMap<(u32, u32), SectorRow> = BTreeMap::new();
    // Sectors with N_A + N_B <= 2 cutoff hold every source configuration;
    // beyond them the truncated sources are missing terms.
    let complete = 2 * cfg.circuit.cutoff();
    let mut worst: f64 = 0.0;
    let mut worst_complete: f64 = 0.0;
    for (o, p) in device.entries() {
        let Outcome { k, m } = o;
        let (n_a, n_b) = (o.n_a(), o.n_b());
        let a = circuit.prefactor_a(n_a, n_b);
        let cond = conditional.get(&(m, k.clone())).copied().unwrap_or(0.0);
        let (unprimed, primed, residual) = match &split {
            Some((c2, (unprimed, primed))) => {
                let ((k0, k1), (m0, m1)) = (halves(k), halves(m));
                let u = unprimed.conditional(&k0, &m0)?;
                let v = primed.conditional(&k1, &m1)?;
                (Some(u), Some(v), (p - c2.prefactor(n_a, n_b) * u * v).abs())
            }
            None => (None, None, (p - a * cond).abs()),
        };
        worst = worst.max(residual);
        if n_a + n_b <= complete {
            worst_complete = worst_complete.max(residual);
        }
        let row = sectors.entry((n_a, n_b)).or_insert_with(|| SectorRow {
            n_a,
            n_b,
            a,
            ..SectorRow::default()
        });
        row.outcomes += 1;
        row.max_residual = row.max_residual.max(residual);
        push_json_line(
            &mut lines,
            &Line {
                k: k.counts(),
                m: m.counts(),
                p: *p,
                a,
                p_tilde_conditional: cond,
                p_tilde_unprimed: unprimed,
                p_tilde_primed: primed,
                p_tilde: target.as_ref().map(|t| t.distribution.probability(o)),
                residual,
            },
        )?;
    }

    let factorization = if split.is_some() {
        "|p - A p~ p~'| (split halves)"
    } else {
        "|p - A p~(k|m)|"
    };
    let mut text = format!(
        "circuit        {} M={} xi={} t_list={:?} cutoff={}\n\
         outcomes       {}\n\
         device tail    {}\n",
        cfg.circuit.kind(),
        cfg.circuit.modes(),
        cfg.circuit.xi(),
        cfg.circuit.t_list(),
        cfg.circuit.cutoff(),
        device.len(),
        sci(device.tail()),
    );
    if let Some(t) = &target {
        text += &format!(
            "target resid.  {} ({} outcomes)\n",
            sci(t.residual),
            t.distribution.len()
        );
    }
    text += &format!(
        "max residual   {} {factorization}\n\
         complete       {} over N_A+N_B <= {complete}\n\n",
        sci(worst),
        sci(worst_complete)
    );
    let rows: Vec<Vec<String>> = sectors
        .values()
        .map(|r| {
            vec![
                r.n_a.to_string(),
                r.n_b.to_string(),
                sci(r.a),
                r.outcomes.to_string(),
                sci(r.max_residual),
            ]
        })
        .collect();
    text += &table(&["N_A", "N_B", "A", "outcomes", "max residual"], &rows);

    let mut bundle = Bundle::default();
    bundle.add("distribution.jsonl", lines);
    bundle.add("report.txt", text);
    bundle.add_json(
        "report.json",
        &json!({
            "circuit": circuit_header(&cfg.circuit),
            "prior": cfg.prior.as_ref().map(prior_value),
            "outcomes": device.len(),
            "device_tail": device.tail(),
            "target_residual": target.as_ref().map(|t| t.residual),
            "max_residual": worst,
            "max_residual_complete_sectors": worst_complete,
            "complete_sector_bound": complete,
            "prefactors": sectors.values().collect::<Vec<_>>(),
        }),
    )?;
    Ok(bundle)
}
