//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unfold_core::circuit::{Circuit, Circuit2, GaussianCircuitSpec, GaussianCircuitSpec2, Half};
use unfold_core::fock::{enumerate_box, enumerate_shell, FockAmplitudeMap, OccupationPattern};
use unfold_core::ops::oracle::{SingleModeSqueezerOracle, TwoModeSqueezerOracle};
use unfold_core::ops::{
    apply_passive, interferometer_element, pairs_below, r_from_transmissivity, sandwich_element, ts_element_dual,
    ts_element_oracle, CMatrix, PassiveUnitary,
};
use unfold_core::phase_space::{bloch_messiah, hafnian, marginal_probability, random_symplectic};
use unfold_core::sampler::{
    chain_rng, exact_device_distribution, run_mis_chain, target_distribution, total_variation_distance, MisSettings,
    PriorSpec, DEFAULT_OUTCOME_LIMIT,
};
use unfold_core::Result;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { passed, detail })
}

fn random_circuit(modes: usize, xi: f64, cutoff: u32, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_list = (0..modes / 2).map(|_| rng.random_range(0.2..0.95)).collect();
    let u_a = PassiveUnitary::haar_random(modes, &mut rng);
    let u_b = PassiveUnitary::haar_random(modes, &mut rng);
    Circuit::new(GaussianCircuitSpec::new(xi, t_list, u_a, u_b, cutoff)?)
}

fn two_mode_circuit(xi: f64, t: f64, cutoff: u32, seed: u64) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_a = PassiveUnitary::haar_random(2, &mut rng);
    let u_b = PassiveUnitary::haar_random(2, &mut rng);
    Circuit::new(GaussianCircuitSpec::new(xi, vec![t], u_a, u_b, cutoff)?)
}

fn duality() -> Result<Verdict> {
    let mut worst = [0.0f64; 3];
    let mut converged: f64 = 0.0;
    for (slot, t) in [0.3, 0.5, 0.9].into_iter().enumerate() {
        let r = r_from_transmissivity(t);
        let reference = TwoModeSqueezerOracle::new(r, 60)?;
        for o in pairs_below(6) {
            for i in pairs_below(6) {
                let dual = ts_element_dual(t, o, i)?;
                worst[slot] = worst[slot].max((dual - ts_element_oracle(r, o, i, 40)?).abs());
                converged = converged.max((dual - reference.element(o, i)?).abs());
            }
        }
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    verdict(
        max < 1e-10,
        format!(
            "max |dual - oracle| at oracle cutoff 40: t=0.3 {:.2e}, t=0.5 {:.2e}, t=0.9 {:.2e} (bound 1e-10); \
             at oracle cutoff 60: {converged:.2e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn sandwich() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for t in [0.5, 0.8] {
        let r = r_from_transmissivity(t);
        let plus = SingleModeSqueezerOracle::new(r, 100)?;
        let minus = SingleModeSqueezerOracle::new(-r, 100)?;
        for o in pairs_below(5) {
            for i in pairs_below(5) {
                let product = plus.element(o[0], i[0])? * minus.element(o[1], i[1])?;
                worst = worst.max((sandwich_element(t, o, i)? - product).abs());
            }
        }
    }
    verdict(worst < 1e-8, format!("max entry error {worst:.2e} (bound 1e-8)"))
}

fn factorization_residual(circuit: &Circuit, max_total: u32) -> Result<f64> {
    let modes = circuit.modes();
    let mut worst: f64 = 0.0;
    for n_a in 0..=max_total {
        for n_b in 0..=max_total - n_a {
            for k in enumerate_shell(modes, n_a) {
                for m in enumerate_shell(modes, n_b) {
                    let joint = circuit.joint_probability(&k, &m)?;
                    let cond = circuit.conditional_probability_tilde(&k, &m)?;
                    worst = worst.max((joint - circuit.prefactor_a(n_a, n_b) * cond).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn central_factorization() -> Result<Verdict> {
    let two = factorization_residual(&random_circuit(2, 0.4, 4, 301)?, 4)?;
    let four = factorization_residual(&random_circuit(4, 0.4, 4, 302)?, 4)?;
    verdict(
        two.max(four) < 1e-9,
        format!("max |p - A p~| M=2 {two:.2e}, M=4 {four:.2e} (bound 1e-9)"),
    )
}

fn scattershot() -> Result<Verdict> {
    let xi: f64 = 0.4;
    let cutoff = 4;
    let circuit = two_mode_circuit(xi, 1.0, cutoff, 401)?;
    let thermal = PriorSpec::gibbs(xi * xi / (1.0 - xi * xi), 200)?;
    // p~(k, m) vanishes off N_A = N_B, so the joint must too.
    let mut worst: f64 = 0.0;
    let mut off_shell: f64 = 0.0;
    for n_a in 0..=2 * cutoff {
        for n_b in 0..=2 * cutoff {
            for k in enumerate_shell(2, n_a) {
                for m in enumerate_shell(2, n_b) {
                    let joint = circuit.joint_probability(&k, &m)?;
                    if n_a != n_b {
                        off_shell = off_shell.max(joint);
                    } else if n_a <= cutoff {
                        let target = thermal.probability(&m) * circuit.conditional_probability_tilde(&k, &m)?;
                        worst = worst.max((joint - target).abs());
                    }
                }
            }
        }
    }
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let support_ok = device.entries().iter().all(|(o, _)| o.n_a() == o.n_b());
    let settings = MisSettings {
        burn_in: 1000,
        n_samples: 20_000,
        ..MisSettings::default()
    };
    let run = run_mis_chain(
        &device,
        &PriorSpec::uniform_shell(2),
        xi,
        &settings,
        0,
        &mut chain_rng(404, 0),
    )?;
    let rate = run.state.in_support_acceptance_rate();
    verdict(
        worst.max(off_shell) < 1e-12 && support_ok && rate == 1.0,
        format!(
            "max |p - p~| {worst:.2e} (bound 1e-12), max p off N_A=N_B {off_shell:.1e} (bound 1e-12), \
             in-shell acceptance {rate} over {} proposals",
            run.state.in_support_steps()
        ),
    )
}

fn mis_convergence() -> Result<Verdict> {
    let xi = 0.4;
    let circuit = two_mode_circuit(xi, 0.7, 8, 501)?;
    let prior = PriorSpec::uniform_shell(2);
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    let target = target_distribution(&circuit, &prior)?;
    let settings = MisSettings {
        burn_in: 1000,
        n_samples: 20_000,
        ..MisSettings::default()
    };
    let run = run_mis_chain(&device, &prior, xi, &settings, 0, &mut chain_rng(505, 0))?;
    let samples: Vec<_> = run.samples().collect();
    let short = total_variation_distance(samples[..1000].iter().copied(), &target.distribution);
    let long = total_variation_distance(samples.iter().copied(), &target.distribution);
    verdict(
        long < 0.03 && short > long,
        format!(
            "TVD 2e4 samples {long:.4} (bound 0.03), 1e3 samples {short:.4}; \
             target residual {:.1e}, acceptance {:.3}",
            target.residual,
            run.acceptance_rate()
        ),
    )
}

fn acceptance_bound() -> Result<Verdict> {
    let xi: f64 = 0.4;
    let shell = 2;
    let circuit = two_mode_circuit(xi, 0.7, 8, 501)?;
    let device = exact_device_distribution(&circuit, DEFAULT_OUTCOME_LIMIT)?;
    // About 6% of device draws land in the shell; this yields over 10^4 of them.
    let settings = MisSettings {
        burn_in: 1000,
        n_samples: 250_000,
        ..MisSettings::default()
    };
    let run = run_mis_chain(
        &device,
        &PriorSpec::uniform_shell(shell),
        xi,
        &settings,
        0,
        &mut chain_rng(606, 0),
    )?;
    let proposals = run.state.in_support_steps();
    let rate = run.state.in_support_acceptance_rate();
    let threshold = 0.5 - 3.0 * (0.25 / proposals as f64).sqrt();

    // The same transition rule averaged over pairs of independent device
    // draws, where the photon-number difference is symmetric.
    let mut rng = chain_rng(606, 1);
    let in_shell: Vec<u32> = std::iter::repeat_with(|| device.draw(&mut rng).clone())
        .filter(|o| o.n_b() == shell)
        .take(2 * 10_000)
        .map(|o| o.n_a())
        .collect();
    let pairs: f64 = in_shell
        .chunks(2)
        .map(|p| xi.powi(p[0] as i32 - p[1] as i32).min(1.0))
        .sum::<f64>()
        / 10_000.0;
    verdict(
        proposals >= 10_000 && rate >= threshold,
        format!(
            "chain in-shell acceptance {rate:.4} over {proposals} proposals (bound {threshold:.4}); \
             independent device pairs {pairs:.4}"
        ),
    )
}

/// `haf(A) = 1/(K! 2^K) sum over all permutations of prod A[s(2i), s(2i+1)]`.
fn hafnian_by_permutations(a: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut c = vec![0usize; n];
    let term = |p: &[usize]| p.chunks(2).map(|w| a[(w[0], w[1])]).product::<Complex64>();
    total += term(&perm);
    // Heap's algorithm.
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += term(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let k = n / 2;
    let norm: f64 = (1..=k).map(|j| j as f64).product::<f64>() * 2f64.powi(k as i32);
    total / norm
}

fn hafnians() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 6, 8] {
        for _ in 0..10 {
            let mut x = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    x[(i, j)] = z;
                    x[(j, i)] = z;
                }
            }
            worst = worst.max((hafnian(&x)? - hafnian_by_permutations(&x)).norm());
        }
    }
    let ones = |n| CMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
    let exact = [(4, 3.0), (6, 15.0)]
        .into_iter()
        .all(|(n, v)| hafnian(&ones(n)).map(|h| h == Complex64::new(v, 0.0)).unwrap_or(false));
    verdict(
        worst < 1e-12 && exact,
        format!("max |haf - definition sum| {worst:.2e} (bound 1e-12), all-ones 3 and 15 exact: {exact}"),
    )
}

fn marginal() -> Result<Verdict> {
    let xi: f64 = 0.4;
    let t = 0.7;
    // Source truncation 10 leaves 1 - (1 - xi^22)^2 < 1e-8.
    let cutoff = 10;
    let spec = GaussianCircuitSpec::new(xi, vec![t], PassiveUnitary::dft(2), PassiveUnitary::identity(2), cutoff)?;
    let circuit = Circuit::new(spec)?;
    let mut worst: f64 = 0.0;
    for n_b in 0..=3u32 {
        for m in enumerate_shell(2, n_b) {
            let mut summed = 0.0;
            for n_a in (n_b % 2..=4 * cutoff - n_b).step_by(2) {
                for k in enumerate_shell(2, n_a) {
                    summed += circuit.joint_probability(&k, &m)?;
                }
            }
            let haf = marginal_probability(&m, xi, &[t], circuit.w_b())?;
            worst = worst.max((haf - summed).abs());
        }
    }
    let mut thermal: f64 = 0.0;
    for n in 0..=6u32 {
        for m in enumerate_shell(2, n) {
            let p = marginal_probability(&m, xi, &[1.0], circuit.w_b())?;
            thermal = thermal.max((p - (1.0 - xi * xi).powi(2) * xi.powi(2 * n as i32)).abs());
        }
    }
    verdict(
        worst < 1e-6 && thermal < 1e-14,
        format!("max |haf marginal - sum_k p| {worst:.2e} (bound 1e-6), t=1 thermal error {thermal:.1e}"),
    )
}

fn bloch_messiah_round_trips() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut residual: f64 = 0.0;
    let mut passive = true;
    for i in 0..100 {
        let s = random_symplectic(2 + i % 3, 15, &mut rng);
        let f = bloch_messiah(&s)?;
        residual = residual.max(f.residual);
        passive &= f.s1.passive_block(1e-10).is_ok() && f.s2.passive_block(1e-10).is_ok();
    }
    verdict(
        residual < 1e-10 && passive,
        format!("max reconstruction residual {residual:.2e} (bound 1e-10), passive factors: {passive}"),
    )
}

fn split_factorization() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let vs = [(); 4].map(|_| PassiveUnitary::haar_random(1, &mut rng));
    let circuit = Circuit2::new(GaussianCircuitSpec2::new(0.4, vec![0.65], vs, 6)?)?;
    let mut worst = [0.0f64; 4];
    let assignments = [(1.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (-1.0, 1.0)];
    for total in 0..=6u32 {
        for split in enumerate_shell(4, total) {
            let c = split.counts();
            let [k, m, kp, mp] = [c[0], c[1], c[2], c[3]].map(|n| OccupationPattern::from([n]));
            let joint = circuit.joint_probability_2(&k, &m, &kp, &mp)?;
            let a = circuit.prefactor(c[0] + c[2], c[1] + c[3]);
            for (slot, (s1, s2)) in assignments.into_iter().enumerate() {
                let p1 = circuit.conditional_with_signs(Half::Unprimed, &[s1], &k, &m)?;
                let p2 = circuit.conditional_with_signs(Half::Primed, &[s2], &kp, &mp)?;
                worst[slot] = worst[slot].max((joint - a * p1 * p2).abs());
            }
        }
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    verdict(
        max < 1e-9,
        format!(
            "max residual with squeezing signs (+r,-r) {:.2e}, (+r,+r) {:.2e}, (-r,-r) {:.2e}, (-r,+r) {:.2e} (bound 1e-9)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn conservation() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let u = PassiveUnitary::haar_random(3, &mut rng);
    let patterns = enumerate_box(3, 2);
    let mut passive_leak = 0usize;
    for out in &patterns {
        for inp in &patterns {
            if out.total() != inp.total() && interferometer_element(&u, out, inp)? != Complex64::new(0.0, 0.0) {
                passive_leak += 1;
            }
        }
    }
    let mut state = FockAmplitudeMap::new(3, 2);
    for (i, p) in patterns.iter().filter(|p| p.total() == 2).enumerate() {
        state.insert(p.clone(), Complex64::new(1.0 + i as f64, 0.5))?;
    }
    let evolved = apply_passive(&u, &state)?;
    let vector_leak = evolved.iter().filter(|(p, _)| p.total() != 2).count();

    let mut ts_leak = 0usize;
    for t in [0.3, 0.7] {
        let oracle = TwoModeSqueezerOracle::new(r_from_transmissivity(t), 30)?;
        for o in pairs_below(6) {
            for i in pairs_below(6) {
                let conserved = o[0] as i64 - o[1] as i64 == i[0] as i64 - i[1] as i64;
                if !conserved && (ts_element_dual(t, o, i)? != 0.0 || oracle.element(o, i)? != 0.0) {
                    ts_leak += 1;
                }
            }
        }
    }
    verdict(
        passive_leak == 0 && vector_leak == 0 && ts_leak == 0,
        format!(
            "nonzero off-sector elements: interferometer {passive_leak}, evolved state {vector_leak}, \
             two-mode squeezer {ts_leak}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Verdict>); 11] = [
        ("partial time-reversal duality", duality),
        ("sandwich identity", sandwich),
        ("central factorization", central_factorization),
        ("scattershot limit", scattershot),
        ("MIS convergence", mis_convergence),
        ("acceptance bound", acceptance_bound),
        ("hafnian", hafnians),
        ("hafnian marginal", marginal),
        ("Bloch-Messiah round trip", bloch_messiah_round_trips),
        ("split-circuit factorization", split_factorization),
        ("conservation", conservation),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check().unwrap_or_else(|e| Verdict {
            passed: false,
            detail: format!("error: {e}"),
        });
        if !v.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<30} {}  {}",
            i + 1,
            name,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
