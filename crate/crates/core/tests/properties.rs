use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unfold_core::circuit::{Circuit, GaussianCircuitSpec};
use unfold_core::fock::enumerate_shell;
use unfold_core::ops::PassiveUnitary;
use unfold_core::sampler::{
    chain_rng, exact_device_distribution, run_mis_chain, target_distribution, MisSettings, PriorSpec,
    DEFAULT_OUTCOME_LIMIT,
};

fn circuit(modes: usize, xi: f64, cutoff: u32, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_list = (0..modes / 2).map(|_| rng.random_range(0.1..1.0)).collect();
    let u_a = PassiveUnitary::haar_random(modes, &mut rng);
    let u_b = PassiveUnitary::haar_random(modes, &mut rng);
    Circuit::new(GaussianCircuitSpec::new(xi, t_list, u_a, u_b, cutoff).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorization_holds_for_random_circuits(seed in any::<u64>(), xi in 0.05f64..0.9) {
        let c = circuit(2, xi, 4, seed);
        for n_a in 0..=3u32 {
            for n_b in 0..=3 - n_a {
                for k in enumerate_shell(2, n_a) {
                    for m in enumerate_shell(2, n_b) {
                        let joint = c.joint_probability(&k, &m).unwrap();
                        let pred = c.prefactor_a(n_a, n_b) * c.conditional_probability_tilde(&k, &m).unwrap();
                        prop_assert!((joint - pred).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn device_mass_plus_tail_is_one(seed in any::<u64>(), xi in 0.0f64..0.7, cutoff in 1u32..5) {
        let c = circuit(2, xi, cutoff, seed);
        let d = exact_device_distribution(&c, DEFAULT_OUTCOME_LIMIT).unwrap();
        prop_assert!((d.mass() + d.tail() - 1.0).abs() < 1e-10);
        prop_assert!(d.tail() <= 2.0 * xi.powi(2 * (cutoff as i32 + 1)) + 1e-15);
        prop_assert!(d.entries().iter().all(|(o, _)| (o.n_a() + o.n_b()) % 2 == 0));
    }

    #[test]
    fn conditional_sums_to_at_most_one(seed in any::<u64>(), n in 0u32..4) {
        let c = circuit(2, 0.3, 6, seed);
        for m in enumerate_shell(2, n) {
            let short = c.unfolded_output(&m, (n % 2..=n + 10).step_by(2)).unwrap().norm_sqr();
            let long = c.unfolded_output(&m, (n % 2..=n + 20).step_by(2)).unwrap().norm_sqr();
            prop_assert!(long <= 1.0 + 1e-12);
            prop_assert!(long >= short);
        }
    }

    #[test]
    fn chains_never_leave_the_prior_support(seed in any::<u64>()) {
        let c = circuit(2, 0.5, 4, seed);
        let d = exact_device_distribution(&c, DEFAULT_OUTCOME_LIMIT).unwrap();
        let prior = PriorSpec::uniform_shell(1);
        let settings = MisSettings { burn_in: 20, n_samples: 500, ..MisSettings::default() };
        let run = run_mis_chain(&d, &prior, 0.5, &settings, 3, &mut chain_rng(seed, 3)).unwrap();
        prop_assert!(run.samples().all(|o| o.n_b() == 1));
        prop_assert!(run.state.accepted() <= run.state.steps());
        let again = run_mis_chain(&d, &prior, 0.5, &settings, 3, &mut chain_rng(seed, 3)).unwrap();
        prop_assert_eq!(run.records, again.records);
    }
}

#[test]
fn target_support_follows_the_prior() {
    let c = circuit(2, 0.4, 5, 77);
    let prior = PriorSpec::gibbs(0.3, 2).unwrap();
    let t = target_distribution(&c, &prior).unwrap();
    assert!(t.distribution.entries().iter().all(|(o, _)| o.m.max_entry() <= 2));
    assert!(t.distribution.entries().iter().all(|(o, _)| o.n_a() % 2 == o.n_b() % 2));
    assert!(t.residual >= -1e-12);
}
