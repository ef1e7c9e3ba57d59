//! The time-unfolded circuit: `W_B^T`, the two-mode squeezers dual to the
//! coupling beam splitters, then `W_A`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::device::Circuit;
use crate::error::{Error, Result};
use crate::fock::{enumerate_shell, FockAmplitudeMap, OccupationPattern};
use crate::ops::{apply_passive, matrix_element, ts_element_dual};

impl Circuit {
    /// `prod_j <q_2j, q_2j+1| TS(1/t_j) |p_2j, p_2j+1>`.
    fn squeezer_layer(&self, q: &[u32], p: &[u32]) -> Result<f64> {
        let mut acc = 1.0;
        for (j, &t) in self.spec().t_list().iter().enumerate() {
            let v = ts_element_dual(t, [q[2 * j], q[2 * j + 1]], [p[2 * j], p[2 * j + 1]])?;
            if v == 0.0 {
                return Ok(0.0);
            }
            acc *= v;
        }
        Ok(acc)
    }

    /// Amplitudes `<p| W_B^T |m>` over the shell of `|m|` photons.
    fn b_side(&self, m: &OccupationPattern) -> Result<Vec<(OccupationPattern, Complex64)>> {
        let mut out = Vec::new();
        for p in enumerate_shell(self.modes(), m.total()) {
            let e = matrix_element(self.w_b_transpose().matrix(), &p, m)?;
            if e != Complex64::new(0.0, 0.0) {
                out.push((p, e));
            }
        }
        Ok(out)
    }

    /// Intermediate amplitudes `sum_p TS(q <- p) <p| W_B^T |m>` for every `q`
    /// holding `n_a` photons.
    fn squeezed(
        &self,
        b_side: &[(OccupationPattern, Complex64)],
        n_a: u32,
    ) -> Result<Vec<(OccupationPattern, Complex64)>> {
        let mut out = Vec::new();
        for q in enumerate_shell(self.modes(), n_a) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, e) in b_side {
                let s = self.squeezer_layer(q.counts(), p.counts())?;
                if s != 0.0 {
                    acc += e * s;
                }
            }
            if acc != Complex64::new(0.0, 0.0) {
                out.push((q, acc));
            }
        }
        Ok(out)
    }

    /// `p~(k|m) = |<k| W_A (⊗_j TS_j) W_B^T |m>|^2`, the probability of
    /// detecting `k` after sending `|m>` through the time-unfolded circuit.
    ///
    /// Computed from Fock elements only: the beam splitters conserve photon
    /// number, so the intermediate sums run over the finite shells of `|k|`
    /// and `|m|` photons and no truncation is involved.
    pub fn conditional_probability_tilde(&self, k: &OccupationPattern, m: &OccupationPattern) -> Result<f64> {
        for p in [k, m] {
            if p.modes() != self.modes() {
                return Err(Error::ModeMismatch {
                    expected: self.modes(),
                    found: p.modes(),
                });
            }
        }
        let b_side = self.b_side(m)?;
        let mut amp = Complex64::new(0.0, 0.0);
        for (q, x) in self.squeezed(&b_side, k.total())? {
            amp += matrix_element(self.w_a().matrix(), k, &q)? * x;
        }
        Ok(amp.norm_sqr())
    }

    /// The output state `W_A (⊗_j TS_j) W_B^T |m>` restricted to A-side
    /// photon numbers `n_a` in `photon_numbers`, evolved with
    /// [`apply_passive`]. Squared magnitudes are `p~(k|m)` for all `k` at once.
    pub fn unfolded_output(
        &self,
        m: &OccupationPattern,
        photon_numbers: impl IntoIterator<Item = u32>,
    ) -> Result<FockAmplitudeMap> {
        let b_side = self.b_side(m)?;
        let mut entries = BTreeMap::new();
        let mut cutoff = 0;
        for n_a in photon_numbers {
            for (q, x) in self.squeezed(&b_side, n_a)? {
                cutoff = cutoff.max(q.max_entry());
                entries.insert(q, x);
            }
        }
        let mut state = FockAmplitudeMap::new(self.modes(), cutoff);
        for (q, x) in entries {
            state.insert(q, x)?;
        }
        apply_passive(self.w_a(), &state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::spec::GaussianCircuitSpec;
    use crate::ops::{interferometer_element, PassiveUnitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_circuit(m: usize, xi: f64, seed: u64) -> Circuit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t_list = (0..m / 2)
            .map(|_| rand::Rng::random_range(&mut rng, 0.2..0.95))
            .collect();
        let u_a = PassiveUnitary::haar_random(m, &mut rng);
        let u_b = PassiveUnitary::haar_random(m, &mut rng);
        Circuit::new(GaussianCircuitSpec::new(xi, t_list, u_a, u_b, 4).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_to_vacuum_is_inverse_gain() {
        for t in [0.3, 0.7, 1.0] {
            let spec = GaussianCircuitSpec::new(
                0.4,
                alloc::vec![t],
                PassiveUnitary::dft(2),
                PassiveUnitary::identity(2),
                4,
            )
            .unwrap();
            let c = Circuit::new(spec).unwrap();
            let vac = OccupationPattern::vacuum(2);
            assert!((c.conditional_probability_tilde(&vac, &vac).unwrap() - t).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_coupling_is_boson_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u_a = PassiveUnitary::haar_random(4, &mut rng);
        let u_b = PassiveUnitary::haar_random(4, &mut rng);
        let spec = GaussianCircuitSpec::new(0.4, alloc::vec![1.0, 1.0], u_a.clone(), u_b.clone(), 4).unwrap();
        let c = Circuit::new(spec).unwrap();
        let v = u_a.compose(&u_b.transpose()).unwrap();
        for n in 0..3 {
            for k in enumerate_shell(4, n) {
                for m in enumerate_shell(4, n) {
                    let direct = interferometer_element(&v, &k, &m).unwrap().norm_sqr();
                    let p = c.conditional_probability_tilde(&k, &m).unwrap();
                    assert!((p - direct).abs() < 1e-12);
                }
            }
        }
    }

    fn factorization_residual(c: &Circuit, max_total: u32) -> f64 {
        let modes = c.modes();
        let mut worst: f64 = 0.0;
        for n_a in 0..=max_total {
            for n_b in 0..=(max_total - n_a) {
                for k in enumerate_shell(modes, n_a) {
                    for m in enumerate_shell(modes, n_b) {
                        let joint = c.joint_probability(&k, &m).unwrap();
                        let cond = c.conditional_probability_tilde(&k, &m).unwrap();
                        let a = c.prefactor_a(n_a, n_b);
                        worst = worst.max((joint - a * cond).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn factorization_two_modes() {
        let worst = factorization_residual(&random_circuit(2, 0.4, 1), 4);
        assert!(worst < 1e-12, "{worst:e}");
    }

    #[test]
    fn factorization_four_modes() {
        let worst = factorization_residual(&random_circuit(4, 0.3, 2), 4);
        assert!(worst < 1e-12, "{worst:e}");
    }

    #[test]
    fn vector_route_matches_elements() {
        let c = random_circuit(2, 0.4, 3);
        let m: OccupationPattern = [1, 1].into();
        let out = c.unfolded_output(&m, [0, 2, 4]).unwrap();
        for n in [0u32, 2, 4] {
            for k in enumerate_shell(2, n) {
                let e = c.conditional_probability_tilde(&k, &m).unwrap();
                assert!((out.get(&k).norm_sqr() - e).abs() < 1e-13);
            }
        }
    }
}
