use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockAmplitudeMap, OccupationPattern};
use crate::ops::elements::two_mode_element;
use crate::ops::passive::{CMatrix, PassiveUnitary};
#[allow(unused_imports)]
use num_traits::Float;

/// A 2x2 unitary acting on modes `(p, q)`.
#[derive(Clone, Debug)]
struct Givens {
    p: usize,
    q: usize,
    block: CMatrix,
}

/// Factorizes `U = G_1 G_2 ... G_n D` into two-mode rotations and a diagonal
/// of phases by zeroing the strictly lower triangle column by column.
fn givens_factors(u: &CMatrix) -> (Vec<Givens>, Vec<Complex64>) {
    let m = u.nrows();
    let mut work = u.clone();
    let mut rotations = Vec::new();
    for j in 0..m {
        for i in (j + 1)..m {
            let a = work[(j, j)];
            let b = work[(i, j)];
            if b.norm() == 0.0 {
                continue;
            }
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let g = CMatrix::from_row_slice(2, 2, &[a.conj() / r, b.conj() / r, -b / r, a / r]);
            for k in 0..m {
                let (x, y) = (work[(j, k)], work[(i, k)]);
                work[(j, k)] = g[(0, 0)] * x + g[(0, 1)] * y;
                work[(i, k)] = g[(1, 0)] * x + g[(1, 1)] * y;
            }
            // Record the inverse so that the list multiplies back to U.
            rotations.push(Givens {
                p: j,
                q: i,
                block: g.adjoint(),
            });
        }
    }
    let phases = (0..m).map(|i| work[(i, i)]).collect();
    (rotations, phases)
}

fn apply_phases(state: &FockAmplitudeMap, phases: &[Complex64]) -> BTreeMap<OccupationPattern, Complex64> {
    state
        .iter()
        .map(|(p, a)| {
            let factor: Complex64 = p.counts().iter().zip(phases).map(|(&n, z)| z.powu(n)).product();
            (p.clone(), a * factor)
        })
        .collect()
}

fn apply_givens(
    entries: BTreeMap<OccupationPattern, Complex64>,
    gate: &Givens,
) -> BTreeMap<OccupationPattern, Complex64> {
    let mut cache: BTreeMap<(u32, u32), Vec<Complex64>> = BTreeMap::new();
    let mut out: BTreeMap<OccupationPattern, Complex64> = BTreeMap::new();
    for (pattern, amp) in entries {
        let i1 = pattern.counts()[gate.p];
        let i2 = pattern.counts()[gate.q];
        let n = i1 + i2;
        let column = cache.entry((i1, i2)).or_insert_with(|| {
            (0..=n)
                .map(|o1| two_mode_element(&gate.block, [o1, n - o1], [i1, i2]))
                .collect()
        });
        for (o1, &e) in column.iter().enumerate() {
            if e == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut next = pattern.clone();
            next.counts_mut()[gate.p] = o1 as u32;
            next.counts_mut()[gate.q] = n - o1 as u32;
            *out.entry(next).or_default() += amp * e;
        }
    }
    out
}

/// Evolves a Fock state through a passive circuit.
///
/// The circuit is factorized into two-mode rotations and phases, each applied
/// with the exact two-mode closed form, so every total-photon sector is
/// transformed unitarily without materializing sector matrices. The per-mode
/// cutoff of the result is the largest photon number present in the input.
pub fn apply_passive(u: &PassiveUnitary, state: &FockAmplitudeMap) -> Result<FockAmplitudeMap> {
    if u.dimension() != state.modes() {
        return Err(Error::ModeMismatch {
            expected: u.dimension(),
            found: state.modes(),
        });
    }
    let (rotations, phases) = givens_factors(u.matrix());
    let mut entries = apply_phases(state, &phases);
    for gate in rotations.iter().rev() {
        entries = apply_givens(entries, gate);
    }
    let cutoff = state
        .iter()
        .map(|(p, _)| p.total())
        .max()
        .unwrap_or(0)
        .max(state.cutoff());
    Ok(FockAmplitudeMap::from_raw(
        state.modes(),
        cutoff,
        state.drop_tolerance(),
        entries,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_shell;
    use crate::ops::elements::interferometer_element;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn givens_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = PassiveUnitary::haar_random(5, &mut rng);
        let (rot, phases) = givens_factors(u.matrix());
        let mut acc = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
        for g in rot.iter().rev() {
            let e =
                PassiveUnitary::embed_two_mode(5, g.p, g.q, &PassiveUnitary::from_trusted(g.block.clone())).unwrap();
            acc = e.matrix() * acc;
        }
        assert!(crate::ops::passive::max_abs(&(acc - u.matrix())) < 1e-13);
    }

    #[test]
    fn vacuum_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = PassiveUnitary::haar_random(3, &mut rng);
        let vac = FockAmplitudeMap::vacuum(3);
        let out = apply_passive(&u, &vac).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out.get(&OccupationPattern::vacuum(3)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let state = FockAmplitudeMap::basis([2, 0, 1].into());
        let same = apply_passive(&PassiveUnitary::identity(3), &state).unwrap();
        assert_eq!(same.get(&[2, 0, 1].into()), Complex64::new(1.0, 0.0));
        assert_eq!(same.len(), 1);
    }

    #[test]
    fn matches_interferometer_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = PassiveUnitary::haar_random(3, &mut rng);
        let inp: OccupationPattern = [1, 2, 0].into();
        let out = apply_passive(&u, &FockAmplitudeMap::basis(inp.clone())).unwrap();
        for k in enumerate_shell(3, 3) {
            let e = interferometer_element(&u, &k, &inp).unwrap();
            assert!((out.get(&k) - e).norm() < 1e-12);
        }
    }

    #[test]
    fn mode_mismatch() {
        let u = PassiveUnitary::identity(2);
        assert!(apply_passive(&u, &FockAmplitudeMap::vacuum(3)).is_err());
    }

    proptest! {
        #[test]
        fn preserves_norm_and_photon_number(
            seed in any::<u64>(),
            amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = PassiveUnitary::haar_random(3, &mut rng);
            let mut state = FockAmplitudeMap::new(3, 3);
            for (p, (re, im)) in enumerate_shell(3, 3).into_iter().zip(amps) {
                state.insert(p, Complex64::new(re, im)).unwrap();
            }
            let out = apply_passive(&u, &state).unwrap();
            prop_assert!((out.norm_sqr() - state.norm_sqr()).abs() < 1e-10);
            for (p, _) in out.iter() {
                prop_assert_eq!(p.total(), 3);
            }
        }
    }
}
