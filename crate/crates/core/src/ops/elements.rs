//! Fock-basis matrix elements of the primitive transformations.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::combinatorics::{binomial, sqrt_factorial_ratio};
use crate::fock::{enumerate_shell, OccupationPattern};
use crate::ops::param::{check_transmissivity, r_from_transmissivity};
use crate::ops::passive::{beam_splitter_block, CMatrix, PassiveUnitary};
use crate::ops::permanent::permanent_repeated;
#[allow(unused_imports)]
use num_traits::Float;

/// Two-mode pattern `(n1, n2)`.
pub type Pair = [u32; 2];

/// `<out| U |inp>` for a 2x2 mode matrix `[[a, b], [c, d]]`, by expanding
/// `(a a1† + c a2†)^i1 (b a1† + d a2†)^i2` over the photons sent to mode 1.
pub fn two_mode_element(u: &CMatrix, out: Pair, inp: Pair) -> Complex64 {
    let [o1, o2] = out;
    let [i1, i2] = inp;
    if o1 + o2 != i1 + i2 {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let mut acc = Complex64::new(0.0, 0.0);
    let lo = o1.saturating_sub(i2);
    let hi = i1.min(o1);
    for x in lo..=hi {
        let y = o1 - x;
        let coeff = binomial(i1 as usize, x as usize) * binomial(i2 as usize, y as usize);
        acc += a.powu(x) * c.powu(i1 - x) * b.powu(y) * d.powu(i2 - y) * coeff;
    }
    acc * sqrt_factorial_ratio(&out, &inp)
}

/// `<out| U_BS(t) |inp>` for the real beam splitter of transmissivity `t`.
pub fn bs_element(t: f64, out: Pair, inp: Pair) -> Result<f64> {
    check_transmissivity(t)?;
    Ok(two_mode_element(&beam_splitter_block(t), out, inp).re)
}

/// `<out| U |inp> = Per(U[out, inp]) / sqrt(prod out! prod inp!)`, with row
/// `j` of `U` repeated `out[j]` times and column `i` repeated `inp[i]` times.
/// Zero when the photon totals differ.
pub fn interferometer_element(
    u: &PassiveUnitary,
    out: &OccupationPattern,
    inp: &OccupationPattern,
) -> Result<Complex64> {
    matrix_element(u.matrix(), out, inp)
}

pub(crate) fn matrix_element(u: &CMatrix, out: &OccupationPattern, inp: &OccupationPattern) -> Result<Complex64> {
    let m = u.nrows();
    for p in [out, inp] {
        if p.modes() != m {
            return Err(Error::ModeMismatch {
                expected: m,
                found: p.modes(),
            });
        }
    }
    if out.total() != inp.total() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let per = permanent_repeated(u, out.counts(), inp.counts())?;
    let both: Vec<u32> = out.counts().iter().chain(inp.counts()).copied().collect();
    Ok(per * sqrt_factorial_ratio(&[], &both))
}

/// The induced unitary on the `total`-photon sector, in canonical shell order.
pub fn sector_matrix(u: &PassiveUnitary, total: u32) -> Result<CMatrix> {
    let basis = enumerate_shell(u.dimension(), total);
    let n = basis.len();
    let mut out = CMatrix::zeros(n, n);
    for (c, inp) in basis.iter().enumerate() {
        for (r, o) in basis.iter().enumerate() {
            out[(r, c)] = interferometer_element(u, o, inp)?;
        }
    }
    Ok(out)
}

/// Two-mode squeezer element of gain `1/t`, obtained from the beam splitter
/// of transmissivity `t` by partial time reversal:
/// `<k1,k2| TS |m1,m2> = sqrt(t) <m1,k2| BS(t) |k1,m2>`.
///
/// Zero unless `out1 - out2 = inp1 - inp2`.
pub fn ts_element_dual(t: f64, out: Pair, inp: Pair) -> Result<f64> {
    Ok(t.sqrt() * bs_element(t, [inp[0], out[1]], [out[0], inp[1]])?)
}

/// Element of the sandwich `F_BS(1/2) F_TS(1/t) F_BS(1/2)^T` on two modes.
///
/// The sums over intermediate indices are finite because the balanced beam
/// splitters conserve photon number and the squeezer conserves the difference.
pub fn sandwich_element(t: f64, out: Pair, inp: Pair) -> Result<f64> {
    check_transmissivity(t)?;
    let half = beam_splitter_block(0.5);
    let n_out = out[0] + out[1];
    let n_in = inp[0] + inp[1];
    let mut acc = 0.0;
    for a in 0..=n_out {
        let b = n_out - a;
        // c - d = a - b and c + d = n_in
        let twice_c = a as i64 - b as i64 + n_in as i64;
        if twice_c < 0 || twice_c % 2 != 0 || twice_c / 2 > n_in as i64 {
            continue;
        }
        let c = (twice_c / 2) as u32;
        let d = n_in - c;
        let left = two_mode_element(&half, out, [a, b]).re;
        if left == 0.0 {
            continue;
        }
        let right = two_mode_element(&half, inp, [c, d]).re;
        acc += left * ts_element_dual(t, [a, b], [c, d])? * right;
    }
    Ok(acc)
}

/// Tolerance of the tensor-factorization check inside [`ss_matrix`].
pub const SANDWICH_FACTORIZATION_TOLERANCE: f64 = 1e-10;

/// Photon numbers below this bound the block on which [`ss_matrix`] checks
/// the factorization. The full block costs `O(size^6)`.
pub const SANDWICH_CHECK_SIZE: usize = 6;

/// Fock matrix of the single-mode squeezer `S(r)` on photon numbers
/// `0..size`, extracted from the two-mode sandwich, which factorizes as
/// `S(|r|) ⊗ S(-|r|)` with `|r| = arccosh sqrt g`.
///
/// The factors are read off the rows with a vacuum in the other mode. The
/// factorization is verified on the block with all photon numbers below
/// `min(size, SANDWICH_CHECK_SIZE)`; a residual above
/// [`SANDWICH_FACTORIZATION_TOLERANCE`] aborts.
pub fn ss_matrix(r: f64, size: usize) -> Result<DMatrix<f64>> {
    crate::error::check_range("r", r, true, "squeezing degree must be finite")?;
    let size = size.max(1);
    if r == 0.0 {
        return Ok(DMatrix::identity(size, size));
    }
    // cosh^2 r = 1/t
    let t = 1.0 / r.cosh().powi(2);
    debug_assert!((r_from_transmissivity(t) - r.abs()).abs() < 1e-8 * (1.0 + r.abs()));
    let norm = sandwich_element(t, [0, 0], [0, 0])?.sqrt();
    let mut first = DMatrix::zeros(size, size);
    let mut second = DMatrix::zeros(size, size);
    for o in 0..size {
        for i in 0..size {
            // Squeezers only couple photon numbers of equal parity.
            if (o + i) % 2 == 0 {
                first[(o, i)] = sandwich_element(t, [o as u32, 0], [i as u32, 0])? / norm;
                second[(o, i)] = sandwich_element(t, [0, o as u32], [0, i as u32])? / norm;
            }
        }
    }

    let n = size.min(SANDWICH_CHECK_SIZE) as u32;
    let mut residual: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let product = first[(a as usize, c as usize)] * second[(b as usize, d as usize)];
                    residual = residual.max((sandwich_element(t, [a, b], [c, d])? - product).abs());
                }
            }
        }
    }
    if residual > SANDWICH_FACTORIZATION_TOLERANCE {
        return Err(Error::Consistency {
            check: "sandwich factorization",
            residual,
            tolerance: SANDWICH_FACTORIZATION_TOLERANCE,
        });
    }
    Ok(if r > 0.0 { first } else { second })
}

/// `<out| S(r) |inp>` for the single-mode squeezer, via [`ss_matrix`].
/// Zero when `out` and `inp` have different parity.
pub fn ss_element(r: f64, out: u32, inp: u32) -> Result<f64> {
    if (out + inp) % 2 == 1 {
        return Ok(0.0);
    }
    let size = out.max(inp) as usize + 1;
    Ok(ss_matrix(r, size)?[(out as usize, inp as usize)])
}

/// All two-mode patterns with entries `< size`, in row-major order.
pub fn pairs_below(size: u32) -> Vec<Pair> {
    (0..size).flat_map(|a| (0..size).map(move |b| [a, b])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::oracle::{SingleModeSqueezerOracle, TwoModeSqueezerOracle};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bs_examples() {
        let t: f64 = 0.37;
        assert!((bs_element(t, [1, 0], [1, 0]).unwrap() - t.sqrt()).abs() < 1e-15);
        assert!((bs_element(t, [0, 1], [1, 0]).unwrap() + (1.0 - t).sqrt()).abs() < 1e-15);
        let v = bs_element(0.5, [1, 1], [2, 0]).unwrap();
        assert!((v.abs() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(bs_element(t, [1, 0], [2, 0]).unwrap(), 0.0);
        assert!(bs_element(0.0, [0, 0], [0, 0]).is_err());
        assert!(bs_element(1.5, [0, 0], [0, 0]).is_err());
    }

    #[test]
    fn interferometer_examples() {
        let id = PassiveUnitary::identity(3);
        let p: OccupationPattern = [1, 0, 2].into();
        assert_eq!(interferometer_element(&id, &p, &p).unwrap(), Complex64::new(1.0, 0.0));
        let q: OccupationPattern = [0, 1, 2].into();
        assert_eq!(interferometer_element(&id, &q, &p).unwrap(), Complex64::new(0.0, 0.0));
        let bs = PassiveUnitary::beam_splitter(0.5).unwrap();
        let a = interferometer_element(&bs, &[1, 1].into(), &[2, 0].into()).unwrap();
        let b = bs_element(0.5, [1, 1], [2, 0]).unwrap();
        assert!((a.re - b).abs() < 1e-15 && a.im.abs() < 1e-15);
        assert!(interferometer_element(&bs, &[1].into(), &[1].into()).is_err());
    }

    #[test]
    fn two_paths_agree_on_two_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = PassiveUnitary::haar_random(2, &mut rng);
        for o in pairs_below(5) {
            for i in pairs_below(5) {
                let a = two_mode_element(u.matrix(), o, i);
                let b = interferometer_element(&u, &o.into(), &i.into()).unwrap();
                assert!((a - b).norm() < 1e-12, "{o:?} <- {i:?}");
            }
        }
        for t in [0.2, 0.5, 0.9, 1.0] {
            let bs = PassiveUnitary::beam_splitter(t).unwrap();
            for o in pairs_below(5) {
                for i in pairs_below(5) {
                    let a = bs_element(t, o, i).unwrap();
                    let b = interferometer_element(&bs, &o.into(), &i.into()).unwrap();
                    assert!((a - b.re).abs() < 1e-12 && b.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ts_examples() {
        let t: f64 = 0.64;
        assert!((ts_element_dual(t, [0, 0], [0, 0]).unwrap() - 0.8).abs() < 1e-15);
        let v = ts_element_dual(t, [1, 1], [0, 0]).unwrap();
        assert!((v.abs() - (t * (1.0 - t)).sqrt()).abs() < 1e-15);
        assert_eq!(ts_element_dual(t, [1, 0], [0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn dual_matches_oracle_with_converged_cutoff() {
        for t in [0.3, 0.5, 0.9] {
            let oracle = TwoModeSqueezerOracle::new(r_from_transmissivity(t), 60).unwrap();
            let mut worst: f64 = 0.0;
            for o in pairs_below(6) {
                for i in pairs_below(6) {
                    let d = ts_element_dual(t, o, i).unwrap();
                    worst = worst.max((d - oracle.element(o, i).unwrap()).abs());
                }
            }
            assert!(worst < 1e-10, "t = {t}: {worst:e}");
        }
    }

    #[test]
    fn ss_examples() {
        for o in 0..5 {
            for i in 0..5 {
                let expected = if o == i { 1.0 } else { 0.0 };
                assert_eq!(ss_element(0.0, o, i).unwrap(), expected);
            }
        }
        assert_eq!(ss_element(0.4, 3, 0).unwrap(), 0.0);
        let r: f64 = 0.6;
        let vac = ss_element(r, 0, 0).unwrap();
        assert!((vac - 1.0 / r.cosh().sqrt()).abs() < 1e-12);
        let oracle = SingleModeSqueezerOracle::new(r, 80).unwrap();
        assert!((vac - oracle.element(0, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ss_matches_single_mode_oracle() {
        for r in [0.3, -0.3, 0.8, -0.95] {
            let s = ss_matrix(r, 6).unwrap();
            let oracle = SingleModeSqueezerOracle::new(r, 100).unwrap();
            for o in 0..6 {
                for i in 0..6 {
                    let e = oracle.element(o as u32, i as u32).unwrap();
                    assert!((s[(o, i)] - e).abs() < 1e-10, "r={r} <{o}|S|{i}>");
                }
            }
        }
    }

    #[test]
    fn large_ss_matrix_matches_oracle() {
        let s = ss_matrix(-0.5, 33).unwrap();
        let oracle = SingleModeSqueezerOracle::new(-0.5, 200).unwrap();
        let mut worst: f64 = 0.0;
        for o in 0..33 {
            for i in 0..33 {
                worst = worst.max((s[(o, i)] - oracle.element(o as u32, i as u32).unwrap()).abs());
            }
        }
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn sector_matrix_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 2..5 {
            let u = PassiveUnitary::haar_random(m, &mut rng);
            for n in 0..4 {
                let s = sector_matrix(&u, n).unwrap();
                assert!(crate::ops::passive::unitarity_deviation(&s) < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn bs_conserves_photon_number(t in 0.01f64..=1.0, o in (0u32..6, 0u32..6), i in (0u32..6, 0u32..6)) {
            let v = bs_element(t, [o.0, o.1], [i.0, i.1]).unwrap();
            if o.0 + o.1 != i.0 + i.1 {
                prop_assert_eq!(v, 0.0);
            }
        }

        #[test]
        fn ts_conserves_difference(t in 0.01f64..=1.0, o in (0u32..6, 0u32..6), i in (0u32..6, 0u32..6)) {
            let v = ts_element_dual(t, [o.0, o.1], [i.0, i.1]).unwrap();
            if o.0 as i64 - o.1 as i64 != i.0 as i64 - i.1 as i64 {
                prop_assert_eq!(v, 0.0);
            }
        }

        #[test]
        fn interferometer_conserves_photon_number(
            seed in any::<u64>(),
            o in proptest::collection::vec(0u32..3, 3),
            i in proptest::collection::vec(0u32..3, 3),
        ) {
            let u = PassiveUnitary::haar_random(3, &mut ChaCha8Rng::seed_from_u64(seed));
            let o = OccupationPattern::new(o);
            let i = OccupationPattern::new(i);
            let v = interferometer_element(&u, &o, &i).unwrap();
            if o.total() != i.total() {
                prop_assert_eq!(v, Complex64::new(0.0, 0.0));
            }
        }

        #[test]
        fn sector_unitarity(seed in any::<u64>(), m in 2usize..5, n in 0u32..4) {
            let u = PassiveUnitary::haar_random(m, &mut ChaCha8Rng::seed_from_u64(seed));
            let s = sector_matrix(&u, n).unwrap();
            prop_assert!(crate::ops::passive::unitarity_deviation(&s) < 1e-10);
        }
    }
}
