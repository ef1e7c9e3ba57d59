//! The four-circuit variant: each side splits into two disjoint circuits,
//! and the unfolded circuit becomes two independent Bloch–Messiah circuits
//! with opposite squeezing signs.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::device::Circuit;
use crate::circuit::spec::{interleave_halves, GaussianCircuitSpec2};
use crate::error::{Error, Result};
use crate::fock::{enumerate_shell, OccupationPattern};
use crate::ops::{matrix_element, r_from_transmissivity, ss_matrix, PassiveUnitary};

/// Which of the two disjoint simulated circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    /// `V_A`, `V_B`, squeezed with `+r_j`.
    Unprimed,
    /// `V'_A`, `V'_B`, squeezed with `-r_j`.
    Primed,
}

impl Half {
    pub fn sign(self) -> f64 {
        match self {
            Self::Unprimed => 1.0,
            Self::Primed => -1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Circuit2 {
    spec: GaussianCircuitSpec2,
    flat: Circuit,
    /// `r_j = arctanh sqrt(1 - t_j)`.
    r_list: Vec<f64>,
}

impl Circuit2 {
    pub fn new(spec: GaussianCircuitSpec2) -> Result<Self> {
        let flat = Circuit::new(spec.flatten()?)?;
        let r_list = spec.t_list().iter().map(|&t| r_from_transmissivity(t)).collect();
        Ok(Self { spec, flat, r_list })
    }

    pub fn spec(&self) -> &GaussianCircuitSpec2 {
        &self.spec
    }

    /// The same device as a single-side circuit on `M` modes per side.
    pub fn flat(&self) -> &Circuit {
        &self.flat
    }

    pub fn r_list(&self) -> &[f64] {
        &self.r_list
    }

    fn half_modes(&self) -> usize {
        self.r_list.len()
    }

    /// `p(k, m, k', m')` with `k`, `k'` at the outputs of `V_A`, `V'_A` and
    /// `m`, `m'` at the outputs of `V_B`, `V'_B`.
    pub fn joint_probability_2(
        &self,
        k: &OccupationPattern,
        m: &OccupationPattern,
        k_prime: &OccupationPattern,
        m_prime: &OccupationPattern,
    ) -> Result<f64> {
        for p in [k, m, k_prime, m_prime] {
            if p.modes() != self.half_modes() {
                return Err(Error::ModeMismatch {
                    expected: self.half_modes(),
                    found: p.modes(),
                });
            }
        }
        self.flat
            .joint_probability(&interleave_halves(k, k_prime), &interleave_halves(m, m_prime))
    }

    /// `A(k, m, k', m')`, the prefactor for `N_A = |k| + |k'|`, `N_B = |m| + |m'|`.
    pub fn prefactor(&self, n_a: u32, n_b: u32) -> f64 {
        self.flat.prefactor_a(n_a, n_b)
    }

    /// `|<k| V (⊗_j S(±r_j)) W^T |m>|^2` for one half of the split circuit.
    pub fn conditional(&self, half: Half, k: &OccupationPattern, m: &OccupationPattern) -> Result<f64> {
        self.conditional_with_signs(half, &alloc::vec![half.sign(); self.half_modes()], k, m)
    }

    /// As [`conditional`](Self::conditional) with an explicit squeezing sign
    /// per mode, used to confirm that only the documented assignment
    /// reproduces the device statistics.
    pub fn conditional_with_signs(
        &self,
        half: Half,
        signs: &[f64],
        k: &OccupationPattern,
        m: &OccupationPattern,
    ) -> Result<f64> {
        let (v_a, v_b) = self.unitaries(half);
        single_mode_conditional(v_a, v_b, &self.r_list, signs, k, m)
    }

    /// `half` with the squeezer matrices tabulated up to `max_photons`, for
    /// evaluating many conditionals.
    pub fn half_circuit(&self, half: Half, max_photons: u32) -> Result<HalfCircuit> {
        let (v_a, v_b) = self.unitaries(half);
        HalfCircuit::new(
            v_a,
            v_b,
            &self.r_list,
            &alloc::vec![half.sign(); self.half_modes()],
            max_photons,
        )
    }

    fn unitaries(&self, half: Half) -> (&PassiveUnitary, &PassiveUnitary) {
        let [v_a, v_a_prime, v_b, v_b_prime] = self.spec.unitaries();
        match half {
            Half::Unprimed => (v_a, v_b),
            Half::Primed => (v_a_prime, v_b_prime),
        }
    }
}

/// One half of a split circuit, `V_A (⊗_j S(s_j r_j)) V_B^T`, with the
/// squeezer matrices tabulated once for patterns of up to `max_photons`
/// photons.
#[derive(Clone, Debug)]
pub struct HalfCircuit {
    v_a: PassiveUnitary,
    v_b_t: PassiveUnitary,
    squeezers: Vec<DMatrix<f64>>,
    max_photons: u32,
}

impl HalfCircuit {
    pub fn new(
        v_a: &PassiveUnitary,
        v_b: &PassiveUnitary,
        r_list: &[f64],
        signs: &[f64],
        max_photons: u32,
    ) -> Result<Self> {
        let h = r_list.len();
        for found in [v_a.dimension(), v_b.dimension(), signs.len()] {
            if found != h {
                return Err(Error::ModeMismatch { expected: h, found });
            }
        }
        let squeezers = r_list
            .iter()
            .zip(signs)
            .map(|(&r, &s)| ss_matrix(s * r, max_photons as usize + 1))
            .collect::<Result<_>>()?;
        Ok(Self {
            v_a: v_a.clone(),
            v_b_t: v_b.transpose(),
            squeezers,
            max_photons,
        })
    }

    /// `|<k| V_A (⊗_j S(s_j r_j)) V_B^T |m>|^2` from Fock elements.
    pub fn conditional(&self, k: &OccupationPattern, m: &OccupationPattern) -> Result<f64> {
        let h = self.squeezers.len();
        for p in [k, m] {
            if p.modes() != h {
                return Err(Error::ModeMismatch {
                    expected: h,
                    found: p.modes(),
                });
            }
            if p.total() > self.max_photons {
                return Err(Error::CutoffTooSmall {
                    cutoff: self.max_photons as usize,
                    index: p.total() as usize,
                });
            }
        }
        let b_side: Vec<(OccupationPattern, Complex64)> = enumerate_shell(h, m.total())
            .into_iter()
            .map(|p| matrix_element(self.v_b_t.matrix(), &p, m).map(|e| (p, e)))
            .collect::<Result<_>>()?;

        let mut amp = Complex64::new(0.0, 0.0);
        for q in enumerate_shell(h, k.total()) {
            let mut x = Complex64::new(0.0, 0.0);
            for (p, e) in &b_side {
                let s: f64 = (0..h)
                    .map(|j| self.squeezers[j][(q.counts()[j] as usize, p.counts()[j] as usize)])
                    .product();
                x += e * s;
            }
            if x != Complex64::new(0.0, 0.0) {
                amp += matrix_element(self.v_a.matrix(), k, &q)? * x;
            }
        }
        Ok(amp.norm_sqr())
    }
}

/// `|<k| V_A (⊗_j S(s_j r_j)) V_B^T |m>|^2` for a single pair of patterns.
pub fn single_mode_conditional(
    v_a: &PassiveUnitary,
    v_b: &PassiveUnitary,
    r_list: &[f64],
    signs: &[f64],
    k: &OccupationPattern,
    m: &OccupationPattern,
) -> Result<f64> {
    HalfCircuit::new(v_a, v_b, r_list, signs, k.total().max(m.total()))?.conditional(k, m)
}
