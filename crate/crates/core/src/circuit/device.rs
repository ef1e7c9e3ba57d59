use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::spec::{a_mode, b_mode, interleave, GaussianCircuitSpec};
use crate::error::{Error, Result};
use crate::fock::{enumerate_shell, FockAmplitudeMap, OccupationPattern};
use crate::ops::{matrix_element, tms_state, CMatrix, PassiveUnitary};
#[allow(unused_imports)]
use num_traits::Float;

/// Row of balanced beam splitters on local pairs `(2j, 2j + 1)` of one side.
pub fn balanced_row(modes: usize) -> PassiveUnitary {
    let bs = PassiveUnitary::beam_splitter(0.5).expect("t = 1/2 is valid");
    let mut m = CMatrix::identity(modes, modes);
    for j in 0..modes / 2 {
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            m[(2 * j + a, 2 * j + b)] = bs.matrix()[(a, b)];
        }
    }
    PassiveUnitary::new(m).expect("direct sum of unitaries")
}

fn embed_side(u: &PassiveUnitary, map: fn(usize) -> usize, acc: &mut CMatrix) {
    for i in 0..u.dimension() {
        for j in 0..u.dimension() {
            acc[(map(i), map(j))] = u.matrix()[(i, j)];
        }
    }
}

/// The `2M`-mode mode matrix of `U_G`: coupling beam splitters, then the
/// balanced rows, then `U_A` and `U_B`, wired as documented in
/// [`crate::circuit::spec`].
pub fn build_ug_mode_matrix(spec: &GaussianCircuitSpec) -> Result<PassiveUnitary> {
    let m = spec.modes();
    let total = 2 * m;

    let mut coupling = CMatrix::identity(total, total);
    for (j, &t) in spec.t_list().iter().enumerate() {
        let bs = PassiveUnitary::beam_splitter(t)?;
        let (p, q) = (4 * j + 1, 4 * j + 2);
        coupling[(p, p)] = bs.matrix()[(0, 0)];
        coupling[(p, q)] = bs.matrix()[(0, 1)];
        coupling[(q, p)] = bs.matrix()[(1, 0)];
        coupling[(q, q)] = bs.matrix()[(1, 1)];
    }

    let row = balanced_row(m);
    let mut rows = CMatrix::zeros(total, total);
    embed_side(&row, a_mode, &mut rows);
    embed_side(&row, b_mode, &mut rows);

    let mut sides = CMatrix::zeros(total, total);
    embed_side(spec.u_a(), a_mode, &mut sides);
    embed_side(spec.u_b(), b_mode, &mut sides);

    PassiveUnitary::new(sides * rows * coupling)
}

/// A specification compiled into its mode matrices.
#[derive(Clone, Debug)]
pub struct Circuit {
    spec: GaussianCircuitSpec,
    ug: PassiveUnitary,
    w_a: PassiveUnitary,
    w_b: PassiveUnitary,
    w_b_t: PassiveUnitary,
}

impl Circuit {
    pub fn new(spec: GaussianCircuitSpec) -> Result<Self> {
        let ug = build_ug_mode_matrix(&spec)?;
        let row = balanced_row(spec.modes());
        let w_a = spec.u_a().compose(&row)?;
        let w_b = spec.u_b().compose(&row)?;
        let w_b_t = w_b.transpose();
        Ok(Self {
            spec,
            ug,
            w_a,
            w_b,
            w_b_t,
        })
    }

    pub fn spec(&self) -> &GaussianCircuitSpec {
        &self.spec
    }

    pub fn modes(&self) -> usize {
        self.spec.modes()
    }

    /// `U_G` on all `2M` physical modes.
    pub fn ug(&self) -> &PassiveUnitary {
        &self.ug
    }

    /// `W_A = U_A · (balanced row)`.
    pub fn w_a(&self) -> &PassiveUnitary {
        &self.w_a
    }

    /// `W_B = U_B · (balanced row)`.
    pub fn w_b(&self) -> &PassiveUnitary {
        &self.w_b
    }

    pub(crate) fn w_b_transpose(&self) -> &PassiveUnitary {
        &self.w_b_t
    }

    /// Product of `M` two-mode squeezed vacua at the spec cutoff.
    pub fn input_state(&self) -> Result<FockAmplitudeMap> {
        input_state(&self.spec, self.spec.cutoff())
    }

    fn check_side(&self, p: &OccupationPattern) -> Result<()> {
        if p.modes() != self.modes() {
            return Err(Error::ModeMismatch {
                expected: self.modes(),
                found: p.modes(),
            });
        }
        Ok(())
    }

    /// `p(k, m) = |<k, m| U_G |psi_in>|^2` with the sources truncated at the
    /// spec cutoff. Only inputs with `2 |n| = N_A + N_B` contribute.
    pub fn joint_probability(&self, k: &OccupationPattern, m: &OccupationPattern) -> Result<f64> {
        self.check_side(k)?;
        self.check_side(m)?;
        let modes = self.modes();
        let cutoff = self.spec.cutoff();
        let detected = k.total() + m.total();
        if detected % 2 == 1 || detected as usize > 2 * modes * cutoff as usize {
            return Ok(0.0);
        }
        let n = detected / 2;
        let xi = self.spec.xi();
        let weight = (1.0 - xi * xi).powf(modes as f64 / 2.0) * xi.powi(n as i32);
        if weight == 0.0 {
            return Ok(0.0);
        }
        let out = interleave(k, m);
        let mut amp = Complex64::new(0.0, 0.0);
        for sources in enumerate_shell(modes, n) {
            if sources.max_entry() > cutoff {
                continue;
            }
            let inp = source_pattern(&sources);
            amp += matrix_element(self.ug.matrix(), &out, &inp)?;
        }
        Ok((amp * weight).norm_sqr())
    }

    /// `A = (1 - xi^2)^M xi^(N_A + N_B) / prod t_j`.
    pub fn prefactor_a(&self, n_a: u32, n_b: u32) -> f64 {
        prefactor_a(&self.spec, n_a, n_b)
    }
}

/// Physical input pattern `(n_0, n_0, n_1, n_1, ...)` for source photon numbers `n`.
pub fn source_pattern(sources: &OccupationPattern) -> OccupationPattern {
    let counts: Vec<u32> = sources.counts().iter().flat_map(|&c| [c, c]).collect();
    OccupationPattern::new(counts)
}

/// `⊗_i |psi_i>` over the `M` sources, each truncated at `cutoff`.
pub fn input_state(spec: &GaussianCircuitSpec, cutoff: u32) -> Result<FockAmplitudeMap> {
    let single = tms_state(spec.xi(), cutoff)?;
    let mut state = single.clone();
    for _ in 1..spec.modes() {
        state = state.tensor(&single);
    }
    Ok(state)
}

/// `A = (1 - xi^2)^M xi^(N_A + N_B) / prod t_j`.
pub fn prefactor_a(spec: &GaussianCircuitSpec, n_a: u32, n_b: u32) -> f64 {
    let xi = spec.xi();
    let prod_t: f64 = spec.t_list().iter().product();
    (1.0 - xi * xi).powi(spec.modes() as i32) * xi.powi((n_a + n_b) as i32) / prod_t
}
