//! Circuit descriptions and the mode-wiring convention.
//!
//! Physical modes are numbered `0 .. 2M`. Two-mode squeezed source `i`
//! occupies modes `(2i, 2i + 1)`, upper leg first. Sources are grouped in
//! pairs `(2j, 2j + 1)`; the coupling beam splitter `t_j` takes the lower leg
//! of the first source (mode `4j + 1`) as its first input and the upper leg
//! of the second (mode `4j + 2`) as its second.
//!
//! The A side consists of the even physical modes (local mode `l` is physical
//! `2l`) and the B side of the odd ones (local `l` is physical `2l + 1`). For
//! pair `j`, A-local modes `(2j, 2j + 1)` are the free upper leg and the
//! second coupling output; B-local modes `(2j, 2j + 1)` are the first
//! coupling output and the free lower leg. A balanced beam splitter acts on
//! each local pair `(2j, 2j + 1)` of both sides before `U_A` and `U_B`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fock::OccupationPattern;
use crate::ops::{check_transmissivity, check_xi, PassiveUnitary};

/// Physical mode of A-side local mode `l`.
pub fn a_mode(l: usize) -> usize {
    2 * l
}

/// Physical mode of B-side local mode `l`.
pub fn b_mode(l: usize) -> usize {
    2 * l + 1
}

/// Interleaves A-side and B-side patterns into a physical pattern.
pub fn interleave(k: &OccupationPattern, m: &OccupationPattern) -> OccupationPattern {
    let mut out = alloc::vec![0u32; k.modes() + m.modes()];
    for (l, &c) in k.counts().iter().enumerate() {
        out[a_mode(l)] = c;
    }
    for (l, &c) in m.counts().iter().enumerate() {
        out[b_mode(l)] = c;
    }
    OccupationPattern::new(out)
}

/// Splits a physical pattern into its A-side and B-side parts.
pub fn deinterleave(physical: &OccupationPattern) -> (OccupationPattern, OccupationPattern) {
    let c = physical.counts();
    let k = c.iter().step_by(2).copied().collect();
    let m = c.iter().skip(1).step_by(2).copied().collect();
    (OccupationPattern::new(k), OccupationPattern::new(m))
}

/// Description of a simulated `M`-mode Gaussian circuit: squeezing `xi`,
/// coupling transmissivities `t_j`, the passive circuits `U_A`, `U_B`, and
/// the per-mode Fock cutoff of the squeezed sources.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianCircuitSpec {
    xi: f64,
    t_list: Vec<f64>,
    u_a: PassiveUnitary,
    u_b: PassiveUnitary,
    cutoff: u32,
}

impl GaussianCircuitSpec {
    pub fn new(xi: f64, t_list: Vec<f64>, u_a: PassiveUnitary, u_b: PassiveUnitary, cutoff: u32) -> Result<Self> {
        check_xi(xi)?;
        for &t in &t_list {
            check_transmissivity(t)?;
        }
        let m = 2 * t_list.len();
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "t_list",
                value: 0.0,
                reason: "at least one coupling beam splitter is required",
            });
        }
        for u in [&u_a, &u_b] {
            if u.dimension() != m {
                return Err(Error::ModeMismatch {
                    expected: m,
                    found: u.dimension(),
                });
            }
        }
        if cutoff == 0 {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                value: 0.0,
                reason: "cutoff must be at least 1",
            });
        }
        Ok(Self {
            xi,
            t_list,
            u_a,
            u_b,
            cutoff,
        })
    }

    /// Number of simulated modes `M` (even).
    pub fn modes(&self) -> usize {
        2 * self.t_list.len()
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn t_list(&self) -> &[f64] {
        &self.t_list
    }

    pub fn u_a(&self) -> &PassiveUnitary {
        &self.u_a
    }

    pub fn u_b(&self) -> &PassiveUnitary {
        &self.u_b
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                value: 0.0,
                reason: "cutoff must be at least 1",
            });
        }
        self.cutoff = cutoff;
        Ok(self)
    }
}

/// Variant in which each side runs two disjoint `M/2`-mode circuits: `V_A`
/// on the even A-local modes and `V'_A` on the odd ones, likewise for B.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianCircuitSpec2 {
    xi: f64,
    t_list: Vec<f64>,
    v_a: PassiveUnitary,
    v_a_prime: PassiveUnitary,
    v_b: PassiveUnitary,
    v_b_prime: PassiveUnitary,
    cutoff: u32,
}

impl GaussianCircuitSpec2 {
    pub fn new(
        xi: f64,
        t_list: Vec<f64>,
        [v_a, v_a_prime, v_b, v_b_prime]: [PassiveUnitary; 4],
        cutoff: u32,
    ) -> Result<Self> {
        let half = t_list.len();
        for v in [&v_a, &v_a_prime, &v_b, &v_b_prime] {
            if v.dimension() != half {
                return Err(Error::ModeMismatch {
                    expected: half,
                    found: v.dimension(),
                });
            }
        }
        let spec = Self {
            xi,
            t_list,
            v_a,
            v_a_prime,
            v_b,
            v_b_prime,
            cutoff,
        };
        spec.flatten()?;
        Ok(spec)
    }

    pub fn modes(&self) -> usize {
        2 * self.t_list.len()
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn t_list(&self) -> &[f64] {
        &self.t_list
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `(V_A, V'_A, V_B, V'_B)`.
    pub fn unitaries(&self) -> [&PassiveUnitary; 4] {
        [&self.v_a, &self.v_a_prime, &self.v_b, &self.v_b_prime]
    }

    /// The equivalent single-side specification with `U_A` acting as `V_A`
    /// on even local modes and `V'_A` on odd ones (same for B).
    pub fn flatten(&self) -> Result<GaussianCircuitSpec> {
        let join = |v: &PassiveUnitary, w: &PassiveUnitary| {
            let h = v.dimension();
            let mut m = crate::ops::CMatrix::zeros(2 * h, 2 * h);
            for i in 0..h {
                for j in 0..h {
                    m[(2 * i, 2 * j)] = v.matrix()[(i, j)];
                    m[(2 * i + 1, 2 * j + 1)] = w.matrix()[(i, j)];
                }
            }
            PassiveUnitary::new(m)
        };
        GaussianCircuitSpec::new(
            self.xi,
            self.t_list.clone(),
            join(&self.v_a, &self.v_a_prime)?,
            join(&self.v_b, &self.v_b_prime)?,
            self.cutoff,
        )
    }
}

/// Interleaves an unprimed and a primed half-pattern into a local pattern:
/// `out[2i] = even[i]`, `out[2i + 1] = odd[i]`.
pub fn interleave_halves(even: &OccupationPattern, odd: &OccupationPattern) -> OccupationPattern {
    let mut out = Vec::with_capacity(even.modes() + odd.modes());
    for (a, b) in even.counts().iter().zip(odd.counts()) {
        out.push(*a);
        out.push(*b);
    }
    OccupationPattern::new(out)
}
