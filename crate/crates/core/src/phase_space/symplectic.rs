use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ops::{max_abs, unitarity_deviation, CMatrix, PassiveUnitary, SqueezerParam};
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on `S Sigma S^dagger = Sigma`, per entry.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-10;

/// `Sigma = diag(I_M, -I_M)`.
pub fn sigma(modes: usize) -> CMatrix {
    CMatrix::from_fn(2 * modes, 2 * modes, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i < modes {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    })
}

/// Phase-space matrix of a Gaussian unitary in the basis
/// `(a_1 .. a_M, a_1† .. a_M†)`, mapping input to output mode operators.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    modes: usize,
    matrix: CMatrix,
}

impl SymplecticMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, SYMPLECTIC_TOLERANCE)
    }

    pub fn with_tolerance(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows % 2 != 0 {
            return Err(Error::OddDimension(rows));
        }
        let deviation = symplectic_deviation(&matrix);
        if !(deviation <= tolerance) {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self {
            modes: rows / 2,
            matrix,
        })
    }

    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(symplectic_deviation(&matrix) < 1e-8);
        Self {
            modes: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn identity(modes: usize) -> Self {
        Self::from_trusted(CMatrix::identity(2 * modes, 2 * modes))
    }

    /// `diag(U, conj U)` for a passive circuit.
    pub fn from_passive(u: &PassiveUnitary) -> Self {
        let m = u.dimension();
        let mut s = CMatrix::zeros(2 * m, 2 * m);
        s.view_mut((0, 0), (m, m)).copy_from(u.matrix());
        s.view_mut((m, m), (m, m)).copy_from(&u.matrix().map(|z| z.conj()));
        Self::from_trusted(s)
    }

    /// Direct sum of single-mode squeezers `S_SS(r_j)`, one per mode.
    pub fn squeezers(r_list: &[f64]) -> Self {
        let m = r_list.len();
        let mut s = CMatrix::identity(2 * m, 2 * m);
        for (j, &r) in r_list.iter().enumerate() {
            let (c, sh) = (Complex64::new(r.cosh(), 0.0), Complex64::new(r.sinh(), 0.0));
            s[(j, j)] = c;
            s[(j + m, j + m)] = c;
            s[(j, j + m)] = sh;
            s[(j + m, j)] = sh;
        }
        Self::from_trusted(s)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Upper-left and upper-right `M x M` blocks `(alpha, beta)`.
    pub fn blocks(&self) -> (CMatrix, CMatrix) {
        let m = self.modes;
        (
            self.matrix.view((0, 0), (m, m)).into_owned(),
            self.matrix.view((0, m), (m, m)).into_owned(),
        )
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch {
                expected: self.modes,
                found: other.modes,
            });
        }
        Ok(Self::from_trusted(&self.matrix * &other.matrix))
    }

    /// `S^-1 = Sigma S^dagger Sigma`.
    pub fn inverse(&self) -> Self {
        let s = sigma(self.modes);
        Self::from_trusted(&s * self.matrix.adjoint() * &s)
    }

    /// Places a `k`-mode matrix on the given modes of an `modes`-mode identity.
    pub fn embed(&self, modes: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.modes {
            return Err(Error::ModeMismatch {
                expected: self.modes,
                found: targets.len(),
            });
        }
        if targets.iter().any(|&t| t >= modes) || (1..targets.len()).any(|i| targets[..i].contains(&targets[i])) {
            return Err(Error::InvalidPattern(alloc::format!(
                "target modes {targets:?} are not distinct modes of {modes}"
            )));
        }
        let k = self.modes;
        let global = |a: usize| if a < k { targets[a] } else { targets[a - k] + modes };
        let mut s = CMatrix::identity(2 * modes, 2 * modes);
        for a in 0..2 * k {
            for b in 0..2 * k {
                s[(global(a), global(b))] = self.matrix[(a, b)];
            }
        }
        Ok(Self::from_trusted(s))
    }

    pub fn symplectic_deviation(&self) -> f64 {
        symplectic_deviation(&self.matrix)
    }

    /// Largest deviation from the passive form `diag(U, conj U)` with `U`
    /// unitary: off-diagonal blocks, conjugate pairing and unitarity.
    pub fn passivity_deviation(&self) -> f64 {
        let m = self.modes;
        let (alpha, beta) = self.blocks();
        let lower_left = self.matrix.view((m, 0), (m, m)).into_owned();
        let lower_right = self.matrix.view((m, m), (m, m)).into_owned();
        max_abs(&beta)
            .max(max_abs(&lower_left))
            .max(max_abs(&(lower_right - alpha.map(|z| z.conj()))))
            .max(unitarity_deviation(&alpha))
    }

    pub fn is_passive(&self, tolerance: f64) -> bool {
        self.passivity_deviation() <= tolerance
    }

    /// The unitary block of a passive matrix.
    pub fn passive_block(&self, tolerance: f64) -> Result<PassiveUnitary> {
        let deviation = self.passivity_deviation();
        if deviation > tolerance {
            return Err(Error::NotUnitary { deviation });
        }
        PassiveUnitary::with_tolerance(self.blocks().0, tolerance)
    }

    /// Deviation from the block form `[[a, b], [conj b, conj a]]` shared by
    /// all phase-space matrices of Gaussian unitaries.
    pub fn block_form_deviation(&self) -> f64 {
        block_form_deviation(&self.matrix)
    }
}

pub(crate) fn block_form_deviation(s: &CMatrix) -> f64 {
    let m = s.nrows() / 2;
    let mut dev: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            dev = dev
                .max((s[(i + m, j + m)] - s[(i, j)].conj()).norm())
                .max((s[(i + m, j)] - s[(i, j + m)].conj()).norm());
        }
    }
    dev
}

pub(crate) fn symplectic_deviation(s: &CMatrix) -> f64 {
    let sig = sigma(s.nrows() / 2);
    max_abs(&(s * &sig * s.adjoint() - &sig))
}

/// The phase-space matrix of a primitive: the real `diag(U_BS, U_BS)` for a
/// beam splitter, the displayed four-by-four two-mode squeezer of gain `g`,
/// and `[[cosh r, sinh r], [sinh r, cosh r]]` for a single-mode squeezer.
pub fn symplectic_primitive(param: SqueezerParam) -> Result<SymplecticMatrix> {
    let re = |x: f64| Complex64::new(x, 0.0);
    match param {
        SqueezerParam::BeamSplitter { t } => Ok(SymplecticMatrix::from_passive(&PassiveUnitary::beam_splitter(t)?)),
        SqueezerParam::TwoModeSqueezer { g } => {
            SqueezerParam::two_mode_squeezer(g)?;
            let (a, b) = (g.sqrt(), (g - 1.0).sqrt());
            #[rustfmt::skip]
            let m = CMatrix::from_row_slice(4, 4, &[
                re(a), re(0.0), re(0.0), re(b),
                re(0.0), re(a), re(b), re(0.0),
                re(0.0), re(b), re(a), re(0.0),
                re(b), re(0.0), re(0.0), re(a),
            ]);
            Ok(SymplecticMatrix::from_trusted(m))
        }
        SqueezerParam::SingleModeSqueezer { r } => {
            SqueezerParam::single_mode_squeezer(r)?;
            Ok(SymplecticMatrix::squeezers(&[r]))
        }
    }
}

/// Product of `steps` random primitives (beam splitters, phase shifters,
/// two-mode and single-mode squeezers) on random modes.
pub fn random_symplectic<R: Rng + ?Sized>(modes: usize, steps: usize, rng: &mut R) -> SymplecticMatrix {
    let mut acc = SymplecticMatrix::identity(modes);
    for _ in 0..steps {
        let kind = if modes >= 2 {
            rng.random_range(0..4)
        } else {
            rng.random_range(2..4)
        };
        let step = match kind {
            0 | 1 => {
                let p = rng.random_range(0..modes);
                let mut q = rng.random_range(0..modes - 1);
                if q >= p {
                    q += 1;
                }
                let prim = if kind == 0 {
                    symplectic_primitive(SqueezerParam::BeamSplitter {
                        t: rng.random_range(0.05..1.0),
                    })
                } else {
                    symplectic_primitive(SqueezerParam::TwoModeSqueezer {
                        g: rng.random_range(1.0..2.5),
                    })
                };
                prim.and_then(|s| s.embed(modes, &[p, q]))
            }
            2 => {
                let p = rng.random_range(0..modes);
                let phase = Complex64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU));
                let mut u = CMatrix::identity(modes, modes);
                u[(p, p)] = phase;
                Ok(SymplecticMatrix::from_passive(
                    &PassiveUnitary::new(u).expect("phase shift"),
                ))
            }
            _ => {
                let p = rng.random_range(0..modes);
                symplectic_primitive(SqueezerParam::SingleModeSqueezer {
                    r: rng.random_range(-0.8..0.8),
                })
                .and_then(|s| s.embed(modes, &[p]))
            }
        };
        let step = step.expect("primitive parameters are drawn in range");
        acc = SymplecticMatrix::from_trusted(step.matrix() * acc.matrix());
    }
    acc
}
