use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::ops::param::check_transmissivity;
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on `U U^dagger = I`, per entry.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

/// Mode-transformation matrix of a passive linear-optical circuit.
///
/// Acts on creation operators as `a_j^dagger -> sum_i U[i, j] a_i^dagger`, so
/// matrix products correspond to operator products.
#[derive(Clone, Debug, PartialEq)]
pub struct PassiveUnitary(CMatrix);

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub(crate) fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m * m.adjoint() - CMatrix::identity(n, n)))
}

impl PassiveUnitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARITY_TOLERANCE)
    }

    pub fn with_tolerance(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::ModeMismatch { expected: 1, found: 0 });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= tolerance) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix that is unitary by construction.
    #[cfg(test)]
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(unitarity_deviation(&matrix) < 1e-9);
        Self(matrix)
    }

    pub fn identity(modes: usize) -> Self {
        Self(CMatrix::identity(modes, modes))
    }

    /// The real beam-splitter matrix `[[sqrt t, sqrt(1-t)], [-sqrt(1-t), sqrt t]]`.
    pub fn beam_splitter(t: f64) -> Result<Self> {
        check_transmissivity(t)?;
        Ok(Self(beam_splitter_block(t)))
    }

    /// Unitary discrete Fourier transform, `U[j, k] = exp(2 pi i jk / M) / sqrt M`.
    pub fn dft(modes: usize) -> Self {
        let norm = 1.0 / (modes as f64).sqrt();
        Self(CMatrix::from_fn(modes, modes, |j, k| {
            let phase = 2.0 * PI * ((j * k) % modes) as f64 / modes as f64;
            Complex64::from_polar(norm, phase)
        }))
    }

    /// Haar-random unitary via QR of a complex Ginibre matrix with the
    /// diagonal phases of `R` divided out.
    pub fn haar_random<R: Rng + ?Sized>(modes: usize, rng: &mut R) -> Self {
        let z = CMatrix::from_fn(modes, modes, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
        });
        let qr = z.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..modes {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..modes {
                q[(i, j)] *= phase;
            }
        }
        Self(q)
    }

    /// Embeds a 2x2 unitary acting on modes `(p, q)` of an `modes`-mode circuit.
    pub fn embed_two_mode(modes: usize, p: usize, q: usize, block: &PassiveUnitary) -> Result<Self> {
        if block.dimension() != 2 {
            return Err(Error::ModeMismatch {
                expected: 2,
                found: block.dimension(),
            });
        }
        if p == q || p >= modes || q >= modes {
            return Err(Error::InvalidPattern(alloc::format!(
                "modes ({p}, {q}) are not two distinct modes of {modes}"
            )));
        }
        let mut m = CMatrix::identity(modes, modes);
        let b = block.matrix();
        m[(p, p)] = b[(0, 0)];
        m[(p, q)] = b[(0, 1)];
        m[(q, p)] = b[(1, 0)];
        m[(q, q)] = b[(1, 1)];
        Ok(Self(m))
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dimension(), other.dimension());
        let mut m = CMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.0);
        m.view_mut((a, a), (b, b)).copy_from(&other.0);
        Self(m)
    }

    /// Places the matrix on the given modes of a larger identity.
    pub fn embed(&self, modes: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.dimension() {
            return Err(Error::ModeMismatch {
                expected: self.dimension(),
                found: targets.len(),
            });
        }
        let mut m = CMatrix::identity(modes, modes);
        for (a, &i) in targets.iter().enumerate() {
            for (b, &j) in targets.iter().enumerate() {
                m[(i, j)] = self.0[(a, b)];
            }
        }
        Self::new(m)
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dimension() != other.dimension() {
            return Err(Error::ModeMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }

    /// Rows of the matrix as `(re, im)` pairs, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.dimension())
            .map(|i| self.0.row(i).iter().map(|z| (z.re, z.im)).collect())
            .collect()
    }
}

pub(crate) fn beam_splitter_block(t: f64) -> CMatrix {
    let (a, b) = (t.sqrt(), (1.0 - t).sqrt());
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(-b, 0.0),
            Complex64::new(a, 0.0),
        ],
    )
}
