use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::{check_transmissivity, check_xi, max_abs, CMatrix};
use crate::phase_space::symplectic::{sigma, SymplecticMatrix};
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on Hermiticity of a covariance matrix, per entry.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Most negative eigenvalue of `sigma + Sigma/2` accepted as physical.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-10;

/// Covariance matrix `sigma_ij = <{R_i, R_j†}>/2` of a zero-mean Gaussian
/// state, in the basis `(a_1 .. a_M, a_1† .. a_M†)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    modes: usize,
    matrix: CMatrix,
}

impl CovarianceMatrix {
    /// Validates Hermiticity and the uncertainty relation `sigma + Sigma/2 >= 0`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows % 2 != 0 {
            return Err(Error::OddDimension(rows));
        }
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > HERMITIAN_TOLERANCE {
            return Err(Error::Unphysical(alloc::format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let shifted = &matrix + sigma(rows / 2) * Complex64::new(0.5, 0.0);
        let min_eig = shifted
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -PHYSICALITY_TOLERANCE {
            return Err(Error::Unphysical(alloc::format!(
                "sigma + Sigma/2 has eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self {
            modes: rows / 2,
            matrix,
        })
    }

    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self {
            modes: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::from_trusted(CMatrix::identity(2 * modes, 2 * modes) * Complex64::new(0.5, 0.0))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `sigma_out = S sigma S^dagger`.
pub fn evolve_covariance(s: &SymplecticMatrix, sigma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if s.modes() != sigma.modes() {
        return Err(Error::ModeMismatch {
            expected: s.modes(),
            found: sigma.modes(),
        });
    }
    let out = s.matrix() * sigma.matrix() * s.matrix().adjoint();
    // Restore exact Hermiticity lost to rounding.
    let out = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(CovarianceMatrix::from_trusted(out))
}

/// Covariance of the `M` modes entering the B-side circuit: for each pair of
/// squeezed sources joined by a coupling beam splitter `t_j`, a block with
/// `cosh 2r / 2` on the diagonal and `sqrt(1 - t_j) sinh 2r / 2` on the
/// anti-diagonal corners, where `tanh r = xi`.
///
/// Pair `j` occupies local modes `2j, 2j + 1`.
pub fn sigma_b(xi: f64, t_list: &[f64]) -> Result<CovarianceMatrix> {
    check_xi(xi)?;
    for &t in t_list {
        check_transmissivity(t)?;
    }
    let m = 2 * t_list.len();
    let r = xi.atanh();
    let diag = (2.0 * r).cosh() / 2.0;
    let mut s = CMatrix::zeros(2 * m, 2 * m);
    for (j, &t) in t_list.iter().enumerate() {
        let corner = Complex64::new((1.0 - t).sqrt() * (2.0 * r).sinh() / 2.0, 0.0);
        let idx = [2 * j, 2 * j + 1, m + 2 * j, m + 2 * j + 1];
        for &i in &idx {
            s[(i, i)] = Complex64::new(diag, 0.0);
        }
        for (a, b) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            s[(idx[a], idx[b])] = corner;
        }
    }
    CovarianceMatrix::new(s)
}
