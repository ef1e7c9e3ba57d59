use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::{max_abs, CMatrix, PassiveUnitary};
use crate::phase_space::symplectic::{SymplecticMatrix, SYMPLECTIC_TOLERANCE};
#[allow(unused_imports)]
use num_traits::Float;

/// Reconstruction tolerance of [`bloch_messiah`].
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;
/// `tanh r` below this is treated as no squeezing.
const ZERO_TANH: f64 = 1e-11;
/// Entries below this magnitude are skipped when fixing column phases.
const PHASE_PIVOT: f64 = 1e-9;

/// `S = S1 [⊕_j S_SS(r_j)] S2` with passive `S1`, `S2`.
#[derive(Clone, Debug)]
pub struct BlochMessiahFactors {
    pub s1: SymplecticMatrix,
    /// Squeezing degrees, non-negative and sorted in descending order.
    pub r_list: Vec<f64>,
    pub s2: SymplecticMatrix,
    /// `max |S - S1 D S2|` of the returned factors.
    pub residual: f64,
}

impl BlochMessiahFactors {
    pub fn squeezers(&self) -> SymplecticMatrix {
        SymplecticMatrix::squeezers(&self.r_list)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.s1.matrix() * self.squeezers().matrix() * self.s2.matrix()
    }
}

/// Bloch–Messiah decomposition through a Takagi factorization.
///
/// With `alpha = U C V` and `beta = U Sh conj(V)`, the complex symmetric
/// matrix `Z = alpha^-1 beta` equals `W tanh(R) W^T` with `W = V†`. Given
/// `W`, `alpha W + beta conj(W) = U e^R`, so the column norms give `r`
/// without the cancellation of `acosh` near `r = 0` or `atanh` near
/// `tanh r = 1`, and normalizing the columns gives `U`. No clustering of
/// degenerate values is needed: any Takagi basis of a degenerate subspace
/// yields a valid `U`. Unsqueezed directions are put in column-echelon form
/// with real positive pivots.
pub fn bloch_messiah(s: &SymplecticMatrix) -> Result<BlochMessiahFactors> {
    let deviation = s.symplectic_deviation();
    if deviation > SYMPLECTIC_TOLERANCE {
        return Err(Error::NotSymplectic { deviation });
    }
    let deviation = s.block_form_deviation();
    if deviation > SYMPLECTIC_TOLERANCE {
        return Err(Error::NotBlockForm { deviation });
    }
    let m = s.modes();
    let (alpha, beta) = s.blocks();

    // alpha^dagger alpha = I + beta^T conj(beta) >= I, so alpha is invertible.
    let z = alpha.clone().lu().solve(&beta).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);
    let (w, _) = takagi(&z, &alpha);

    let mut u = &alpha * &w + &beta * w.conjugate();
    let mut r = alloc::vec![0.0; m];
    for j in 0..m {
        let norm = u.column(j).norm();
        r[j] = norm.ln().max(0.0);
        u.column_mut(j).unscale_mut(norm);
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| r[b].total_cmp(&r[a]));
    let u = CMatrix::from_fn(m, m, |i, j| u[(i, order[j])]);
    let v = CMatrix::from_fn(m, m, |i, j| w[(j, order[i])].conj());
    let r_list: Vec<f64> = order.iter().map(|&i| r[i]).collect();

    let s1 = SymplecticMatrix::from_passive(&PassiveUnitary::with_tolerance(u, 1e-10)?);
    let s2 = SymplecticMatrix::from_passive(&PassiveUnitary::with_tolerance(v, 1e-10)?);
    let mut factors = BlochMessiahFactors {
        s1,
        r_list,
        s2,
        residual: 0.0,
    };
    factors.residual = max_abs(&(factors.reconstruct() - s.matrix()));
    if factors.residual > RECONSTRUCTION_TOLERANCE {
        return Err(Error::Consistency {
            check: "Bloch-Messiah reconstruction",
            residual: factors.residual,
            tolerance: RECONSTRUCTION_TOLERANCE,
        });
    }
    Ok(factors)
}

/// Takagi factorization `b = Q diag(s) Q^T` of a complex symmetric block,
/// with `s` descending.
///
/// For `b = A + iB`, a Takagi vector `q = x + iy` with value `s` is an
/// eigenvector `[x; y]` of the real symmetric `[[A, B], [B, -A]]` with
/// eigenvalue `s`; the spectrum comes in `±s` pairs. Directions with `s`
/// below [`ZERO_TANH`] are completed from the orthogonal complement and put
/// in echelon form relative to `cols`.
fn takagi(b: &CMatrix, cols: &CMatrix) -> (CMatrix, Vec<f64>) {
    let k = b.nrows();
    let h = DMatrix::from_fn(2 * k, 2 * k, |i, j| {
        let z = b[(i % k, j % k)];
        match (i < k, j < k) {
            (true, true) => z.re,
            (true, false) | (false, true) => z.im,
            (false, false) => -z.re,
        }
    });
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..2 * k).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut q = CMatrix::zeros(k, k);
    let mut values = alloc::vec![0.0; k];
    let mut found = 0;
    for &e in idx.iter().take(k) {
        let s = eig.eigenvalues[e];
        if s <= ZERO_TANH {
            break;
        }
        for i in 0..k {
            q[(i, found)] = Complex64::new(eig.eigenvectors[(i, e)], eig.eigenvectors[(i + k, e)]);
        }
        values[found] = s;
        found += 1;
    }
    let mut q = fix_signs(q, found);
    if found < k {
        // Orthonormal complement of the squeezed directions.
        let mut seed = CMatrix::zeros(k, 2 * k);
        seed.columns_mut(0, found).copy_from(&q.columns(0, found));
        seed.columns_mut(found, k).copy_from(&CMatrix::identity(k, k));
        let basis = seed.qr().q();
        let mut complement = basis.columns(found, k - found).into_owned();
        let rotated = cols * &complement;
        let p = echelon_unitary(&rotated);
        complement *= p;
        q.columns_mut(found, k - found).copy_from(&complement);
    }
    (q, values)
}

// Takagi vectors are unique up to a sign each; fix it by making the first
// significant entry have a positive real part.
fn fix_signs(mut z: CMatrix, count: usize) -> CMatrix {
    for j in 0..count {
        if let Some(p) = z.column(j).iter().find(|e| e.norm() > PHASE_PIVOT).copied() {
            if p.re < 0.0 || (p.re == 0.0 && p.im < 0.0) {
                z.column_mut(j).neg_mut();
            }
        }
    }
    z
}

/// Unitary `P` such that `B P` is in column-echelon form with real positive
/// pivots, for `B` with orthonormal columns.
fn echelon_unitary(b: &CMatrix) -> CMatrix {
    let k = b.ncols();
    let mut p = b.adjoint().qr().q();
    let rotated = b * &p;
    for j in 0..k {
        if let Some(pivot) = rotated.column(j).iter().find(|e| e.norm() > PHASE_PIVOT) {
            let phase = pivot.conj() / pivot.norm();
            for i in 0..k {
                p[(i, j)] *= phase;
            }
        }
    }
    p
}
