//! Independent reference computations used to check the fast paths.
//!
//! Nothing here is used by the simulator itself; the squeezer oracles
//! exponentiate truncated generators, so their accuracy depends on the
//! cutoff margin above the requested indices.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::elements::Pair;
use crate::ops::passive::CMatrix;
#[allow(unused_imports)]
use num_traits::Float;

/// Permanent by the defining sum over all `n!` permutations.
pub fn permanent_naive(a: &CMatrix) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permute(a, &mut perm, 0, &mut total);
    Ok(total)
}

fn permute(a: &CMatrix, perm: &mut [usize], k: usize, total: &mut Complex64) {
    if k == perm.len() {
        *total += perm.iter().enumerate().map(|(i, &j)| a[(i, j)]).product::<Complex64>();
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(a, perm, k + 1, total);
        perm.swap(k, i);
    }
}

/// `exp(G)` for real antisymmetric `G`, through the eigendecomposition of the
/// Hermitian matrix `iG`. The result is orthogonal up to rounding.
pub fn expm_antisymmetric(g: &DMatrix<f64>) -> DMatrix<f64> {
    let h = g.map(|x| Complex64::new(0.0, x));
    let eig = h.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::new(0.0, -l).exp());
    let v = &eig.eigenvectors;
    let scaled = v * DMatrix::from_diagonal(&phases);
    (scaled * v.adjoint()).map(|z| z.re)
}

/// Two-mode squeezer `exp(r (a1 a2 - a1† a2†))` on a truncated two-mode Fock
/// space with per-mode cutoff, exponentiated sector by sector in the
/// conserved difference `n1 - n2`.
///
/// With this sign the vacuum-to-`(1,1)` amplitude is `-tanh r / cosh r`,
/// matching the partial-time-reversal dual of the real beam splitter.
#[derive(Clone, Debug)]
pub struct TwoModeSqueezerOracle {
    cutoff: u32,
    // sectors[d + cutoff] is indexed by n2 - max(0, -d)
    sectors: Vec<DMatrix<f64>>,
}

impl TwoModeSqueezerOracle {
    pub fn new(r: f64, cutoff: u32) -> Result<Self> {
        crate::error::check_range("r", r, true, "squeezing degree must be finite")?;
        let c = cutoff as i64;
        let sectors = (-c..=c)
            .map(|d| {
                let n2_min = (-d).max(0);
                let n2_max = (c - d).min(c);
                let dim = (n2_max - n2_min + 1) as usize;
                let mut g = DMatrix::<f64>::zeros(dim, dim);
                for k in 0..dim.saturating_sub(1) {
                    let n2 = (n2_min + k as i64) as f64;
                    let n1 = n2 + d as f64;
                    let w = r * ((n1 + 1.0) * (n2 + 1.0)).sqrt();
                    g[(k + 1, k)] = -w;
                    g[(k, k + 1)] = w;
                }
                expm_antisymmetric(&g)
            })
            .collect();
        Ok(Self { cutoff, sectors })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn element(&self, out: Pair, inp: Pair) -> Result<f64> {
        for &n in out.iter().chain(&inp) {
            if n > self.cutoff {
                return Err(Error::CutoffTooSmall {
                    cutoff: self.cutoff as usize,
                    index: n as usize,
                });
            }
        }
        let d = out[0] as i64 - out[1] as i64;
        if d != inp[0] as i64 - inp[1] as i64 {
            return Ok(0.0);
        }
        let n2_min = (-d).max(0);
        let sector = &self.sectors[(d + self.cutoff as i64) as usize];
        Ok(sector[((out[1] as i64 - n2_min) as usize, (inp[1] as i64 - n2_min) as usize)])
    }
}

/// Convenience wrapper building a [`TwoModeSqueezerOracle`] for one element.
pub fn ts_element_oracle(r: f64, out: Pair, inp: Pair, oracle_cutoff: u32) -> Result<f64> {
    TwoModeSqueezerOracle::new(r, oracle_cutoff)?.element(out, inp)
}

/// Single-mode squeezer `exp((r/2)(a^2 - a†^2))` on a truncated Fock space,
/// for which `<0|S(r)|0> = 1/sqrt(cosh r)` once converged.
#[derive(Clone, Debug)]
pub struct SingleModeSqueezerOracle {
    cutoff: u32,
    matrix: DMatrix<f64>,
}

impl SingleModeSqueezerOracle {
    pub fn new(r: f64, cutoff: u32) -> Result<Self> {
        crate::error::check_range("r", r, true, "squeezing degree must be finite")?;
        let dim = cutoff as usize + 1;
        let mut g = DMatrix::<f64>::zeros(dim, dim);
        for n in 0..dim.saturating_sub(2) {
            let w = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
            g[(n + 2, n)] = -w;
            g[(n, n + 2)] = w;
        }
        Ok(Self {
            cutoff,
            matrix: expm_antisymmetric(&g),
        })
    }

    pub fn element(&self, out: u32, inp: u32) -> Result<f64> {
        let n = out.max(inp);
        if n > self.cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff as usize,
                index: n as usize,
            });
        }
        Ok(self.matrix[(out as usize, inp as usize)])
    }
}
