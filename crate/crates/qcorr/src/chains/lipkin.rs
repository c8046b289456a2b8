//! Collective-spin solution of the uniformly connected model.
//!
//! With every pair coupled at `2 J_mu / (n - 1)` the Hamiltonian depends
//! only on the collective operators `S_mu = sum_i s_mu^i / ...`, restricted
//! here to spin-1/2 sites, and the ground state lives in the maximal-spin
//! multiplet `S = n/2`.  Diagonalizing there costs `O(n)` storage instead of
//! `2^n`:
//!
//! ```text
//! H = B S_z - (J_x - J_y)/(4(n-1)) (S_+^2 + S_-^2)
//!          - (J_x + J_y)/(4(n-1)) (S_+ S_- + S_- S_+)  + (J_x + J_y) n / (4(n-1))
//! ```
//!
//! The basis is labelled by the number of lowered spins `d`, so
//! `M = n/2 - d` and parity is `(-1)^d`, splitting the tridiagonal-in-steps
//! matrix into even and odd blocks.  Site permutation symmetry turns the
//! collective moments directly into pair correlators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

use super::{pair_rdm_from_observables, PairObservables, Parity, DEGENERACY_TOL};

/// Ground state of one parity block of the maximal-spin multiplet.
#[derive(Clone, Debug)]
pub struct LipkinSector {
    /// Lowest energy in the block.
    pub energy: f64,
    /// Which parity block.
    pub parity: Parity,
    /// Amplitudes over `d = 0..=n` lowered spins, zero outside the block.
    pub block: DVector<f64>,
}

/// Sector-resolved ground state of the collective solver.
#[derive(Clone, Debug)]
pub struct LipkinGround {
    /// Even number of lowered spins.
    pub plus: LipkinSector,
    /// Odd number of lowered spins.
    pub minus: LipkinSector,
}

impl LipkinGround {
    /// The sector with the lower energy; ties go to even parity.
    pub fn ground(&self) -> &LipkinSector {
        if self.minus.energy < self.plus.energy {
            &self.minus
        } else {
            &self.plus
        }
    }

    /// Signed gap `E_minus - E_plus`.
    pub fn sector_gap(&self) -> f64 {
        self.minus.energy - self.plus.energy
    }

    /// Whether the sector energies agree within [`DEGENERACY_TOL`].
    pub fn degenerate(&self) -> bool {
        let scale = self.plus.energy.abs().max(self.minus.energy.abs()).max(1.0);
        self.sector_gap().abs() <= DEGENERACY_TOL * scale
    }
}

/// Expectation values of the collective operators in a multiplet state.
#[derive(Clone, Copy, Debug)]
pub struct CollectiveMoments {
    /// `<S_z>`.
    pub sz: f64,
    /// `<S_z^2>`.
    pub sz2: f64,
    /// `<S_+ S_- + S_- S_+>`.
    pub ladder_sym: f64,
    /// `<S_+^2 + S_-^2>`.
    pub ladder_square: f64,
}

fn raise_amplitude(s: f64, m: f64) -> f64 {
    (s * (s + 1.0) - m * (m + 1.0)).sqrt()
}

/// Diagonalizes the uniformly connected spin-1/2 model with couplings
/// `J_x`, `J_y` (scaled internally by `2/(n-1)`) and uniform field `b`,
/// within the maximal-spin multiplet, one parity block at a time.
pub fn lipkin_ground_state(n: usize, jx: f64, jy: f64, b: f64) -> Result<LipkinGround> {
    if n < 2 {
        return Err(Error::Dimension(format!("need at least two sites, got {n}")));
    }
    let s = n as f64 / 2.0;
    let scale = 1.0 / (n as f64 - 1.0);
    let dim = n + 1;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for d in 0..dim {
        let m = s - d as f64;
        let ladder_diag = 2.0 * (s * (s + 1.0) - m * m);
        h[(d, d)] = b * m - scale * 0.25 * (jx + jy) * ladder_diag + scale * (jx + jy) * n as f64 / 4.0;
        if d >= 2 {
            let amp = raise_amplitude(s, m) * raise_amplitude(s, m + 1.0);
            let v = -scale * 0.25 * (jx - jy) * amp;
            h[(d - 2, d)] = v;
            h[(d, d - 2)] = v;
        }
    }

    let solve = |parity: Parity| -> LipkinSector {
        let offset = usize::from(parity == Parity::Minus);
        let indices: Vec<usize> = (0..dim).filter(|d| d % 2 == offset).collect();
        let sub = DMatrix::from_fn(indices.len(), indices.len(), |r, c| h[(indices[r], indices[c])]);
        let eig = sub.symmetric_eigen();
        let mut best = 0;
        for k in 1..eig.eigenvalues.len() {
            if eig.eigenvalues[k] < eig.eigenvalues[best] {
                best = k;
            }
        }
        let mut block = DVector::zeros(dim);
        for (r, &d) in indices.iter().enumerate() {
            block[d] = eig.eigenvectors[(r, best)];
        }
        LipkinSector { energy: eig.eigenvalues[best], parity, block }
    };

    Ok(LipkinGround { plus: solve(Parity::Plus), minus: solve(Parity::Minus) })
}

impl LipkinSector {
    /// Number of sites the block vector describes.
    pub fn len(&self) -> usize {
        self.block.len() - 1
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Collective moments of the block state.
    pub fn moments(&self) -> CollectiveMoments {
        collective_moments(&self.block)
    }

    /// Pair correlators between any two sites, identical for all pairs by
    /// permutation symmetry.
    pub fn pair_observables(&self) -> PairObservables {
        observables_from_moments(&self.moments(), self.len())
    }

    /// Two-site reduced state shared by every pair of sites.
    pub fn pair_rdm(&self) -> Result<DensityMatrix> {
        pair_rdm_symmetric(&self.block, self.len())
    }
}

fn collective_moments(block: &DVector<f64>) -> CollectiveMoments {
    let dim = block.len();
    let s = (dim - 1) as f64 / 2.0;
    let mut sz = 0.0;
    let mut sz2 = 0.0;
    let mut ladder_sym = 0.0;
    let mut ladder_square = 0.0;
    for d in 0..dim {
        let m = s - d as f64;
        let w = block[d] * block[d];
        sz += w * m;
        sz2 += w * m * m;
        ladder_sym += w * 2.0 * (s * (s + 1.0) - m * m);
        if d >= 2 {
            ladder_square += 2.0 * block[d] * block[d - 2] * raise_amplitude(s, m) * raise_amplitude(s, m + 1.0);
        }
    }
    CollectiveMoments { sz, sz2, ladder_sym, ladder_square }
}

fn observables_from_moments(m: &CollectiveMoments, n: usize) -> PairObservables {
    let nf = n as f64;
    let pairs = nf * (nf - 1.0);
    let mz = 2.0 * m.sz / nf;
    PairObservables {
        mz_i: mz,
        mz_j: mz,
        czz: (4.0 * m.sz2 - nf) / pairs,
        cxx: (m.ladder_sym - nf + m.ladder_square) / pairs,
        cyy: (m.ladder_sym - nf - m.ladder_square) / pairs,
        cxy_anti: 0.0,
    }
}

/// Two-site reduced state of a permutation-symmetric multiplet state given
/// by its amplitudes over the number of lowered spins.
pub fn pair_rdm_symmetric(block: &DVector<f64>, n: usize) -> Result<DensityMatrix> {
    if block.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "block vector has {} entries for {n} sites",
            block.len()
        )));
    }
    let norm = block.norm_squared();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("block vector norm {} is not one", norm.sqrt())));
    }
    pair_rdm_from_observables(&observables_from_moments(&collective_moments(block), n))
}
