//! Exact diagonalization of a [`ChainSpec`] in the full product basis.
//!
//! Basis states are indexed by base-`(2s+1)` digit strings.  Site `0` is the
//! most significant digit and digit value `d` at a site means the `z`
//! projection `m = s - d`, so index `0` is the all-up state.  With the `y`
//! couplings written through `i s_y` (a real antisymmetric matrix) the
//! Hamiltonian is real symmetric, and parity splits it into two blocks that
//! are diagonalized independently.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

use super::{ChainSpec, Parity, DEGENERACY_TOL};

/// Spin operators for one site of spin `s = twice_s / 2` in the basis
/// ordered by descending `m`.
#[derive(Clone, Debug)]
pub struct SiteOperators {
    /// Diagonal of `s_z`.
    pub sz: DVector<f64>,
    /// `s_x`.
    pub sx: DMatrix<f64>,
    /// `i s_y`, real and antisymmetric.
    pub isy: DMatrix<f64>,
}

/// Builds the site operators for the given spin.
pub fn site_operators(twice_s: u32) -> SiteOperators {
    let s = twice_s as f64 / 2.0;
    let q = twice_s as usize + 1;
    let sz = DVector::from_fn(q, |d, _| s - d as f64);
    let mut sp = DMatrix::zeros(q, q);
    for d in 1..q {
        let m = s - d as f64;
        sp[(d - 1, d)] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
    }
    let sx = (&sp + sp.transpose()) / 2.0;
    let isy = (&sp - sp.transpose()) / 2.0;
    SiteOperators { sz, sx, isy }
}

fn digit(index: usize, stride: usize, q: usize) -> usize {
    index / stride % q
}

/// Adds `coeff * op_i (x) op_j` acting on two distinct sites to `h`.
fn add_two_site(
    h: &mut DMatrix<f64>,
    q: usize,
    stride_i: usize,
    stride_j: usize,
    coeff: f64,
    op_i: &DMatrix<f64>,
    op_j: &DMatrix<f64>,
) {
    let dim = h.nrows();
    for col in 0..dim {
        let di = digit(col, stride_i, q);
        let dj = digit(col, stride_j, q);
        for ti in 0..q {
            let a = op_i[(ti, di)];
            if a == 0.0 {
                continue;
            }
            for tj in 0..q {
                let b = op_j[(tj, dj)];
                if b == 0.0 {
                    continue;
                }
                let row = (col as isize
                    + (ti as isize - di as isize) * stride_i as isize
                    + (tj as isize - dj as isize) * stride_j as isize) as usize;
                h[(row, col)] += coeff * a * b;
            }
        }
    }
}

/// Builds the Hamiltonian as a real symmetric matrix in the digit-string
/// basis.
///
/// The `y` coupling enters as `+J_y (i s_y)(i s_y)` per pair, which equals
/// `-J_y s_y s_y` and keeps every entry real.
pub fn build_hamiltonian_dense(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    let dim = spec.hilbert_dim()?;
    if dim > 1 << 14 {
        return Err(Error::Dimension(format!(
            "dense solver is limited to 2^14 basis states, spec needs {dim}"
        )));
    }
    let n = spec.len();
    let q = spec.site_dim();
    let ops = site_operators(spec.twice_s());
    let stride = |i: usize| q.pow((n - 1 - i) as u32);

    let mut h = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let mut e = 0.0;
        for i in 0..n {
            e += spec.field()[i] * ops.sz[digit(idx, stride(i), q)];
        }
        h[(idx, idx)] += e;
    }
    for i in 0..n {
        for j in 0..i {
            let (si, sj) = (stride(i), stride(j));
            let jx = spec.jx()[(i, j)];
            if jx != 0.0 {
                add_two_site(&mut h, q, si, sj, -jx, &ops.sx, &ops.sx);
            }
            let jy = spec.jy()[(i, j)];
            if jy != 0.0 {
                add_two_site(&mut h, q, si, sj, jy, &ops.isy, &ops.isy);
            }
            let jz = spec.jz()[(i, j)];
            if jz != 0.0 {
                for col in 0..dim {
                    let vz = ops.sz[digit(col, si, q)] * ops.sz[digit(col, sj, q)];
                    h[(col, col)] -= jz * vz;
                }
            }
        }
    }
    Ok(h)
}

/// Diagonal of the global spin-flip parity operator, `+1` on states with an
/// even number of lowering steps from the all-up state and `-1` otherwise.
pub fn parity_operator(n: usize, twice_s: u32) -> Result<DVector<f64>> {
    let q = twice_s as usize + 1;
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(q)
            .ok_or_else(|| Error::Dimension(format!("{q}^{n} overflows the addressable space")))?;
    }
    Ok(DVector::from_fn(dim, |idx, _| {
        let mut total = 0usize;
        let mut rest = idx;
        for _ in 0..n {
            total += rest % q;
            rest /= q;
        }
        if total % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Ground state data of one parity sector: energy and the eigenvector
/// embedded in the full basis.
#[derive(Clone, Debug)]
pub struct DenseSector {
    /// Lowest energy in the sector.
    pub energy: f64,
    /// Which sector this is.
    pub parity: Parity,
    /// Normalized ground eigenvector in the full digit-string basis.
    pub ket: DVector<f64>,
}

/// Sector-resolved ground state of a dense diagonalization.
#[derive(Clone, Debug)]
pub struct DenseGround {
    /// Ground data of the even sector.
    pub plus: DenseSector,
    /// Ground data of the odd sector.
    pub minus: DenseSector,
}

impl DenseGround {
    /// The sector with the lower energy; ties go to even parity, matching
    /// the side of the crossing where the field exceeds the factorizing
    /// value.
    pub fn ground(&self) -> &DenseSector {
        if self.minus.energy < self.plus.energy {
            &self.minus
        } else {
            &self.plus
        }
    }

    /// Signed gap `E_minus - E_plus` between the sector ground energies.
    pub fn sector_gap(&self) -> f64 {
        self.minus.energy - self.plus.energy
    }

    /// Whether the two sector energies coincide within [`DEGENERACY_TOL`]
    /// relative to their size.
    pub fn degenerate(&self) -> bool {
        let scale = self.plus.energy.abs().max(self.minus.energy.abs()).max(1.0);
        self.sector_gap().abs() <= DEGENERACY_TOL * scale
    }
}

fn sector_ground(h: &DMatrix<f64>, indices: &[usize], parity: Parity, dim: usize) -> Result<DenseSector> {
    if indices.is_empty() {
        return Err(Error::Dimension(format!("parity sector {parity} is empty")));
    }
    let block = DMatrix::from_fn(indices.len(), indices.len(), |r, c| h[(indices[r], indices[c])]);
    let eig = block.symmetric_eigen();
    let mut best = 0;
    for k in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[k] < eig.eigenvalues[best] {
            best = k;
        }
    }
    let mut ket = DVector::zeros(dim);
    for (r, &idx) in indices.iter().enumerate() {
        ket[idx] = eig.eigenvectors[(r, best)];
    }
    Ok(DenseSector { energy: eig.eigenvalues[best], parity, ket })
}

/// Diagonalizes the spec exactly within each parity sector.
pub fn ground_state_dense(spec: &ChainSpec) -> Result<DenseGround> {
    let h = build_hamiltonian_dense(spec)?;
    let parity = parity_operator(spec.len(), spec.twice_s())?;
    let dim = h.nrows();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for idx in 0..dim {
        if parity[idx] > 0.0 {
            even.push(idx);
        } else {
            odd.push(idx);
        }
    }
    Ok(DenseGround {
        plus: sector_ground(&h, &even, Parity::Plus, dim)?,
        minus: sector_ground(&h, &odd, Parity::Minus, dim)?,
    })
}

/// Energy expectation of a real ket under a real symmetric Hamiltonian.
pub fn expectation(h: &DMatrix<f64>, ket: &DVector<f64>) -> f64 {
    (ket.transpose() * h * ket)[(0, 0)] / ket.norm_squared()
}

/// Norm of `(H - <H>) |ket>` per unit norm, zero exactly on eigenstates.
pub fn eigenstate_residual(h: &DMatrix<f64>, ket: &DVector<f64>) -> f64 {
    let e = expectation(h, ket);
    let r = h * ket - e * ket;
    r.norm() / ket.norm()
}

/// Reduced state of sites `i` and `j` from a real pure state of the chain.
pub fn pair_rdm_dense(ket: &DVector<f64>, n: usize, twice_s: u32, i: usize, j: usize) -> Result<DensityMatrix> {
    let q = twice_s as usize + 1;
    if i >= n || j >= n || i == j {
        return Err(Error::Dimension(format!("invalid site pair ({i}, {j}) for {n} sites")));
    }
    let dim = ket.len();
    let stride_i = q.pow((n - 1 - i) as u32);
    let stride_j = q.pow((n - 1 - j) as u32);
    let mut rho = DMatrix::<f64>::zeros(q * q, q * q);
    for col in 0..dim {
        let a = ket[col];
        if a == 0.0 {
            continue;
        }
        let di = digit(col, stride_i, q);
        let dj = digit(col, stride_j, q);
        let base = col - di * stride_i - dj * stride_j;
        for ti in 0..q {
            for tj in 0..q {
                let other = base + ti * stride_i + tj * stride_j;
                rho[(di * q + dj, ti * q + tj)] += a * ket[other];
            }
        }
    }
    rho /= ket.norm_squared();
    DensityMatrix::new(rho.map(|x| Complex64::new(x, 0.0)))
}

/// Product state of tilted sites, each rotated about `y` by its own angle
/// starting from the `m = -s` state.
pub fn tilted_product_state(spec: &ChainSpec, thetas: &[f64]) -> Result<DVector<f64>> {
    let n = spec.len();
    if thetas.len() != n {
        return Err(Error::Dimension(format!("{} angles for {n} sites", thetas.len())));
    }
    let q = spec.site_dim();
    let ops = site_operators(spec.twice_s());
    let dim = spec.hilbert_dim()?;
    let site_kets: Vec<DVector<f64>> = thetas
        .iter()
        .map(|&t| {
            let rot = real_exp(&(-t * &ops.isy));
            let mut down = DVector::zeros(q);
            down[q - 1] = 1.0;
            rot * down
        })
        .collect();
    let mut ket = DVector::from_element(dim, 1.0);
    for (idx, entry) in ket.iter_mut().enumerate() {
        let mut rest = idx;
        for i in (0..n).rev() {
            *entry *= site_kets[i][rest % q];
            rest /= q;
        }
    }
    Ok(ket)
}

/// Matrix exponential by scaling and squaring with a Taylor core, enough for
/// the small site-rotation generators used here.
fn real_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.norm();
    let squarings = norm.log2().ceil().max(0.0) as u32;
    let scaled = m / 2f64.powi(squarings as i32);
    let dim = m.nrows();
    let mut result = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    for k in 1..=16 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
