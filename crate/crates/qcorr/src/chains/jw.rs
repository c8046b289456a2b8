//! Free-fermion solution of uniform-field spin-1/2 XY rings.
//!
//! Mapping spins to fermions (occupation `1` = spin down) turns the ring
//! into a quadratic pairing Hamiltonian.  Spin-flip parity equals fermion
//! number parity, and each parity sector selects its own momentum grid:
//! antiperiodic `k = (2m + 1) pi / n` for even parity, periodic
//! `k = 2 pi m / n` for odd parity.  Periodic grids contain the unpaired
//! momenta `0` and `pi`, whose integer occupations are chosen to minimize
//! the energy and then adjusted, cheapest mode first, until the fermion
//! parity matches the sector.
//!
//! With `t = (J_x + J_y)/4` and `d = (J_x - J_y)/4` a momentum `k` carries
//! kinetic energy `xi_k = -B - 2 t cos k` and pairing `2 d sin k`.  All pair
//! correlations reduce to the contraction `G(r)`; transverse correlators are
//! Toeplitz determinants in `G`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::{ChainSpec, Geometry, PairObservables, Parity, DEGENERACY_TOL};

/// Paired momenta collapse to this before the occupation of the mode stops
/// being resolvable; contractions there are set to zero, which averages the
/// two degenerate fillings.
pub const MODE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
struct PairedMode {
    k: f64,
    /// `1 - 2 <n_k>`, equal to `xi_k / lambda_k` in the sector vacuum.
    nu: f64,
    /// Anomalous contraction amplitude `d sin k / lambda_k`.
    phi: f64,
    /// Quasiparticle energy `lambda_k`.
    lambda: f64,
}

#[derive(Clone, Debug)]
struct UnpairedMode {
    k: f64,
    occupied: bool,
    xi: f64,
}

/// Ground state of one parity sector in fermionic form.
#[derive(Clone, Debug)]
pub struct JwSector {
    n: usize,
    parity: Parity,
    energy: f64,
    paired: Vec<PairedMode>,
    unpaired: Vec<UnpairedMode>,
    gapless: bool,
}

/// Sector-resolved ground state of the free-fermion solver.
#[derive(Clone, Debug)]
pub struct JwGround {
    /// Even-parity (antiperiodic) sector.
    pub plus: JwSector,
    /// Odd-parity (periodic) sector.
    pub minus: JwSector,
}

impl JwGround {
    /// The sector with the lower energy; ties go to even parity.
    pub fn ground(&self) -> &JwSector {
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

/// Solves a uniform-field spin-1/2 XY ring for both parity sectors.
///
/// The spec must use `cyclic_nn` geometry with `J_z = 0`, spin 1/2, a
/// uniform field, and an even number of sites (odd rings shift the unpaired
/// momenta and are left to the dense solver).
pub fn ground_state_jw(spec: &ChainSpec) -> Result<JwGround> {
    let (jx, jy) = match spec.geometry() {
        Geometry::CyclicNn { jx, jy, jz } if jz.abs() < 1e-12 => (jx, jy),
        Geometry::CyclicNn { .. } => {
            return Err(Error::Unsupported("free-fermion solver needs J_z = 0".into()))
        }
        _ => return Err(Error::Unsupported("free-fermion solver needs a nearest-neighbour ring".into())),
    };
    if spec.twice_s() != 1 {
        return Err(Error::Unsupported("free-fermion solver needs spin-1/2 sites".into()));
    }
    let b = spec
        .uniform_field()
        .ok_or_else(|| Error::Unsupported("free-fermion solver needs a uniform field".into()))?;
    let n = spec.len();
    if n < 4 || n % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "free-fermion solver handles even rings of at least four sites, got {n}"
        )));
    }
    Ok(JwGround {
        plus: solve_sector(n, jx, jy, b, Parity::Plus)?,
        minus: solve_sector(n, jx, jy, b, Parity::Minus)?,
    })
}

fn solve_sector(n: usize, jx: f64, jy: f64, b: f64, parity: Parity) -> Result<JwSector> {
    let t = (jx + jy) / 4.0;
    let d = (jx - jy) / 4.0;
    let xi = |k: f64| -b - 2.0 * t * k.cos();

    let mut positive = Vec::with_capacity(n / 2);
    let mut special = Vec::new();
    match parity {
        Parity::Plus => {
            for m in 0..n / 2 {
                positive.push((2 * m + 1) as f64 * std::f64::consts::PI / n as f64);
            }
        }
        Parity::Minus => {
            for m in 1..n / 2 {
                positive.push(2.0 * m as f64 * std::f64::consts::PI / n as f64);
            }
            special.push(0.0);
            special.push(std::f64::consts::PI);
        }
    }

    let mut energy = n as f64 * b / 2.0;
    let mut gapless = false;
    let mut paired = Vec::with_capacity(positive.len());
    for &k in &positive {
        let x = xi(k);
        let delta = 2.0 * d * k.sin();
        let lambda = x.hypot(delta);
        energy += x - lambda;
        if lambda < MODE_TOL {
            gapless = true;
            paired.push(PairedMode { k, nu: 0.0, phi: 0.0, lambda });
        } else {
            paired.push(PairedMode { k, nu: x / lambda, phi: 0.5 * delta / lambda, lambda });
        }
    }

    let mut unpaired: Vec<UnpairedMode> = special
        .iter()
        .map(|&k| {
            let x = xi(k);
            let occupied = x < 0.0;
            if occupied {
                energy += x;
            }
            UnpairedMode { k, occupied, xi: x }
        })
        .collect();

    let occupied_count = unpaired.iter().filter(|m| m.occupied).count();
    let want_odd = parity == Parity::Minus;
    if occupied_count % 2 != usize::from(want_odd) {
        let flip = unpaired
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.xi.abs().partial_cmp(&b.xi.abs()).expect("finite mode energies"))
            .map(|(i, m)| (i, m.xi.abs()));
        let cheapest_paired = paired
            .iter()
            .map(|m| m.lambda)
            .fold(f64::INFINITY, f64::min);
        match flip {
            Some((idx, cost)) if cost <= cheapest_paired => {
                let mode = &mut unpaired[idx];
                if mode.occupied {
                    energy -= mode.xi;
                } else {
                    energy += mode.xi;
                }
                mode.occupied = !mode.occupied;
            }
            _ => {
                return Err(Error::Unsupported(
                    "sector parity would require occupying a paired quasiparticle".into(),
                ));
            }
        }
    }

    Ok(JwSector { n, parity, energy, paired, unpaired, gapless })
}

impl JwSector {
    /// Number of sites of the ring.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Which parity sector this solves.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Sector ground energy.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Whether some paired mode fell below [`MODE_TOL`], in which case the
    /// contractions average two degenerate fillings.
    pub fn gapless(&self) -> bool {
        self.gapless
    }

    /// The basic contraction `G(r) = <B_x A_{x+r}>` between the Majorana
    /// pair `B = c^+ - c` at a site and `A = c^+ + c` at `r` sites further.
    pub fn g(&self, r: i64) -> f64 {
        let rf = r as f64;
        let mut f = 0.0;
        let mut q = 0.0;
        for m in &self.paired {
            f += 2.0 * (m.k * rf).sin() * m.phi;
            q += 2.0 * (m.k * rf).cos() * m.nu;
        }
        for m in &self.unpaired {
            q += (m.k * rf).cos() * (1.0 - 2.0 * f64::from(m.occupied));
        }
        (2.0 * f - q) / self.n as f64
    }

    /// Magnetization per site, `<sigma_z> = -G(0)`.
    pub fn magnetization(&self) -> f64 {
        -self.g(0)
    }

    /// Majorana covariance matrix `Gamma` with `<m_a m_b> = delta_ab + i Gamma_ab`,
    /// where `m_{2j} = c_j^+ + c_j` and `m_{2j+1} = i(c_j - c_j^+)`.
    ///
    /// Same-type entries vanish on a ring, so `Gamma` is determined by `G`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut gamma = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for l in 0..n {
                let g = self.g(l as i64 - j as i64);
                gamma[(2 * j, 2 * l + 1)] = g;
                gamma[(2 * l + 1, 2 * j)] = -g;
            }
        }
        gamma
    }

    /// Pair correlations between two sites of the ring.
    ///
    /// Longitudinal terms need two contractions; the transverse correlators
    /// are determinants of Toeplitz matrices built from `G` over the
    /// separation.
    pub fn pair_observables(&self, i: usize, j: usize) -> Result<PairObservables> {
        let n = self.n;
        if i >= n || j >= n || i == j {
            return Err(Error::Dimension(format!("invalid site pair ({i}, {j}) for {n} sites")));
        }
        let sep = (j + n - i) % n;
        let l = sep as i64;
        let mz = self.magnetization();
        let czz = self.g(0) * self.g(0) - self.g(l) * self.g(-l);
        let cxx = DMatrix::from_fn(sep, sep, |a, b| self.g(a as i64 - b as i64 + 1)).determinant();
        let cyy = DMatrix::from_fn(sep, sep, |a, b| self.g(a as i64 - b as i64 - 1)).determinant();
        Ok(PairObservables { mz_i: mz, mz_j: mz, czz, cxx, cyy, cxy_anti: 0.0 })
    }
}
