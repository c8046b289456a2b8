//! Ground states of anisotropic spin models and their pair correlations.
//!
//! Models are described by a [`ChainSpec`]: site spin `s`, coupling matrices
//! for the three axes, and a local field along `z`.  The Hamiltonian is
//!
//! ```text
//! H = sum_i B^i s_z^i  -  1/2 sum_{mu in {x,y,z}} sum_{i,j} J_mu^{ij} s_mu^i s_mu^j
//! ```
//!
//! so positive couplings are ferromagnetic.  Every solver resolves the ground
//! state inside each eigenspace of the global spin-flip parity
//! `P_z = prod_i exp[-i pi (s_z^i - s)]`, which commutes with `H`.
//!
//! Three solvers cover different regimes and cross-check each other:
//!
//! * [`dense::ground_state_dense`]: exact diagonalization for any spec with a
//!   manageable Hilbert space,
//! * [`jw::ground_state_jw`]: free-fermion solution for uniform-field cyclic
//!   XY rings of spin-1/2 sites,
//! * [`lipkin::lipkin_ground_state`]: collective-spin diagonalization for the
//!   uniformly connected (Lipkin) model.
//!
//! The factorization analysis ([`uniform_factorizing_field`],
//! [`check_factorization`]) locates the field at which the ground doublet
//! becomes a pair of product states of tilted spins, and
//! [`definite_parity_pair_state`] gives the two-site reduced state of the
//! definite-parity combinations of those product states.

pub mod dense;
pub mod jw;
pub mod lipkin;

use nalgebra::{DMatrix, DVector};

use crate::aligned::AlignedPair;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

pub use dense::{
    build_hamiltonian_dense, eigenstate_residual, expectation, ground_state_dense, pair_rdm_dense,
    parity_operator, tilted_product_state, DenseGround, DenseSector,
};
pub use jw::{ground_state_jw, JwGround, JwSector};
pub use lipkin::{lipkin_ground_state, pair_rdm_symmetric, LipkinGround, LipkinSector};

/// Two ground energies closer than this (relative to their magnitude) are
/// reported as a degenerate doublet.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvalue sector of the global spin-flip parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Parity eigenvalue `+1`.
    Plus,
    /// Parity eigenvalue `-1`.
    Minus,
}

impl Parity {
    /// The parity eigenvalue as a float.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    /// The opposite sector.
    pub fn flipped(self) -> Self {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Plus => write!(f, "+"),
            Parity::Minus => write!(f, "-"),
        }
    }
}

/// Coupling pattern of a spec, used to pick admissible solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry {
    /// Arbitrary coupling matrices.
    General,
    /// Nearest-neighbour ring with one scalar coupling per axis.
    CyclicNn { jx: f64, jy: f64, jz: f64 },
    /// All pairs coupled with strength `2 J_mu / (n - 1)` per axis.
    FullyConnected { jx: f64, jy: f64, jz: f64 },
}

/// A finite spin model: site count and spin, per-axis coupling matrices,
/// local `z` field, and the geometry tag describing how the matrices were
/// built.
#[derive(Clone, Debug)]
pub struct ChainSpec {
    n: usize,
    twice_s: u32,
    jx: DMatrix<f64>,
    jy: DMatrix<f64>,
    jz: DMatrix<f64>,
    field: DVector<f64>,
    geometry: Geometry,
}

fn check_coupling(n: usize, m: &DMatrix<f64>, axis: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Dimension(format!(
            "{axis} coupling matrix is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    for i in 0..n {
        if m[(i, i)] != 0.0 {
            return Err(Error::Domain(format!("{axis} coupling has a nonzero diagonal entry at site {i}")));
        }
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 {
                return Err(Error::Domain(format!("{axis} coupling is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

impl ChainSpec {
    /// Builds a spec from explicit coupling matrices.
    ///
    /// The matrices must be `n x n`, symmetric, and zero on the diagonal; the
    /// field must have one entry per site.
    pub fn general(
        twice_s: u32,
        jx: DMatrix<f64>,
        jy: DMatrix<f64>,
        jz: DMatrix<f64>,
        field: DVector<f64>,
    ) -> Result<Self> {
        let n = field.len();
        if n < 2 {
            return Err(Error::Dimension(format!("need at least two sites, got {n}")));
        }
        if twice_s == 0 {
            return Err(Error::Domain("site spin must be positive".into()));
        }
        check_coupling(n, &jx, "x")?;
        check_coupling(n, &jy, "y")?;
        check_coupling(n, &jz, "z")?;
        Ok(ChainSpec { n, twice_s, jx, jy, jz, field, geometry: Geometry::General })
    }

    /// Nearest-neighbour ring of `n >= 3` sites with uniform couplings and a
    /// uniform field.
    pub fn cyclic_nn(n: usize, twice_s: u32, jx: f64, jy: f64, jz: f64, b: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension(format!("a ring needs at least three sites, got {n}")));
        }
        let mut spec = Self::general(
            twice_s,
            ring_matrix(n, jx),
            ring_matrix(n, jy),
            ring_matrix(n, jz),
            DVector::from_element(n, b),
        )?;
        spec.geometry = Geometry::CyclicNn { jx, jy, jz };
        Ok(spec)
    }

    /// Open nearest-neighbour chain (no bond between the end sites).
    pub fn open_nn(n: usize, twice_s: u32, jx: f64, jy: f64, jz: f64, b: f64) -> Result<Self> {
        Self::general(
            twice_s,
            path_matrix(n, jx),
            path_matrix(n, jy),
            path_matrix(n, jz),
            DVector::from_element(n, b),
        )
    }

    /// Uniformly connected model: every pair coupled with `2 J_mu / (n - 1)`,
    /// so the total coupling per site stays finite as `n` grows.
    pub fn fully_connected(n: usize, twice_s: u32, jx: f64, jy: f64, jz: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("need at least two sites, got {n}")));
        }
        let scale = 2.0 / (n as f64 - 1.0);
        let mut spec = Self::general(
            twice_s,
            complete_matrix(n, scale * jx),
            complete_matrix(n, scale * jy),
            complete_matrix(n, scale * jz),
            DVector::from_element(n, b),
        )?;
        spec.geometry = Geometry::FullyConnected { jx, jy, jz };
        Ok(spec)
    }

    /// Spin-1/2 XY ring in a uniform field, the family solved by the
    /// free-fermion path.
    pub fn cyclic_xy(n: usize, jx: f64, jy: f64, b: f64) -> Result<Self> {
        Self::cyclic_nn(n, 1, jx, jy, 0.0, b)
    }

    /// Number of sites.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a spec has at least two sites.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Twice the site spin (`1` for spin-1/2).
    pub fn twice_s(&self) -> u32 {
        self.twice_s
    }

    /// The site spin `s`.
    pub fn spin(&self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// Dimension of one site, `2s + 1`.
    pub fn site_dim(&self) -> usize {
        self.twice_s as usize + 1
    }

    /// Dimension of the full Hilbert space, or an error when it does not fit
    /// in a `usize`.
    pub fn hilbert_dim(&self) -> Result<usize> {
        let q = self.site_dim();
        let mut d: usize = 1;
        for _ in 0..self.n {
            d = d
                .checked_mul(q)
                .ok_or_else(|| Error::Dimension(format!("{q}^{} overflows the addressable space", self.n)))?;
        }
        Ok(d)
    }

    /// Coupling matrix along `x`.
    pub fn jx(&self) -> &DMatrix<f64> {
        &self.jx
    }

    /// Coupling matrix along `y`.
    pub fn jy(&self) -> &DMatrix<f64> {
        &self.jy
    }

    /// Coupling matrix along `z`.
    pub fn jz(&self) -> &DMatrix<f64> {
        &self.jz
    }

    /// Local field per site.
    pub fn field(&self) -> &DVector<f64> {
        &self.field
    }

    /// How the couplings were generated.
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Replaces the field with a uniform one, keeping the couplings.
    pub fn with_uniform_field(mut self, b: f64) -> Self {
        self.field = DVector::from_element(self.n, b);
        self
    }

    /// Replaces the field site by site, keeping the couplings.
    pub fn with_field_profile(mut self, field: DVector<f64>) -> Result<Self> {
        if field.len() != self.n {
            return Err(Error::Dimension(format!(
                "field profile has {} entries for {} sites",
                field.len(),
                self.n
            )));
        }
        self.field = field;
        Ok(self)
    }

    /// The common field value, if the field is uniform.
    pub fn uniform_field(&self) -> Option<f64> {
        let b = self.field[0];
        if self.field.iter().all(|&x| (x - b).abs() <= 1e-12 * b.abs().max(1.0)) {
            Some(b)
        } else {
            None
        }
    }

    /// True where any of the three coupling matrices is nonzero.
    pub fn coupled(&self, i: usize, j: usize) -> bool {
        self.jx[(i, j)] != 0.0 || self.jy[(i, j)] != 0.0 || self.jz[(i, j)] != 0.0
    }
}

fn ring_matrix(n: usize, j: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |a, b| {
        let d = (a + n - b) % n;
        if d == 1 || d == n - 1 {
            j
        } else {
            0.0
        }
    })
}

fn path_matrix(n: usize, j: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |a, b| if a.abs_diff(b) == 1 { j } else { 0.0 })
}

fn complete_matrix(n: usize, j: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |a, b| if a != b { j } else { 0.0 })
}

/// Residuals of the two factorization conditions for a candidate set of tilt
/// angles, one per coupled pair and one per site.
///
/// Both vanish exactly when the tilted product state
/// `prod_i exp(-i theta_i s_y^i) |down_i>` is an eigenstate of the
/// Hamiltonian.
#[derive(Clone, Debug)]
pub struct FactorizationResiduals {
    /// Pair condition `J_y^{ij} - J_x^{ij} cos t_i cos t_j - J_z^{ij} sin t_i sin t_j`,
    /// stored symmetrically; zero for uncoupled pairs.
    pub pair: DMatrix<f64>,
    /// Site condition balancing the field against the couplings,
    /// `B^i sin t_i - sum_j (s_j - delta_ij / 2)(J_x^{ij} cos t_i sin t_j - J_z^{ij} sin t_i cos t_j)`.
    pub site: DVector<f64>,
}

impl FactorizationResiduals {
    /// Largest residual magnitude over both conditions.
    pub fn max_abs(&self) -> f64 {
        let p = self.pair.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let s = self.site.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        p.max(s)
    }
}

/// Evaluates the factorization conditions for the given tilt angles.
pub fn check_factorization(spec: &ChainSpec, thetas: &[f64]) -> Result<FactorizationResiduals> {
    let n = spec.len();
    if thetas.len() != n {
        return Err(Error::Dimension(format!("{} angles for {n} sites", thetas.len())));
    }
    let s = spec.spin();
    let cos: Vec<f64> = thetas.iter().map(|t| t.cos()).collect();
    let sin: Vec<f64> = thetas.iter().map(|t| t.sin()).collect();
    let mut pair = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j && spec.coupled(i, j) {
                pair[(i, j)] = spec.jy[(i, j)] - spec.jx[(i, j)] * cos[i] * cos[j] - spec.jz[(i, j)] * sin[i] * sin[j];
            }
        }
    }
    let mut site = DVector::zeros(n);
    for i in 0..n {
        let mut acc = spec.field[i] * sin[i];
        for j in 0..n {
            let weight = if i == j { s - 0.5 } else { s };
            acc -= weight * (spec.jx[(i, j)] * cos[i] * sin[j] - spec.jz[(i, j)] * sin[i] * cos[j]);
        }
        site[i] = acc;
    }
    Ok(FactorizationResiduals { pair, site })
}

/// The field profile at which a spec with uniform anisotropy factorizes:
/// common tilt angle, the anisotropy ratio it came from, and the per-site
/// field values.
#[derive(Clone, Debug)]
pub struct FactorizingField {
    /// Common tilt angle `theta = acos(sqrt(chi))`.
    pub theta: f64,
    /// Anisotropy ratio `chi = (J_y - J_z) / (J_x - J_z)`, shared by every
    /// coupled pair.
    pub chi: f64,
    /// Factorizing field per site.  On a ring or a uniformly connected model
    /// this is uniform; on an open chain the end sites take half the bulk
    /// value.
    pub profile: DVector<f64>,
}

impl FactorizingField {
    /// Largest field value in the profile, the bulk value for the standard
    /// geometries.
    pub fn bulk(&self) -> f64 {
        self.profile.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    }

    /// Whether all sites take the same field value.
    pub fn is_uniform(&self) -> bool {
        let b = self.profile[0];
        self.profile.iter().all(|&x| (x - b).abs() <= 1e-12 * b.abs().max(1.0))
    }
}

/// Computes the factorizing field of a spec whose coupled pairs share a
/// single anisotropy ratio `chi = (J_y - J_z) / (J_x - J_z)` in `[0, 1]`.
///
/// Returns the common tilt angle and the per-site field profile
/// `B^i = sqrt(chi) sum_j s (J_x^{ij} - J_z^{ij})`.  Fails when some pair has
/// `J_x = J_z` (the ratio is undefined), when the ratio differs between
/// pairs, or when it falls outside `[0, 1]`.
pub fn uniform_factorizing_field(spec: &ChainSpec) -> Result<FactorizingField> {
    let n = spec.len();
    let mut chi: Option<f64> = None;
    for i in 0..n {
        for j in 0..i {
            if !spec.coupled(i, j) {
                continue;
            }
            let denom = spec.jx[(i, j)] - spec.jz[(i, j)];
            if denom.abs() < 1e-14 {
                return Err(Error::Domain(format!(
                    "anisotropy ratio undefined on bond ({j}, {i}): J_x = J_z"
                )));
            }
            let r = (spec.jy[(i, j)] - spec.jz[(i, j)]) / denom;
            match chi {
                None => chi = Some(r),
                Some(c) if (r - c).abs() > 1e-10 * c.abs().max(1.0) => {
                    return Err(Error::Inconsistent(format!(
                        "anisotropy ratio varies across bonds: {c} vs {r} on ({j}, {i})"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let chi = chi.ok_or_else(|| Error::Domain("spec has no coupled pairs".into()))?;
    if chi < 0.0 {
        return Err(Error::Domain(format!(
            "anisotropy ratio {chi} is negative; no real tilt angle exists"
        )));
    }
    if chi > 1.0 {
        return Err(Error::Domain(format!(
            "anisotropy ratio {chi} exceeds one; swap the x and y couplings to bring it into range"
        )));
    }
    let s = spec.spin();
    let theta = chi.sqrt().acos();
    let profile = DVector::from_fn(n, |i, _| {
        let mut acc = 0.0;
        for j in 0..n {
            acc += spec.jx[(i, j)] - spec.jz[(i, j)];
        }
        chi.sqrt() * s * acc
    });
    Ok(FactorizingField { theta, chi, profile })
}

/// Locates the fields where a sector-gap function changes sign over
/// `[lo, hi]`, scanning `panels` intervals and bisecting each bracket.
///
/// Gap values below 1e-12 in magnitude are treated as exact crossings (the
/// factorizing field sits at one), so a crossing on a grid point is counted
/// once instead of producing a spurious bracket on each side.
pub fn crossing_fields(
    mut gap: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    if !(hi > lo) || panels == 0 {
        return Err(Error::Domain(format!("invalid scan range [{lo}, {hi}] with {panels} panels")));
    }
    let x = |i: usize| lo + (hi - lo) * i as f64 / panels as f64;
    let snap = |g: f64| if g.abs() < 1e-12 { 0.0 } else { g };
    let mut values = Vec::with_capacity(panels + 1);
    for i in 0..=panels {
        values.push(snap(gap(x(i))?));
    }
    let mut roots = Vec::new();
    for i in 0..=panels {
        if values[i] == 0.0 {
            roots.push(x(i));
        }
    }
    for i in 0..panels {
        if values[i] * values[i + 1] < 0.0 {
            let (mut a, mut b) = (x(i), x(i + 1));
            let mut ga = values[i];
            for _ in 0..100 {
                let m = (a + b) / 2.0;
                let gm = snap(gap(m)?);
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if ga * gm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    ga = gm;
                }
            }
            roots.push((a + b) / 2.0);
        }
    }
    roots.sort_by(|p, q| p.partial_cmp(q).expect("finite fields"));
    roots.dedup_by(|p, q| (*p - *q).abs() < (hi - lo) * 1e-9);
    Ok(roots)
}

/// Pair correlations of two `z`-axis-symmetric spin-1/2 sites: local
/// magnetizations, the three diagonal correlators, and the `xy` cross term
/// (zero for all models here, kept so consistency can be asserted).
#[derive(Clone, Copy, Debug)]
pub struct PairObservables {
    /// `<sigma_z^i>`.
    pub mz_i: f64,
    /// `<sigma_z^j>`.
    pub mz_j: f64,
    /// `<sigma_z^i sigma_z^j>`.
    pub czz: f64,
    /// `<sigma_x^i sigma_x^j>`.
    pub cxx: f64,
    /// `<sigma_y^i sigma_y^j>`.
    pub cyy: f64,
    /// `<sigma_x^i sigma_y^j + sigma_y^i sigma_x^j>`.
    pub cxy_anti: f64,
}

/// Assembles the two-site density matrix fixed by symmetric pair
/// observables.
///
/// Magnetization along `z` and diagonal two-point correlators determine an
/// X-form state; anything outside that symmetry class must vanish, so a
/// nonzero `cxy_anti` or a significantly negative eigenvalue is rejected as
/// inconsistent.  Eigenvalues above `-1e-9` are clipped to zero and the
/// state renormalized, absorbing solver round-off.
pub fn pair_rdm_from_observables(obs: &PairObservables) -> Result<DensityMatrix> {
    for (name, v) in [
        ("mz_i", obs.mz_i),
        ("mz_j", obs.mz_j),
        ("czz", obs.czz),
        ("cxx", obs.cxx),
        ("cyy", obs.cyy),
    ] {
        if !v.is_finite() || v.abs() > 1.0 + 1e-9 {
            return Err(Error::Inconsistent(format!("pair observable {name} = {v} is out of range")));
        }
    }
    if obs.cxy_anti.abs() > 1e-9 {
        return Err(Error::Inconsistent(format!(
            "cross correlator {} is incompatible with an axially symmetric pair state",
            obs.cxy_anti
        )));
    }
    let bloch = crate::state::TwoQubitBloch::new(
        nalgebra::Vector3::new(0.0, 0.0, obs.mz_i),
        nalgebra::Vector3::new(0.0, 0.0, obs.mz_j),
        nalgebra::Matrix3::from_diagonal(&nalgebra::Vector3::new(obs.cxx, obs.cyy, obs.czz)),
    );
    let eig = crate::state::eigh(&bloch.compose())?;
    let min = eig.values[eig.values.len() - 1];
    if min < -1e-9 {
        return Err(Error::Inconsistent(format!(
            "observables imply a two-site matrix with eigenvalue {min}"
        )));
    }
    let clipped: Vec<f64> = eig.values.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let diag = DVector::from_iterator(4, clipped.iter().map(|&p| num_complex::Complex64::new(p / total, 0.0)));
    let m = &eig.vectors * DMatrix::from_diagonal(&diag) * eig.vectors.adjoint();
    DensityMatrix::new(m)
}

/// Two-site reduced state of the definite-parity superposition of the two
/// factorized product states, for `n` spin-1/2 sites all tilted by `theta`.
///
/// The overlap between the mirrored product states makes the pair state a
/// rank-two mixture with cross weight `sign * cos(theta)^(n-2)`.  Requires
/// `theta` in `(0, pi/2]` so the superposition is well defined, and
/// `n >= 3`.
pub fn definite_parity_pair_state(theta: f64, n: usize, sector: Parity) -> Result<DensityMatrix> {
    definite_parity_pair(theta, n, sector)?.bloch().to_density()
}

/// Same as [`definite_parity_pair_state`] but returns the pair in its
/// two-angle parametric form, giving access to the closed-form correlation
/// measures.
pub fn definite_parity_pair(theta: f64, n: usize, sector: Parity) -> Result<AlignedPair> {
    if n < 3 {
        return Err(Error::Dimension(format!("need at least three sites, got {n}")));
    }
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(Error::Domain(format!("tilt angle {theta} outside (0, pi/2]")));
    }
    let eps = sector.sign() * theta.cos().powi(n as i32 - 2);
    AlignedPair::new(theta, eps)
}
