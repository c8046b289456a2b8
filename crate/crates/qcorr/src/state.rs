//! Dense density matrices, the two-qubit Bloch parametrization and bipartite
//! helpers.
//!
//! Conventions used throughout the crate:
//!
//! * Pauli matrices are the standard ones with `sigma_z` diagonal and
//!   `sigma_z |0> = +|0>`; `|0>` is the spin-up state.
//! * A bipartite basis index is `a * d_B + b`, i.e. subsystem A varies
//!   slowest (Kronecker order `A ⊗ B`).
//! * A two-qubit state is written
//!   `rho = (1/4) (I + r_a·sigma ⊗ I + I ⊗ r_b·sigma + sum_{uv} J_uv sigma_u ⊗ sigma_v)`.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum allowed deviation from hermiticity.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as a rounding artefact.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn dyn4(m: nalgebra::Matrix4<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(4, 4, m.as_slice())
}

/// The Pauli matrices `[sigma_x, sigma_y, sigma_z]`.
pub fn paulis() -> [Matrix2<Complex64>; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Which half of a bipartite system an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix: hermitian, unit trace, positive semidefinite
/// within [`EIGENVALUE_FLOOR`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates and wraps a dense matrix.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "density matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = hermiticity_deviation(&mat);
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        let tr_dev = (tr - ONE).norm();
        if tr_dev > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr_dev));
        }
        let eig = eigh(&mat)?;
        if let Some(min) = eig.values.iter().cloned().reduce(f64::min) {
            if min < EIGENVALUE_FLOOR {
                return Err(Error::NotPositive(min));
            }
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix that is known valid by construction. Used internally by
    /// operations that preserve validity exactly (partial trace, mixing).
    pub fn from_matrix_unchecked(mat: DMatrix<Complex64>) -> Self {
        Self { mat }
    }

    /// Projector onto a normalized ket. The ket is checked to be normalized
    /// within 1e-12.
    pub fn from_pure(ket: &DVector<Complex64>) -> Result<Self> {
        let norm = ket.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "ket norm deviates from one by {:.3e}",
                (norm - 1.0).abs()
            )));
        }
        let mat = ket * ket.adjoint();
        Ok(Self { mat })
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        Self {
            mat: DMatrix::from_diagonal_element(dim, dim, p),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> DVector<f64> {
        eigh(&self.mat).expect("stored matrix is hermitian").values
    }

    /// `Tr rho^2`, which for a hermitian matrix is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn hermiticity_deviation(mat: &DMatrix<Complex64>) -> f64 {
    let adj = mat.adjoint();
    mat.iter()
        .zip(adj.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Eigendecomposition of a hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Eigenvalues, largest first.
    pub values: DVector<f64>,
    /// Matching eigenvectors as columns.
    pub vectors: DMatrix<Complex64>,
}

/// Hermitian eigendecomposition. The input must be hermitian within
/// [`HERMITICITY_TOL`]; it is symmetrized before solving so the result is
/// insensitive to rounding-level asymmetry.
pub fn eigh(mat: &DMatrix<Complex64>) -> Result<Eigh> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            mat.nrows(),
            mat.ncols()
        )));
    }
    let herm = hermiticity_deviation(mat);
    if herm > HERMITICITY_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let sym = (mat + mat.adjoint()).scale(0.5);
    let decomp = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..decomp.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[b]
            .partial_cmp(&decomp.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| decomp.eigenvalues[i]));
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| decomp.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok(Eigh { values, vectors })
}

/// Bloch-form data of a two-qubit state: local vectors `r_a`, `r_b` and the
/// 3x3 correlation matrix `J` with `J_uv = <sigma_u ⊗ sigma_v>`.
///
/// Any hermitian unit-trace 4x4 matrix corresponds to exactly one such
/// triple, but positivity is a nontrivial constraint on it: composing an
/// arbitrary triple may produce a non-state. See [`TwoQubitBloch::to_density`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitBloch {
    pub r_a: Vector3<f64>,
    pub r_b: Vector3<f64>,
    pub j: Matrix3<f64>,
}

impl TwoQubitBloch {
    pub fn new(r_a: Vector3<f64>, r_b: Vector3<f64>, j: Matrix3<f64>) -> Self {
        Self { r_a, r_b, j }
    }

    /// The same state with the roles of the two qubits exchanged
    /// (`r_a <-> r_b`, `J -> J^T`).
    pub fn swap_sides(&self) -> Self {
        Self {
            r_a: self.r_b,
            r_b: self.r_a,
            j: self.j.transpose(),
        }
    }

    /// Dense 4x4 matrix for this triple. Hermitian and unit trace by
    /// construction; positivity is *not* guaranteed.
    pub fn compose(&self) -> DMatrix<Complex64> {
        bloch_compose(self)
    }

    /// Composes and validates, rejecting triples outside the state space.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.compose())
    }
}

/// Bloch data of a validated two-qubit state.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<TwoQubitBloch> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!(
            "bloch_decompose needs a two-qubit state, got dim {}",
            rho.dim()
        )));
    }
    let sig = paulis();
    let id = Matrix2::identity();
    let m = rho.matrix();
    let tr = |op: &DMatrix<Complex64>| -> f64 {
        let t: Complex64 = (op.adjoint() * m).trace();
        t.re
    };
    let mut b = TwoQubitBloch::new(Vector3::zeros(), Vector3::zeros(), Matrix3::zeros());
    for u in 0..3 {
        let a_op = dyn4(sig[u].kronecker(&id));
        let b_op = dyn4(id.kronecker(&sig[u]));
        b.r_a[u] = tr(&a_op);
        b.r_b[u] = tr(&b_op);
        for v in 0..3 {
            let j_op = dyn4(sig[u].kronecker(&sig[v]));
            b.j[(u, v)] = tr(&j_op);
        }
    }
    Ok(b)
}

/// Dense matrix of a Bloch triple. Inverse of [`bloch_decompose`] on valid
/// states; positivity of the result is the caller's concern.
pub fn bloch_compose(b: &TwoQubitBloch) -> DMatrix<Complex64> {
    let sig = paulis();
    let id = Matrix2::identity();
    let mut out = dyn4(id.kronecker(&id));
    for u in 0..3 {
        let re_a = Complex64::new(b.r_a[u], 0.0);
        let re_b = Complex64::new(b.r_b[u], 0.0);
        out += dyn4(sig[u].kronecker(&id)).scale_c(re_a);
        out += dyn4(id.kronecker(&sig[u])).scale_c(re_b);
        for v in 0..3 {
            let c = Complex64::new(b.j[(u, v)], 0.0);
            out += dyn4(sig[u].kronecker(&sig[v])).scale_c(c);
        }
    }
    out.scale(0.25)
}

trait ScaleC {
    fn scale_c(self, c: Complex64) -> Self;
}

impl ScaleC for DMatrix<Complex64> {
    fn scale_c(mut self, c: Complex64) -> Self {
        for x in self.iter_mut() {
            *x *= c;
        }
        self
    }
}

/// Traces out one subsystem of a bipartite state with local dimensions
/// `dims = (d_a, d_b)`.
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() || da == 0 || db == 0 {
        return Err(Error::Dimension(format!(
            "dims {}x{} do not factor dim {}",
            da,
            db,
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()
        }),
        Subsystem::B => DMatrix::from_fn(db, db, |b, b2| {
            (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()
        }),
    };
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Wootters concurrence of a two-qubit state.
///
/// Computed as `max(0, l1 - l2 - l3 - l4)` where the `l_i` are the descending
/// square roots of the eigenvalues of `rho (sy⊗sy) rho* (sy⊗sy)`. Those are
/// obtained directly as the singular values of `sqrt(rho) (sy⊗sy) sqrt(rho)*`,
/// which keeps the exact zeros of rank-deficient states exact instead of
/// turning eigensolver noise into `sqrt(noise)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!(
            "concurrence needs a two-qubit state, got dim {}",
            rho.dim()
        )));
    }
    let sig = paulis();
    let yy = dyn4(sig[1].kronecker(&sig[1]));

    let eig = eigh(rho.matrix())?;
    let sqrt_vals = DVector::from_iterator(
        4,
        eig.values
            .iter()
            .map(|&p| Complex64::new(if p > 1e-15 { p.sqrt() } else { 0.0 }, 0.0)),
    );
    let sqrt_rho = &eig.vectors * DMatrix::from_diagonal(&sqrt_vals) * eig.vectors.adjoint();
    let a = &sqrt_rho * yy * sqrt_rho.map(|z| z.conj());
    let svd = a.svd(false, false);
    let mut l: Vec<f64> = svd.singular_values.iter().copied().collect();
    l.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Schmidt data of a normalized bipartite pure state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Schmidt coefficients (not squared), descending and nonnegative.
    pub coefficients: DVector<f64>,
    /// Local A basis, one column per coefficient.
    pub basis_a: DMatrix<Complex64>,
    /// Local B basis, one column per coefficient.
    pub basis_b: DMatrix<Complex64>,
}

impl SchmidtDecomposition {
    /// Squared coefficients, i.e. the spectrum of either reduced state.
    pub fn probabilities(&self) -> DVector<f64> {
        self.coefficients.map(|c| c * c)
    }
}

/// Schmidt decomposition of `ket` with local dimensions `dims = (d_a, d_b)`.
/// The ket must be normalized within 1e-12.
pub fn schmidt(ket: &DVector<Complex64>, dims: (usize, usize)) -> Result<SchmidtDecomposition> {
    let (da, db) = dims;
    if da * db != ket.len() || da == 0 || db == 0 {
        return Err(Error::Dimension(format!(
            "dims {}x{} do not factor ket length {}",
            da,
            db,
            ket.len()
        )));
    }
    if (ket.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "ket norm deviates from one by {:.3e}",
            (ket.norm() - 1.0).abs()
        )));
    }
    let psi = DMatrix::from_fn(da, db, |a, b| ket[a * db + b]);
    let svd = psi.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });
    let coefficients = DVector::from_iterator(
        order.len(),
        order.iter().map(|&i| svd.singular_values[i]),
    );
    let basis_a = DMatrix::from_columns(
        &order.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>(),
    );
    // psi = U S V^H, so the B-side vectors are the *unconjugated* rows of V^H.
    let basis_b = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| v_t.row(i).transpose())
            .collect::<Vec<_>>(),
    );
    Ok(SchmidtDecomposition {
        coefficients,
        basis_a,
        basis_b,
    })
}
