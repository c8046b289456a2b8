//! Seeded random ensembles of states, used heavily by the test suites.
//!
//! Everything takes an explicit `Rng` so tests stay reproducible; pair with
//! `rand_chacha::ChaCha12Rng::seed_from_u64`.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;

use crate::state::{bloch_decompose, DensityMatrix, TwoQubitBloch};

/// One draw from the standard normal distribution (Box-Muller).
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-random normalized ket.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let mut v = DVector::from_fn(dim, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    });
    let n = v.norm();
    v /= Complex64::new(n, 0.0);
    v
}

/// Random density matrix of the given rank: `G G^H / Tr` with a Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.clamp(1, dim), rng);
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    // Exact construction; re-symmetrize away the last rounding bits.
    let sym = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::from_matrix_unchecked(sym)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with
/// the R-diagonal phases absorbed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 {
            d / Complex64::new(d.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for x in q.column_mut(c).iter_mut() {
            *x *= phase;
        }
    }
    q
}

/// Random rotation in SO(3).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let g = Matrix3::from_fn(|_, _| standard_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..3 {
        if r[(c, c)] < 0.0 {
            for x in q.column_mut(c).iter_mut() {
                *x = -*x;
            }
        }
    }
    if q.determinant() < 0.0 {
        for x in q.column_mut(2).iter_mut() {
            *x = -*x;
        }
    }
    q
}

/// Random point on the unit sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            standard_normal(rng),
            standard_normal(rng),
            standard_normal(rng),
        );
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Random probability vector on the simplex.
pub fn random_simplex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}

/// Bloch data of a full-rank random two-qubit state.
pub fn random_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitBloch {
    let rho = random_density(4, 4, rng);
    bloch_decompose(&rho).expect("random state is a valid two-qubit state")
}

/// Random state with maximally mixed marginals (`r_a = r_b = 0`): a random
/// Bell-diagonal state dressed with independent local rotations.
pub fn random_mixed_marginals<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitBloch {
    let p = random_simplex(4, rng);
    // Bell-basis populations -> diagonal correlation matrix.
    let c1 = p[0] - p[1] + p[2] - p[3];
    let c2 = -p[0] + p[1] + p[2] - p[3];
    let c3 = p[0] + p[1] - p[2] - p[3];
    let diag = Matrix3::from_diagonal(&Vector3::new(c1, c2, c3));
    let oa = random_rotation(rng);
    let ob = random_rotation(rng);
    TwoQubitBloch::new(Vector3::zeros(), Vector3::zeros(), oa * diag * ob.transpose())
}

/// Random X-structured two-qubit state (nonzero entries only on the diagonal
/// and antidiagonal).
pub fn random_x_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitBloch {
    let p = random_simplex(4, rng);
    let f_mag = rng.gen::<f64>() * (p[0] * p[3]).sqrt();
    let g_mag = rng.gen::<f64>() * (p[1] * p[2]).sqrt();
    let f_ph = rng.gen::<f64>() * std::f64::consts::TAU;
    let g_ph = rng.gen::<f64>() * std::f64::consts::TAU;
    let f = Complex64::from_polar(f_mag, f_ph);
    let g = Complex64::from_polar(g_mag, g_ph);
    let z = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let mat = DMatrix::from_row_slice(
        4,
        4,
        &[
            re(p[0]), z, z, f,
            z, re(p[1]), g, z,
            z, g.conj(), re(p[2]), z,
            f.conj(), z, z, re(p[3]),
        ],
    );
    let rho = DensityMatrix::new(mat).expect("construction keeps the state positive");
    bloch_decompose(&rho).expect("valid two-qubit state")
}
