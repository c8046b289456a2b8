//! Two-qubit states built from oppositely tilted product states.
//!
//! With `|theta> = cos(theta/2)|0> + sin(theta/2)|1>`, the family is the
//! normalized
//!
//! ```text
//! rho ~ |tt><tt| + |-t-t><-t-t| + epsilon (|tt><-t-t| + h.c.)
//! ```
//!
//! where `|tt> = |theta> x |theta>`. `epsilon = 0` is the statistical
//! mixture; `epsilon = ±1` are the parity eigenstates
//! `|tt> ± |-t-t>` (normalized). Reducing an n-qubit state
//! `|t...t> ± |-t...-t>` to any two qubits lands in this family with
//! `epsilon = ±cos^(n-2) theta`, which is why it describes spin-chain pair
//! states at a factorizing field.
//!
//! Everything here is closed-form; the generic searches in
//! [`crate::measures`] are used only to cross-check.

use nalgebra::{DVector, Matrix3, Vector3};
use num_complex::Complex64;

use crate::entropy::{f_value, EntropyKind};
use crate::error::{Error, Result};
use crate::state::TwoQubitBloch;

/// Single-qubit ket tilted by `theta` from the +z axis (real amplitudes).
pub fn tilted_ket(theta: f64) -> DVector<Complex64> {
    DVector::from_vec(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::new((theta / 2.0).sin(), 0.0),
    ])
}

/// Which measurement axis attains a branch minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchAxis {
    Z,
    X,
}

/// A deficit together with the values of its two competing measurement
/// branches. The minimum switches branch at a cusp angle.
#[derive(Clone, Copy, Debug)]
pub struct BranchValue {
    pub value: f64,
    pub axis: BranchAxis,
    /// Deficit when measuring along z (keeps the aligned component).
    pub z_branch: f64,
    /// Deficit when measuring along x (keeps the transverse component).
    pub x_branch: f64,
}

/// A member of the tilted-pair family, fixed by the tilt angle and the
/// coherence weight `epsilon` in `[-1, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct AlignedPair {
    theta: f64,
    epsilon: f64,
}

impl AlignedPair {
    pub fn new(theta: f64, epsilon: f64) -> Result<Self> {
        if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "coherence weight {epsilon} outside [-1, 1]"
            )));
        }
        let overlap = theta.cos().powi(2);
        if 1.0 + epsilon * overlap < 1e-12 {
            return Err(Error::Domain(
                "superposition weight collapses the state to zero".into(),
            ));
        }
        Ok(Self {
            theta,
            epsilon: epsilon.clamp(-1.0, 1.0),
        })
    }

    /// The incoherent mixture (`epsilon = 0`).
    pub fn statistical(theta: f64) -> Self {
        Self { theta, epsilon: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Bloch data: `r = (0, 0, r_z)` on both sides and diagonal `J`, with
    ///
    /// ```text
    /// r_z  = (1+e) cos t / w,      J_zz = (cos^2 t + e) / w,
    /// J_xx = sin^2 t / w,          J_yy = -e sin^2 t / w,
    /// ```
    ///
    /// where `w = 1 + e cos^2 t`.
    pub fn bloch(&self) -> TwoQubitBloch {
        let (s2, c2) = {
            let c = self.theta.cos();
            (1.0 - c * c, c * c)
        };
        let w = 1.0 + self.epsilon * c2;
        let rz = (1.0 + self.epsilon) * self.theta.cos() / w;
        let j = Matrix3::from_diagonal(&Vector3::new(
            s2 / w,
            -self.epsilon * s2 / w,
            (c2 + self.epsilon) / w,
        ));
        let r = Vector3::new(0.0, 0.0, rz);
        TwoQubitBloch::new(r, r, j)
    }

    /// The two nonzero eigenvalues `(1±e)(1±cos^2 t) / (2(1+e cos^2 t))`,
    /// followed by two zeros.
    pub fn spectrum(&self) -> [f64; 4] {
        let s = self.theta.cos().powi(2);
        let w = 2.0 * (1.0 + self.epsilon * s);
        [
            ((1.0 + self.epsilon) * (1.0 + s) / w).clamp(0.0, 1.0),
            ((1.0 - self.epsilon) * (1.0 - s) / w).clamp(0.0, 1.0),
            0.0,
            0.0,
        ]
    }

    /// Quantum discord under a transverse (x) measurement, which is the
    /// optimal direction throughout this family:
    ///
    /// ```text
    /// D = 2 h((1+L)/4) + 2 h((1-L)/4) - 1 - S(rho) + S(rho_b),
    /// L = sqrt(J_xx^2 + r_z^2).
    /// ```
    pub fn discord(&self) -> f64 {
        let h = |p: f64| f_value(EntropyKind::VonNeumann, p.clamp(0.0, 1.0)).expect("p in range");
        let b = self.bloch();
        let lam = (b.j[(0, 0)].powi(2) + b.r_b.z.powi(2)).sqrt().min(1.0);
        let measured = 2.0 * h((1.0 + lam) / 4.0) + 2.0 * h((1.0 - lam) / 4.0) - 1.0;
        let s_ab: f64 = self.spectrum().iter().map(|&p| h(p)).sum();
        let s_b = h((1.0 + b.r_b.z) / 2.0) + h((1.0 - b.r_b.z) / 2.0);
        measured - s_ab + s_b
    }

    fn branches(&self, z_branch: f64, x_branch: f64) -> BranchValue {
        let (value, axis) = if x_branch <= z_branch {
            (x_branch, BranchAxis::X)
        } else {
            (z_branch, BranchAxis::Z)
        };
        BranchValue {
            value,
            axis,
            z_branch,
            x_branch,
        }
    }

    /// Linear-entropy deficit. The two branches are
    /// `(J_xx^2 + J_yy^2) / 2` (z measurement) and
    /// `(J_yy^2 + r_z^2 + J_zz^2) / 2` (x measurement); for `epsilon = 0`
    /// they reduce to `sin^4 t / 2` and `(cos^2 t + cos^4 t) / 2`, crossing
    /// at `cos^2 t = 1/3`.
    pub fn linear_deficit(&self) -> BranchValue {
        let b = self.bloch();
        let (jx, jy, jz) = (b.j[(0, 0)], b.j[(1, 1)], b.j[(2, 2)]);
        let rz = b.r_b.z;
        self.branches(
            (jx * jx + jy * jy) / 2.0,
            (jy * jy + rz * rz + jz * jz) / 2.0,
        )
    }

    /// Cubic (Tsallis-3) deficit. Branches
    /// `(m_x + m_y - 2 det J) / 4` and `(m_y + m_z - 2 det J) / 4` with
    /// `m = diag(J_xx^2, J_yy^2, r_z^2 + J_zz^2 + 2 r_z^2 J_zz)`; for
    /// `epsilon = 0` they reduce to `sin^4 t / 4` and
    /// `(cos^2 t + 3 cos^4 t) / 4`, crossing at
    /// `cos^2 t = (sqrt(17) - 3) / 4`.
    pub fn cubic_deficit(&self) -> BranchValue {
        let b = self.bloch();
        let (jx, jy, jz) = (b.j[(0, 0)], b.j[(1, 1)], b.j[(2, 2)]);
        let rz = b.r_b.z;
        let mx = jx * jx;
        let my = jy * jy;
        let mz = rz * rz + jz * jz + 2.0 * rz * rz * jz;
        let det2 = 2.0 * jx * jy * jz;
        self.branches((mx + my - det2) / 4.0, (my + mz - det2) / 4.0)
    }

    /// Concurrence `|e| sin^2 t / (1 + e cos^2 t)`.
    pub fn concurrence(&self) -> f64 {
        let s2 = 1.0 - self.theta.cos().powi(2);
        (self.epsilon.abs() * s2 / (1.0 + self.epsilon * self.theta.cos().powi(2))).clamp(0.0, 1.0)
    }
}

/// Tilt angle where the two linear-deficit branches cross for the
/// statistical mixture: `acos(sqrt(1/3))`.
pub fn linear_crossing_angle() -> f64 {
    (1.0_f64 / 3.0).sqrt().acos()
}

/// Tilt angle where the two cubic-deficit branches cross for the
/// statistical mixture: `acos(sqrt((sqrt(17) - 3) / 4))`.
pub fn cubic_crossing_angle() -> f64 {
    ((17.0_f64.sqrt() - 3.0) / 4.0).sqrt().acos()
}
