//! Correlation measures beyond entanglement for two-qubit states, together
//! with the exact spin-chain solvers that produce such states.
//!
//! The crate is organised bottom up:
//!
//! * [`state`]: dense density matrices, the two-qubit Bloch parametrization
//!   and bipartite helpers (partial trace, Schmidt decomposition, concurrence).
//! * [`entropy`]: trace-form entropies `S_f(rho) = sum_i f(p_i)` for a family
//!   of concave `f` (von Neumann, linear, Tsallis).
//! * [`measures`]: quantum discord and the entropic information deficits
//!   obtained by minimizing over local projective measurements, including the
//!   closed forms available for the linear and cubic entropies.
//! * [`aligned`]: the one-parameter family of mixtures of two aligned product
//!   states that arises at factorizing fields, with closed-form measures.
//! * [`chains`]: XY(Z) spin-chain ground states: dense diagonalization split
//!   by parity, the free-fermion solution for cyclic chains, the fully
//!   connected collective-spin solver, and factorization-point utilities.
//! * [`random`]: seeded random state ensembles used by the test suites.
//!
//! All qubit conventions are fixed in [`state`]: `sigma_z |0> = +|0>`, and
//! basis index `a*d_B + b` orders subsystem A first.

pub mod aligned;
pub mod chains;
pub mod entropy;
pub mod error;
pub mod measures;
pub mod random;
pub mod state;

pub use error::{Error, Result};
