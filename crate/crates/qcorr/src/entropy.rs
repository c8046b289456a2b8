//! Trace-form entropies `S_f(rho) = sum_i f(p_i)` over the spectrum of a
//! state, for concave `f` with `f(0) = f(1) = 0`.
//!
//! All kinds share the normalization `2 f(1/2) = 1`, so a maximally mixed
//! qubit has one unit of entropy regardless of the kind. Logarithms are base
//! two. `Tsallis(2.0)` coincides numerically with `Linear` but is kept as a
//! distinct kind on purpose.

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, EIGENVALUE_FLOOR};

/// Concave single-letter entropy function family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyKind {
    /// `f(p) = -p log2 p`.
    VonNeumann,
    /// `f(p) = 2 p (1 - p)`, i.e. `S_2(rho) = 2 (1 - Tr rho^2)`.
    Linear,
    /// `f(p) = (p - p^q) / (1 - 2^(1-q))` for `q > 0`, `q != 1`.
    Tsallis(f64),
}

impl EntropyKind {
    fn validate(&self) -> Result<()> {
        if let EntropyKind::Tsallis(q) = *self {
            if !q.is_finite() || q <= 0.0 {
                return Err(Error::Domain(format!("tsallis exponent must be positive, got {q}")));
            }
            if (q - 1.0).abs() < 1e-12 {
                return Err(Error::Domain(
                    "tsallis exponent 1 is the von Neumann limit; use VonNeumann".into(),
                ));
            }
        }
        Ok(())
    }
}

const P_SLACK: f64 = 1e-12;

fn checked_p(p: f64) -> Result<f64> {
    if !(-P_SLACK..=1.0 + P_SLACK).contains(&p) {
        return Err(Error::Domain(format!("probability {p:.6e} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `f(p)` for the given kind. `p` may stray from `[0, 1]` by at most 1e-12.
pub fn f_value(kind: EntropyKind, p: f64) -> Result<f64> {
    kind.validate()?;
    let p = checked_p(p)?;
    Ok(match kind {
        EntropyKind::VonNeumann => {
            if p <= 0.0 {
                0.0
            } else {
                -p * p.log2()
            }
        }
        EntropyKind::Linear => 2.0 * p * (1.0 - p),
        EntropyKind::Tsallis(q) => (p - p.powf(q)) / (1.0 - (1.0 - q).exp2()),
    })
}

/// `f'(p)`. Divergent endpoints (von Neumann at 0, Tsallis with `q < 1` at 0)
/// return `f64::INFINITY`; callers that care must check for it.
pub fn f_derivative(kind: EntropyKind, p: f64) -> Result<f64> {
    kind.validate()?;
    let p = checked_p(p)?;
    Ok(match kind {
        EntropyKind::VonNeumann => {
            if p <= 0.0 {
                f64::INFINITY
            } else {
                -p.log2() - std::f64::consts::LOG2_E
            }
        }
        EntropyKind::Linear => 2.0 - 4.0 * p,
        EntropyKind::Tsallis(q) => {
            if p <= 0.0 && q < 1.0 {
                f64::INFINITY
            } else {
                (1.0 - q * p.powf(q - 1.0)) / (1.0 - (1.0 - q).exp2())
            }
        }
    })
}

/// `S_f` of an explicit spectrum. Entries in `[-1e-10, 0)` are clipped to
/// zero; anything lower is rejected.
pub fn entropy_of_spectrum(kind: EntropyKind, spectrum: &[f64]) -> Result<f64> {
    kind.validate()?;
    let mut total = 0.0;
    for &p in spectrum {
        if p < EIGENVALUE_FLOOR {
            return Err(Error::NotPositive(p));
        }
        total += f_value(kind, p.max(0.0))?;
    }
    Ok(total)
}

/// `S_f(rho) = sum_i f(p_i)` over the eigenvalues of `rho`.
pub fn entropy(kind: EntropyKind, rho: &DensityMatrix) -> Result<f64> {
    let vals = rho.eigenvalues();
    entropy_of_spectrum(kind, vals.as_slice())
}
