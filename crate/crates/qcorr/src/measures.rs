//! Measurement-based correlation measures for two-qubit states.
//!
//! A local projective measurement along the unit vector `k` on qubit B maps
//! a state with Bloch data `(r_a, r_b, J)` to the unread post-measurement
//! state with `r_b -> (r_b·k) k` and `J -> (J k) k^T`. Its spectrum has the
//! closed form
//!
//! ```text
//! p(v, w) = (1 + v r_b·k + w |r_a + v J k|) / 4,   v, w = ±1,
//! ```
//!
//! which makes the minimizations over `k` cheap: no 4x4 eigenproblem is
//! needed per direction.
//!
//! Two families are provided. The *information deficit* for an entropy kind
//! `f` minimizes `S_f(rho') - S_f(rho)` over `k`; the *quantum discord*
//! minimizes the measured conditional entropy and subtracts the quantum
//! conditional entropy `S(AB) - S(B)`. For the linear and cubic (Tsallis-3)
//! kinds the deficit minimum is known in closed form from a 3x3 eigenproblem;
//! both the closed forms and the generic sphere search are exposed so they
//! can be cross-checked against each other.

use nalgebra::{Matrix3, Vector3};

use crate::entropy::{f_derivative, f_value, entropy_of_spectrum, EntropyKind};
use crate::error::{Error, Result};
use crate::state::{eigh, partial_trace, DensityMatrix, Subsystem, TwoQubitBloch};

/// Gradient norm below which the sphere search stops refining.
pub const GRADIENT_TOL: f64 = 1e-8;
/// Two candidate minima closer than this (in value) with separated
/// directions raise the `tie` flag.
pub const TIE_TOL: f64 = 1e-12;
/// Eigenvalue gap below which a closed-form top eigenvector is degenerate.
pub const EIGENGAP_TOL: f64 = 1e-10;

/// A unit vector on the Bloch sphere selecting a projective measurement
/// basis. `k` and `-k` describe the same measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementDirection(Vector3<f64>);

impl MeasurementDirection {
    /// Normalizes `v`; rejects vectors shorter than 1e-12.
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if n < 1e-12 {
            return Err(Error::Domain("measurement direction must be nonzero".into()));
        }
        Ok(Self(v / n))
    }

    /// Accepts only vectors already normalized within 1e-12.
    pub fn unit_checked(v: Vector3<f64>) -> Result<Self> {
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "direction norm deviates from one by {:.3e}",
                (v.norm() - 1.0).abs()
            )));
        }
        Ok(Self(v))
    }

    pub fn x() -> Self {
        Self(Vector3::x())
    }

    pub fn y() -> Self {
        Self(Vector3::y())
    }

    pub fn z() -> Self {
        Self(Vector3::z())
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    /// Flips the overall sign so the component of largest magnitude is
    /// positive, picking one representative of the `{k, -k}` pair.
    pub fn canonical(self) -> Self {
        let v = self.0;
        let mut idx = 0;
        for i in 1..3 {
            if v[i].abs() > v[idx].abs() {
                idx = i;
            }
        }
        if v[idx] < 0.0 {
            Self(-v)
        } else {
            Self(v)
        }
    }
}

/// Outcome of a measure minimization.
#[derive(Clone, Debug)]
pub struct MeasureResult {
    /// The minimized measure value.
    pub value: f64,
    /// Minimizing measurement direction (sign-canonicalized).
    pub optimal_direction: MeasurementDirection,
    /// Norm of the stationarity defect at `optimal_direction`; small at a
    /// true extremum. See [`stationarity_residual_deficit`].
    pub stationarity_residual: f64,
    /// True when the residual involves a divergent `f'` (clamped logs).
    pub residual_divergent: bool,
    /// Measure values at the named candidate directions that are stationary
    /// for broad state families: the three axes and the top eigenvectors of
    /// the closed-form matrices `M2` and `M3`.
    pub candidate_values: Vec<(MeasurementDirection, f64)>,
    /// Set when distinct directions attain the minimum within [`TIE_TOL`],
    /// or when a closed-form top eigenvalue is degenerate.
    pub tie: bool,
}

/// Post-measurement Bloch data after an unread projective measurement along
/// `k` on qubit B.
pub fn post_measurement_state(b: &TwoQubitBloch, k: &MeasurementDirection) -> TwoQubitBloch {
    let k = k.vector();
    TwoQubitBloch {
        r_a: b.r_a,
        r_b: k * (b.r_b.dot(&k)),
        j: (b.j * k) * k.transpose(),
    }
}

/// The four eigenvalues of the post-measurement state, in `(v, w)` order
/// `(+,+), (+,-), (-,+), (-,-)`. Nonnegative within rounding and summing to
/// one.
pub fn post_measurement_spectrum(b: &TwoQubitBloch, k: &MeasurementDirection) -> [f64; 4] {
    let k = k.vector();
    let bk = b.r_b.dot(&k);
    let jk = b.j * k;
    let lp = (b.r_a + jk).norm();
    let lm = (b.r_a - jk).norm();
    [
        (1.0 + bk + lp) / 4.0,
        (1.0 + bk - lp) / 4.0,
        (1.0 - bk + lm) / 4.0,
        (1.0 - bk - lm) / 4.0,
    ]
}

fn clamp_probs(p: [f64; 4]) -> [f64; 4] {
    p.map(|x| x.clamp(0.0, 1.0))
}

/// `S(A|B) = S(rho_ab) - S(rho_b)` (von Neumann), for any bipartite split.
pub fn conditional_entropy_quantum(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let rho_b = partial_trace(rho, dims, Subsystem::B)?;
    let s_ab = crate::entropy::entropy(EntropyKind::VonNeumann, rho)?;
    let s_b = crate::entropy::entropy(EntropyKind::VonNeumann, &rho_b)?;
    Ok(s_ab - s_b)
}

/// Measured conditional entropy `sum_v p_v S(rho_{A|v})` for a projective
/// measurement along `k` on B, evaluated through the closed-form spectrum as
/// `S(rho') - S(rho'_b)`.
pub fn conditional_entropy_measured(b: &TwoQubitBloch, k: &MeasurementDirection) -> f64 {
    let h = |p: f64| {
        let p = p.max(0.0);
        if p > 0.0 {
            -p * p.log2()
        } else {
            0.0
        }
    };
    let spec = clamp_probs(post_measurement_spectrum(b, k));
    let bk = b.r_b.dot(&k.vector());
    let s_joint: f64 = spec.iter().map(|&p| h(p)).sum();
    let s_b = h((1.0 + bk) / 2.0) + h((1.0 - bk) / 2.0);
    s_joint - s_b
}

/// `I(A:B) = S(A) + S(B) - S(AB)` (von Neumann).
pub fn mutual_information(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let rho_a = partial_trace(rho, dims, Subsystem::A)?;
    let rho_b = partial_trace(rho, dims, Subsystem::B)?;
    let s = |r: &DensityMatrix| crate::entropy::entropy(EntropyKind::VonNeumann, r);
    Ok(s(&rho_a)? + s(&rho_b)? - s(rho)?)
}

/// Relative entropy `S(rho || sigma) = Tr rho (log2 rho - log2 sigma)`.
/// Infinite when the support of `rho` leaks outside the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "relative entropy needs equal dims, got {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let er = eigh(rho.matrix())?;
    let es = eigh(sigma.matrix())?;
    let mut total = 0.0;
    for i in 0..rho.dim() {
        let p = er.values[i].max(0.0);
        if p <= 1e-15 {
            continue;
        }
        total += p * p.log2();
        for j in 0..rho.dim() {
            let w = (er.vectors.column(i).adjoint() * es.vectors.column(j))[(0, 0)].norm_sqr();
            if w < 1e-15 {
                continue;
            }
            let q = es.values[j].max(0.0);
            if q <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total -= p * w * q.log2();
        }
    }
    Ok(total)
}

fn side_adjusted(b: &TwoQubitBloch, measured: Subsystem) -> TwoQubitBloch {
    match measured {
        Subsystem::B => *b,
        Subsystem::A => b.swap_sides(),
    }
}

/// `M2 = r_b r_b^T + J^T J`, whose top eigenvector minimizes the linear
/// deficit.
pub fn m2_matrix(b: &TwoQubitBloch) -> Matrix3<f64> {
    b.r_b * b.r_b.transpose() + b.j.transpose() * b.j
}

/// `M3 = M2 + r_b r_a^T J + J^T r_a r_b^T`, the cubic-deficit analogue.
pub fn m3_matrix(b: &TwoQubitBloch) -> Matrix3<f64> {
    let cross = b.r_b * (b.r_a.transpose() * b.j);
    m2_matrix(b) + cross + cross.transpose()
}

fn top_eigenpair(m: &Matrix3<f64>) -> (Vector3<f64>, f64) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = nalgebra::linalg::SymmetricEigen::new(sym);
    let mut top = 0;
    let mut second = f64::NEG_INFINITY;
    for i in 1..3 {
        if eig.eigenvalues[i] > eig.eigenvalues[top] {
            top = i;
        }
    }
    for i in 0..3 {
        if i != top {
            second = second.max(eig.eigenvalues[i]);
        }
    }
    (
        eig.eigenvectors.column(top).into_owned(),
        eig.eigenvalues[top] - second,
    )
}

// ---------------------------------------------------------------------------
// Sphere search
// ---------------------------------------------------------------------------

const FIB_POINTS: usize = 512;

fn fibonacci_sphere() -> Vec<Vector3<f64>> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..FIB_POINTS)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / FIB_POINTS as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = std::f64::consts::TAU * (i as f64) / golden;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

fn tangent_frame(k: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let pick = if k.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (pick - k * k.dot(&pick)).normalize();
    let e2 = k.cross(&e1);
    (e1, e2)
}

fn moved(k: &Vector3<f64>, e1: &Vector3<f64>, e2: &Vector3<f64>, a: f64, b: f64) -> Vector3<f64> {
    (k + e1 * a + e2 * b).normalize()
}

/// Local refinement on the sphere: projected gradient descent with
/// backtracking until the tangential gradient norm drops below
/// [`GRADIENT_TOL`], then a few Newton polish steps from finite-difference
/// curvature.
fn refine<F: Fn(&Vector3<f64>) -> f64>(f: &F, start: Vector3<f64>) -> (Vector3<f64>, f64) {
    let delta = 1e-6;
    let mut k = start;
    let mut fk = f(&k);
    for _ in 0..200 {
        let (e1, e2) = tangent_frame(&k);
        let g1 = (f(&moved(&k, &e1, &e2, delta, 0.0)) - f(&moved(&k, &e1, &e2, -delta, 0.0)))
            / (2.0 * delta);
        let g2 = (f(&moved(&k, &e1, &e2, 0.0, delta)) - f(&moved(&k, &e1, &e2, 0.0, -delta)))
            / (2.0 * delta);
        let gnorm = (g1 * g1 + g2 * g2).sqrt();
        if gnorm < GRADIENT_TOL {
            break;
        }
        let mut step = 0.5;
        let mut improved = false;
        while step > 1e-14 {
            let trial = moved(&k, &e1, &e2, -step * g1, -step * g2);
            let ft = f(&trial);
            if ft < fk - 0.1 * step * gnorm * gnorm {
                k = trial;
                fk = ft;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    // Newton polish: kills the last few digits that first-order steps leave.
    for _ in 0..4 {
        let h = 1e-4;
        let (e1, e2) = tangent_frame(&k);
        let fp = |a: f64, b: f64| f(&moved(&k, &e1, &e2, a, b));
        let f0 = fp(0.0, 0.0);
        let g1 = (fp(h, 0.0) - fp(-h, 0.0)) / (2.0 * h);
        let g2 = (fp(0.0, h) - fp(0.0, -h)) / (2.0 * h);
        let h11 = (fp(h, 0.0) - 2.0 * f0 + fp(-h, 0.0)) / (h * h);
        let h22 = (fp(0.0, h) - 2.0 * f0 + fp(0.0, -h)) / (h * h);
        let h12 = (fp(h, h) - fp(h, -h) - fp(-h, h) + fp(-h, -h)) / (4.0 * h * h);
        let det = h11 * h22 - h12 * h12;
        if det <= 0.0 || h11 <= 0.0 {
            break;
        }
        let da = -(h22 * g1 - h12 * g2) / det;
        let db = -(h11 * g2 - h12 * g1) / det;
        if (da * da + db * db).sqrt() > 0.2 {
            break;
        }
        let trial = moved(&k, &e1, &e2, da, db);
        let ft = f(&trial);
        if ft <= f0 + 1e-15 {
            k = trial;
            fk = ft;
        } else {
            break;
        }
    }
    (k, fk)
}

struct SearchOutcome {
    k: Vector3<f64>,
    value: f64,
    tie: bool,
}

fn angular_separation(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.dot(b).abs().clamp(0.0, 1.0).acos()
}

/// Global minimization over measurement directions: named seeds, a 512-point
/// Fibonacci covering, then local refinement of the best basin. A second,
/// well-separated basin is refined too so ties are detected rather than
/// silently broken.
fn minimize_direction<F: Fn(&Vector3<f64>) -> f64>(f: &F, seeds: &[Vector3<f64>]) -> SearchOutcome {
    let mut pool: Vec<Vector3<f64>> = seeds.to_vec();
    pool.extend(fibonacci_sphere());
    let mut best_idx = 0;
    let mut best_val = f64::INFINITY;
    let evals: Vec<f64> = pool.iter().map(f).collect();
    for (i, &v) in evals.iter().enumerate() {
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    let (k1, v1) = refine(f, pool[best_idx]);

    let mut rival_idx = None;
    let mut rival_val = f64::INFINITY;
    for (i, &v) in evals.iter().enumerate() {
        if angular_separation(&pool[i], &k1) > 0.35 && v < rival_val {
            rival_val = v;
            rival_idx = Some(i);
        }
    }
    let mut tie = false;
    let (mut k, mut value) = (k1, v1);
    if let Some(idx) = rival_idx {
        let (k2, v2) = refine(f, pool[idx]);
        if v2 < value - TIE_TOL {
            k = k2;
            value = v2;
        } else if (v2 - value).abs() <= TIE_TOL && angular_separation(&k2, &k) > 1e-4 {
            tie = true;
        }
    }
    SearchOutcome { k, value, tie }
}

fn named_seeds(b: &TwoQubitBloch) -> Vec<Vector3<f64>> {
    let (m2_top, _) = top_eigenpair(&m2_matrix(b));
    let (m3_top, _) = top_eigenpair(&m3_matrix(b));
    vec![Vector3::x(), Vector3::y(), Vector3::z(), m2_top, m3_top]
}

fn candidate_list<F: Fn(&Vector3<f64>) -> f64>(
    f: &F,
    seeds: &[Vector3<f64>],
) -> Vec<(MeasurementDirection, f64)> {
    seeds
        .iter()
        .map(|&k| {
            (
                MeasurementDirection::unit_checked(k)
                    .expect("seed is unit")
                    .canonical(),
                f(&k),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Deficits and discord
// ---------------------------------------------------------------------------

fn spectrum_of(b: &TwoQubitBloch) -> Result<[f64; 4]> {
    let rho = b.compose();
    let eig = eigh(&rho)?;
    let mut out = [0.0; 4];
    for (i, &v) in eig.values.iter().enumerate() {
        out[i] = v;
    }
    Ok(out)
}

fn deficit_objective(kind: EntropyKind, b: &TwoQubitBloch) -> impl Fn(&Vector3<f64>) -> f64 + '_ {
    move |k: &Vector3<f64>| {
        let bk = b.r_b.dot(k);
        let jk = b.j * *k;
        let lp = (b.r_a + jk).norm();
        let lm = (b.r_a - jk).norm();
        let probs = [
            (1.0 + bk + lp) / 4.0,
            (1.0 + bk - lp) / 4.0,
            (1.0 - bk + lm) / 4.0,
            (1.0 - bk - lm) / 4.0,
        ];
        probs
            .iter()
            .map(|&p| f_value(kind, p.clamp(0.0, 1.0)).expect("kind validated by caller"))
            .sum()
    }
}

/// Information deficit `min_k S_f(rho') - S_f(rho)` for a projective
/// measurement on the given side.
pub fn info_deficit(kind: EntropyKind, b: &TwoQubitBloch, measured: Subsystem) -> Result<MeasureResult> {
    f_value(kind, 0.5)?; // validates the kind up front
    let bb = side_adjusted(b, measured);
    let base = entropy_of_spectrum(kind, &spectrum_of(&bb)?.map(|p| p.max(0.0)))?;
    let obj = deficit_objective(kind, &bb);
    let seeds = named_seeds(&bb);
    let outcome = minimize_direction(&obj, &seeds);
    let k = MeasurementDirection::unit_checked(outcome.k)?.canonical();
    let residual = stationarity_residual_deficit(kind, &bb, &k)?;
    let candidates = candidate_list(&|v| obj(v) - base, &seeds);
    Ok(MeasureResult {
        value: outcome.value - base,
        optimal_direction: k,
        stationarity_residual: residual.value,
        residual_divergent: residual.divergent,
        candidate_values: candidates,
        tie: outcome.tie,
    })
}

/// Von Neumann one-way information deficit.
pub fn one_way_deficit(b: &TwoQubitBloch, measured: Subsystem) -> Result<MeasureResult> {
    info_deficit(EntropyKind::VonNeumann, b, measured)
}

/// Quantum discord: minimized measured conditional entropy minus the quantum
/// conditional entropy `S(AB) - S(B)`.
pub fn quantum_discord(b: &TwoQubitBloch, measured: Subsystem) -> Result<MeasureResult> {
    let bb = side_adjusted(b, measured);
    let spec = spectrum_of(&bb)?;
    let s_ab = entropy_of_spectrum(EntropyKind::VonNeumann, &spec.map(|p| p.max(0.0)))?;
    let rb = bb.r_b.norm();
    let s_b = entropy_of_spectrum(EntropyKind::VonNeumann, &[(1.0 + rb) / 2.0, (1.0 - rb) / 2.0])?;
    let base = s_ab - s_b;

    let obj = |k: &Vector3<f64>| {
        let d = MeasurementDirection(*k);
        conditional_entropy_measured(&bb, &d)
    };
    let seeds = named_seeds(&bb);
    let outcome = minimize_direction(&obj, &seeds);
    let k = MeasurementDirection::unit_checked(outcome.k)?.canonical();
    let residual = stationarity_residual_discord(&bb, &k)?;
    let candidates = candidate_list(&|v| obj(v) - base, &seeds);
    Ok(MeasureResult {
        value: outcome.value - base,
        optimal_direction: k,
        stationarity_residual: residual.value,
        residual_divergent: residual.divergent,
        candidate_values: candidates,
        tie: outcome.tie,
    })
}

fn closed_form_result(
    b: &TwoQubitBloch,
    m: Matrix3<f64>,
    value_of_quadratic: impl Fn(f64) -> f64,
    kind: EntropyKind,
) -> Result<MeasureResult> {
    let (top, gap) = top_eigenpair(&m);
    let k = MeasurementDirection::unit_checked(top.normalize())?.canonical();
    let per_dir = |v: &Vector3<f64>| value_of_quadratic((v.transpose() * m * v)[(0, 0)]);
    let seeds = named_seeds(b);
    let candidates = candidate_list(&per_dir, &seeds);
    let residual = stationarity_residual_deficit(kind, b, &k)?;
    Ok(MeasureResult {
        value: per_dir(&k.vector()),
        optimal_direction: k,
        stationarity_residual: residual.value,
        residual_divergent: residual.divergent,
        candidate_values: candidates,
        tie: gap < EIGENGAP_TOL,
    })
}

/// Closed-form linear-entropy deficit (geometric discord, measurement on B):
/// `I_2 = (tr M2 - max_eig M2) / 2`.
pub fn geometric_discord_closed(b: &TwoQubitBloch) -> Result<MeasureResult> {
    let m = m2_matrix(b);
    let tr = m.trace();
    closed_form_result(b, m, move |q| (tr - q) / 2.0, EntropyKind::Linear)
}

/// Closed-form cubic (Tsallis-3) deficit, measurement on B:
/// `I_3 = (tr M3 - 2 det J - max_eig M3) / 4`.
pub fn cubic_discord_closed(b: &TwoQubitBloch) -> Result<MeasureResult> {
    let m = m3_matrix(b);
    let tr = m.trace();
    let dj = 2.0 * b.j.determinant();
    closed_form_result(b, m, move |q| (tr - dj - q) / 4.0, EntropyKind::Tsallis(3.0))
}

/// Deficit of a state with maximally mixed marginals, for any kind, from the
/// ordered spectrum alone: the optimal measurement keeps the dominant
/// correlation component, pairing the two largest with the two smallest
/// eigenvalues.
pub fn mmm_deficit(kind: EntropyKind, b: &TwoQubitBloch) -> Result<f64> {
    if b.r_a.norm() > 1e-12 || b.r_b.norm() > 1e-12 {
        return Err(Error::Inconsistent(
            "mmm_deficit needs vanishing local Bloch vectors".into(),
        ));
    }
    let mut p = spectrum_of(b)?.map(|x| x.max(0.0));
    p.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let f = |x: f64| f_value(kind, x.clamp(0.0, 1.0));
    Ok(2.0 * f((p[0] + p[1]) / 2.0)? + 2.0 * f((p[2] + p[3]) / 2.0)?
        - p.iter().map(|&x| f(x).expect("validated")).sum::<f64>())
}

// ---------------------------------------------------------------------------
// Stationarity residuals
// ---------------------------------------------------------------------------

/// Stationarity defect of a direction for a measure.
#[derive(Clone, Copy, Debug)]
pub struct StationarityResidual {
    /// `|| k x (a1 r_b + a2 J^T r_a + a3 J^T J k) ||`; zero at extrema.
    pub value: f64,
    /// True when a divergent `f'` had to be clamped (zero probabilities).
    pub divergent: bool,
}

fn f_second(kind: EntropyKind, p: f64) -> f64 {
    match kind {
        EntropyKind::VonNeumann => -std::f64::consts::LOG2_E / p.max(1e-300),
        EntropyKind::Linear => -4.0,
        EntropyKind::Tsallis(q) => {
            -q * (q - 1.0) * p.max(1e-300).powf(q - 2.0) / (1.0 - (1.0 - q).exp2())
        }
    }
}

struct AlphaCoefficients {
    a1: f64,
    a2: f64,
    a3: f64,
    divergent: bool,
}

fn alpha_coefficients(kind: EntropyKind, b: &TwoQubitBloch, k: &Vector3<f64>) -> Result<AlphaCoefficients> {
    let mut a1 = 0.0;
    let mut a2 = 0.0;
    let mut a3 = 0.0;
    let mut divergent = false;
    for nu in [1.0, -1.0] {
        let c = 1.0 + nu * b.r_b.dot(k);
        let lam = (b.r_a + (b.j * *k) * nu).norm();
        let p_plus = ((c + lam) / 4.0).clamp(0.0, 1.0);
        let p_minus = ((c - lam) / 4.0).clamp(0.0, 1.0);
        let mut d_at = |p: f64| -> Result<f64> {
            let d = f_derivative(kind, p)?;
            if d.is_infinite() {
                divergent = true;
                return f_derivative(kind, p.max(1e-300));
            }
            Ok(d)
        };
        let dp = d_at(p_plus)?;
        let dm = d_at(p_minus)?;
        a1 += nu * (dp + dm) / 4.0;
        let s_nu = if lam > 1e-7 {
            (dp - dm) / lam
        } else {
            f_second(kind, c / 4.0) / 2.0
        };
        a2 += nu * s_nu / 4.0;
        a3 += s_nu / 4.0;
    }
    Ok(AlphaCoefficients { a1, a2, a3, divergent })
}

fn residual_from_alphas(b: &TwoQubitBloch, k: &Vector3<f64>, alpha: &AlphaCoefficients) -> f64 {
    let vec = b.r_b * alpha.a1
        + b.j.transpose() * b.r_a * alpha.a2
        + b.j.transpose() * (b.j * *k) * alpha.a3;
    k.cross(&vec).norm()
}

/// Stationarity residual of the deficit objective at `k` (measurement on B).
/// A vanishing value is necessary for `k` to be an extremum.
pub fn stationarity_residual_deficit(
    kind: EntropyKind,
    b: &TwoQubitBloch,
    k: &MeasurementDirection,
) -> Result<StationarityResidual> {
    let kv = k.vector();
    let alpha = alpha_coefficients(kind, b, &kv)?;
    Ok(StationarityResidual {
        value: residual_from_alphas(b, &kv, &alpha),
        divergent: alpha.divergent,
    })
}

/// Stationarity residual of the measured conditional entropy (discord
/// objective) at `k`: the deficit condition with `a1 -> a1 - eta`,
/// `eta = log2(p_- / p_+) / 2` from the outcome probabilities.
pub fn stationarity_residual_discord(
    b: &TwoQubitBloch,
    k: &MeasurementDirection,
) -> Result<StationarityResidual> {
    let kv = k.vector();
    let kind = EntropyKind::VonNeumann;
    let mut alpha = alpha_coefficients(kind, b, &kv)?;
    let bk = b.r_b.dot(&kv);
    let p_plus = ((1.0 + bk) / 2.0).max(1e-300);
    let p_minus = ((1.0 - bk) / 2.0).max(1e-300);
    if p_plus <= 1e-14 || p_minus <= 1e-14 {
        alpha.divergent = true;
    }
    let eta = (p_minus / p_plus).log2() / 2.0;
    alpha.a1 -= eta;
    Ok(StationarityResidual {
        value: residual_from_alphas(b, &kv, &alpha),
        divergent: alpha.divergent,
    })
}

// ---------------------------------------------------------------------------
// Pure state plus white noise
// ---------------------------------------------------------------------------

/// Deficit of `x |psi><psi| + (1-x) I/n` for a pure state with Schmidt
/// probabilities `schmidt` on a `dims.0 x dims.1` system (`n = d_a d_b`),
/// measured on B. Valid for any entropy kind; exact for projective
/// measurements onto the Schmidt basis, which are optimal for this family.
pub fn deficit_pure_plus_noise(
    kind: EntropyKind,
    x: f64,
    schmidt: &[f64],
    dims: (usize, usize),
) -> Result<f64> {
    let (da, db) = dims;
    let n = (da * db) as f64;
    let ns = schmidt.len();
    if ns == 0 || ns > da.min(db) {
        return Err(Error::Dimension(format!(
            "{} Schmidt terms do not fit dims {}x{}",
            ns, da, db
        )));
    }
    let total: f64 = schmidt.iter().sum();
    if (total - 1.0).abs() > 1e-12 || schmidt.iter().any(|&p| p < -1e-12) {
        return Err(Error::Domain("Schmidt probabilities must form a distribution".into()));
    }
    if !(0.0..=1.0 + 1e-12).contains(&x) {
        return Err(Error::Domain(format!("mixing weight {x} outside [0, 1]")));
    }
    let x = x.min(1.0);
    let f = |p: f64| f_value(kind, p.clamp(0.0, 1.0));
    let mut total = 0.0;
    for &p in schmidt {
        total += f((x * (n * p - 1.0) + 1.0) / n)?;
    }
    total -= f((x * (n - 1.0) + 1.0) / n)?;
    total -= (ns as f64 - 1.0) * f((1.0 - x) / n)?;
    Ok(total)
}
