//! Sweep runners. Grid points are dispatched to the rayon pool; output order
//! is fixed by the grid regardless of completion order.

use rayon::prelude::*;

use qcorr::aligned::AlignedPair;
use qcorr::chains::{
    build_hamiltonian_dense, check_factorization, eigenstate_residual, ground_state_dense,
    ground_state_jw, lipkin_ground_state, pair_rdm_dense, pair_rdm_from_observables,
    tilted_product_state, uniform_factorizing_field, ChainSpec, Parity,
};
use qcorr::entropy::EntropyKind;
use qcorr::measures::{info_deficit, one_way_deficit, quantum_discord};
use qcorr::state::{bloch_decompose, concurrence, DensityMatrix, Subsystem};

use crate::config::{MeasureSet, Model, SweepConfig};
use crate::record::Record;

/// Closed forms and their sphere-searched counterparts must agree to this
/// tolerance or the run fails with the consistency exit code.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-8;

/// No emitted measure may fall below this.
pub const NEGATIVITY_FLOOR: f64 = -1e-10;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency: {0}")]
    Inconsistent(String),
    #[error("compute: {0}")]
    Compute(#[from] qcorr::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Unsupported(_) => 3,
            RunError::Inconsistent(_) => 4,
            RunError::Compute(qcorr::Error::Unsupported(_)) => 3,
            RunError::Compute(qcorr::Error::Dimension(_)) => 3,
            RunError::Compute(_) => 4,
            RunError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainSolver {
    Auto,
    FreeFermion,
    Dense,
}

#[derive(Debug, Default, Clone)]
struct Bundle {
    d: Option<f64>,
    i1: Option<f64>,
    i2: Option<f64>,
    i3: Option<f64>,
    iq: Option<f64>,
    c: Option<f64>,
    k: Option<[f64; 3]>,
    tie: bool,
    divergent: bool,
}

impl Bundle {
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        [self.d, self.i1, self.i2, self.i3, self.iq, self.c].into_iter().flatten()
    }
}

fn searched_measures(rho: &DensityMatrix, set: &MeasureSet) -> Result<Bundle, RunError> {
    let b = bloch_decompose(rho)?;
    let mut out = Bundle::default();
    if set.discord {
        let r = quantum_discord(&b, Subsystem::B)?;
        out.d = Some(r.value);
        let k = r.optimal_direction.canonical().vector();
        out.k = Some([k.x, k.y, k.z]);
        out.tie |= r.tie;
        out.divergent |= r.residual_divergent;
    }
    if set.deficit1 {
        let r = one_way_deficit(&b, Subsystem::B)?;
        out.i1 = Some(r.value);
        out.tie |= r.tie;
        out.divergent |= r.residual_divergent;
    }
    if set.deficit2 {
        let r = info_deficit(EntropyKind::Linear, &b, Subsystem::B)?;
        out.i2 = Some(r.value);
        out.tie |= r.tie;
        out.divergent |= r.residual_divergent;
    }
    if set.deficit3 {
        let r = info_deficit(EntropyKind::Tsallis(3.0), &b, Subsystem::B)?;
        out.i3 = Some(r.value);
        out.tie |= r.tie;
        out.divergent |= r.residual_divergent;
    }
    if let Some(q) = set.deficit_q {
        let r = info_deficit(EntropyKind::Tsallis(q), &b, Subsystem::B)?;
        out.iq = Some(r.value);
        out.tie |= r.tie;
        out.divergent |= r.residual_divergent;
    }
    if set.concurrence {
        out.c = Some(concurrence(rho)?);
    }
    check_floor(&out)?;
    Ok(out)
}

fn check_floor(bundle: &Bundle) -> Result<(), RunError> {
    for v in bundle.values() {
        if !v.is_finite() {
            return Err(RunError::Inconsistent(format!("non-finite measure value {v}")));
        }
        if v < NEGATIVITY_FLOOR {
            return Err(RunError::Inconsistent(format!("measure value {v} below {NEGATIVITY_FLOOR}")));
        }
    }
    Ok(())
}

/// Closed-form values of the equal-weight tilted pair, used both as the main
/// columns of the aligned sweep and as the mean-field reference of the chain
/// and collective sweeps.
#[derive(Debug, Default, Clone)]
struct ClosedBundle {
    d: Option<f64>,
    i1: Option<f64>,
    i2: Option<f64>,
    i3: Option<f64>,
    c: Option<f64>,
}

fn closed_measures(theta: f64, set: &MeasureSet) -> Result<ClosedBundle, RunError> {
    let pair = AlignedPair::statistical(theta);
    let mut out = ClosedBundle::default();
    if set.discord {
        out.d = Some(pair.discord());
    }
    if set.deficit1 {
        // No closed form; search on the pair itself.
        let b = pair.bloch();
        out.i1 = Some(one_way_deficit(&b, Subsystem::B)?.value);
    }
    if set.deficit2 {
        out.i2 = Some(pair.linear_deficit().value);
    }
    if set.deficit3 {
        out.i3 = Some(pair.cubic_deficit().value);
    }
    if set.concurrence {
        out.c = Some(pair.concurrence());
    }
    Ok(out)
}

fn flag_list(degenerate: bool, bundle: &Bundle) -> Vec<&'static str> {
    let mut flags = Vec::new();
    if degenerate {
        flags.push("degenerate");
    }
    if bundle.tie {
        flags.push("tie");
    }
    if bundle.divergent {
        flags.push("divergent");
    }
    flags
}

fn apply_direction(record: &mut Record, bundle: &Bundle) {
    if let Some([kx, ky, kz]) = bundle.k {
        record.kx = Some(kx);
        record.ky = Some(ky);
        record.kz = Some(kz);
    }
}

pub fn run_aligned(cfg: &SweepConfig) -> Result<Vec<Record>, RunError> {
    let thetas = cfg.grid.values();
    eprintln!("aligned sweep: {} angles", thetas.len());

    let records: Vec<Record> = thetas
        .par_iter()
        .map(|&theta| -> Result<Record, RunError> {
            let pair = AlignedPair::statistical(theta);
            let rho = pair.bloch().to_density()?;
            let searched = searched_measures(&rho, &cfg.measures)?;
            let closed = closed_measures(theta, &cfg.measures)?;

            let mut diff_max = 0.0f64;
            for (a, b) in [
                (closed.d, searched.d),
                (closed.i2, searched.i2),
                (closed.i3, searched.i3),
                (closed.c, searched.c),
            ] {
                if let (Some(a), Some(b)) = (a, b) {
                    diff_max = diff_max.max((a - b).abs());
                }
            }

            let mut record = Record {
                model_label: "aligned",
                b_or_theta: theta,
                d: closed.d,
                i1: closed.i1,
                i2: closed.i2,
                i3: closed.i3,
                c: closed.c,
                iq: searched.iq,
                d_search: searched.d,
                i2_search: searched.i2,
                i3_search: searched.i3,
                diff_max: Some(diff_max),
                flags: flag_list(false, &searched),
                ..Record::default()
            };
            apply_direction(&mut record, &searched);
            Ok(record)
        })
        .collect::<Result<_, _>>()?;

    let worst = records.iter().filter_map(|r| r.diff_max).fold(0.0f64, f64::max);
    if worst > CONSISTENCY_TOLERANCE {
        return Err(RunError::Inconsistent(format!(
            "closed forms and search disagree by {worst:.3e} (tolerance {CONSISTENCY_TOLERANCE:.0e})"
        )));
    }
    eprintln!("aligned sweep: {} records, closed-vs-search max {worst:.3e}", records.len());
    Ok(records)
}

fn reference_bundle(b_scaled: f64, set: &MeasureSet) -> Result<Option<ClosedBundle>, RunError> {
    if b_scaled.abs() > 1.0 {
        return Ok(None);
    }
    Ok(Some(closed_measures(b_scaled.clamp(-1.0, 1.0).acos(), set)?))
}

fn parity_char(p: Parity) -> char {
    match p {
        Parity::Plus => '+',
        Parity::Minus => '-',
    }
}

struct SectorSummary {
    e_plus: f64,
    e_minus: f64,
    parity: Parity,
    degenerate: bool,
}

fn base_record(cfg: &SweepConfig, label: &'static str, b: f64, summary: &SectorSummary) -> Record {
    Record {
        model_label: label,
        n: Some(cfg.n),
        chi: Some(cfg.chi),
        b_or_theta: b,
        parity: Some(parity_char(summary.parity)),
        e_minus: Some(summary.e_minus),
        e_plus: Some(summary.e_plus),
        ..Record::default()
    }
}

fn finish_record(record: &mut Record, bundle: &Bundle, reference: &Option<ClosedBundle>, degenerate: bool) {
    record.d = bundle.d;
    record.i1 = bundle.i1;
    record.i2 = bundle.i2;
    record.i3 = bundle.i3;
    record.iq = bundle.iq;
    record.c = bundle.c;
    record.flags = flag_list(degenerate, bundle);
    apply_direction(record, bundle);
    if let Some(reference) = reference {
        record.d_ref = reference.d;
        record.i1_ref = reference.i1;
        record.i2_ref = reference.i2;
        record.i3_ref = reference.i3;
        record.c_ref = reference.c;
    }
}

pub fn run_chain(cfg: &SweepConfig, solver: ChainSolver) -> Result<Vec<Record>, RunError> {
    if cfg.model != Model::CyclicNn {
        return Err(RunError::Unsupported(format!(
            "chain sweeps cover the cyclic_nn model, not {}",
            cfg.model
        )));
    }
    let n = cfg.n;
    let solver = match solver {
        ChainSolver::Auto => {
            if n >= 4 && n % 2 == 0 {
                ChainSolver::FreeFermion
            } else if n <= 12 {
                ChainSolver::Dense
            } else {
                return Err(RunError::Unsupported(format!(
                    "no solver for an odd ring of {n} sites beyond the dense range"
                )));
            }
        }
        other => other,
    };
    let jy = cfg.chi * cfg.jx;
    let fields = cfg.grid.values();
    eprintln!(
        "chain sweep: {} fields x {} separations (n={n}, chi={}, {})",
        fields.len(),
        cfg.separations.len(),
        cfg.chi,
        match solver {
            ChainSolver::FreeFermion => "free-fermion solver",
            _ => "dense solver",
        }
    );

    let per_field: Vec<Vec<Record>> = fields
        .par_iter()
        .map(|&b| -> Result<Vec<Record>, RunError> {
            let field = b * cfg.jx;
            let reference = reference_bundle(b, &cfg.measures)?;
            let mut records = Vec::with_capacity(cfg.separations.len());
            match solver {
                ChainSolver::FreeFermion => {
                    let spec = ChainSpec::cyclic_xy(n, cfg.jx, jy, field)?;
                    let ground = ground_state_jw(&spec)?;
                    let summary = SectorSummary {
                        e_plus: ground.plus.energy(),
                        e_minus: ground.minus.energy(),
                        parity: ground.ground().parity(),
                        degenerate: ground.degenerate(),
                    };
                    for &l in &cfg.separations {
                        let rdm =
                            pair_rdm_from_observables(&ground.ground().pair_observables(0, l)?)?;
                        let bundle = searched_measures(&rdm, &cfg.measures)?;
                        let mut record = base_record(cfg, "cyclic_nn", b, &summary);
                        record.l = Some(l);
                        finish_record(&mut record, &bundle, &reference, summary.degenerate);
                        records.push(record);
                    }
                }
                _ => {
                    let spec = ChainSpec::cyclic_nn(n, 1, cfg.jx, jy, 0.0, field)?;
                    let ground = ground_state_dense(&spec)?;
                    let summary = SectorSummary {
                        e_plus: ground.plus.energy,
                        e_minus: ground.minus.energy,
                        parity: ground.ground().parity,
                        degenerate: ground.degenerate(),
                    };
                    for &l in &cfg.separations {
                        let rdm = pair_rdm_dense(&ground.ground().ket, n, 1, 0, l)?;
                        let bundle = searched_measures(&rdm, &cfg.measures)?;
                        let mut record = base_record(cfg, "cyclic_nn", b, &summary);
                        record.l = Some(l);
                        finish_record(&mut record, &bundle, &reference, summary.degenerate);
                        records.push(record);
                    }
                }
            }
            Ok(records)
        })
        .collect::<Result<_, _>>()?;

    let records: Vec<Record> = per_field.into_iter().flatten().collect();
    eprintln!("chain sweep: {} records", records.len());
    Ok(records)
}

pub fn run_lipkin(cfg: &SweepConfig) -> Result<Vec<Record>, RunError> {
    if cfg.model != Model::FullyConnected {
        return Err(RunError::Unsupported(format!(
            "collective sweeps cover the fully_connected model, not {}",
            cfg.model
        )));
    }
    let jy = cfg.chi * cfg.jx;
    let fields = cfg.grid.values();
    eprintln!("collective sweep: {} fields (n={}, chi={})", fields.len(), cfg.n, cfg.chi);

    let records: Vec<Record> = fields
        .par_iter()
        .map(|&b| -> Result<Record, RunError> {
            let ground = lipkin_ground_state(cfg.n, cfg.jx, jy, b * cfg.jx)?;
            let summary = SectorSummary {
                e_plus: ground.plus.energy,
                e_minus: ground.minus.energy,
                parity: ground.ground().parity,
                degenerate: ground.degenerate(),
            };
            let rdm = ground.ground().pair_rdm()?;
            let bundle = searched_measures(&rdm, &cfg.measures)?;
            let reference = reference_bundle(b, &cfg.measures)?;
            let mut record = base_record(cfg, "fully_connected", b, &summary);
            finish_record(&mut record, &bundle, &reference, summary.degenerate);
            Ok(record)
        })
        .collect::<Result<_, _>>()?;

    eprintln!("collective sweep: {} records", records.len());
    Ok(records)
}

#[derive(Debug, Clone)]
pub struct FactorizeReport {
    pub model: Model,
    pub n: usize,
    pub chi: f64,
    pub jx: f64,
    pub theta: f64,
    pub bulk_field: f64,
    pub first_field: f64,
    pub last_field: f64,
    pub pair_residual_max: f64,
    pub site_residual_max: f64,
    pub eigenstate_residual: Option<f64>,
}

pub fn run_factorize(model: Model, n: usize, chi: f64, jx: f64) -> Result<FactorizeReport, RunError> {
    let jy = chi * jx;
    let bare = match model {
        Model::CyclicNn => ChainSpec::cyclic_nn(n, 1, jx, jy, 0.0, 0.0)?,
        Model::OpenNn => ChainSpec::open_nn(n, 1, jx, jy, 0.0, 0.0)?,
        Model::FullyConnected => ChainSpec::fully_connected(n, 1, jx, jy, 0.0, 0.0)?,
        Model::Aligned => {
            return Err(RunError::Unsupported(
                "factorize needs a lattice model (cyclic_nn, open_nn or fully_connected)".into(),
            ))
        }
    };
    let field = uniform_factorizing_field(&bare).map_err(|e| RunError::Config(e.to_string()))?;
    let spec = bare.with_field_profile(field.profile.clone())?;
    let residuals = check_factorization(&spec, &vec![field.theta; n])?;
    let pair_residual_max = residuals.pair.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let site_residual_max = residuals.site.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let eigenstate = if spec.hilbert_dim().map(|d| d <= 4096).unwrap_or(false) {
        let h = build_hamiltonian_dense(&spec)?;
        let ket = tilted_product_state(&spec, &vec![field.theta; n])?;
        Some(eigenstate_residual(&h, &ket))
    } else {
        None
    };

    Ok(FactorizeReport {
        model,
        n,
        chi,
        jx,
        theta: field.theta,
        bulk_field: field.bulk(),
        first_field: field.profile[0],
        last_field: field.profile[n - 1],
        pair_residual_max,
        site_residual_max,
        eigenstate_residual: eigenstate,
    })
}

pub fn render_factorize(report: &FactorizeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "model={} n={} chi={} Jx={}\n",
        report.model, report.n, report.chi, report.jx
    ));
    out.push_str(&format!("theta={:.10e}\n", report.theta));
    out.push_str(&format!("B_s={:.10e}\n", report.bulk_field));
    out.push_str(&format!(
        "border_fields={:.10e},{:.10e}\n",
        report.first_field, report.last_field
    ));
    out.push_str(&format!("pair_residual_max={:.3e}\n", report.pair_residual_max));
    out.push_str(&format!("site_residual_max={:.3e}\n", report.site_residual_max));
    if let Some(r) = report.eigenstate_residual {
        out.push_str(&format!("eigenstate_residual={:.3e}\n", r));
    }
    out
}
