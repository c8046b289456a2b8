//! Correlation measures cross-checked three ways: dense matrix oracles for
//! the measurement machinery, closed forms against generic sphere search,
//! and the stationarity conditions at claimed optima.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcorr::aligned::AlignedPair;
use qcorr::entropy::{entropy, entropy_of_spectrum, EntropyKind};
use qcorr::measures::{
    conditional_entropy_measured, conditional_entropy_quantum, cubic_discord_closed,
    deficit_pure_plus_noise, geometric_discord_closed, info_deficit, m2_matrix, m3_matrix,
    mmm_deficit, mutual_information, one_way_deficit, post_measurement_spectrum,
    post_measurement_state, quantum_discord, relative_entropy, stationarity_residual_deficit,
    stationarity_residual_discord, MeasurementDirection,
};
use qcorr::random::{
    random_density, random_direction, random_ket, random_mixed_marginals, random_rotation,
    random_simplex, random_two_qubit, random_x_state,
};
use qcorr::state::{
    bloch_decompose, concurrence, partial_trace, paulis, DensityMatrix, Subsystem, TwoQubitBloch,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn bell_density() -> DensityMatrix {
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    DensityMatrix::from_pure(&DVector::from_vec(vec![h, c(0.0), c(0.0), h])).unwrap()
}

fn bell_bloch() -> TwoQubitBloch {
    bloch_decompose(&bell_density()).unwrap()
}

fn projector(k: &Vector3<f64>, sign: f64) -> DMatrix<Complex64> {
    let sig = paulis();
    DMatrix::from_fn(2, 2, |r, s| {
        let mut v = if r == s { c(0.5) } else { c(0.0) };
        for u in 0..3 {
            v += sig[u][(r, s)] * c(0.5 * sign * k[u]);
        }
        v
    })
}

fn top_axis(m: &Matrix3<f64>) -> Vector3<f64> {
    let eig = SymmetricEigen::new(*m);
    let mut best = 0;
    for i in 1..3 {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    eig.eigenvectors.column(best).into_owned()
}

/// X-shaped state with real off-diagonal entries, so its correlation matrix
/// is diagonal and its Bloch vectors point along z.
fn random_real_x_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitBloch {
    let p = random_simplex(4, rng);
    let f = rng.gen::<f64>() * (p[0] * p[3]).sqrt();
    let g = rng.gen::<f64>() * (p[1] * p[2]).sqrt();
    let z = c(0.0);
    let mat = DMatrix::from_row_slice(
        4,
        4,
        &[
            c(p[0]), z, z, c(f),
            z, c(p[1]), c(g), z,
            z, c(g), c(p[2]), z,
            c(f), z, z, c(p[3]),
        ],
    );
    bloch_decompose(&DensityMatrix::new(mat).unwrap()).unwrap()
}

#[test]
fn measurement_projects_bloch_data_and_matches_projector_oracle() {
    let k = MeasurementDirection::z();
    let fixed = TwoQubitBloch::new(
        Vector3::new(0.1, 0.0, 0.2),
        Vector3::new(0.0, 0.0, 0.4),
        Matrix3::new(0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.4),
    );
    fixed.to_density().unwrap();
    let after = post_measurement_state(&fixed, &k);
    assert!((after.r_a - fixed.r_a).norm() < 1e-14);
    assert!((after.r_b - fixed.r_b).norm() < 1e-14);
    assert!((after.j - fixed.j).norm() < 1e-14);

    let bell_after = post_measurement_state(&bell_bloch(), &k).to_density().unwrap();
    let mut expected = DMatrix::from_element(4, 4, c(0.0));
    expected[(0, 0)] = c(0.5);
    expected[(3, 3)] = c(0.5);
    assert!((bell_after.matrix() - expected).norm() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let b = random_two_qubit(&mut rng);
        let kv = random_direction(&mut rng);
        let k = MeasurementDirection::unit_checked(kv).unwrap();
        let rho = b.to_density().unwrap();
        let mut sandwich = DMatrix::from_element(4, 4, c(0.0));
        for sign in [1.0, -1.0] {
            let proj = DMatrix::identity(2, 2).kronecker(&projector(&kv, sign));
            sandwich += &proj * rho.matrix() * &proj;
        }
        let through_bloch = post_measurement_state(&b, &k).to_density().unwrap();
        assert!((through_bloch.matrix() - sandwich).norm() < 1e-12);
    }
}

#[test]
fn post_measurement_spectrum_matches_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let flat = bloch_decompose(&DensityMatrix::maximally_mixed(4)).unwrap();
    for _ in 0..5 {
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        for p in post_measurement_spectrum(&flat, &k) {
            assert!((p - 0.25).abs() < 1e-14);
        }
    }

    let perp = AlignedPair::statistical(std::f64::consts::FRAC_PI_2);
    let mut spec = post_measurement_spectrum(&perp.bloch(), &MeasurementDirection::x());
    spec.sort_by(|a, b| b.total_cmp(a));
    assert!((spec[0] - 0.5).abs() < 1e-12);
    assert!((spec[1] - 0.5).abs() < 1e-12);
    assert!(spec[2].abs() < 1e-12 && spec[3].abs() < 1e-12);

    for _ in 0..40 {
        let b = random_two_qubit(&mut rng);
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        let probs = post_measurement_spectrum(&b, &k);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(probs.iter().all(|&p| (-1e-12..=1.0 + 1e-12).contains(&p)));
        let mut sorted = probs;
        sorted.sort_by(|a, b| b.total_cmp(a));
        let dense = post_measurement_state(&b, &k).to_density().unwrap();
        let eig = dense.eigenvalues();
        for (a, e) in sorted.iter().zip(eig.iter()) {
            assert!((a - e).abs() < 1e-10);
        }
    }
}

#[test]
fn conditional_entropy_quantum_reference_values() {
    assert!((conditional_entropy_quantum(&bell_density(), (2, 2)).unwrap() + 1.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let rho_a = random_density(2, 2, &mut rng);
    let rho_b = random_density(2, 2, &mut rng);
    let product = DensityMatrix::new(rho_a.matrix().kronecker(rho_b.matrix())).unwrap();
    let s_a = entropy(EntropyKind::VonNeumann, &rho_a).unwrap();
    assert!((conditional_entropy_quantum(&product, (2, 2)).unwrap() - s_a).abs() < 1e-10);

    let p = random_simplex(4, &mut rng);
    let classical = DensityMatrix::new(DMatrix::from_diagonal(&DVector::from_iterator(
        4,
        p.iter().map(|&x| c(x)),
    )))
    .unwrap();
    let h_joint = entropy_of_spectrum(EntropyKind::VonNeumann, &p).unwrap();
    let h_b = entropy_of_spectrum(EntropyKind::VonNeumann, &[p[0] + p[2], p[1] + p[3]]).unwrap();
    let got = conditional_entropy_quantum(&classical, (2, 2)).unwrap();
    assert!(got >= -1e-12);
    assert!((got - (h_joint - h_b)).abs() < 1e-10);
}

#[test]
fn measured_conditional_entropy_two_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);

    let rho_a = random_density(2, 2, &mut rng);
    let rho_b = random_density(2, 2, &mut rng);
    let product =
        bloch_decompose(&DensityMatrix::new(rho_a.matrix().kronecker(rho_b.matrix())).unwrap())
            .unwrap();
    let s_a = entropy(EntropyKind::VonNeumann, &rho_a).unwrap();
    for _ in 0..5 {
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        assert!((conditional_entropy_measured(&product, &k) - s_a).abs() < 1e-10);
    }

    assert!(conditional_entropy_measured(&bell_bloch(), &MeasurementDirection::z()).abs() < 1e-12);

    for _ in 0..40 {
        let b = random_two_qubit(&mut rng);
        let kv = random_direction(&mut rng);
        let k = MeasurementDirection::unit_checked(kv).unwrap();
        let rho = b.to_density().unwrap();
        let mut by_outcomes = 0.0;
        for sign in [1.0, -1.0] {
            let proj = DMatrix::identity(2, 2).kronecker(&projector(&kv, sign));
            let sub = &proj * rho.matrix() * &proj;
            let weight = sub.trace().re;
            if weight < 1e-14 {
                continue;
            }
            let cond = DensityMatrix::new(sub / c(weight)).unwrap();
            let marginal = partial_trace(&cond, (2, 2), Subsystem::A).unwrap();
            by_outcomes += weight * entropy(EntropyKind::VonNeumann, &marginal).unwrap();
        }
        let direct = conditional_entropy_measured(&b, &k);
        assert!((direct - by_outcomes).abs() < 1e-10);
        assert!(direct >= -1e-12);
    }
}

#[test]
fn discord_reference_states() {
    let bell = quantum_discord(&bell_bloch(), Subsystem::B).unwrap();
    assert!((bell.value - 1.0).abs() < 1e-8);

    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..10 {
        let axis = random_direction(&mut rng);
        let weights = random_simplex(2, &mut rng);
        let mut dense = DMatrix::from_element(4, 4, c(0.0));
        for (j, sign) in [1.0, -1.0].iter().enumerate() {
            let pointer = projector(&axis, *sign);
            let block = random_density(2, 2, &mut rng);
            dense += block.matrix().kronecker(&pointer) * c(weights[j]);
        }
        let classical = bloch_decompose(&DensityMatrix::new(dense).unwrap()).unwrap();
        let d = quantum_discord(&classical, Subsystem::B).unwrap();
        assert!(d.value.abs() < 1e-8, "B-classical state has discord {}", d.value);
    }

    let pair = AlignedPair::statistical(std::f64::consts::FRAC_PI_4);
    let closed = pair.discord();
    let searched = quantum_discord(&pair.bloch(), Subsystem::B).unwrap();
    assert!((searched.value - closed).abs() < 1e-8);
    let k = searched.optimal_direction.vector();
    assert!(k.x.abs() > 1.0 - 1e-6, "optimal direction {k:?} should be x");
}

#[test]
fn closed_forms_match_search_on_reference_families() {
    let bell = bell_bloch();
    assert!((geometric_discord_closed(&bell).unwrap().value - 1.0).abs() < 1e-12);
    assert!((cubic_discord_closed(&bell).unwrap().value - 1.0).abs() < 1e-12);
    assert!((one_way_deficit(&bell, Subsystem::B).unwrap().value - 1.0).abs() < 1e-8);
    assert!(
        (info_deficit(EntropyKind::Linear, &bell, Subsystem::B).unwrap().value - 1.0).abs() < 1e-8
    );

    for x in [0.0, 0.3, 0.7, 1.0] {
        let werner = TwoQubitBloch::new(
            Vector3::zeros(),
            Vector3::zeros(),
            Matrix3::from_diagonal(&Vector3::new(x, -x, x)),
        );
        let closed = geometric_discord_closed(&werner).unwrap();
        assert!((closed.value - x * x).abs() < 1e-12);
        let searched = info_deficit(EntropyKind::Linear, &werner, Subsystem::B).unwrap();
        assert!((searched.value - x * x).abs() < 1e-8);
    }

    let pair = AlignedPair::statistical(std::f64::consts::FRAC_PI_4);
    assert!((geometric_discord_closed(&pair.bloch()).unwrap().value - 0.125).abs() < 1e-12);
    assert!((cubic_discord_closed(&pair.bloch()).unwrap().value - 0.0625).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..40 {
        let b = random_x_state(&mut rng);
        let closed = geometric_discord_closed(&b).unwrap();
        let searched = info_deficit(EntropyKind::Linear, &b, Subsystem::B).unwrap();
        assert!((closed.value - searched.value).abs() < 1e-8);
    }
    for _ in 0..40 {
        let b = random_two_qubit(&mut rng);
        let geo = geometric_discord_closed(&b).unwrap();
        let lin = info_deficit(EntropyKind::Linear, &b, Subsystem::B).unwrap();
        assert!((geo.value - lin.value).abs() < 1e-8);
        let cubic = cubic_discord_closed(&b).unwrap();
        let ts3 = info_deficit(EntropyKind::Tsallis(3.0), &b, Subsystem::B).unwrap();
        assert!((cubic.value - ts3.value).abs() < 1e-8);
    }
}

#[test]
fn measure_results_are_internally_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..25 {
        let b = random_two_qubit(&mut rng);
        for result in [
            quantum_discord(&b, Subsystem::B).unwrap(),
            one_way_deficit(&b, Subsystem::B).unwrap(),
            info_deficit(EntropyKind::Linear, &b, Subsystem::B).unwrap(),
            info_deficit(EntropyKind::Tsallis(3.0), &b, Subsystem::B).unwrap(),
        ] {
            assert!(result.value >= -1e-10);
            for (_, v) in &result.candidate_values {
                assert!(result.value <= *v + 1e-9);
            }
            if !result.residual_divergent {
                assert!(result.stationarity_residual < 1e-6);
            }
        }
    }
}

#[test]
fn one_way_deficit_equals_minimal_relative_entropy() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for _ in 0..30 {
        let b = random_two_qubit(&mut rng);
        let rho = b.to_density().unwrap();
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        let post = post_measurement_state(&b, &k).to_density().unwrap();
        let gap = entropy(EntropyKind::VonNeumann, &post).unwrap()
            - entropy(EntropyKind::VonNeumann, &rho).unwrap();
        let rel = relative_entropy(&rho, &post).unwrap();
        assert!((rel - gap).abs() < 1e-9, "{rel} vs {gap}");
    }

    let b = random_two_qubit(&mut rng);
    let result = one_way_deficit(&b, Subsystem::B).unwrap();
    let rho = b.to_density().unwrap();
    let post = post_measurement_state(&b, &result.optimal_direction)
        .to_density()
        .unwrap();
    assert!((relative_entropy(&rho, &post).unwrap() - result.value).abs() < 1e-8);
}

#[test]
fn deficit_direction_drifts_smoothly_from_z_to_x() {
    // The von Neumann deficit moves its optimum through genuinely tilted
    // directions, while the linear deficit snaps straight from z to x.
    let steps = 60;
    let mut intermediate = 0;
    let mut previous: Option<f64> = None;
    for i in 0..=steps {
        let theta = 0.3 + (1.5 - 0.3) * i as f64 / steps as f64;
        let pair = AlignedPair::statistical(theta);
        let result = one_way_deficit(&pair.bloch(), Subsystem::B).unwrap();
        let k = result.optimal_direction.vector();
        assert!(k.y.abs() < 1e-6, "optimum stays in the x-z plane");
        let kz = k.z.abs();
        if i == 0 {
            assert!(kz > 0.99, "theta={theta}: expected near-z optimum, kz={kz}");
        }
        if i == steps {
            assert!(kz < 0.01, "theta={theta}: expected near-x optimum, kz={kz}");
        }
        if (0.15..=0.85).contains(&kz) {
            intermediate += 1;
        }
        if let Some(prev) = previous {
            assert!(kz <= prev + 1e-6, "kz is monotone along the sweep");
        }
        previous = Some(kz);

        let snap = info_deficit(EntropyKind::Linear, &pair.bloch(), Subsystem::B).unwrap();
        let snap_kz = snap.optimal_direction.vector().z.abs();
        assert!(
            snap_kz > 0.99 || snap_kz < 0.01,
            "theta={theta}: linear optimum should sit on an axis, kz={snap_kz}"
        );
    }
    assert!(intermediate >= 5, "only {intermediate} tilted optima seen");
}

#[test]
fn maximally_mixed_marginal_closed_forms() {
    for kind in [EntropyKind::VonNeumann, EntropyKind::Linear, EntropyKind::Tsallis(3.0)] {
        assert!((mmm_deficit(kind, &bell_bloch()).unwrap() - 1.0).abs() < 1e-12, "{kind:?}");
        let flat = bloch_decompose(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!(mmm_deficit(kind, &flat).unwrap().abs() < 1e-12);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..40 {
        let b = random_mixed_marginals(&mut rng);

        let vn = mmm_deficit(EntropyKind::VonNeumann, &b).unwrap();
        let searched = one_way_deficit(&b, Subsystem::B).unwrap();
        assert!((vn - searched.value).abs() < 1e-8);

        let geo = geometric_discord_closed(&b).unwrap();
        let lin = mmm_deficit(EntropyKind::Linear, &b).unwrap();
        assert!((lin - geo.value).abs() < 1e-8);

        let cubic = cubic_discord_closed(&b).unwrap();
        let ts3 = mmm_deficit(EntropyKind::Tsallis(3.0), &b).unwrap();
        assert!((ts3 - cubic.value).abs() < 1e-8);
    }

    // On correlation-diagonal states the eigenvalues are the four maximally
    // entangled populations, and the least disturbing axis pairs them up:
    // measuring along z merges the two Phi's and the two Psi's, and so on.
    for _ in 0..40 {
        let q = random_simplex(4, &mut rng);
        let c1 = q[0] - q[1] + q[2] - q[3];
        let c2 = -q[0] + q[1] + q[2] - q[3];
        let c3 = q[0] + q[1] - q[2] - q[3];
        let b = TwoQubitBloch::new(
            Vector3::zeros(),
            Vector3::zeros(),
            Matrix3::from_diagonal(&Vector3::new(c1, c2, c3)),
        );
        let axis = [c1.abs(), c2.abs(), c3.abs()]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let pairs = match axis {
            0 => [(q[0], q[2]), (q[1], q[3])],
            1 => [(q[0], q[3]), (q[1], q[2])],
            _ => [(q[0], q[1]), (q[2], q[3])],
        };
        let lin_oracle: f64 = pairs.iter().map(|(a, b)| (a - b).powi(2)).sum();
        let ts3_oracle: f64 = pairs.iter().map(|(a, b)| (a - b).powi(2) * (a + b)).sum();

        assert!((mmm_deficit(EntropyKind::Linear, &b).unwrap() - lin_oracle).abs() < 1e-12);
        assert!((geometric_discord_closed(&b).unwrap().value - lin_oracle).abs() < 1e-12);
        assert!((mmm_deficit(EntropyKind::Tsallis(3.0), &b).unwrap() - ts3_oracle).abs() < 1e-12);
        assert!((cubic_discord_closed(&b).unwrap().value - ts3_oracle).abs() < 1e-12);
    }

    let tilted = random_two_qubit(&mut rng);
    assert!(mmm_deficit(EntropyKind::Linear, &tilted).is_err());
}

#[test]
fn axes_are_stationary_for_x_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let kinds = [EntropyKind::VonNeumann, EntropyKind::Linear, EntropyKind::Tsallis(3.0)];
    for _ in 0..25 {
        let b = random_real_x_state(&mut rng);
        for k in [
            MeasurementDirection::x(),
            MeasurementDirection::y(),
            MeasurementDirection::z(),
        ] {
            for kind in kinds {
                let r = stationarity_residual_deficit(kind, &b, &k).unwrap();
                assert!(r.value < 1e-10, "{kind:?} axis {:?}: {}", k.vector(), r.value);
            }
            let r = stationarity_residual_discord(&b, &k).unwrap();
            assert!(r.value < 1e-10);
        }
    }
}

#[test]
fn closed_form_eigenvectors_are_stationary() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..25 {
        let b = random_two_qubit(&mut rng);

        let m2 = m2_matrix(&b);
        let k2 = MeasurementDirection::new(top_axis(&m2)).unwrap();
        let r2 = stationarity_residual_deficit(EntropyKind::Linear, &b, &k2).unwrap();
        assert!(r2.value < 1e-8, "M2 eigendirection residual {}", r2.value);

        let m3 = m3_matrix(&b);
        let k3 = MeasurementDirection::new(top_axis(&m3)).unwrap();
        let r3 = stationarity_residual_deficit(EntropyKind::Tsallis(3.0), &b, &k3).unwrap();
        assert!(r3.value < 1e-8, "M3 eigendirection residual {}", r3.value);
    }
}

#[test]
fn residuals_shrink_toward_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let b = random_two_qubit(&mut rng);
        let kind = EntropyKind::VonNeumann;
        let result = info_deficit(kind, &b, Subsystem::B).unwrap();
        let opt = result.optimal_direction.vector();
        let far = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        let at_far = stationarity_residual_deficit(kind, &b, &far).unwrap();
        let at_opt = stationarity_residual_deficit(kind, &b, &result.optimal_direction).unwrap();
        if !at_opt.divergent {
            assert!(at_opt.value < 1e-6);
            // A generic random direction is very unlikely to be stationary.
            if (far.vector().dot(&opt)).abs() < 0.999 {
                assert!(at_far.value > at_opt.value);
            }
        }

        let discord = quantum_discord(&b, Subsystem::B).unwrap();
        let at_disc = stationarity_residual_discord(&b, &discord.optimal_direction).unwrap();
        if !at_disc.divergent {
            assert!(at_disc.value < 1e-6);
        }
    }

    for _ in 0..10 {
        let mut b = random_two_qubit(&mut rng);
        b.r_b = Vector3::zeros();
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        let disc = stationarity_residual_discord(&b, &k).unwrap();
        let defi = stationarity_residual_deficit(EntropyKind::VonNeumann, &b, &k).unwrap();
        assert!((disc.value - defi.value).abs() < 1e-12);
    }
}

#[test]
fn pure_plus_noise_closed_form() {
    assert!(deficit_pure_plus_noise(EntropyKind::VonNeumann, 0.0, &[0.7, 0.3], (2, 2))
        .unwrap()
        .abs()
        < 1e-14);
    let bell_linear =
        deficit_pure_plus_noise(EntropyKind::Linear, 1.0, &[0.5, 0.5], (2, 2)).unwrap();
    assert!((bell_linear - 1.0).abs() < 1e-12);

    let kinds = [EntropyKind::VonNeumann, EntropyKind::Linear, EntropyKind::Tsallis(3.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..8 {
        let p: f64 = rng.gen_range(0.5..1.0);
        let probs = [p, 1.0 - p];
        let ket = DVector::from_vec(vec![c(p.sqrt()), c(0.0), c(0.0), c((1.0 - p).sqrt())]);
        let psi = DensityMatrix::from_pure(&ket).unwrap();
        for x in [0.25, 0.6, 0.9] {
            let mixed = DensityMatrix::new(
                psi.matrix() * c(x) + DensityMatrix::maximally_mixed(4).matrix() * c(1.0 - x),
            )
            .unwrap();
            let b = bloch_decompose(&mixed).unwrap();
            for kind in kinds {
                let closed = deficit_pure_plus_noise(kind, x, &probs, (2, 2)).unwrap();
                let searched = info_deficit(kind, &b, Subsystem::B).unwrap();
                assert!(
                    (closed - searched.value).abs() < 1e-8,
                    "{kind:?} x={x} p={p}: {closed} vs {}",
                    searched.value
                );
            }
        }
    }

    // Small-x growth is quadratic with a universal coefficient.
    let probs = [0.6, 0.4];
    let purity_gap = 1.0 - probs.iter().map(|p| p * p).sum::<f64>();
    let n = 4.0;
    for kind in kinds {
        let x = 1e-3;
        let value = deficit_pure_plus_noise(kind, x, &probs, (2, 2)).unwrap();
        let f_second = match kind {
            EntropyKind::VonNeumann => -std::f64::consts::LOG2_E * n,
            EntropyKind::Linear => -4.0,
            EntropyKind::Tsallis(q) => {
                -q * (q - 1.0) * (1.0 / n).powf(q - 2.0) / (1.0 - (1.0 - q).exp2())
            }
        };
        let predicted = -0.5 * f_second * x * x * purity_gap;
        assert!(
            (value - predicted).abs() < 0.01 * predicted.abs(),
            "{kind:?}: {value} vs {predicted}"
        );
    }
}

#[test]
fn measurement_majorizes_the_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let kinds = [
        EntropyKind::VonNeumann,
        EntropyKind::Linear,
        EntropyKind::Tsallis(0.5),
        EntropyKind::Tsallis(3.0),
    ];
    for _ in 0..60 {
        let b = random_two_qubit(&mut rng);
        let k = MeasurementDirection::unit_checked(random_direction(&mut rng)).unwrap();
        let before = b.to_density().unwrap().eigenvalues();
        let mut after = post_measurement_spectrum(&b, &k);
        after.sort_by(|a, b| b.total_cmp(a));
        let mut sum_before = 0.0;
        let mut sum_after = 0.0;
        for m in 0..4 {
            sum_before += before[m];
            sum_after += after[m];
            assert!(sum_after <= sum_before + 1e-12, "partial sum {m}");
        }
        assert!((sum_after - 1.0).abs() < 1e-12);

        let after_clipped: Vec<f64> = after.iter().map(|&p| p.max(0.0)).collect();
        for kind in kinds {
            let s_before = entropy_of_spectrum(kind, before.as_slice()).unwrap();
            let s_after = entropy_of_spectrum(kind, &after_clipped).unwrap();
            assert!(s_after >= s_before - 1e-10, "{kind:?}");
        }
    }
}

#[test]
fn pure_states_collapse_to_entanglement_monotones() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..30 {
        let ket = random_ket(4, &mut rng);
        let rho = DensityMatrix::from_pure(&ket).unwrap();
        let b = bloch_decompose(&rho).unwrap();
        let marginal = partial_trace(&rho, (2, 2), Subsystem::A).unwrap();
        let e = entropy(EntropyKind::VonNeumann, &marginal).unwrap();
        let c2 = concurrence(&rho).unwrap().powi(2);

        assert!((quantum_discord(&b, Subsystem::B).unwrap().value - e).abs() < 1e-8);
        assert!((one_way_deficit(&b, Subsystem::B).unwrap().value - e).abs() < 1e-8);
        assert!(
            (info_deficit(EntropyKind::Linear, &b, Subsystem::B).unwrap().value - c2).abs() < 1e-8
        );
        assert!(
            (info_deficit(EntropyKind::Tsallis(3.0), &b, Subsystem::B).unwrap().value - c2).abs()
                < 1e-8
        );
    }
}

#[test]
fn local_rotations_rotate_the_optimum_and_preserve_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let mut checked = 0;
    for _ in 0..40 {
        let b = random_two_qubit(&mut rng);
        let oa = random_rotation(&mut rng);
        let ob = random_rotation(&mut rng);
        let rotated = TwoQubitBloch::new(oa * b.r_a, ob * b.r_b, oa * b.j * ob.transpose());

        let lin = info_deficit(EntropyKind::Linear, &b, Subsystem::B).unwrap();
        let lin_rot = info_deficit(EntropyKind::Linear, &rotated, Subsystem::B).unwrap();
        assert!((lin.value - lin_rot.value).abs() < 1e-8);

        let disc = quantum_discord(&b, Subsystem::B).unwrap();
        let disc_rot = quantum_discord(&rotated, Subsystem::B).unwrap();
        assert!((disc.value - disc_rot.value).abs() < 1e-8);

        if !lin.tie && !lin_rot.tie {
            let mapped = ob * lin.optimal_direction.vector();
            let agree = mapped.dot(&lin_rot.optimal_direction.vector()).abs();
            assert!(agree > 1.0 - 1e-6, "direction mismatch: {agree}");
            checked += 1;
        }
    }
    assert!(checked > 20, "too many ties in random sample: {checked}");
}

#[test]
fn swapping_the_measured_side_transposes_the_problem() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..15 {
        let b = random_two_qubit(&mut rng);
        let swapped = b.swap_sides();
        let on_a = quantum_discord(&b, Subsystem::A).unwrap();
        let on_b = quantum_discord(&swapped, Subsystem::B).unwrap();
        assert!((on_a.value - on_b.value).abs() < 1e-9);
        let lin_a = info_deficit(EntropyKind::Linear, &b, Subsystem::A).unwrap();
        let lin_b = info_deficit(EntropyKind::Linear, &swapped, Subsystem::B).unwrap();
        assert!((lin_a.value - lin_b.value).abs() < 1e-9);
    }
}

#[test]
fn mutual_information_reference_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let rho_a = random_density(2, 2, &mut rng);
    let rho_b = random_density(2, 2, &mut rng);
    let product = DensityMatrix::new(rho_a.matrix().kronecker(rho_b.matrix())).unwrap();
    assert!(mutual_information(&product, (2, 2)).unwrap().abs() < 1e-10);

    assert!((mutual_information(&bell_density(), (2, 2)).unwrap() - 2.0).abs() < 1e-12);

    let p = random_simplex(4, &mut rng);
    let classical = DensityMatrix::new(DMatrix::from_diagonal(&DVector::from_iterator(
        4,
        p.iter().map(|&x| c(x)),
    )))
    .unwrap();
    let h = |v: &[f64]| entropy_of_spectrum(EntropyKind::VonNeumann, v).unwrap();
    let expected = h(&[p[0] + p[1], p[2] + p[3]]) + h(&[p[0] + p[2], p[1] + p[3]]) - h(&p);
    assert!((mutual_information(&classical, (2, 2)).unwrap() - expected).abs() < 1e-10);
}
