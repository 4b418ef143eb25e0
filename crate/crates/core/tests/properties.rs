//! Invariants over generated inputs.

use std::sync::Arc;

use nhqm::biortho::{
    biorthogonalize, build_metric, dehermitize, hermitize, pseudo_hermiticity_residual, MetricOperator,
};
use nhqm::dynamics::{evolve_left_spectral, evolve_spectral, expectation_position, Integrator, TimeDependentModel};
use nhqm::matrixcore::io::{format_matrix, parse_matrix};
use nhqm::matrixcore::{
    bch_transform, canonical_order, hermitian_eigen, invert, vector, ComplexMatrix, Spectrum, DEFAULT_TOL,
};
use nhqm::measurement::{build_recording_map, repeatability_residual, ApparatusModel, QuantumState};
use nhqm::models::{cubic_pt_hamiltonian, perturbative_hermitian, FockSpace};
use nhqm::suite::{item_rng, random_complex_matrix, random_real_spectrum_matrix};
use nhqm::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::new(n, d).unwrap())
}

fn sized_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max).prop_flat_map(matrix)
}

fn unit_vector(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(complex(), n)
        .prop_filter("nonzero", |v| vector::norm(v) > 1e-3)
        .prop_map(|v| vector::normalized(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn biorthogonal_residuals_are_small(h in sized_matrix(10)) {
        // generated matrices can sit near an exceptional point; those must be rejected, not mis-solved.
        if let Ok(sys) = biorthogonalize(&h, DEFAULT_TOL) {
            let r = sys.residuals(&h);
            prop_assert!(r.max() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn hermitization_round_trips(seed in 0u64..10_000, n in 2usize..10) {
        let h = random_real_spectrum_matrix(&mut item_rng(seed, 0), n).unwrap();
        let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
        let m = build_metric(&sys).unwrap();
        prop_assert!(pseudo_hermiticity_residual(&h, &m).unwrap() < 1e-8);
        prop_assert!(m.residuals().max() < 1e-8);
        let k = hermitize(&h, &m).unwrap();
        prop_assert!(k.hermiticity_residual() < 1e-8);
        let back = dehermitize(&k, &m).unwrap();
        prop_assert!(back.distance(&h) / h.frobenius_norm() < 1e-8);
    }

    #[test]
    fn canonical_order_ignores_input_order(values in proptest::collection::vec(complex(), 1..12), rot in 0usize..12) {
        let mut shuffled = values.clone();
        let r = rot % values.len();
        shuffled.rotate_left(r);
        prop_assert_eq!(Spectrum::new(values.clone()), Spectrum::new(shuffled));
        let order = canonical_order(&values);
        let mut seen = order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..values.len()).collect::<Vec<_>>());
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(6)) {
        if let Ok(inv) = invert(&m) {
            let cond = m.frobenius_norm() * inv.frobenius_norm();
            prop_assume!(cond < 1e8);
            let i = ComplexMatrix::identity(6);
            prop_assert!((&m * &inv).distance(&i) < 1e-14 * cond);
            prop_assert!((&inv * &m).distance(&i) < 1e-14 * cond);
        }
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(3), c in matrix(2), d in matrix(3)) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.distance(&rhs) < 1e-13);
    }

    #[test]
    fn hermitian_eigen_reconstructs(m in sized_matrix(9)) {
        let h = m.hermitian_part();
        let eig = hermitian_eigen(&h, 1e-12).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.apply(|x| x).distance(&h) < 1e-12 * (1.0 + h.frobenius_norm()));
    }

    #[test]
    fn overlap_is_conserved(seed in 0u64..10_000, t in 0.0f64..50.0) {
        let mut rng = item_rng(seed, 0);
        let h = random_real_spectrum_matrix(&mut rng, 4).unwrap();
        let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
        let c = vector::normalized(random_complex_matrix(&mut rng, 4).row(0));
        let psi = evolve_spectral(&sys, &c, t, 1.0).unwrap();
        let phi = evolve_left_spectral(&sys, &c, t, 1.0).unwrap();
        prop_assert!((phi.pair(&psi.amps) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn frames_agree_on_expectations(seed in 0u64..10_000, v in unit_vector(5)) {
        let h = random_real_spectrum_matrix(&mut item_rng(seed, 0), 5).unwrap();
        let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
        let m = Arc::new(build_metric(&sys).unwrap());
        let x = random_complex_matrix(&mut item_rng(seed, 1), 5).hermitian_part();
        let herm = QuantumState::hermitian(v.clone()).unwrap();
        let pulled = QuantumState::non_hermitian(m.g_inv_sqrt.mul_vec(&v).unwrap(), m.clone()).unwrap();
        let a = expectation_position(&herm, &x, None).unwrap();
        let b = expectation_position(&pulled, &x, None).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn recording_identity_holds(seed in 0u64..10_000, n in 2usize..5, extra in 0usize..2) {
        let h = random_real_spectrum_matrix(&mut item_rng(seed, 0), n).unwrap();
        let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
        let m = build_metric(&sys).unwrap();
        let app = ApparatusModel::orthogonal_pointers(n + extra, n).unwrap();
        let u = build_recording_map(&sys, &app).unwrap();
        let r = repeatability_residual(&u, &sys, &app, &m).unwrap();
        prop_assert!(r.max_identity_residual() < 1e-12);
        prop_assert!(r.norm_residual < 1e-10);
        prop_assert!(r.record_residual < 1e-10);
    }

    #[test]
    fn matrix_text_round_trips(m in sized_matrix(5)) {
        prop_assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn builders_are_deterministic(eps in -0.2f64..0.2, n in 4usize..24) {
        let fs = FockSpace::new(n, 1.0, 1.0, 1.0).unwrap();
        prop_assert_eq!(cubic_pt_hamiltonian(&fs, eps), cubic_pt_hamiltonian(&fs, eps));
        prop_assert_eq!(perturbative_hermitian(&fs, eps), perturbative_hermitian(&fs, eps));
    }

    #[test]
    fn bch_order_two_is_exact_for_nilpotent_pairs(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        // [G, [G, H]] = 0 when G is strictly upper triangular with G^2 = 0.
        let g = ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]).unwrap();
        let h = ComplexMatrix::from_real_rows(&[&[b, 1.0], &[0.5, -b]]).unwrap();
        let two = bch_transform(&h, &g, 2).unwrap();
        let ten = bch_transform(&h, &g, 10).unwrap();
        prop_assert!(two.distance(&ten) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn force_keeps_metric_norm(seed in 0u64..1000) {
        let h = random_real_spectrum_matrix(&mut item_rng(seed, 0), 4).unwrap();
        let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
        let m = build_metric(&sys).unwrap();
        let c = vector::normalized(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]);
        let psi0 = sys.superpose(&c);
        let model = TimeDependentModel::stationary(h, m, 1.0).unwrap();
        let traj = Integrator::new(1e-2, true).with_stride(100).run(&model, &psi0, (0.0, 5.0), &ComplexMatrix::identity(4)).unwrap();
        prop_assert!(traj.max_norm_drift() < 1e-6);
    }
}

#[test]
fn metric_of_hermitian_input_is_trivially_scaled() {
    let h = random_complex_matrix(&mut item_rng(1, 0), 6).hermitian_part();
    let sys = biorthogonalize(&h, DEFAULT_TOL).unwrap();
    let m = build_metric(&sys).unwrap();
    assert!(m.g.distance(&ComplexMatrix::identity(6)) < 1e-10);
    let id = MetricOperator::identity(6);
    assert!(hermitize(&h, &id).unwrap().distance(&h) < 1e-15);
}
