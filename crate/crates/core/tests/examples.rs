//! Worked examples and end-to-end runs of the binary.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::process::Command as Process;

use nhqm::biortho::{biorthogonalize, classify_spectrum};
use nhqm::cli::{self, Command, Overrides, RunConfig};
use nhqm::dynamics::{evolve_spectral, expectation_position, TRAJECTORY_CSV_HEADER};
use nhqm::exec::Execution;
use nhqm::matrixcore::{eigenvalues, DEFAULT_TOL};
use nhqm::measurement::QuantumState;
use nhqm::models::{cubic_pt_hamiltonian, fock_operators, FockSpace};
use nhqm::Complex64;

fn driven_space(n: usize) -> FockSpace {
    FockSpace::new(n, 1.0, 1.0, 0.5).unwrap()
}

fn superposition(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v[1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v
}

#[test]
fn driven_defaults() {
    let cfg = RunConfig::defaults(Command::Example3);
    assert_eq!((cfg.hbar, cfg.mass, cfg.omega, cfg.tau), (1.0, 1.0, 0.5, 10.0));
    assert_eq!(driven_space(8).alpha(), 1.0);
}

#[test]
fn position_of_the_initial_superposition() {
    let fs = driven_space(16);
    let ops = fock_operators(&fs);
    let ground = QuantumState::hermitian(nhqm::matrixcore::vector::basis(16, 0)).unwrap();
    assert!(expectation_position(&ground, &ops.x, None).unwrap().abs() < 1e-15);
    let s = QuantumState::hermitian(superposition(16)).unwrap();
    assert!((expectation_position(&s, &ops.x, None).unwrap() - 1.0).abs() < 1e-14);

    let sys = biorthogonalize(&ops.h0, DEFAULT_TOL).unwrap();
    let c = sys.left_states().mul_vec(&superposition(16)).unwrap();
    let evolved = evolve_spectral(&sys, &c, 10.0, 1.0).unwrap();
    let s = QuantumState::hermitian(evolved.amps).unwrap();
    let x = expectation_position(&s, &ops.x, None).unwrap();
    assert!((x - 5f64.cos()).abs() < 1e-12);
    assert!((x - 0.2837).abs() < 1e-4);
}

#[test]
fn cubic_low_levels_are_real() {
    let fs = FockSpace::new(32, 1.0, 1.0, 1.0).unwrap();
    let low = eigenvalues(&cubic_pt_hamiltonian(&fs, 0.1)).unwrap().lowest(8);
    assert!(classify_spectrum(&low, 1e-8).is_real());
    let fs = FockSpace::new(64, 1.0, 1.0, 1.0).unwrap();
    for eps in [0.01, 0.05, 0.1] {
        let low = eigenvalues(&cubic_pt_hamiltonian(&fs, eps)).unwrap().lowest(8);
        assert!(classify_spectrum(&low, 1e-8).max_imag <= 1e-8, "eps={eps}");
    }
}

#[test]
fn unperturbed_examples_are_trivial() {
    let cfg = RunConfig::resolve(
        Command::Example1,
        Overrides {
            epsilon: Some(0.0),
            dim: Some(16),
            ..Default::default()
        },
    )
    .unwrap();
    let r = cli::example1(&cfg, Execution::Sequential).unwrap();
    assert!(nhqm::suite::all_passed(&r.gates));
    assert_eq!(r.sweep[0].distance, 0.0);

    let cfg = RunConfig::resolve(
        Command::Example2,
        Overrides {
            eta: Some(0.0),
            dim: Some(16),
            ..Default::default()
        },
    )
    .unwrap();
    let r = cli::example2(&cfg, Execution::Sequential).unwrap();
    for v in [r.bch_order2, r.isospectrality, r.pseudo_hermiticity_full, r.pseudo_hermiticity_block] {
        assert!(v <= 1e-12);
    }
}

#[test]
fn short_trajectory_starts_at_alpha() {
    let cfg = RunConfig::resolve(
        Command::Example3,
        Overrides {
            dim: Some(24),
            dt: Some(1e-2),
            t_end: Some(1.0),
            ..Default::default()
        },
    )
    .unwrap();
    let r = cli::example3(&cfg, Execution::Sequential).unwrap();
    let csv = r.csv().unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(TRAJECTORY_CSV_HEADER));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-12);
    assert!((first[2] - 1.0).abs() < 1e-12);
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn execution_modes_give_identical_reports() {
    let cfg = RunConfig::resolve(
        Command::Example1,
        Overrides {
            dim: Some(24),
            ..Default::default()
        },
    )
    .unwrap();
    let a = cli::example1(&cfg, Execution::Sequential).unwrap();
    let b = cli::example1(&cfg, Execution::Parallel).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_nhqm"))
}

#[test]
fn binary_measure_passes() {
    let out = bin().arg("measure").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("naive overlap equals 1/sqrt(2)"));
}

#[test]
fn binary_reads_config_and_reports_failures() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# too few levels for the ratio window\ndim = 32\nepsilon = 0.05").unwrap();
    let out = bin()
        .args(["example1", "--config"])
        .arg(file.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(report["failed"].as_array().is_some_and(|f| !f.is_empty()));

    let out = bin().args(["example3", "--dt", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let status = bin()
        .args(["example3", "--dim", "16", "--dt", "0.01", "--t-end", "2", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(TRAJECTORY_CSV_HEADER));
    assert_eq!(text.lines().count(), 202);
}
