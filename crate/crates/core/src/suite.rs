//! Seeded randomized property suites and pass/fail gates.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::biortho::{
    biorthogonalize, build_metric, dehermitize, hermitize, pseudo_hermiticity_residual, BiorthogonalSystem,
    MetricOperator,
};
use crate::dynamics::{evolve_left_spectral, evolve_spectral, Integrator, TimeDependentModel};
use crate::error::Result;
use crate::exec::Execution;
use crate::matrixcore::{hermitian_eigen, invert, vector, ComplexMatrix, Spectrum, DEFAULT_TOL};

/// A scalar checked against an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl Gate {
    pub fn at_most(name: impl Into<String>, value: f64, max: f64) -> Self {
        Self {
            name: name.into(),
            value,
            min: None,
            max: Some(max),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, min: f64) -> Self {
        Self {
            name: name.into(),
            value,
            min: Some(min),
            max: None,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, min: f64, max: f64) -> Self {
        Self {
            name: name.into(),
            value,
            min: Some(min),
            max: Some(max),
        }
    }

    /// Fails on NaN.
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.min.is_none_or(|m| self.value >= m) && self.max.is_none_or(|m| self.value <= m)
    }

    fn bound(&self) -> String {
        match (self.min, self.max) {
            (Some(lo), Some(hi)) => format!("in [{lo:e}, {hi:e}]"),
            (Some(lo), None) => format!(">= {lo:e}"),
            (None, Some(hi)) => format!("<= {hi:e}"),
            (None, None) => String::new(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok  " } else { "FAIL" };
        write!(f, "{status} {:<44} {:>12.4e}  {}", self.name, self.value, self.bound())
    }
}

pub fn all_passed(gates: &[Gate]) -> bool {
    gates.iter().all(Gate::passed)
}

pub fn failures(gates: &[Gate]) -> Vec<&Gate> {
    gates.iter().filter(|g| !g.passed()).collect()
}

/// Independent generator for item `index` of a seeded batch, so results do
/// not depend on scheduling.
pub fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix; diagonalizable with probability one.
pub fn random_complex_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// `S D S^{-1}` with real, separated `D` and a non-unitary `S`.
pub fn random_real_spectrum_matrix(rng: &mut impl Rng, dim: usize) -> Result<ComplexMatrix> {
    let offset: f64 = rng.random_range(-2.0..2.0);
    let d: Vec<f64> = (0..dim)
        .map(|k| offset + k as f64 + rng.random_range(-0.3..0.3))
        .collect();
    let s = random_complex_matrix(rng, dim)
        .scale_real(1.0 / (dim as f64).sqrt())
        .shift(Complex64::new(1.0, 0.0));
    let s_inv = invert(&s)?;
    Ok(&(&s * &ComplexMatrix::from_real_diagonal(&d)) * &s_inv)
}

fn random_unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    vector::normalized(&v)
}

/// Worst residuals of [`biorthogonalize`] over a random batch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct BiorthoSuite {
    pub count: usize,
    pub failures: usize,
    pub biorthonormality: f64,
    pub completeness: f64,
    pub reconstruction: f64,
    pub eigen: f64,
}

impl BiorthoSuite {
    pub fn gates(&self, tol: f64) -> Vec<Gate> {
        vec![
            Gate::at_most("biortho: decomposition failures", self.failures as f64, 0.0),
            Gate::at_most("biortho: biorthonormality", self.biorthonormality, tol),
            Gate::at_most("biortho: completeness", self.completeness, tol),
            Gate::at_most("biortho: reconstruction", self.reconstruction, tol),
            Gate::at_most("biortho: eigen equations", self.eigen, tol),
        ]
    }
}

pub fn biortho_suite(seed: u64, count: usize, max_dim: usize, exec: Execution) -> BiorthoSuite {
    let results = exec.map_range(count, |i| {
        let mut rng = item_rng(seed, i as u64);
        let dim = rng.random_range(2..=max_dim.max(2));
        let h = random_complex_matrix(&mut rng, dim);
        biorthogonalize(&h, DEFAULT_TOL).map(|sys| sys.residuals(&h))
    });
    let mut out = BiorthoSuite {
        count,
        ..Default::default()
    };
    for r in results {
        match r {
            Ok(res) => {
                out.biorthonormality = out.biorthonormality.max(res.biorthonormality);
                out.completeness = out.completeness.max(res.completeness);
                out.reconstruction = out.reconstruction.max(res.reconstruction);
                out.eigen = out.eigen.max(res.right_eigen.max(res.left_eigen));
            }
            Err(_) => out.failures += 1,
        }
    }
    out
}

/// Worst residuals of the metric and hermitization over random real-spectrum
/// matrices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct HermitizationSuite {
    pub count: usize,
    pub failures: usize,
    pub pseudo_hermiticity: f64,
    pub hermiticity: f64,
    pub spectrum: f64,
    pub round_trip: f64,
}

impl HermitizationSuite {
    pub fn gates(&self, tol: f64) -> Vec<Gate> {
        vec![
            Gate::at_most("hermitize: pipeline failures", self.failures as f64, 0.0),
            Gate::at_most("hermitize: pseudo-hermiticity", self.pseudo_hermiticity, tol),
            Gate::at_most("hermitize: hermiticity of K", self.hermiticity, tol),
            Gate::at_most("hermitize: spectrum of K vs H", self.spectrum, tol),
            Gate::at_most("hermitize: round trip", self.round_trip, tol),
        ]
    }
}

fn hermitization_item(h: &ComplexMatrix) -> Result<[f64; 4]> {
    let sys = biorthogonalize(h, DEFAULT_TOL)?;
    let metric = build_metric(&sys)?;
    let pseudo = pseudo_hermiticity_residual(h, &metric)?;
    let k = hermitize(h, &metric)?;
    let hermiticity = k.hermiticity_residual();
    let k_values = hermitian_eigen(&k.hermitian_part(), DEFAULT_TOL)?.values;
    let spectrum = Spectrum::from_real(&k_values).distance(sys.spectrum()) / sys.spectrum().max_abs().max(1.0);
    let round_trip = dehermitize(&k, &metric)?.distance(h) / h.frobenius_norm();
    Ok([pseudo, hermiticity, spectrum, round_trip])
}

pub fn hermitization_suite(seed: u64, count: usize, max_dim: usize, exec: Execution) -> HermitizationSuite {
    let results = exec.map_range(count, |i| {
        let mut rng = item_rng(seed, i as u64);
        let dim = rng.random_range(2..=max_dim.max(2));
        random_real_spectrum_matrix(&mut rng, dim).and_then(|h| hermitization_item(&h))
    });
    let mut out = HermitizationSuite {
        count,
        ..Default::default()
    };
    for r in results {
        match r {
            Ok([p, h, s, rt]) => {
                out.pseudo_hermiticity = out.pseudo_hermiticity.max(p);
                out.hermiticity = out.hermiticity.max(h);
                out.spectrum = out.spectrum.max(s);
                out.round_trip = out.round_trip.max(rt);
            }
            Err(_) => out.failures += 1,
        }
    }
    out
}

/// Overlap conservation for static real spectra and the drift of a
/// complex-eigenvalue control.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ConservationCheck {
    pub points: usize,
    pub max_drift: f64,
    pub control_relative_error: f64,
    pub control_final_overlap: f64,
}

impl ConservationCheck {
    pub fn gates(&self) -> Vec<Gate> {
        vec![
            Gate::at_most("conservation: real spectrum overlap drift", self.max_drift, 1e-12),
            Gate::at_most(
                "conservation: complex control vs exp(2 Im E t/hbar)",
                self.control_relative_error,
                1e-8,
            ),
        ]
    }
}

fn overlap_drift(sys: &BiorthogonalSystem, c: &[Complex64], times: &[f64], hbar: f64) -> Result<Vec<Complex64>> {
    times
        .iter()
        .map(|&t| {
            let psi = evolve_spectral(sys, c, t, hbar)?;
            let phi = evolve_left_spectral(sys, c, t, hbar)?;
            Ok(phi.pair(&psi.amps))
        })
        .collect()
}

pub fn conservation_check(seed: u64, points: usize, t_end: f64, exec: Execution) -> Result<ConservationCheck> {
    let hbar = 1.0;
    let times: Vec<f64> = (0..points).map(|k| t_end * k as f64 / (points - 1).max(1) as f64).collect();

    let mut rng = item_rng(seed, 0);
    let systems = [
        ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]])?,
        random_real_spectrum_matrix(&mut rng, 6)?,
    ];
    let coefficients: Vec<Vec<Complex64>> = systems
        .iter()
        .map(|h| random_unit_vector(&mut rng, h.dim()))
        .collect();
    let drifts = exec.map_range(systems.len(), |i| -> Result<f64> {
        let sys = biorthogonalize(&systems[i], DEFAULT_TOL)?;
        let overlaps = overlap_drift(&sys, &coefficients[i], &times, hbar)?;
        let first = overlaps[0];
        Ok(overlaps.iter().map(|o| (o - first).norm()).fold(0.0, f64::max))
    });
    let mut max_drift: f64 = 0.0;
    for d in drifts {
        max_drift = max_drift.max(d?);
    }

    let im = 0.1;
    let control = ComplexMatrix::from_rows(&[
        vec![Complex64::new(1.0, im), Complex64::new(0.5, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(3.0, 0.0)],
    ])?;
    let sys = biorthogonalize(&control, DEFAULT_TOL)?;
    let k = sys
        .energies()
        .iter()
        .position(|e| e.im.abs() > 0.0)
        .expect("control has one complex level");
    let c = vector::basis(2, k);
    let overlaps = overlap_drift(&sys, &c, &times, hbar)?;
    let mut control_relative_error: f64 = 0.0;
    for (o, &t) in overlaps.iter().zip(&times) {
        let want = (2.0 * im * t / hbar).exp();
        control_relative_error = control_relative_error.max((o - want).norm() / want);
    }
    Ok(ConservationCheck {
        points,
        max_drift,
        control_relative_error,
        control_final_overlap: overlaps.last().map_or(0.0, |o| o.re),
    })
}

/// RK4 endpoint error against the spectral propagator at `dt` and `dt/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderCheck {
    pub dt: f64,
    pub error_coarse: f64,
    pub error_fine: f64,
    pub ratio: f64,
}

impl OrderCheck {
    pub fn gates(&self) -> Vec<Gate> {
        vec![Gate::within("rk4: error ratio on halving dt", self.ratio, 8.0, 32.0)]
    }
}

/// Uses a static non-hermitian generator in its own metric so the check also
/// covers the metric-norm bookkeeping.
pub fn rk4_order_check(seed: u64, dt: f64, t_end: f64, exec: Execution) -> Result<OrderCheck> {
    let mut rng = item_rng(seed, 1);
    let h = random_real_spectrum_matrix(&mut rng, 6)?;
    let sys = biorthogonalize(&h, DEFAULT_TOL)?;
    let metric = build_metric(&sys)?;
    let c = random_unit_vector(&mut rng, 6);
    let psi0 = sys.superpose(&c);
    let oracle = evolve_spectral(&sys, &c, t_end, 1.0)?.amps;
    let model = TimeDependentModel::stationary(h, metric.clone(), 1.0)?;
    let x = ComplexMatrix::identity(6);
    let errors = exec.map(&[dt, 0.5 * dt], |&step| -> Result<f64> {
        let traj = Integrator::new(step, true)
            .with_stride(usize::MAX)
            .with_drift_limit(1.0)
            .run(&model, &psi0, (0.0, t_end), &x)?;
        let end = traj.final_state().expect("final step is recorded");
        let diff: Vec<Complex64> = end.iter().zip(&oracle).map(|(a, b)| a - b).collect();
        Ok(metric_norm(&metric, &diff))
    });
    let error_coarse = errors[0].clone()?;
    let error_fine = errors[1].clone()?;
    Ok(OrderCheck {
        dt,
        error_coarse,
        error_fine,
        ratio: error_coarse / error_fine,
    })
}

fn metric_norm(m: &MetricOperator, v: &[Complex64]) -> f64 {
    m.norm_sqr(v).max(0.0).sqrt()
}
