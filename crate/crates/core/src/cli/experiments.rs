use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::biortho::{
    biorthogonalize, build_metric, classify_spectrum, compress_low_lying, default_reality_tol, hermitize,
    hermitize_with, pseudo_hermiticity_residual, RealityCheck,
};
use crate::dynamics::{Integrator, Trajectory, TimeDependentModel};
use crate::error::Result;
use crate::exec::Execution;
use crate::matrixcore::io::read_matrix;
use crate::matrixcore::{
    bch_transform, bch_transform_converged, eigenvalues, hermitian_eigen, vector, ComplexMatrix, DEFAULT_TOL,
};
use crate::measurement::{build_recording_map, repeatability_residual, ApparatusModel, RepeatabilityReport};
use crate::models::{
    cubic_pt_hamiltonian, driven_oscillator_model, fock_operators, gauge_hamiltonian, perturbative_hermitian,
    FockSpace, Potential, ScheduleLinear,
};
use crate::suite::{
    biortho_suite, conservation_check, hermitization_suite, rk4_order_check, BiorthoSuite, ConservationCheck, Gate,
    HermitizationSuite, OrderCheck,
};

use super::config::RunConfig;

const CONVERGENCE_TOL: f64 = 1e-8;
const LEVELS: usize = 8;

fn fock_space(cfg: &RunConfig, dim: usize) -> Result<FockSpace> {
    FockSpace::new(dim, cfg.hbar, cfg.mass, cfg.omega)
}

/// `max_n |a_n - b_n| / max(1, |b_n|)` over the lowest `k` levels.
fn relative_level_change(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm().max(1.0))
        .fold(0.0, f64::max)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lowest_hermitian(m: &ComplexMatrix, k: usize) -> Result<Vec<f64>> {
    let mut v = hermitian_eigen(&m.hermitian_part(), 1e-8)?.values;
    v.truncate(k);
    Ok(v)
}

fn write_levels(out: &mut String, header: &str, rows: &[Vec<String>]) {
    let _ = writeln!(out, "{header}");
    for row in rows {
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn write_gates(out: &mut String, gates: &[Gate]) {
    let _ = writeln!(out, "gates:");
    for g in gates {
        let _ = writeln!(out, "  {g}");
    }
}

/// One point of the cubic-perturbation comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CubicPoint {
    pub epsilon: f64,
    /// Lowest levels of `H_0 + i eps x^3` as (re, im).
    pub levels: Vec<(f64, f64)>,
    /// Lowest levels of the hermitized low-lying block.
    pub hermitized: Vec<f64>,
    /// Lowest levels of the second-order hermitian partner.
    pub perturbative: Vec<f64>,
    /// `max_n |hermitized_n - perturbative_n|`.
    pub distance: f64,
    pub max_imag: f64,
    pub block_hermiticity: f64,
    pub block_pseudo_hermiticity: f64,
}

pub fn cubic_point(fs: &FockSpace, epsilon: f64, levels: usize) -> Result<CubicPoint> {
    let h = cubic_pt_hamiltonian(fs, epsilon);
    let block = compress_low_lying(&h, (fs.dim / 4).max(levels))?;
    let sys = biorthogonalize(&block.matrix, DEFAULT_TOL)?;
    let metric = build_metric(&sys)?;
    let pseudo = pseudo_hermiticity_residual(&block.matrix, &metric)?;
    let k = hermitize(&block.matrix, &metric)?;
    let hermitized = lowest_hermitian(&k, levels)?;
    let perturbative = lowest_hermitian(&perturbative_hermitian(fs, epsilon), levels)?;
    let low = block.spectrum.lowest(levels);
    Ok(CubicPoint {
        epsilon,
        levels: low.values().iter().map(|z| (z.re, z.im)).collect(),
        distance: max_abs_diff(&hermitized, &perturbative),
        max_imag: classify_spectrum(&low, 0.0).max_imag,
        hermitized,
        perturbative,
        block_hermiticity: k.hermiticity_residual(),
        block_pseudo_hermiticity: pseudo,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Example1Report {
    pub config: RunConfig,
    pub sweep: Vec<CubicPoint>,
    /// `distance(eps) / distance(eps / 2)`.
    pub ratio: f64,
    /// Least-squares slope of `ln distance` against `ln eps`.
    pub exponent: f64,
    pub convergence_h: f64,
    pub convergence_k: f64,
    pub gates: Vec<Gate>,
}

pub fn example1(cfg: &RunConfig, exec: Execution) -> Result<Example1Report> {
    let fs = fock_space(cfg, cfg.dim)?;
    let fs2 = fock_space(cfg, 2 * cfg.dim)?;
    let eps = cfg.epsilon;
    let sweep_eps: Vec<f64> = if eps == 0.0 { vec![0.0] } else { vec![eps, eps / 2.0, eps / 4.0] };
    let sweep = exec
        .map(&sweep_eps, |&e| cubic_point(&fs, e, LEVELS))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let k = cfg.dim / 4;
    let jobs = [0usize, 1, 2, 3];
    let spectra = exec.map(&jobs, |&j| -> Result<Vec<Complex64>> {
        let space = if j % 2 == 0 { &fs } else { &fs2 };
        if j < 2 {
            Ok(eigenvalues(&cubic_pt_hamiltonian(space, eps))?.lowest(k).values().to_vec())
        } else {
            let v = lowest_hermitian(&perturbative_hermitian(space, eps), k)?;
            Ok(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        }
    });
    let spectra = spectra.into_iter().collect::<Result<Vec<_>>>()?;
    let convergence_h = relative_level_change(&spectra[0], &spectra[1]);
    let convergence_k = relative_level_change(&spectra[2], &spectra[3]);

    let hw = cfg.hbar * cfg.omega;
    let mut gates = vec![
        Gate::at_most("example1: N vs 2N levels of H", convergence_h, CONVERGENCE_TOL),
        Gate::at_most("example1: N vs 2N levels of K", convergence_k, CONVERGENCE_TOL),
    ];
    for p in &sweep {
        gates.push(Gate::at_most(
            format!("example1: max |Im E| at eps={}", p.epsilon),
            p.max_imag,
            1e-8 * hw,
        ));
        gates.push(Gate::at_most(
            format!("example1: block hermiticity at eps={}", p.epsilon),
            p.block_hermiticity,
            cfg.tol,
        ));
    }
    let (ratio, exponent) = if sweep.len() > 1 {
        let ratio = sweep[0].distance / sweep[1].distance;
        let xs: Vec<f64> = sweep.iter().map(|p| p.epsilon.ln()).collect();
        let ys: Vec<f64> = sweep.iter().map(|p| p.distance.ln()).collect();
        (ratio, slope(&xs, &ys))
    } else {
        (f64::NAN, f64::NAN)
    };
    if sweep.len() > 1 {
        gates.push(Gate::within("example1: distance ratio on halving eps", ratio, 6.0, 10.0));
    } else {
        let p = &sweep[0];
        let exact: Vec<f64> = (0..LEVELS).map(|n| hw * (n as f64 + 0.5)).collect();
        let re: Vec<f64> = p.levels.iter().map(|z| z.0).collect();
        let worst = max_abs_diff(&re, &exact)
            .max(max_abs_diff(&p.hermitized, &exact))
            .max(max_abs_diff(&p.perturbative, &exact));
        gates.push(Gate::at_most("example1: spectra equal hbar omega (n + 1/2)", worst, cfg.tol));
    }
    Ok(Example1Report {
        config: cfg.clone(),
        sweep,
        ratio,
        exponent,
        convergence_h,
        convergence_k,
        gates,
    })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

impl Example1Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "cubic PT oscillator: N={} hbar={} m={} omega={}",
            c.dim, c.hbar, c.mass, c.omega
        );
        for p in &self.sweep {
            let _ = writeln!(out, "\neps = {}", p.epsilon);
            let rows: Vec<Vec<String>> = (0..p.hermitized.len())
                .map(|n| {
                    vec![
                        format!("{n:>3}"),
                        format!("{:>20.12}", p.levels[n].0),
                        format!("{:>11.2e}", p.levels[n].1),
                        format!("{:>20.12}", p.hermitized[n]),
                        format!("{:>20.12}", p.perturbative[n]),
                    ]
                })
                .collect();
            write_levels(
                &mut out,
                &format!(
                    "{:>3} {:>20} {:>11} {:>20} {:>20}",
                    "n", "Re E(H)", "Im E(H)", "E(hermitized)", "E(perturbative K)"
                ),
                &rows,
            );
            let _ = writeln!(out, "distance over lowest {}: {:.6e}", p.hermitized.len(), p.distance);
        }
        if self.ratio.is_finite() {
            let _ = writeln!(out, "\nratio distance(eps)/distance(eps/2): {:.4}", self.ratio);
            let _ = writeln!(out, "fitted exponent over the sweep:       {:.4}", self.exponent);
        }
        let _ = writeln!(out);
        write_gates(&mut out, &self.gates);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Example2Report {
    pub config: RunConfig,
    pub block: usize,
    pub levels_h: Vec<(f64, f64)>,
    pub levels_target: Vec<f64>,
    pub isospectrality: f64,
    pub bch_order2: f64,
    /// Terms needed for the full series to settle; `None` when truncation
    /// corners keep it from converging within the cap.
    pub bch_converged_order: Option<usize>,
    pub target_residual: f64,
    pub pseudo_hermiticity_full: f64,
    pub pseudo_hermiticity_block: f64,
    pub convergence: f64,
    pub gates: Vec<Gate>,
}

pub fn example2(cfg: &RunConfig, exec: Execution) -> Result<Example2Report> {
    let k = cfg.dim / 4;
    let dims = [cfg.dim, 2 * cfg.dim];
    let low = exec.map(&dims, |&n| -> Result<Vec<Complex64>> {
        let fs = fock_space(cfg, n)?;
        let g = gauge_hamiltonian(&fs, cfg.eta, &Potential::harmonic(&fs))?;
        Ok(eigenvalues(&g.h)?.lowest(k).values().to_vec())
    });
    let low = low.into_iter().collect::<Result<Vec<_>>>()?;
    let convergence = relative_level_change(&low[0], &low[1]);

    let fs = fock_space(cfg, cfg.dim)?;
    let g = gauge_hamiltonian(&fs, cfg.eta, &Potential::harmonic(&fs))?;
    let exact = hermitize_with(&g.h, &g.metric, RealityCheck::LowLying(k), default_reality_tol(&g.h))?;
    let bch2 = bch_transform(&g.h, &g.metric.log, 2)?;
    let bch_order2 = bch2.leading_block(k).distance(&exact.leading_block(k));
    let bch_converged_order = bch_transform_converged(&g.h, &g.metric.log, 1e-12, 32).ok().map(|(_, k)| k);
    let target_residual = exact.leading_block(k).distance(&g.target.leading_block(k));

    let levels_target = lowest_hermitian(&g.target, k)?;
    let re: Vec<f64> = low[0].iter().map(|z| z.re).collect();
    let max_imag = low[0].iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let isospectrality = max_abs_diff(&re, &levels_target).max(max_imag);

    let pseudo_hermiticity_full = pseudo_hermiticity_residual(&g.h, &g.metric)?;
    let gh = &g.metric.g * &g.h;
    let hg = &g.h.adjoint() * &g.metric.g;
    let pseudo_hermiticity_block =
        hg.leading_block(k).distance(&gh.leading_block(k)) / gh.leading_block(k).frobenius_norm();

    let gates = vec![
        Gate::at_most("example2: N vs 2N levels of H", convergence, CONVERGENCE_TOL),
        Gate::at_most("example2: BCH order 2 vs exact transform", bch_order2, 1e-8),
        Gate::at_most("example2: isospectrality of H and K", isospectrality, 1e-6),
        Gate::at_most("example2: pseudo-hermiticity on the block", pseudo_hermiticity_block, cfg.tol),
    ];
    Ok(Example2Report {
        config: cfg.clone(),
        block: k,
        levels_h: low[0].iter().map(|z| (z.re, z.im)).collect(),
        levels_target,
        isospectrality,
        bch_order2,
        bch_converged_order,
        target_residual,
        pseudo_hermiticity_full,
        pseudo_hermiticity_block,
        convergence,
        gates,
    })
}

impl Example2Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "imaginary gauge field: N={} eta={} hbar={} m={} omega={} block={}",
            c.dim, c.eta, c.hbar, c.mass, c.omega, self.block
        );
        let rows: Vec<Vec<String>> = (0..self.block)
            .map(|n| {
                vec![
                    format!("{n:>3}"),
                    format!("{:>20.12}", self.levels_h[n].0),
                    format!("{:>11.2e}", self.levels_h[n].1),
                    format!("{:>20.12}", self.levels_target[n]),
                ]
            })
            .collect();
        write_levels(
            &mut out,
            &format!("{:>3} {:>20} {:>11} {:>20}", "n", "Re E(H)", "Im E(H)", "E(p^2/2m + V)"),
            &rows,
        );
        let _ = writeln!(out, "isospectrality residual:          {:.3e}", self.isospectrality);
        let _ = writeln!(out, "BCH order 2 vs exact (block):     {:.3e}", self.bch_order2);
        match self.bch_converged_order {
            Some(k) => {
                let _ = writeln!(out, "BCH series terms to converge:     {k}");
            }
            None => {
                let _ = writeln!(out, "BCH series terms to converge:     none within cap");
            }
        }
        let _ = writeln!(out, "exact transform vs p^2/2m + V:    {:.3e}", self.target_residual);
        let _ = writeln!(out, "pseudo-hermiticity (full):        {:.3e}", self.pseudo_hermiticity_full);
        let _ = writeln!(out, "pseudo-hermiticity (block):       {:.3e}", self.pseudo_hermiticity_block);
        let _ = writeln!(out, "N vs 2N relative level change:    {:.3e}", self.convergence);
        let _ = writeln!(out);
        write_gates(&mut out, &self.gates);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Example3Report {
    pub config: RunConfig,
    #[serde(skip)]
    pub hermitian: Trajectory,
    #[serde(skip)]
    pub with_force: Trajectory,
    #[serde(skip)]
    pub naive: Trajectory,
    pub closed_form_deviation: f64,
    pub force_deviation: f64,
    pub naive_deviation: f64,
    pub force_norm_drift: f64,
    pub naive_norm_drift: f64,
    pub seconds: f64,
    pub gates: Vec<Gate>,
}

pub fn example3(cfg: &RunConfig, exec: Execution) -> Result<Example3Report> {
    let start = Instant::now();
    let fs = fock_space(cfg, cfg.dim)?;
    let ops = fock_operators(&fs);
    let driven = driven_oscillator_model(&fs, ScheduleLinear::new(cfg.tau)?)?;
    let frame = TimeDependentModel::stationary(ops.h0.clone(), crate::biortho::MetricOperator::identity(cfg.dim), cfg.hbar)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi0 = vector::basis(cfg.dim, 0);
    psi0[0] = Complex64::new(s, 0.0);
    psi0[1] = Complex64::new(s, 0.0);

    let runs = [(&frame, true), (&driven, true), (&driven, false)];
    let mut trajectories = exec
        .map(&runs, |&(model, force)| {
            Integrator::new(cfg.dt, force).run(model, &psi0, (0.0, cfg.t_end), &ops.x)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let naive = trajectories.pop().expect("three runs");
    let with_force = trajectories.pop().expect("three runs");
    let hermitian = trajectories.pop().expect("three runs");

    let alpha = fs.alpha();
    let omega = cfg.omega;
    let closed_form_deviation = hermitian.max_deviation_from(|t| alpha * (omega * t).cos());
    let force_deviation = with_force.max_deviation(&hermitian)?;
    let naive_deviation = naive.max_deviation(&hermitian)?;
    let force_norm_drift = with_force.max_norm_drift();
    let naive_norm_drift = naive.max_norm_drift();
    let gates = vec![
        Gate::at_most("example3: hermitian frame vs alpha cos(omega t)", closed_form_deviation, 1e-6),
        Gate::at_most("example3: with force vs hermitian frame", force_deviation, 1e-3),
        Gate::at_most("example3: metric norm drift with force", force_norm_drift, 1e-6),
        Gate::at_least("example3: without force vs hermitian frame", naive_deviation, 0.05),
        Gate::at_least("example3: metric norm drift without force", naive_norm_drift, 1e-2),
    ];
    Ok(Example3Report {
        config: cfg.clone(),
        hermitian,
        with_force,
        naive,
        closed_form_deviation,
        force_deviation,
        naive_deviation,
        force_norm_drift,
        naive_norm_drift,
        seconds: start.elapsed().as_secs_f64(),
        gates,
    })
}

impl Example3Report {
    pub fn csv(&self) -> Result<String> {
        Trajectory::frames_csv(&self.hermitian, &self.with_force, &self.naive)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "driven oscillator: N={} hbar={} m={} omega={} tau={} dt={} t_end={}",
            c.dim, c.hbar, c.mass, c.omega, c.tau, c.dt, c.t_end
        );
        let _ = writeln!(
            out,
            "{:>8} {:>14} {:>14} {:>14} {:>14}",
            "t", "x_herm", "x_force", "x_naive", "norm_naive"
        );
        let n = self.hermitian.len();
        let every = (n / 10).max(1);
        for i in (0..n).step_by(every).chain(std::iter::once(n - 1)) {
            let _ = writeln!(
                out,
                "{:>8.3} {:>14.9} {:>14.9} {:>14.9} {:>14.9}",
                self.hermitian.times[i],
                self.hermitian.x_expect[i],
                self.with_force.x_expect[i],
                self.naive.x_expect[i],
                self.naive.norm[i]
            );
            if i == n - 1 {
                break;
            }
        }
        let _ = writeln!(out, "elapsed: {:.2} s", self.seconds);
        let _ = writeln!(out);
        write_gates(&mut out, &self.gates);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub config: RunConfig,
    pub hamiltonian: String,
    pub report: MeasureTables,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureTables {
    pub norm_residual: f64,
    pub record_residual: f64,
    pub identity: Vec<Vec<f64>>,
    pub naive: Vec<Vec<f64>>,
    #[serde(skip)]
    pub raw: RepeatabilityReport,
}

pub fn measure(cfg: &RunConfig) -> Result<MeasureReport> {
    let (h, label) = match (&cfg.matrix, cfg.hermitian) {
        (Some(path), _) => (read_matrix(path)?, path.display().to_string()),
        (None, false) => (
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]])?,
            "[[1, 1], [0, 2]]".to_string(),
        ),
        (None, true) => (
            ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 2.0]])?,
            "[[1, 0.5], [0.5, 2]]".to_string(),
        ),
    };
    let sys = biorthogonalize(&h, DEFAULT_TOL)?;
    let metric = build_metric(&sys)?;
    let app = ApparatusModel::orthogonal_pointers(sys.dim(), sys.dim())?;
    let u = build_recording_map(&sys, &app)?;
    let raw = repeatability_residual(&u, &sys, &app, &metric)?;
    let n = sys.dim();
    let mut naive = vec![vec![0.0; n]; n];
    for e in &raw.entries {
        naive[e.m][e.n] = e.naive_residual;
    }
    let identity = raw.identity_residuals(n);
    let mut gates = vec![
        Gate::at_most("measure: identity residual table", raw.max_identity_residual(), 1e-12),
        Gate::at_most("measure: recording map metric unitarity", raw.norm_residual, 1e-12),
        Gate::at_most("measure: eigenstates recorded", raw.record_residual, 1e-12),
    ];
    if cfg.matrix.is_none() {
        if cfg.hermitian {
            let diff = identity
                .iter()
                .flatten()
                .zip(naive.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            gates.push(Gate::at_most("measure: hermitian tables coincide", diff, 1e-12));
        } else {
            let off = (raw.max_naive_residual() - std::f64::consts::FRAC_1_SQRT_2).abs();
            gates.push(Gate::at_most("measure: naive overlap equals 1/sqrt(2)", off, 1e-12));
        }
    }
    Ok(MeasureReport {
        config: cfg.clone(),
        hamiltonian: label,
        report: MeasureTables {
            norm_residual: raw.norm_residual,
            record_residual: raw.record_residual,
            identity,
            naive,
            raw,
        },
        gates,
    })
}

impl MeasureReport {
    pub fn csv(&self) -> String {
        self.report.raw.to_csv()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "recording map for H = {}", self.hamiltonian);
        let _ = writeln!(out, "{}", self.report.raw.to_table());
        let n = self.report.identity.len();
        let _ = writeln!(out, "identity residuals |<phi_m|psi_n>(1 - <A_m|A_n>)| (row m, column n):");
        for row in &self.report.identity {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.3e}")).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        let _ = writeln!(out, "naive variant |<psi_m|psi_n>(1 - <A_m|A_n>)|:");
        for row in self.report.naive.iter().take(n) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.3e}")).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        let _ = writeln!(out);
        write_gates(&mut out, &self.gates);
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub biortho: BiorthoSuite,
    pub hermitization: HermitizationSuite,
    pub conservation: ConservationCheck,
    pub order: OrderCheck,
    pub gates: Vec<Gate>,
}

/// Matrices per randomized suite.
pub const SUITE_SIZE: usize = 200;
/// Largest random matrix dimension.
pub const SUITE_MAX_DIM: usize = 16;
/// Grid size of the overlap conservation check.
pub const CONSERVATION_POINTS: usize = 10_000;
/// Coarse step of the RK4 order check.
pub const ORDER_DT: f64 = 0.02;

pub fn verify(cfg: &RunConfig, exec: Execution) -> Result<VerifyReport> {
    let biortho = biortho_suite(cfg.seed, SUITE_SIZE, SUITE_MAX_DIM, exec);
    let hermitization = hermitization_suite(cfg.seed.wrapping_add(1), SUITE_SIZE, SUITE_MAX_DIM, exec);
    let conservation = conservation_check(cfg.seed, CONSERVATION_POINTS, cfg.t_end, exec)?;
    let order = rk4_order_check(cfg.seed, ORDER_DT, cfg.t_end, exec)?;
    let measurement = measure(&RunConfig {
        hermitian: false,
        matrix: None,
        ..cfg.clone()
    })?;
    let mut gates = biortho.gates(cfg.tol);
    gates.extend(hermitization.gates(cfg.tol));
    gates.extend(conservation.gates());
    gates.extend(order.gates());
    gates.extend(measurement.gates);
    Ok(VerifyReport {
        config: cfg.clone(),
        biortho,
        hermitization,
        conservation,
        order,
        gates,
    })
}

impl VerifyReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "property suite, seed {}", self.config.seed);
        let _ = writeln!(
            out,
            "random matrices: {} per suite, dimension up to {}",
            self.biortho.count, SUITE_MAX_DIM
        );
        let _ = writeln!(
            out,
            "rk4 endpoint error: {:.3e} (dt={}) {:.3e} (dt={})",
            self.order.error_coarse,
            self.order.dt,
            self.order.error_fine,
            self.order.dt / 2.0
        );
        let _ = writeln!(
            out,
            "complex control overlap at t_end: {:.12}",
            self.conservation.control_final_overlap
        );
        let _ = writeln!(out);
        write_gates(&mut out, &self.gates);
        out
    }
}
