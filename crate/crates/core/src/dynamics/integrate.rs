use std::fmt::Write as _;

use num_complex::Complex64;

use crate::biortho::MetricOperator;
use crate::error::{Error, Result};
use crate::matrixcore::{vector, ComplexMatrix};
use crate::measurement::{QuantumState, Representation};

use super::schedule::TimeDependentModel;

pub const TRAJECTORY_CSV_HEADER: &str = "t,x_herm,x_nonherm_force,x_nonherm_naive,norm_herm,norm_nonherm";

const NORM_TOL: f64 = 1e-8;

/// Recorded samples of one integration run.
///
/// `norm` holds `<psi_t|Lambda_t|psi_t>`; `x_expect` is evaluated after
/// pulling the state back through `Lambda_t^{1/2}`.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub x_expect: Vec<f64>,
    pub norm: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&[Complex64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// `max_t |norm(t) - norm(t_0)|`.
    pub fn max_norm_drift(&self) -> f64 {
        let Some(&n0) = self.norm.first() else {
            return 0.0;
        };
        self.norm.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }

    /// `max_t |x(t) - f(t)|`.
    pub fn max_deviation_from(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.times
            .iter()
            .zip(&self.x_expect)
            .map(|(&t, x)| (x - f(t)).abs())
            .fold(0.0, f64::max)
    }

    /// Pointwise `max_t |x(t) - x_other(t)|` on a shared grid.
    pub fn max_deviation(&self, other: &Trajectory) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self
            .x_expect
            .iter()
            .zip(&other.x_expect)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_grid(&self, other: &Trajectory) -> Result<()> {
        if self.times.len() != other.times.len() {
            return Err(Error::DimensionMismatch {
                expected: self.times.len(),
                found: other.times.len(),
            });
        }
        if self.times.iter().zip(&other.times).any(|(a, b)| a != b) {
            return Err(Error::ConfigInvalid("trajectories use different time grids".into()));
        }
        Ok(())
    }

    /// The three-curve CSV: hermitian frame, non-hermitian frame with the
    /// inertial force, and without it. `norm_nonherm` is taken from the run
    /// with the force.
    pub fn frames_csv(herm: &Trajectory, with_force: &Trajectory, naive: &Trajectory) -> Result<String> {
        herm.check_grid(with_force)?;
        herm.check_grid(naive)?;
        let mut out = String::with_capacity(herm.len() * 120);
        out.push_str(TRAJECTORY_CSV_HEADER);
        out.push('\n');
        for k in 0..herm.len() {
            let _ = writeln!(
                out,
                "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                herm.times[k],
                herm.x_expect[k],
                with_force.x_expect[k],
                naive.x_expect[k],
                herm.norm[k],
                with_force.norm[k],
            );
        }
        Ok(out)
    }
}

/// Fixed-step RK4 for `i hbar d/dt psi = (H_t + F_t) psi`.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub dt: f64,
    pub include_force: bool,
    /// Record every `stride`-th step; the final step is always recorded.
    pub stride: usize,
    /// Largest tolerated metric-norm drift while the force is on.
    pub drift_limit: f64,
}

impl Integrator {
    pub fn new(dt: f64, include_force: bool) -> Self {
        Self {
            dt,
            include_force,
            stride: 1,
            drift_limit: 1e-4,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn with_drift_limit(mut self, limit: f64) -> Self {
        self.drift_limit = limit;
        self
    }

    fn steps(&self, t0: f64, t1: f64) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::ConfigInvalid(format!("dt must be positive, got {}", self.dt)));
        }
        if t1 <= t0 || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::ConfigInvalid(format!("empty time span [{t0}, {t1}]")));
        }
        if self.dt > t1 - t0 {
            return Err(Error::ConfigInvalid("dt exceeds the time span".into()));
        }
        Ok(((t1 - t0) / self.dt).round().max(1.0) as usize)
    }

    /// `-(i/hbar) H_t y - (1/2) Lambda^{-1} dLambda y`.
    fn rhs(&self, model: &TimeDependentModel, t: f64, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let h = model.hamiltonian(t)?;
        let mut out = h.mul_vec(y)?;
        let k = Complex64::new(0.0, -1.0 / model.hbar());
        for z in &mut out {
            *z *= k;
        }
        if self.include_force {
            let l = model.metric().apply_log_derivative(t, y)?;
            vector::axpy(Complex64::new(-0.5, 0.0), &l, &mut out);
        }
        Ok(out)
    }

    fn record(
        &self,
        model: &TimeDependentModel,
        t: f64,
        psi: &[Complex64],
        x_op: &ComplexMatrix,
        traj: &mut Trajectory,
    ) -> Result<()> {
        let metric = model.metric();
        let norm = vector::inner(psi, &metric.apply_metric(t, psi)?).re;
        let s = metric.apply_sqrt(t, psi)?;
        let x = vector::inner(&s, &x_op.mul_vec(&s)?).re;
        traj.times.push(t);
        traj.states.push(psi.to_vec());
        traj.x_expect.push(x);
        traj.norm.push(norm);
        Ok(())
    }

    pub fn run(
        &self,
        model: &TimeDependentModel,
        psi0: &[Complex64],
        t_span: (f64, f64),
        x_op: &ComplexMatrix,
    ) -> Result<Trajectory> {
        let (t0, t1) = t_span;
        let n = self.steps(t0, t1)?;
        let dim = model.dim();
        if psi0.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: psi0.len(),
            });
        }
        x_op.expect_dim(dim)?;
        let norm0 = vector::inner(psi0, &model.metric().apply_metric(t0, psi0)?).re;
        if (norm0 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: norm0 });
        }

        let h = (t1 - t0) / n as f64;
        let mut traj = Trajectory::default();
        let mut psi = psi0.to_vec();
        self.record(model, t0, &psi, x_op, &mut traj)?;
        let half = Complex64::new(0.5 * h, 0.0);
        let full = Complex64::new(h, 0.0);
        for step in 1..=n {
            let t = t0 + (step - 1) as f64 * h;
            let k1 = self.rhs(model, t, &psi)?;
            let mut y = psi.clone();
            vector::axpy(half, &k1, &mut y);
            let k2 = self.rhs(model, t + 0.5 * h, &y)?;
            y.copy_from_slice(&psi);
            vector::axpy(half, &k2, &mut y);
            let k3 = self.rhs(model, t + 0.5 * h, &y)?;
            y.copy_from_slice(&psi);
            vector::axpy(full, &k3, &mut y);
            let k4 = self.rhs(model, t + h, &y)?;
            for i in 0..dim {
                psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
            if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if step % self.stride == 0 || step == n {
                let t_now = if step == n { t1 } else { t0 + step as f64 * h };
                self.record(model, t_now, &psi, x_op, &mut traj)?;
                if self.include_force {
                    let drift = (traj.norm[traj.norm.len() - 1] - norm0).abs();
                    if drift > self.drift_limit {
                        return Err(Error::StepTooLarge { t: t_now, drift });
                    }
                }
            }
        }
        Ok(traj)
    }
}

/// RK4 run with unit stride and the default drift watchdog.
pub fn evolve_timedep(
    model: &TimeDependentModel,
    psi0: &QuantumState,
    t_span: (f64, f64),
    dt: f64,
    include_force: bool,
    x_op: &ComplexMatrix,
) -> Result<Trajectory> {
    Integrator::new(dt, include_force).run(model, &psi0.amps, t_span, x_op)
}

/// `<x>` in the hermitian frame. Non-hermitian states are mapped there via
/// `g^{1/2}`; `metric_at_t` overrides the metric carried by the state.
pub fn expectation_position(
    state: &QuantumState,
    x_op: &ComplexMatrix,
    metric_at_t: Option<&MetricOperator>,
) -> Result<f64> {
    x_op.expect_dim(state.dim())?;
    let psi = match &state.rep {
        Representation::Hermitian => state.amps.clone(),
        Representation::NonHermitian(own) => {
            let m = metric_at_t.or(own.as_deref()).ok_or(Error::MissingMetric)?;
            m.g_sqrt.mul_vec(&state.amps)?
        }
    };
    Ok(vector::inner(&psi, &x_op.mul_vec(&psi)?).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biortho::biorthogonalize;
    use crate::dynamics::{evolve_spectral, StaticMetric};
    use std::sync::Arc;

    fn ladder(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |i, j| {
            if i + 1 == j {
                Complex64::new((j as f64).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn static_hermitian_matches_spectral() {
        let n = 6;
        let a = ladder(n);
        let h = &(&a.adjoint() * &a) + &(&a + &a.adjoint()).scale_real(0.3);
        let sys = biorthogonalize(&h, 1e-10).unwrap();
        let model = TimeDependentModel::stationary(h.clone(), MetricOperator::identity(n), 1.0).unwrap();
        let psi0 = vector::normalized(&[1.0, 1.0, 0.5, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)));
        let traj = Integrator::new(1e-3, true).with_stride(1000).run(&model, &psi0, (0.0, 10.0), &a).unwrap();
        let c = sys.left_states().mul_vec(&psi0).unwrap();
        let oracle = evolve_spectral(&sys, &c, 10.0, 1.0).unwrap();
        let end = traj.final_state().unwrap();
        let err = end.iter().zip(&oracle.amps).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        assert_eq!(traj.len(), 11);
        assert!(traj.max_norm_drift() < 1e-9);
    }

    #[test]
    fn grid_and_input_validation() {
        let model = TimeDependentModel::stationary(ComplexMatrix::identity(2), MetricOperator::identity(2), 1.0).unwrap();
        let x = ComplexMatrix::identity(2);
        let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let integ = Integrator::new(0.1, false);
        assert!(matches!(integ.run(&model, &psi, (1.0, 0.0), &x), Err(Error::ConfigInvalid(_))));
        assert!(matches!(
            integ.run(&model, &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)], (0.0, 1.0), &x),
            Err(Error::NotNormalized { .. })
        ));
        let traj = integ.run(&model, &psi, (0.0, 1.0), &x).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*traj.times.last().unwrap(), 1.0);
    }

    #[test]
    fn watchdog_trips_on_coarse_steps() {
        let n = 4;
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 40.0, 80.0, 120.0]);
        let model = TimeDependentModel::new(
            n,
            1.0,
            Arc::new(move |_| h.clone()),
            Arc::new(StaticMetric::identity(n)),
        )
        .unwrap();
        let psi = vector::normalized(&[Complex64::new(1.0, 0.0); 4]);
        let x = ComplexMatrix::identity(n);
        let r = Integrator::new(0.05, true).run(&model, &psi, (0.0, 1.0), &x);
        assert!(matches!(r, Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn expectation_requires_metric_for_non_hermitian() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let amps = vec![Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
        let s = QuantumState::hermitian(amps.clone()).unwrap();
        assert!((expectation_position(&s, &x, None).unwrap() - 1.0).abs() < 1e-15);
        let bare = QuantumState::new(amps.clone(), Representation::NonHermitian(None)).unwrap();
        assert!(matches!(expectation_position(&bare, &x, None), Err(Error::MissingMetric)));
        let id = MetricOperator::identity(2);
        assert!((expectation_position(&bare, &x, Some(&id)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = Trajectory {
            times: vec![0.0, 0.5],
            states: vec![vec![], vec![]],
            x_expect: vec![1.0, 0.9],
            norm: vec![1.0, 1.0],
        };
        let csv = Trajectory::frames_csv(&t, &t, &t).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2].split(',').count(), 6);
    }
}
