use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::biortho::MetricOperator;
use crate::error::{Error, Result};
use crate::matrixcore::{hermitian_eigen, solve_matrix, ComplexMatrix, HermitianEigen};

use super::check_hbar;

const HERM_TOL: f64 = 1e-8;
const DEFAULT_H_FD: f64 = 1e-6;

pub type OperatorFn = dyn Fn(f64) -> ComplexMatrix + Send + Sync;
pub type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A hermitian positive-definite metric `Lambda_t` and its time derivative.
///
/// The `apply_*` methods have dense defaults; schedules with structure
/// override them.
pub trait MetricSchedule: Send + Sync {
    fn dim(&self) -> usize;

    fn metric(&self, t: f64) -> Result<ComplexMatrix>;

    fn derivative(&self, t: f64) -> Result<ComplexMatrix>;

    /// `Lambda_t^{-1} d/dt Lambda_t`.
    fn log_derivative(&self, t: f64) -> Result<ComplexMatrix> {
        let lambda = self.metric(t)?;
        let d = self.derivative(t)?;
        solve_matrix(&lambda, &d).map_err(|e| match e {
            Error::Singular { .. } => Error::SingularMetric { t },
            other => other,
        })
    }

    fn apply_log_derivative(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.log_derivative(t)?.mul_vec(v)
    }

    fn apply_metric(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.metric(t)?.mul_vec(v)
    }

    /// `Lambda_t^{1/2} v`.
    fn apply_sqrt(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let eig = positive_eigen(&self.metric(t)?, t)?;
        eig.apply(f64::sqrt).mul_vec(v)
    }
}

fn positive_eigen(m: &ComplexMatrix, t: f64) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(m, HERM_TOL)?;
    if eig.min() <= HERM_TOL * eig.max_abs() {
        return Err(Error::SingularMetric { t });
    }
    Ok(eig)
}

fn fd_step(h_fd: f64, t: f64) -> f64 {
    h_fd * t.abs().max(1.0)
}

/// Time-independent metric. The inertial force vanishes.
#[derive(Debug, Clone)]
pub struct StaticMetric(pub MetricOperator);

impl StaticMetric {
    pub fn identity(dim: usize) -> Self {
        Self(MetricOperator::identity(dim))
    }
}

impl MetricSchedule for StaticMetric {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn metric(&self, _t: f64) -> Result<ComplexMatrix> {
        Ok(self.0.g.clone())
    }

    fn derivative(&self, _t: f64) -> Result<ComplexMatrix> {
        Ok(ComplexMatrix::zeros(self.dim()))
    }

    fn log_derivative(&self, _t: f64) -> Result<ComplexMatrix> {
        Ok(ComplexMatrix::zeros(self.dim()))
    }

    fn apply_log_derivative(&self, _t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(vec![Complex64::new(0.0, 0.0); v.len()])
    }

    fn apply_metric(&self, _t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.0.g.mul_vec(v)
    }

    fn apply_sqrt(&self, _t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.0.g_sqrt.mul_vec(v)
    }
}

/// Metric given by an arbitrary provider. Without an analytic derivative the
/// symmetric difference with step `h_fd * max(1, |t|)` is used.
#[derive(Clone)]
pub struct DenseMetric {
    dim: usize,
    lambda: Arc<OperatorFn>,
    dlambda: Option<Arc<OperatorFn>>,
    h_fd: f64,
}

impl DenseMetric {
    pub fn new(dim: usize, lambda: Arc<OperatorFn>) -> Self {
        Self {
            dim,
            lambda,
            dlambda: None,
            h_fd: DEFAULT_H_FD,
        }
    }

    pub fn with_derivative(mut self, dlambda: Arc<OperatorFn>) -> Self {
        self.dlambda = Some(dlambda);
        self
    }

    pub fn with_step(mut self, h_fd: f64) -> Self {
        self.h_fd = h_fd;
        self
    }
}

impl fmt::Debug for DenseMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseMetric")
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.dlambda.is_some())
            .field("h_fd", &self.h_fd)
            .finish()
    }
}

impl MetricSchedule for DenseMetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn metric(&self, t: f64) -> Result<ComplexMatrix> {
        let m = (self.lambda)(t);
        m.expect_dim(self.dim)?;
        Ok(m)
    }

    fn derivative(&self, t: f64) -> Result<ComplexMatrix> {
        if let Some(d) = &self.dlambda {
            let m = d(t);
            m.expect_dim(self.dim)?;
            return Ok(m);
        }
        let h = fd_step(self.h_fd, t);
        let ahead = self.metric(t + h)?;
        let behind = self.metric(t - h)?;
        Ok((&ahead - &behind).scale_real(0.5 / h))
    }
}

/// `Lambda_t = exp(s(t) X)` for a fixed hermitian generator `X`.
///
/// `X` is diagonalized once, so every application costs one pair of dense
/// basis changes.
#[derive(Clone)]
pub struct ExponentialMetric {
    generator: ComplexMatrix,
    eig: HermitianEigen,
    rate: Arc<ScalarFn>,
    rate_derivative: Option<Arc<ScalarFn>>,
    h_fd: f64,
}

impl ExponentialMetric {
    pub fn new(generator: &ComplexMatrix, rate: Arc<ScalarFn>) -> Result<Self> {
        let eig = hermitian_eigen(generator, HERM_TOL)?;
        Ok(Self {
            generator: generator.hermitian_part(),
            eig,
            rate,
            rate_derivative: None,
            h_fd: DEFAULT_H_FD,
        })
    }

    pub fn with_rate_derivative(mut self, d: Arc<ScalarFn>) -> Self {
        self.rate_derivative = Some(d);
        self
    }

    pub fn with_step(mut self, h_fd: f64) -> Self {
        self.h_fd = h_fd;
        self
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn rate(&self, t: f64) -> f64 {
        (self.rate)(t)
    }

    pub fn rate_derivative(&self, t: f64) -> f64 {
        match &self.rate_derivative {
            Some(d) => d(t),
            None => {
                let h = fd_step(self.h_fd, t);
                ((self.rate)(t + h) - (self.rate)(t - h)) / (2.0 * h)
            }
        }
    }

    /// `U f(xi) U^dagger v`.
    fn apply_diag(&self, v: &[Complex64], f: impl Fn(f64) -> f64) -> Result<Vec<Complex64>> {
        let u = &self.eig.vectors;
        let n = u.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut coords = vec![Complex64::new(0.0, 0.0); n];
        for (i, vi) in v.iter().enumerate() {
            for (c, uik) in coords.iter_mut().zip(u.row(i)) {
                *c += uik.conj() * vi;
            }
        }
        for (c, &x) in coords.iter_mut().zip(&self.eig.values) {
            *c *= f(x);
        }
        Ok((0..n)
            .map(|i| u.row(i).iter().zip(&coords).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl fmt::Debug for ExponentialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentialMetric")
            .field("dim", &self.generator.dim())
            .field("analytic_rate", &self.rate_derivative.is_some())
            .finish()
    }
}

impl MetricSchedule for ExponentialMetric {
    fn dim(&self) -> usize {
        self.generator.dim()
    }

    fn metric(&self, t: f64) -> Result<ComplexMatrix> {
        let s = self.rate(t);
        Ok(self.eig.apply(|x| (s * x).exp()))
    }

    fn derivative(&self, t: f64) -> Result<ComplexMatrix> {
        let s = self.rate(t);
        let ds = self.rate_derivative(t);
        Ok(self.eig.apply(|x| ds * x * (s * x).exp()))
    }

    fn log_derivative(&self, t: f64) -> Result<ComplexMatrix> {
        Ok(self.generator.scale_real(self.rate_derivative(t)))
    }

    fn apply_log_derivative(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let ds = self.rate_derivative(t);
        let mut out = self.generator.mul_vec(v)?;
        for z in &mut out {
            *z *= ds;
        }
        Ok(out)
    }

    fn apply_metric(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = self.rate(t);
        self.apply_diag(v, |x| (s * x).exp())
    }

    fn apply_sqrt(&self, t: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = self.rate(t);
        self.apply_diag(v, |x| (0.5 * s * x).exp())
    }
}

/// Generator `H_t` together with the metric `Lambda_t` it is pseudo-hermitian
/// with respect to.
#[derive(Clone)]
pub struct TimeDependentModel {
    dim: usize,
    hbar: f64,
    hamiltonian: Arc<OperatorFn>,
    metric: Arc<dyn MetricSchedule>,
}

impl TimeDependentModel {
    pub fn new(dim: usize, hbar: f64, hamiltonian: Arc<OperatorFn>, metric: Arc<dyn MetricSchedule>) -> Result<Self> {
        check_hbar(hbar)?;
        if metric.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: metric.dim(),
            });
        }
        hamiltonian(0.0).expect_dim(dim)?;
        Ok(Self {
            dim,
            hbar,
            hamiltonian,
            metric,
        })
    }

    /// Constant `H` with a constant metric.
    pub fn stationary(h: ComplexMatrix, metric: MetricOperator, hbar: f64) -> Result<Self> {
        let dim = h.dim();
        Self::new(dim, hbar, Arc::new(move |_| h.clone()), Arc::new(StaticMetric(metric)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn hamiltonian(&self, t: f64) -> Result<ComplexMatrix> {
        let h = (self.hamiltonian)(t);
        h.expect_dim(self.dim)?;
        Ok(h)
    }

    pub fn metric(&self) -> &dyn MetricSchedule {
        self.metric.as_ref()
    }

    /// Same generator, different metric.
    pub fn with_metric(&self, metric: Arc<dyn MetricSchedule>) -> Result<Self> {
        Self::new(self.dim, self.hbar, self.hamiltonian.clone(), metric)
    }
}

impl fmt::Debug for TimeDependentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentModel")
            .field("dim", &self.dim)
            .field("hbar", &self.hbar)
            .finish()
    }
}

/// `F_t = -(i hbar / 2) Lambda_t^{-1} d/dt Lambda_t`.
pub fn inertial_force(model: &TimeDependentModel, t: f64) -> Result<ComplexMatrix> {
    let l = model.metric().log_derivative(t)?;
    Ok(l.scale(Complex64::new(0.0, -0.5 * model.hbar())))
}
