//! Truncated Fock-space builders for the oscillator examples.

use std::sync::Arc;

use num_complex::Complex64;

use crate::biortho::MetricOperator;
use crate::dynamics::{ExponentialMetric, TimeDependentModel};
use crate::error::{Error, Result};
use crate::matrixcore::{anticommutator, ComplexMatrix};

const HERM_TOL: f64 = 1e-10;

/// The lowest `dim` number states of an oscillator with mass `mass` and
/// frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    pub dim: usize,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl FockSpace {
    pub fn new(dim: usize, hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::ConfigInvalid(format!("Fock dimension must be at least 2, got {dim}")));
        }
        for (name, v) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::ConfigInvalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { dim, hbar, mass, omega })
    }

    /// `sqrt(hbar / 2 m omega)`.
    pub fn alpha(&self) -> f64 {
        (self.hbar / (2.0 * self.mass * self.omega)).sqrt()
    }

    /// `sqrt(m omega hbar / 2)`, the momentum scale.
    pub fn beta(&self) -> f64 {
        (self.mass * self.omega * self.hbar / 2.0).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct FockOperators {
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    pub x: ComplexMatrix,
    pub p: ComplexMatrix,
    pub h0: ComplexMatrix,
    pub parity: ComplexMatrix,
}

pub fn fock_operators(fs: &FockSpace) -> FockOperators {
    let n = fs.dim;
    let a = ComplexMatrix::from_fn(n, |i, j| {
        if i + 1 == j {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let a_dag = a.adjoint();
    let x = (&a + &a_dag).scale_real(fs.alpha());
    let p = (&a_dag - &a).scale(Complex64::new(0.0, fs.beta()));
    let h0 = ComplexMatrix::from_real_diagonal(
        &(0..n)
            .map(|k| fs.hbar * fs.omega * (k as f64 + 0.5))
            .collect::<Vec<_>>(),
    );
    let parity =
        ComplexMatrix::from_real_diagonal(&(0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>());
    FockOperators {
        a,
        a_dag,
        x,
        p,
        h0,
        parity,
    }
}

/// `H_0 + i eps x^3`.
pub fn cubic_pt_hamiltonian(fs: &FockSpace, epsilon: f64) -> ComplexMatrix {
    let ops = fock_operators(fs);
    let x3 = &(&ops.x * &ops.x) * &ops.x;
    &ops.h0 + &x3.scale(Complex64::new(0.0, epsilon))
}

/// Second-order hermitian partner of [`cubic_pt_hamiltonian`]:
/// `H_0 + eps^2/(m omega^4) ({x^2,p^2} + p x^2 p + (3 m omega^2 / 2) x^4)`.
pub fn perturbative_hermitian(fs: &FockSpace, epsilon: f64) -> ComplexMatrix {
    let ops = fock_operators(fs);
    let x2 = &ops.x * &ops.x;
    let p2 = &ops.p * &ops.p;
    let x4 = &x2 * &x2;
    let pxxp = &(&ops.p * &x2) * &ops.p;
    let anti = anticommutator(&x2, &p2).expect("operators share the Fock dimension");
    let inner = &(&anti + &pxxp) + &x4.scale_real(1.5 * fs.mass * fs.omega * fs.omega);
    let coeff = epsilon * epsilon / (fs.mass * fs.omega.powi(4));
    &ops.h0 + &inner.scale_real(coeff)
}

/// `V(x) = sum_k coeffs[k] x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub coeffs: Vec<f64>,
}

impl Potential {
    pub fn harmonic(fs: &FockSpace) -> Self {
        Self {
            coeffs: vec![0.0, 0.0, 0.5 * fs.mass * fs.omega * fs.omega],
        }
    }

    /// Horner evaluation on the truncated position operator.
    pub fn operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = x.dim();
        let mut acc = ComplexMatrix::zeros(n);
        for &c in self.coeffs.iter().rev() {
            acc = (&acc * x).shift(Complex64::new(c, 0.0));
        }
        acc
    }
}

/// Imaginary gauge field in a potential together with the metric that maps
/// it back to `p^2/2m + V`.
#[derive(Debug, Clone)]
pub struct GaugeModel {
    pub h: ComplexMatrix,
    pub metric: MetricOperator,
    /// `p^2/2m + V(x)` on the same truncated space.
    pub target: ComplexMatrix,
}

/// `H = (p - i hbar eta)^2 / 2m + V(x)` with `g = exp(2 eta x)`.
pub fn gauge_hamiltonian(fs: &FockSpace, eta: f64, potential: &Potential) -> Result<GaugeModel> {
    let ops = fock_operators(fs);
    let shifted = ops.p.shift(Complex64::new(0.0, -fs.hbar * eta));
    let v = potential.operator(&ops.x);
    let h = &(&shifted * &shifted).scale_real(0.5 / fs.mass) + &v;
    let target = &(&ops.p * &ops.p).scale_real(0.5 / fs.mass) + &v;
    let metric = MetricOperator::from_log(&ops.x.scale_real(2.0 * eta), HERM_TOL)?;
    Ok(GaugeModel { h, metric, target })
}

/// `eta_t = t / tau` ramped on `[0, tau]` and held at its end values outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleLinear {
    pub tau: f64,
}

impl ScheduleLinear {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::ConfigInvalid(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { tau })
    }

    pub fn eta(&self, t: f64) -> f64 {
        (t / self.tau).clamp(0.0, 1.0)
    }

    pub fn eta_dot(&self, t: f64) -> f64 {
        if (0.0..=self.tau).contains(&t) {
            1.0 / self.tau
        } else {
            0.0
        }
    }
}

/// `H_t = hbar omega [(a - eta_t alpha)^dagger (a + eta_t alpha) + 1/2]` with
/// `Lambda_t = exp(2 eta_t x)`.
pub fn driven_oscillator_model(fs: &FockSpace, sched: ScheduleLinear) -> Result<TimeDependentModel> {
    let ops = fock_operators(fs);
    let alpha = fs.alpha();
    let hw = fs.hbar * fs.omega;
    let h0 = ops.h0.clone();
    let drift = (&ops.a_dag - &ops.a).scale_real(hw * alpha);
    let hamiltonian = Arc::new(move |t: f64| {
        let eta = sched.eta(t);
        (&h0 + &drift.scale_real(eta)).shift(Complex64::new(-hw * eta * eta * alpha * alpha, 0.0))
    });
    let metric = ExponentialMetric::new(&ops.x, Arc::new(move |t| 2.0 * sched.eta(t)))?
        .with_rate_derivative(Arc::new(move |t| 2.0 * sched.eta_dot(t)));
    TimeDependentModel::new(fs.dim, fs.hbar, hamiltonian, Arc::new(metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biortho::{hermitize_with, pt_symmetry_check, RealityCheck};
    use crate::dynamics::inertial_force;
    use crate::matrixcore::{bch_transform, commutator, eigenvalues};

    fn space(n: usize) -> FockSpace {
        FockSpace::new(n, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn smallest_space() {
        let fs = FockSpace::new(2, 1.0, 1.0, 0.5).unwrap();
        let ops = fock_operators(&fs);
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(ops.a, a);
        assert_eq!(ops.h0, ComplexMatrix::from_real_diagonal(&[0.25, 0.75]));
        assert!(FockSpace::new(1, 1.0, 1.0, 1.0).is_err());
        assert!(FockSpace::new(4, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn canonical_commutator_away_from_the_corner() {
        let fs = FockSpace::new(10, 0.7, 1.3, 0.4).unwrap();
        let ops = fock_operators(&fs);
        let c = commutator(&ops.x, &ops.p).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == j { Complex64::new(0.0, fs.hbar) } else { Complex64::new(0.0, 0.0) };
                assert!((c[(i, j)] - want).norm() < 1e-14);
            }
        }
        let x2 = &ops.x * &ops.x;
        assert!((x2[(0, 0)].re - fs.alpha().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn cubic_model_is_pt_symmetric() {
        let fs = space(16);
        let ops = fock_operators(&fs);
        assert_eq!(cubic_pt_hamiltonian(&fs, 0.0), ops.h0);
        let h = cubic_pt_hamiltonian(&fs, 0.1);
        assert_eq!(pt_symmetry_check(&h, &ops.parity, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn perturbative_partner_is_hermitian() {
        let fs = space(16);
        assert_eq!(perturbative_hermitian(&fs, 0.0), fock_operators(&fs).h0);
        let k = perturbative_hermitian(&fs, 0.1);
        assert!(k.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn quartic_coefficient() {
        let fs = FockSpace::new(10, 1.0, 2.0, 0.5).unwrap();
        let eps: f64 = 0.2;
        let ops = fock_operators(&fs);
        let x2 = &ops.x * &ops.x;
        let p2 = &ops.p * &ops.p;
        let kinetic = &anticommutator(&x2, &p2).unwrap() + &(&(&ops.p * &x2) * &ops.p);
        let rest = &(&perturbative_hermitian(&fs, eps) - &ops.h0)
            - &kinetic.scale_real(eps * eps / (fs.mass * fs.omega.powi(4)));
        let want = (&x2 * &x2).scale_real(1.5 * eps * eps / (fs.omega * fs.omega));
        assert!(rest.distance(&want) < 1e-12);
    }

    #[test]
    fn gauge_model_reduces_at_zero_field() {
        let fs = space(12);
        let g = gauge_hamiltonian(&fs, 0.0, &Potential::harmonic(&fs)).unwrap();
        assert!(g.h.hermiticity_residual() < 1e-14);
        assert!(g.metric.g.distance(&ComplexMatrix::identity(12)) < 1e-14);
    }

    #[test]
    fn gauge_model_bch_truncates() {
        let fs = space(24);
        let g = gauge_hamiltonian(&fs, 0.3, &Potential::harmonic(&fs)).unwrap();
        let bch = bch_transform(&g.h, &g.metric.log, 2).unwrap();
        let exact = hermitize_with(&g.h, &g.metric, RealityCheck::Skip, 1e-8).unwrap();
        let k = 6;
        assert!(bch.leading_block(k).distance(&exact.leading_block(k)) < 1e-8);
        assert!(bch.leading_block(k).distance(&g.target.leading_block(k)) < 1e-8);
    }

    #[test]
    fn driven_model_expansion() {
        let fs = FockSpace::new(12, 1.0, 1.0, 0.5).unwrap();
        let sched = ScheduleLinear::new(10.0).unwrap();
        let model = driven_oscillator_model(&fs, sched).unwrap();
        let ops = fock_operators(&fs);
        assert_eq!(model.hamiltonian(0.0).unwrap(), ops.h0);
        let t = 4.0;
        let eta = 0.4;
        let alpha = fs.alpha();
        let hw = fs.hbar * fs.omega;
        let shifted_a = ops.a.shift(Complex64::new(eta * alpha, 0.0));
        let shifted_ad = ops.a.shift(Complex64::new(-eta * alpha, 0.0)).adjoint();
        let direct = (&shifted_ad * &shifted_a).shift(Complex64::new(0.5, 0.0)).scale_real(hw);
        assert!(model.hamiltonian(t).unwrap().distance(&direct) < 1e-13);
        let f = inertial_force(&model, t).unwrap();
        assert!(f.distance(&ops.x.scale(Complex64::new(0.0, -0.1))) < 1e-15);
    }

    #[test]
    fn driven_model_is_a_similarity_of_h0() {
        let fs = FockSpace::new(40, 1.0, 1.0, 0.5).unwrap();
        let model = driven_oscillator_model(&fs, ScheduleLinear::new(10.0).unwrap()).unwrap();
        let h = model.hamiltonian(7.0).unwrap();
        let low: Vec<f64> = eigenvalues(&h).unwrap().lowest(8).real_parts();
        for (n, e) in low.iter().enumerate() {
            assert!((e - 0.5 * (n as f64 + 0.5)).abs() < 1e-9, "{n}: {e}");
        }
    }

    #[test]
    fn builders_are_deterministic() {
        let fs = space(20);
        assert_eq!(cubic_pt_hamiltonian(&fs, 0.1), cubic_pt_hamiltonian(&fs, 0.1));
        assert_eq!(perturbative_hermitian(&fs, 0.1), perturbative_hermitian(&fs, 0.1));
    }

    #[test]
    fn schedule_clamps() {
        let s = ScheduleLinear::new(10.0).unwrap();
        assert_eq!(s.eta(0.0), 0.0);
        assert_eq!(s.eta(10.0), 1.0);
        assert_eq!(s.eta(12.0), 1.0);
        assert_eq!(s.eta_dot(5.0), 0.1);
        assert_eq!(s.eta_dot(11.0), 0.0);
        assert!(ScheduleLinear::new(0.0).is_err());
    }
}
