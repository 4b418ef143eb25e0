//! Spectral propagation for static generators and RK4 propagation for moving
//! metrics, with the inertial force that keeps the metric norm fixed.

mod integrate;
mod schedule;

pub use integrate::{evolve_timedep, expectation_position, Integrator, Trajectory, TRAJECTORY_CSV_HEADER};
pub use schedule::{inertial_force, DenseMetric, ExponentialMetric, MetricSchedule, StaticMetric, TimeDependentModel};

use num_complex::Complex64;

use crate::biortho::BiorthogonalSystem;
use crate::error::{Error, Result};
use crate::matrixcore::Bra;
use crate::measurement::{check_normalized_coefficients, left_combination, QuantumState, Representation};

pub(crate) fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::ConfigInvalid(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// `psi_t = sum_n exp(-i E_n t / hbar) c_n psi_n`.
///
/// The metric is not attached; callers that hold one can rewrap the amplitudes.
pub fn evolve_spectral(sys: &BiorthogonalSystem, c: &[Complex64], t: f64, hbar: f64) -> Result<QuantumState> {
    check_normalized_coefficients(c, sys)?;
    check_hbar(hbar)?;
    let weights: Vec<Complex64> = c
        .iter()
        .zip(sys.energies())
        .map(|(ck, e)| (Complex64::new(0.0, -t / hbar) * e).exp() * ck)
        .collect();
    Ok(QuantumState {
        amps: sys.superpose(&weights),
        rep: Representation::NonHermitian(None),
    })
}

/// `<phi_t| = sum_n exp(+i E_n^* t / hbar) c_n^* <phi_n|`.
pub fn evolve_left_spectral(sys: &BiorthogonalSystem, c: &[Complex64], t: f64, hbar: f64) -> Result<Bra> {
    check_normalized_coefficients(c, sys)?;
    check_hbar(hbar)?;
    let weights = c
        .iter()
        .zip(sys.energies())
        .map(|(ck, e)| (Complex64::new(0.0, t / hbar) * e.conj()).exp() * ck.conj());
    Ok(left_combination(weights, sys))
}
