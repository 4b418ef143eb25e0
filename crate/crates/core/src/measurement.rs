//! Metric-consistent probabilities and the system-apparatus recording map.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::biortho::{BiorthogonalSystem, MetricOperator};
use crate::error::{Error, Result};
use crate::matrixcore::{vector, Bra, ComplexMatrix};

const NORM_TOL: f64 = 1e-8;

/// Inner-product structure a state lives in.
#[derive(Debug, Clone)]
pub enum Representation {
    Hermitian,
    /// Non-hermitian frame; the metric may be unknown to the holder.
    NonHermitian(Option<Arc<MetricOperator>>),
}

#[derive(Debug, Clone)]
pub struct QuantumState {
    pub amps: Vec<Complex64>,
    pub rep: Representation,
}

impl QuantumState {
    /// Wraps amplitudes, requiring unit norm in the representation's inner
    /// product whenever that inner product is known.
    pub fn new(amps: Vec<Complex64>, rep: Representation) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let state = Self { amps, rep };
        if let Some(norm) = state.norm_sqr() {
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(state)
    }

    pub fn hermitian(amps: Vec<Complex64>) -> Result<Self> {
        Self::new(amps, Representation::Hermitian)
    }

    pub fn non_hermitian(amps: Vec<Complex64>, metric: Arc<MetricOperator>) -> Result<Self> {
        Self::new(amps, Representation::NonHermitian(Some(metric)))
    }

    /// `<psi|psi>` or `<psi|g|psi>`; `None` when the metric is unknown.
    pub fn norm_sqr(&self) -> Option<f64> {
        match &self.rep {
            Representation::Hermitian => Some(vector::norm(&self.amps).powi(2)),
            Representation::NonHermitian(Some(m)) => Some(m.norm_sqr(&self.amps)),
            Representation::NonHermitian(None) => None,
        }
    }

    pub fn metric(&self) -> Option<&MetricOperator> {
        match &self.rep {
            Representation::NonHermitian(Some(m)) => Some(m),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }
}

/// `|<phi_m| U |psi_n>|^2`.
pub fn transition_probability(sys: &BiorthogonalSystem, u: &ComplexMatrix, n: usize, m: usize) -> Result<f64> {
    if u.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: u.dim(),
        });
    }
    let psi = sys.right(n)?;
    let phi = sys.left(m)?;
    Ok(phi.pair(&u.mul_vec_unchecked(&psi)).norm_sqr())
}

pub(crate) fn check_coefficients(c: &[Complex64], sys: &BiorthogonalSystem) -> Result<()> {
    if c.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: c.len(),
        });
    }
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `<phi_0| = sum_n c_n^* <phi_n|`, the dual partner of `sum_n c_n |psi_n>`.
pub fn left_partner(c: &[Complex64], sys: &BiorthogonalSystem) -> Result<Bra> {
    check_coefficients(c, sys)?;
    Ok(left_combination(c.iter().map(|z| z.conj()), sys))
}

pub(crate) fn left_combination(weights: impl Iterator<Item = Complex64>, sys: &BiorthogonalSystem) -> Bra {
    let w = sys.left_states();
    let n = sys.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, wk) in weights.enumerate() {
        vector::axpy(wk, w.row(k), &mut out);
    }
    Bra(out)
}

pub(crate) fn check_normalized_coefficients(c: &[Complex64], sys: &BiorthogonalSystem) -> Result<()> {
    check_coefficients(c, sys)
}

/// `p_n = |(<psi_n| g) |psi>|^2` for a metric-normalized state.
pub fn probability_via_metric(
    sys: &BiorthogonalSystem,
    m: &MetricOperator,
    n: usize,
    psi: &QuantumState,
) -> Result<f64> {
    let norm = m.norm_sqr(&psi.amps);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let psi_n = sys.right(n)?;
    Ok(m.inner(&psi_n, &psi.amps).norm_sqr())
}

/// `|<phi_n|psi>|^2`, the direct form of [`probability_via_metric`].
pub fn probability_direct(sys: &BiorthogonalSystem, n: usize, psi: &[Complex64]) -> Result<f64> {
    Ok(sys.left(n)?.pair(psi).norm_sqr())
}

/// Apparatus with a ready state and one pointer state per recorded outcome.
#[derive(Debug, Clone)]
pub struct ApparatusModel {
    ready: Vec<Complex64>,
    pointers: Vec<Vec<Complex64>>,
}

impl ApparatusModel {
    pub fn new(ready: Vec<Complex64>, pointers: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = ready.len();
        if dim == 0 {
            return Err(Error::InvalidApparatus("empty apparatus space".into()));
        }
        if pointers.len() > dim {
            return Err(Error::InvalidApparatus(format!(
                "{} pointers exceed apparatus dimension {dim}",
                pointers.len()
            )));
        }
        for v in std::iter::once(&ready).chain(&pointers) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let n = vector::norm(v);
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { norm: n * n });
            }
        }
        Ok(Self { ready, pointers })
    }

    /// Apparatus of dimension `dim` whose pointers are the first `count`
    /// basis states, starting from `|0>`.
    pub fn orthogonal_pointers(dim: usize, count: usize) -> Result<Self> {
        Self::new(
            vector::basis(dim, 0),
            (0..count.min(dim)).map(|k| vector::basis(dim, k)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.ready.len()
    }

    pub fn ready(&self) -> &[Complex64] {
        &self.ready
    }

    pub fn pointers(&self) -> &[Vec<Complex64>] {
        &self.pointers
    }

    /// `<A_m|A_n>`.
    pub fn pointer_overlap(&self, m: usize, n: usize) -> Complex64 {
        vector::inner(&self.pointers[m], &self.pointers[n])
    }
}

/// Unitary `R` on the apparatus with `R |from> = |to>` for unit vectors.
/// A phase times the Householder reflection swapping `from` and the
/// phase-aligned `to`; the identity when they already coincide.
pub fn pointer_unitary(from: &[Complex64], to: &[Complex64]) -> ComplexMatrix {
    let n = from.len();
    let overlap = vector::inner(from, to);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // aligned = e^{-i theta} |to> has a real non-negative overlap with |from>.
    let aligned: Vec<Complex64> = to.iter().map(|z| z * phase.conj()).collect();
    let diff: Vec<Complex64> = from.iter().zip(&aligned).map(|(a, b)| a - b).collect();
    let dn = vector::norm(&diff);
    if dn < 1e-15 {
        return ComplexMatrix::identity(n).scale(phase);
    }
    let w: Vec<Complex64> = diff.iter().map(|z| z / dn).collect();
    let householder = ComplexMatrix::from_fn(n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        Complex64::new(delta, 0.0) - 2.0 * w[i] * w[j].conj()
    });
    householder.scale(phase)
}

/// `U = sum_k |psi_k><phi_k| (x) R_k` on system (x) apparatus, system index
/// major. Maps `|psi_k>|A_0>` to `|psi_k>|A_k>`.
pub fn build_recording_map(sys: &BiorthogonalSystem, app: &ApparatusModel) -> Result<ComplexMatrix> {
    if app.pointers().len() != sys.dim() {
        return Err(Error::PointerCountMismatch {
            pointers: app.pointers().len(),
            dim: sys.dim(),
        });
    }
    let ns = sys.dim();
    let na = app.dim();
    let mut u = ComplexMatrix::zeros(ns * na);
    for k in 0..ns {
        let psi = sys.right(k)?;
        let phi = sys.left(k)?;
        let projector = ComplexMatrix::from_fn(ns, |i, j| psi[i] * phi.0[j]);
        let r = pointer_unitary(app.ready(), &app.pointers()[k]);
        u = &u + &projector.kron(&r);
    }
    Ok(u)
}

/// One row of the repeatability table for the ordered pair `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepeatabilityEntry {
    pub n: usize,
    pub m: usize,
    /// `|<psi_m|psi_n>|`.
    pub overlap_psi: f64,
    /// `|<phi_m|psi_n>|`.
    pub overlap_phi_psi: f64,
    /// `|<A_m|A_n>|`.
    pub pointer_overlap: f64,
    /// `|<phi_m|psi_n> (1 - <A_m|A_n>)|`.
    pub residual: f64,
    /// `|<psi_m|psi_n> (1 - <A_m|A_n>)|`, the hermitian-style identity.
    pub naive_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatabilityReport {
    /// `||U^dagger (g(x)I) U - g(x)I||_F / ||g(x)I||_F`.
    pub norm_residual: f64,
    /// `max_k || U |psi_k>|A_0> - |psi_k>|A_k> ||`.
    pub record_residual: f64,
    pub entries: Vec<RepeatabilityEntry>,
}

impl RepeatabilityReport {
    pub fn max_identity_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn max_naive_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.naive_residual).fold(0.0, f64::max)
    }

    pub fn identity_residuals(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; dim]; dim];
        for e in &self.entries {
            out[e.m][e.n] = e.residual;
        }
        out
    }

    pub const CSV_HEADER: &'static str = "n,m,overlap_psi,overlap_phi_psi,pointer_overlap,residual";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{:.15e},{:.15e},{:.15e},{:.15e}",
                e.n, e.m, e.overlap_psi, e.overlap_phi_psi, e.pointer_overlap, e.residual
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>14} {:>14} {:>14} {:>14} {:>14}",
            "n", "m", "|<psi|psi>|", "|<phi|psi>|", "|<A|A>|", "residual", "naive"
        );
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:>3} {:>3} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
                e.n, e.m, e.overlap_psi, e.overlap_phi_psi, e.pointer_overlap, e.residual, e.naive_residual
            );
        }
        let _ = writeln!(out, "metric norm residual: {:.3e}", self.norm_residual);
        let _ = writeln!(out, "record residual:      {:.3e}", self.record_residual);
        out
    }
}

/// Evaluates the recording identity `<phi_m|psi_n>(1 - <A_m|A_n>) = 0` and
/// the metric-unitarity of the recording map.
pub fn repeatability_residual(
    u_rec: &ComplexMatrix,
    sys: &BiorthogonalSystem,
    app: &ApparatusModel,
    m: &MetricOperator,
) -> Result<RepeatabilityReport> {
    let ns = sys.dim();
    let na = app.dim();
    if u_rec.dim() != ns * na {
        return Err(Error::DimensionMismatch {
            expected: ns * na,
            found: u_rec.dim(),
        });
    }
    let composite = m.g.kron(&ComplexMatrix::identity(na));
    let pulled = &(&u_rec.adjoint() * &composite) * u_rec;
    let norm_residual = pulled.distance(&composite) / composite.frobenius_norm();

    let mut record_residual: f64 = 0.0;
    for k in 0..ns {
        let psi = sys.right(k)?;
        let input = vector::kron(&psi, app.ready());
        let expected = vector::kron(&psi, &app.pointers()[k]);
        let out = u_rec.mul_vec_unchecked(&input);
        let diff: Vec<Complex64> = out.iter().zip(&expected).map(|(a, b)| a - b).collect();
        record_residual = record_residual.max(vector::norm(&diff));
    }

    let mut entries = Vec::with_capacity(ns * ns);
    for n in 0..ns {
        let psi_n = sys.right(n)?;
        for mi in 0..ns {
            let psi_m = sys.right(mi)?;
            let phi_m = sys.left(mi)?;
            let a = app.pointer_overlap(mi, n);
            let factor = Complex64::new(1.0, 0.0) - a;
            let overlap_psi = vector::inner(&psi_m, &psi_n);
            let overlap_phi_psi = phi_m.pair(&psi_n);
            entries.push(RepeatabilityEntry {
                n,
                m: mi,
                overlap_psi: overlap_psi.norm(),
                overlap_phi_psi: overlap_phi_psi.norm(),
                pointer_overlap: a.norm(),
                residual: (overlap_phi_psi * factor).norm(),
                naive_residual: (overlap_psi * factor).norm(),
            });
        }
    }
    Ok(RepeatabilityReport {
        norm_residual,
        record_residual,
        entries,
    })
}
