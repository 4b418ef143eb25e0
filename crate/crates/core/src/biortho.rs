//! Biorthogonal eigensystems, the metric operator they induce, and the
//! similarity map between a real-spectrum non-hermitian operator and its
//! hermitian counterpart.
//!
//! For `H = V diag(E) V^{-1}` the right states `|psi_n>` are the columns of
//! `V` and the left states `<phi_n|` are the rows of `V^{-1}`, so that
//! `<phi_n|psi_m> = delta_nm`. The metric is `g = sum_m |phi_m><phi_m|`;
//! it makes `H` self-adjoint in the inner product `<a|g|b>`, and
//! `K = g^{1/2} H g^{-1/2}` is hermitian with the same spectrum as `H`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixcore::{
    eig_decompose, eigenvalues, hermitian_eigen, lowest_eigenpairs, vector, Bra, ComplexMatrix,
    HermitianEigen, Spectrum, DEFAULT_TOL,
};

/// Relative eigenvalue gap below which a spectrum counts as degenerate.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
/// Relative imaginary part below which an eigenvalue counts as real.
pub const DEFAULT_REALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    spectrum: Spectrum,
    right: ComplexMatrix,
    left: ComplexMatrix,
    condition: f64,
}

/// Invariant residuals of a [`BiorthogonalSystem`] against its operator,
/// all measured as max-abs entries except `reconstruction`, which is
/// relative Frobenius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthoResiduals {
    pub biorthonormality: f64,
    pub completeness: f64,
    pub right_eigen: f64,
    pub left_eigen: f64,
    pub reconstruction: f64,
}

impl BiorthoResiduals {
    pub fn max(&self) -> f64 {
        [
            self.biorthonormality,
            self.completeness,
            self.right_eigen,
            self.left_eigen,
            self.reconstruction,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl BiorthogonalSystem {
    pub fn dim(&self) -> usize {
        self.right.dim()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn energies(&self) -> &[Complex64] {
        self.spectrum.values()
    }

    /// `V`: right states as columns.
    pub fn right_states(&self) -> &ComplexMatrix {
        &self.right
    }

    /// `V^{-1}`: left states as rows.
    pub fn left_states(&self) -> &ComplexMatrix {
        &self.left
    }

    /// Spectral condition number of `V`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn right(&self, n: usize) -> Result<Vec<Complex64>> {
        self.check_index(n)?;
        Ok(self.right.column(n))
    }

    pub fn left(&self, n: usize) -> Result<Bra> {
        self.check_index(n)?;
        Ok(Bra(self.left.row(n).to_vec()))
    }

    pub(crate) fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: n,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    /// `sum_n c_n |psi_n>`.
    pub fn superpose(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.right.mul_vec_unchecked(c)
    }

    pub fn residuals(&self, h: &ComplexMatrix) -> BiorthoResiduals {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let biorthonormality = (&(&self.left * &self.right) - &id).max_abs();
        let completeness = (&(&self.right * &self.left) - &id).max_abs();
        let diag = ComplexMatrix::from_diagonal(self.energies());
        let right_eigen = (&(h * &self.right) - &(&self.right * &diag)).max_abs();
        let left_eigen = (&(&self.left * h) - &(&diag * &self.left)).max_abs();
        let rebuilt = &(&self.right * &diag) * &self.left;
        let reconstruction = rebuilt.distance(h) / h.frobenius_norm().max(f64::MIN_POSITIVE);
        BiorthoResiduals {
            biorthonormality,
            completeness,
            right_eigen,
            left_eigen,
            reconstruction,
        }
    }
}

/// Biorthogonal decomposition with default tolerances.
pub fn biorthogonalize(h: &ComplexMatrix, tol: f64) -> Result<BiorthogonalSystem> {
    biorthogonalize_with_gap(h, tol, DEFAULT_GAP_TOL)
}

/// As [`biorthogonalize`], rejecting spectra whose smallest gap is below
/// `gap_tol * ||H||_F`.
pub fn biorthogonalize_with_gap(h: &ComplexMatrix, tol: f64, gap_tol: f64) -> Result<BiorthogonalSystem> {
    let d = eig_decompose(h, tol)?;
    let gap = d.spectrum.min_gap();
    if gap < gap_tol * h.frobenius_norm() {
        return Err(Error::Degenerate { gap });
    }
    Ok(BiorthogonalSystem {
        spectrum: d.spectrum,
        right: d.vectors,
        left: d.inverse,
        condition: d.condition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumLabel {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumClass {
    pub label: SpectrumLabel,
    pub max_imag: f64,
}

impl SpectrumClass {
    pub fn is_real(&self) -> bool {
        self.label == SpectrumLabel::Real
    }
}

/// Labels a spectrum real iff `max |Im E_n| <= reality_tol` (absolute).
pub fn classify_spectrum(s: &Spectrum, reality_tol: f64) -> SpectrumClass {
    let max_imag = s.values().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let label = if max_imag <= reality_tol {
        SpectrumLabel::Real
    } else {
        SpectrumLabel::Complex
    };
    SpectrumClass { label, max_imag }
}

/// Default absolute reality tolerance for an operator: `1e-8 * ||H||_F`.
pub fn default_reality_tol(h: &ComplexMatrix) -> f64 {
    DEFAULT_REALITY_TOL * h.frobenius_norm()
}

/// Positive-definite metric `g` with its inverse, square roots and logarithm.
#[derive(Debug, Clone)]
pub struct MetricOperator {
    pub g: ComplexMatrix,
    pub g_inv: ComplexMatrix,
    pub g_sqrt: ComplexMatrix,
    pub g_inv_sqrt: ComplexMatrix,
    pub log: ComplexMatrix,
}

/// Invariant residuals of a metric, all relative Frobenius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResiduals {
    pub hermiticity: f64,
    pub inverse: f64,
    pub sqrt: f64,
    pub inv_sqrt: f64,
    pub log: f64,
}

impl MetricResiduals {
    pub fn max(&self) -> f64 {
        [self.hermiticity, self.inverse, self.sqrt, self.inv_sqrt, self.log]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl MetricOperator {
    pub fn identity(dim: usize) -> Self {
        let i = ComplexMatrix::identity(dim);
        Self {
            g: i.clone(),
            g_inv: i.clone(),
            g_sqrt: i.clone(),
            g_inv_sqrt: i,
            log: ComplexMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// All caches from a hermitian positive-definite `g`.
    pub fn from_metric(g: &ComplexMatrix, tol: f64) -> Result<Self> {
        let eig = positive_eigen(g, tol)?;
        Ok(Self {
            g: g.hermitian_part(),
            g_inv: eig.apply(|x| 1.0 / x),
            g_sqrt: eig.apply(f64::sqrt),
            g_inv_sqrt: eig.apply(|x| 1.0 / x.sqrt()),
            log: eig.apply(f64::ln),
        })
    }

    /// The metric `g = exp(G)` for hermitian `G`; every cache is an exponential
    /// of `G`, which avoids taking roots of an ill-conditioned `g`.
    pub fn from_log(log: &ComplexMatrix, tol: f64) -> Result<Self> {
        let eig = hermitian_eigen(log, tol)?;
        Ok(Self {
            g: eig.apply(f64::exp),
            g_inv: eig.apply(|x| (-x).exp()),
            g_sqrt: eig.apply(|x| (0.5 * x).exp()),
            g_inv_sqrt: eig.apply(|x| (-0.5 * x).exp()),
            log: log.hermitian_part(),
        })
    }

    /// `<a|g|b>`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        vector::inner(a, &self.g.mul_vec_unchecked(b))
    }

    /// `<a|g|a>`, real and positive for a valid metric.
    pub fn norm_sqr(&self, a: &[Complex64]) -> f64 {
        self.inner(a, a).re
    }

    pub fn residuals(&self) -> MetricResiduals {
        let n = self.dim();
        let gn = self.g.frobenius_norm();
        let id = ComplexMatrix::identity(n);
        let id_norm = (n as f64).sqrt();
        let exp_log = hermitian_eigen(&self.log, 1e-6)
            .map(|e| e.apply(f64::exp).distance(&self.g) / gn)
            .unwrap_or(f64::INFINITY);
        MetricResiduals {
            hermiticity: self.g.hermiticity_residual(),
            inverse: (&(&self.g * &self.g_inv) - &id).frobenius_norm() / id_norm,
            sqrt: (&self.g_sqrt * &self.g_sqrt).distance(&self.g) / gn,
            inv_sqrt: (&(&self.g_sqrt * &self.g_inv_sqrt) - &id).frobenius_norm() / id_norm,
            log: exp_log,
        }
    }
}

fn positive_eigen(g: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(g, tol)?;
    if eig.min() <= tol * eig.max_abs() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig)
}

/// `g = sum_m |phi_m><phi_m|` and `g^{-1} = sum_n |psi_n><psi_n|`, with roots
/// and logarithm from the spectral decomposition of `g`.
pub fn build_metric(sys: &BiorthogonalSystem) -> Result<MetricOperator> {
    let w = sys.left_states();
    let v = sys.right_states();
    let g = (&w.adjoint() * w).hermitian_part();
    let g_inv = (v * &v.adjoint()).hermitian_part();
    let eig = positive_eigen(&g, DEFAULT_TOL)?;
    Ok(MetricOperator {
        g,
        g_inv,
        g_sqrt: eig.apply(f64::sqrt),
        g_inv_sqrt: eig.apply(|x| 1.0 / x.sqrt()),
        log: eig.apply(f64::ln),
    })
}

/// `||H^dagger g - g H||_F / ||g H||_F`.
pub fn pseudo_hermiticity_residual(h: &ComplexMatrix, m: &MetricOperator) -> Result<f64> {
    h.check_dim(&m.g)?;
    let gh = &m.g * h;
    let hg = &h.adjoint() * &m.g;
    Ok(hg.distance(&gh) / gh.frobenius_norm().max(f64::MIN_POSITIVE))
}

/// Which eigenvalues of `H` must be real before hermitizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealityCheck {
    /// Every eigenvalue.
    Full,
    /// Only the given number of lowest levels; truncated models corrupt the
    /// top of the spectrum.
    LowLying(usize),
    Skip,
}

/// `K = g^{1/2} H g^{-1/2}`, refusing operators with a complex spectrum.
pub fn hermitize(h: &ComplexMatrix, m: &MetricOperator) -> Result<ComplexMatrix> {
    hermitize_with(h, m, RealityCheck::Full, default_reality_tol(h))
}

pub fn hermitize_with(
    h: &ComplexMatrix,
    m: &MetricOperator,
    check: RealityCheck,
    reality_tol: f64,
) -> Result<ComplexMatrix> {
    h.check_dim(&m.g)?;
    let spectrum = match check {
        RealityCheck::Full => Some(eigenvalues(h)?),
        RealityCheck::LowLying(k) => Some(eigenvalues(h)?.lowest(k)),
        RealityCheck::Skip => None,
    };
    if let Some(s) = spectrum {
        let class = classify_spectrum(&s, reality_tol);
        if !class.is_real() {
            return Err(Error::ComplexSpectrum {
                max_imag: class.max_imag,
            });
        }
    }
    Ok(&(&m.g_sqrt * h) * &m.g_inv_sqrt)
}

/// Inverse map `H = g^{-1/2} K g^{1/2}`; applies to any observable.
pub fn dehermitize(k: &ComplexMatrix, m: &MetricOperator) -> Result<ComplexMatrix> {
    k.check_dim(&m.g)?;
    Ok(&(&m.g_inv_sqrt * k) * &m.g_sqrt)
}

/// `||P conj(H) P - H||_F / ||H||_F` with time reversal acting as entrywise
/// conjugation in the working basis.
pub fn pt_symmetry_check(h: &ComplexMatrix, p: &ComplexMatrix, tol: f64) -> Result<f64> {
    h.check_dim(p)?;
    let n = p.dim();
    let involution = (&(p * p) - &ComplexMatrix::identity(n)).frobenius_norm() / (n as f64).sqrt();
    if involution > tol {
        return Err(Error::NotInvolution {
            residual: involution,
        });
    }
    let transformed = &(p * &h.conj()) * p;
    Ok(transformed.distance(h) / h.frobenius_norm().max(f64::MIN_POSITIVE))
}

/// Restriction of an operator to the invariant subspace spanned by its `k`
/// lowest right eigenvectors, expressed in an orthonormal basis of that
/// subspace.
#[derive(Debug, Clone)]
pub struct LowLyingBlock {
    /// `Q^dagger H Q`, `k x k`.
    pub matrix: ComplexMatrix,
    /// Orthonormal basis vectors (columns of `Q`).
    pub basis: Vec<Vec<Complex64>>,
    pub spectrum: Spectrum,
}

impl LowLyingBlock {
    /// Maps block coordinates back into the full space.
    pub fn lift(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let n = self.basis[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (q, c) in self.basis.iter().zip(coords) {
            vector::axpy(*c, q, &mut out);
        }
        out
    }
}

/// Compresses `H` onto its lowest `k` levels. Used where truncation makes
/// the top of a spectrum unphysical while the low-lying block is converged.
pub fn compress_low_lying(h: &ComplexMatrix, k: usize) -> Result<LowLyingBlock> {
    if k == 0 || k > h.dim() {
        return Err(Error::IndexOutOfRange { index: k, dim: h.dim() });
    }
    let (spectrum, vectors) = lowest_eigenpairs(h, k)?;
    let basis = orthonormalize(&vectors)?;
    let hq: Vec<Vec<Complex64>> = basis.iter().map(|q| h.mul_vec_unchecked(q)).collect();
    let matrix = ComplexMatrix::from_fn(k, |i, j| vector::inner(&basis[i], &hq[j]));
    Ok(LowLyingBlock {
        matrix,
        basis,
        spectrum,
    })
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
fn orthonormalize(vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let proj = vector::inner(q, &w);
                vector::axpy(-proj, q, &mut w);
            }
        }
        let n = vector::norm(&w);
        if n < 1e-10 {
            return Err(Error::Defective { condition: 1.0 / n });
        }
        basis.push(w.iter().map(|z| z / n).collect());
    }
    Ok(basis)
}
