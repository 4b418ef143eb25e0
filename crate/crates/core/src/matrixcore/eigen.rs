//! General (non-normal) complex eigenproblems.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR iteration gives the Schur form `M = Z T Z^dagger`. Eigenvectors
//! come from back-substitution on `T`, mapped back through `Z`.

use num_complex::Complex64;

use super::hermitian::hermitian_eigen;
use super::lu::invert;
use super::matrix::ComplexMatrix;
use super::spectrum::{canonical_order, Spectrum};
use super::vector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ITERATIONS_PER_EIGENVALUE: usize = 100;

/// Complex Schur form `M = Z T Z^dagger` with `T` upper triangular, `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl Schur {
    /// Eigenvalues in Schur (diagonal) order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diagonal()
    }

    /// Right eigenvector belonging to the `k`-th diagonal entry of `T`,
    /// unit norm, largest component real positive.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let t = &self.t;
        let n = t.dim();
        let lambda = t[(k, k)];
        let small = f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE);
        let mut y = vec![ZERO; n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[i] = -s / d;
            let big = y[i].norm();
            if big > 1e150 {
                for yj in y.iter_mut() {
                    *yj /= big;
                }
            }
        }
        let v: Vec<Complex64> = (0..n)
            .map(|r| (0..=k).map(|j| self.z[(r, j)] * y[j]).sum())
            .collect();
        fix_phase(vector::normalized(&v))
    }
}

/// Scales `v` so its largest-magnitude component (first one on near-ties)
/// is real and positive.
pub fn fix_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-10))
        .expect("maximum exists");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
    v
}

pub fn schur(m: &ComplexMatrix) -> Result<Schur> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let (mut h, mut z) = hessenberg(m);
    qr_iterate(&mut h, &mut z)?;
    // Clear the strictly lower part left at rounding level.
    let n = h.dim();
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, z })
}

fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut z = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vector::norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vector::norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= vnorm;
        }
        // H <- P H P, P = I - 2 v v^dagger on indices k+1..n.
        for j in k..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= 2.0 * vi * s;
            }
        }
        for mat in [&mut h, &mut z] {
            for r in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(i, vi)| mat[(r, k + 1 + i)] * vi).sum();
                for (i, vi) in v.iter().enumerate() {
                    mat[(r, k + 1 + i)] -= 2.0 * s * vi.conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, z)
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G (a, b)^T = (r, 0)^T`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b.norm() == 0.0 {
        return (1.0, ZERO);
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let r = a.norm().hypot(b.norm());
    (a.norm() / r, (a / a.norm()) * b.conj() / r)
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let mid = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    let mu1 = mid + disc;
    let mu2 = mid - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_iterate(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.dim();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mu = if iter.is_multiple_of(10) {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(h, hi)
        };

        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        rotations.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + c * y;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for r in 0..=(k + 1) {
                let x = h[(r, k)];
                let y = h[(r, k + 1)];
                h[(r, k)] = x * c + y * s.conj();
                h[(r, k + 1)] = -x * s + y * c;
            }
            for r in 0..n {
                let x = z[(r, k)];
                let y = z[(r, k + 1)];
                z[(r, k)] = x * c + y * s.conj();
                z[(r, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(())
}

/// Eigenvalues only, in canonical order. No diagonalizability requirement.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    Ok(Spectrum::new(schur(m)?.eigenvalues()))
}

/// Full eigendecomposition of a diagonalizable matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    /// Right eigenvectors as columns, canonical order.
    pub vectors: ComplexMatrix,
    /// `vectors^{-1}`; its rows are the dual (left) eigenvectors.
    pub inverse: ComplexMatrix,
    /// Spectral condition number of `vectors`.
    pub condition: f64,
}

/// Diagonalizes `m`; the eigenvector matrix is rejected as defective when its
/// 2-norm condition number exceeds `1 / tol`.
pub fn eig_decompose(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let s = schur(m)?;
    let values = s.eigenvalues();
    let order = canonical_order(&values);
    let columns: Vec<Vec<Complex64>> = order.iter().map(|&k| s.eigenvector(k)).collect();
    let vectors = ComplexMatrix::from_columns(&columns)?;
    let inverse = match invert(&vectors) {
        Ok(inv) => inv,
        Err(Error::Singular { .. }) => {
            return Err(Error::Defective {
                condition: f64::INFINITY,
            })
        }
        Err(e) => return Err(e),
    };
    let condition = spectral_norm(&vectors)? * spectral_norm(&inverse)?;
    if !condition.is_finite() || condition > 1.0 / tol {
        return Err(Error::Defective { condition });
    }
    Ok(EigenDecomposition {
        spectrum: Spectrum::new(values),
        vectors,
        inverse,
        condition,
    })
}

/// Spectrum and right eigenvectors (columns), canonical order.
pub fn eig_general(m: &ComplexMatrix, tol: f64) -> Result<(Spectrum, ComplexMatrix)> {
    let d = eig_decompose(m, tol)?;
    Ok((d.spectrum, d.vectors))
}

/// The `k` lowest eigenvalues (canonical order) with their right
/// eigenvectors, without touching the rest of the spectrum's eigenvectors.
pub fn lowest_eigenpairs(m: &ComplexMatrix, k: usize) -> Result<(Spectrum, Vec<Vec<Complex64>>)> {
    let s = schur(m)?;
    let values = s.eigenvalues();
    let order = canonical_order(&values);
    let picked: Vec<usize> = order.into_iter().take(k).collect();
    let spectrum = Spectrum::new(picked.iter().map(|&i| values[i]).collect());
    let vectors = picked.iter().map(|&i| s.eigenvector(i)).collect();
    Ok((spectrum, vectors))
}

/// Largest singular value, from the top eigenvalue of `M^dagger M`.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram.hermitian_part(), 1e-8)?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &ComplexMatrix, spectrum: &Spectrum, v: &ComplexMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, e) in spectrum.values().iter().enumerate() {
            let col = v.column(k);
            let mv = m.mul_vec(&col).unwrap();
            let r: f64 = mv.iter().zip(&col).map(|(a, b)| (a - e * b).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        worst / m.frobenius_norm()
    }

    #[test]
    fn identity() {
        let i = ComplexMatrix::identity(4);
        let (s, v) = eig_general(&i, 1e-10).unwrap();
        assert!(s.values().iter().all(|e| (e - 1.0).norm() < 1e-15));
        assert!(v.distance(&i) < 1e-15);
    }

    #[test]
    fn upper_triangular_two_by_two() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
        let (s, v) = eig_general(&m, 1e-10).unwrap();
        assert!((s.values()[0] - 1.0).norm() < 1e-15);
        assert!((s.values()[1] - 2.0).norm() < 1e-15);
        let r = 0.5f64.sqrt();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, r], &[0.0, r]]).unwrap();
        assert!(v.distance(&expected) < 1e-15, "{v:?}");
    }

    #[test]
    fn jordan_block_is_defective() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(eig_general(&m, 1e-10), Err(Error::Defective { .. })));
    }

    #[test]
    fn companion_with_complex_roots() {
        // x^3 - 1: cube roots of unity
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        let (s, v) = eig_general(&m, 1e-10).unwrap();
        let h = 0.75f64.sqrt();
        let expected = [
            Complex64::new(-0.5, -h),
            Complex64::new(-0.5, h),
            Complex64::new(1.0, 0.0),
        ];
        for (a, b) in s.values().iter().zip(expected) {
            assert!((a - b).norm() < 1e-14, "{a} vs {b}");
        }
        assert!(residual(&m, &s, &v) < 1e-14);
    }

    #[test]
    fn phase_convention() {
        let v = fix_phase(vec![Complex64::new(0.0, -2.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(v[0], Complex64::new(2.0, 0.0));
        assert!((v[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn lowest_pairs_match_full() {
        let m = ComplexMatrix::from_fn(6, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + j * j) % 3) as f64 - 1.0)
        });
        let (full_s, full_v) = eig_general(&m, 1e-10).unwrap();
        let (s, vs) = lowest_eigenpairs(&m, 3).unwrap();
        for (k, v) in vs.iter().enumerate() {
            assert!((s.values()[k] - full_s.values()[k]).norm() < 1e-12);
            let col = full_v.column(k);
            assert!(col.iter().zip(v).all(|(a, b)| (a - b).norm() < 1e-10));
        }
    }
}
