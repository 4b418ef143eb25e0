//! Ket and bra helpers over plain `Complex64` slices.

use num_complex::Complex64;

/// `<a|b>` with the conjugate on the left argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = norm(v);
    v.iter().map(|z| z / n).collect()
}

pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Canonical basis vector `e_k` of length `dim`.
pub fn basis(dim: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Dual vector `<phi|`, stored by its row coefficients so that pairing
/// with a ket is a plain (unconjugated) contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Bra(pub Vec<Complex64>);

impl Bra {
    /// The bra `<v|` of a ket `|v>`.
    pub fn from_ket(v: &[Complex64]) -> Self {
        Bra(v.iter().map(|z| z.conj()).collect())
    }

    /// The ket `|v>` whose bra this is.
    pub fn to_ket(&self) -> Vec<Complex64> {
        self.0.iter().map(|z| z.conj()).collect()
    }

    pub fn pair(&self, ket: &[Complex64]) -> Complex64 {
        self.0.iter().zip(ket).map(|(a, b)| a * b).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
