use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U` packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    packed: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = f64::EPSILON * n as f64 * a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold {
                return Err(Error::Singular { pivot });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let inv_pivot = lu[(k, k)].inv();
            for i in k + 1..n {
                let factor = lu[(i, k)] * inv_pivot;
                lu[(i, k)] = factor;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { packed: lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.packed.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.packed.row(i)[..i];
            let s = x[i] - row.iter().zip(&x[..i]).map(|(a, b)| a * b).sum::<Complex64>();
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = &self.packed.row(i)[i + 1..];
            let s = x[i] - row.iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum::<Complex64>();
            x[i] = s / self.packed[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.packed.dim();
        let columns: Vec<Vec<Complex64>> = (0..n)
            .map(|j| self.solve(&super::vector::basis(n, j)))
            .collect();
        ComplexMatrix::from_fn(n, |i, j| columns[j][i])
    }
}

/// Inverse via partial-pivot LU.
pub fn invert(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::factor(m)?.inverse())
}

/// Solves `A X = B` for square `B`.
pub fn solve_matrix(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    let lu = Lu::factor(a)?;
    let n = a.dim();
    let columns: Vec<Vec<Complex64>> = (0..n).map(|j| lu.solve(&b.column(j))).collect();
    Ok(ComplexMatrix::from_fn(n, |i, j| columns[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverts_to_identity() {
        let i = ComplexMatrix::identity(4);
        assert_eq!(invert(&i).unwrap(), i);
    }

    #[test]
    fn upper_triangular_closed_form() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, -0.5], &[0.0, 0.5]]).unwrap();
        assert!(invert(&m).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn diagonal_inverse() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, 4.0]);
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.25]);
        assert_eq!(invert(&m).unwrap(), expected);
    }

    #[test]
    fn singular_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(invert(&m), Err(Error::Singular { .. })));
    }

    #[test]
    fn complex_inverse_residual() {
        let m = ComplexMatrix::from_fn(5, |i, j| {
            Complex64::new((i * 3 + j) as f64 % 7.0 - 3.0, (i + 2 * j) as f64 % 5.0 - 2.0)
        })
        .shift(Complex64::new(4.0, 1.0));
        let inv = invert(&m).unwrap();
        let residual = (&(&m * &inv) - &ComplexMatrix::identity(5)).max_abs();
        assert!(residual < 1e-12, "{residual}");
    }
}
