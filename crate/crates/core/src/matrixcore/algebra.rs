use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Default cap on the number of nested commutators in [`bch_transform`].
pub const DEFAULT_BCH_CAP: usize = 32;

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(&(a * b) + &(b * a))
}

/// Partial sum of `e^{G/2} H e^{-G/2} = sum_k ad_G^k(H) / (k! 2^k)` keeping
/// `order` nested commutators.
pub fn bch_transform(h: &ComplexMatrix, g: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    bch_transform_capped(h, g, order, DEFAULT_BCH_CAP)
}

pub fn bch_transform_capped(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    order: usize,
    cap: usize,
) -> Result<ComplexMatrix> {
    h.check_dim(g)?;
    if order > cap {
        return Err(Error::OrderCap { order, cap });
    }
    let mut sum = h.clone();
    let mut term = h.clone();
    for k in 1..=order {
        term = commutator(g, &term)?.scale_real(1.0 / (2.0 * k as f64));
        sum = &sum + &term;
    }
    Ok(sum)
}

/// Sums the series until a term's Frobenius norm drops below
/// `threshold * ||H||`. Returns the sum and the number of commutators used.
pub fn bch_transform_converged(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    threshold: f64,
    cap: usize,
) -> Result<(ComplexMatrix, usize)> {
    h.check_dim(g)?;
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut sum = h.clone();
    let mut term = h.clone();
    for k in 1..=cap {
        term = commutator(g, &term)?.scale_real(1.0 / (2.0 * k as f64));
        sum = &sum + &term;
        if term.frobenius_norm() < threshold * scale {
            return Ok((sum, k));
        }
    }
    Err(Error::OrderCap { order: cap + 1, cap })
}
