use num_complex::Complex64;

/// Eigenvalues in canonical order: ascending real part, near-ties broken by
/// ascending imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
}

/// Real parts closer than this (relative to the spectral scale) count as tied.
const TIE_TOL: f64 = 1e-12;

impl Spectrum {
    pub fn new(values: Vec<Complex64>) -> Self {
        let order = canonical_order(&values);
        Self {
            values: order.into_iter().map(|i| values[i]).collect(),
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `k` lowest levels (all of them if `k` exceeds the length).
    pub fn lowest(&self, k: usize) -> Spectrum {
        Spectrum {
            values: self.values[..k.min(self.values.len())].to_vec(),
        }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest pairwise distance between eigenvalues; infinite for a single level.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in self.values.iter().enumerate() {
            for b in &self.values[i + 1..] {
                gap = gap.min((a - b).norm());
            }
        }
        gap
    }

    /// Largest `|E_a - E_b|` over levels paired by canonical index, compared
    /// on the common prefix.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Permutation that puts `values` into canonical order.
pub fn canonical_order(values: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
    });
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = TIE_TOL * scale;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]].re - values[idx[start]].re <= tol {
            end += 1;
        }
        idx[start..end].sort_by(|&a, &b| values[a].im.total_cmp(&values[b].im));
        start = end;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_by_real_then_imag() {
        let s = Spectrum::new(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.5),
            Complex64::new(1.0, -0.5),
            Complex64::new(-3.0, 1.0),
        ]);
        let re: Vec<_> = s.values().iter().map(|z| (z.re, z.im)).collect();
        assert_eq!(re, vec![(-3.0, 1.0), (1.0, -0.5), (1.0, 0.5), (2.0, 0.0)]);
    }

    #[test]
    fn rounding_level_ties_sort_by_imag() {
        let s = Spectrum::new(vec![
            Complex64::new(1.0 + 1e-15, -2.0),
            Complex64::new(1.0, 2.0),
        ]);
        assert_eq!(s.values()[0].im, -2.0);
    }

    #[test]
    fn gap_and_lowest() {
        let s = Spectrum::from_real(&[3.0, 1.0, 1.5]);
        assert_eq!(s.min_gap(), 0.5);
        assert_eq!(s.lowest(2).real_parts(), vec![1.0, 1.5]);
        assert_eq!(Spectrum::from_real(&[1.0]).min_gap(), f64::INFINITY);
    }
}
