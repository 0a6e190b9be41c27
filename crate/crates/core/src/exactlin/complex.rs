//! Complex floating-point matrices for the numeric cross-checks.
//!
//! These never feed back into exact results except through explicit rational
//! reconstruction, which re-certifies everything exactly afterwards.

use num_complex::Complex64;

use super::matrix::{rational_to_f64, RationalMatrix};

/// Dense row-major complex matrix.
#[derive(Clone, Debug)]
pub struct ComplexMatrixF {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrixF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rational(m: &RationalMatrix) -> Self {
        let entries = m
            .entries()
            .iter()
            .map(|e| Complex64::new(rational_to_f64(e), 0.0))
            .collect();
        Self { rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self.entries.iter().map(|e| e * c).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise absolute value.
    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to another matrix.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M² − M‖∞` — how far from idempotent.
    pub fn idempotency_defect(&self) -> f64 {
        self.mul(self).sup_distance(self)
    }

    /// Kronecker product, row-major convention: entry
    /// `((i·p+k), (j·q+l)) = self[i,j]·other[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Places `small` into an n×n zero matrix at the rows/columns listed in
    /// `points` (which must have `small`'s size).
    pub fn embed(n: usize, points: &[usize], small: &Self) -> Self {
        assert_eq!(points.len(), small.rows());
        assert_eq!(points.len(), small.cols());
        let mut out = Self::zeros(n, n);
        for (a, &pa) in points.iter().enumerate() {
            for (b, &pb) in points.iter().enumerate() {
                out.set(pa, pb, small.get(a, b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_and_arithmetic_agree_with_exact() {
        let half_j = RationalMatrix::ones(2, 2).scale(&crate::exactlin::matrix::ratio(1, 2));
        let c = ComplexMatrixF::from_rational(&half_j);
        // (J/2)² = J/2, so the defect vanishes.
        assert!(c.idempotency_defect() < 1e-15);
        assert!((c.trace().re - 1.0).abs() < 1e-15);
    }
}
