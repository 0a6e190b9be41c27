//! Dense matrices over arbitrary-precision rationals.
//!
//! Everything downstream — scheme validation, algebra closures, idempotent
//! certificates — is exact, so the base layer is a plain dense matrix of
//! `BigRational` entries with no floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text rendering `p/q` (denominator always present, always positive).
pub fn render_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Dense row-major matrix over `BigRational`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigRational::one(); rows * cols] }
    }

    /// Diagonal 0/1 indicator of a point set: entry `(i,i) = 1` iff `i ∈ points`.
    pub fn diagonal_indicator(n: usize, points: &[usize]) -> Self {
        let mut m = Self::zeros(n, n);
        for &p in points {
            m.set(p, p, BigRational::one());
        }
        m
    }

    /// 0/1 matrix with ones exactly on `rows_set × cols_set`.
    pub fn ones_block(n: usize, rows_set: &[usize], cols_set: &[usize]) -> Self {
        let mut m = Self::zeros(n, n);
        for &i in rows_set {
            for &j in cols_set {
                m.set(i, j, BigRational::one());
            }
        }
        m
    }

    /// Test helper: build from integer rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| rat(v)));
        }
        Self { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// Row-major flattening, cloned. The vector form used by span arithmetic.
    pub fn to_vec(&self) -> Vec<BigRational> {
        self.entries.clone()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn trace(&self) -> BigRational {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let entries = self.entries.iter().map(|e| e * c).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// Matrix product. Skips zero entries of the left factor, which is most of
    /// them for the 0/1 adjacency and indicator matrices this library lives on.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Embeds a small matrix indexed by `points` (in the given order) into an
    /// `n×n` matrix that is zero elsewhere.
    pub fn embed(n: usize, points: &[usize], small: &Self) -> Self {
        assert_eq!(small.rows, points.len());
        assert_eq!(small.cols, points.len());
        let mut out = Self::zeros(n, n);
        for (a, &p) in points.iter().enumerate() {
            for (b, &q) in points.iter().enumerate() {
                out.set(p, q, small.get(a, b).clone());
            }
        }
        out
    }

    /// Extracts the submatrix on `points × points` (in the given order).
    pub fn restrict(&self, points: &[usize]) -> Self {
        let k = points.len();
        let mut out = Self::zeros(k, k);
        for (a, &p) in points.iter().enumerate() {
            for (b, &q) in points.iter().enumerate() {
                out.set(a, b, self.get(p, q).clone());
            }
        }
        out
    }

    /// Largest absolute value of any entry, as f64 (used for scaling numeric
    /// tolerances; exactness is not needed here).
    pub fn sup_norm_f64(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| rational_to_f64(e).abs())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product: `(A ⊗ B)[(i·rB + k), (j·cB + l)] = A[i,j]·B[k,l]`.
pub fn kron(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let v = aij * b.get(k, l);
                    if !v.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, v);
                    }
                }
            }
        }
    }
    out
}

/// Lossy conversion for numeric oracles and tolerance scaling.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_multiplication_is_neutral() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let i = RationalMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
    }

    #[test]
    fn kron_of_identity_and_ones() {
        // I₂ ⊗ J₂ is block diagonal with two J₂ blocks.
        let got = kron(&RationalMatrix::identity(2), &RationalMatrix::ones(2, 2));
        let want = RationalMatrix::from_i64_rows(&[
            &[1, 1, 0, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
            &[0, 0, 1, 1],
        ]);
        assert_eq!(got, want);

        // J₂ ⊗ I₂ spreads identity blocks everywhere.
        let got = kron(&RationalMatrix::ones(2, 2), &RationalMatrix::identity(2));
        let want = RationalMatrix::from_i64_rows(&[
            &[1, 0, 1, 0],
            &[0, 1, 0, 1],
            &[1, 0, 1, 0],
            &[0, 1, 0, 1],
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn embed_restrict_round_trip() {
        let small = RationalMatrix::from_i64_rows(&[&[5, 6], &[7, 8]]);
        let big = RationalMatrix::embed(4, &[1, 3], &small);
        assert_eq!(big.restrict(&[1, 3]), small);
        assert!(big.get(0, 0).is_zero());
        assert_eq!(big.get(1, 3), &rat(6));
    }

    #[test]
    fn trace_and_transpose() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.trace(), rat(5));
        assert_eq!(a.transpose().get(0, 1), &rat(3));
    }
}
