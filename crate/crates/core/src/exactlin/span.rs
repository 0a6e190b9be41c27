//! Exact row reduction and incremental span tracking.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use crate::error::{Error, Result};

/// Reduced row echelon form with the pivot chosen as the first nonzero entry
/// of the working column. Fully deterministic: the same input always yields
/// the same output.
///
/// Returns the reduced matrix together with the pivot column indices in order.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let tmp = a.get(r, j).clone();
                a.set(r, j, a.get(pr, j).clone());
                a.set(pr, j, tmp);
            }
        }
        let inv = a.get(r, c).clone().recip();
        for j in 0..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in 0..cols {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank of a matrix via `rref`.
pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// An incrementally maintained echelon basis for a subspace of `Q^len`.
///
/// Rows are kept in reduced echelon form. Alongside each row the struct tracks
/// how that row is expressed in the *accepted* inserted vectors, so that
/// membership queries can hand back exact coordinates over the original
/// insertion sequence.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    len: usize,
    rows: Vec<Vec<BigRational>>,
    /// Pivot column of `rows[i]`.
    pivots: Vec<usize>,
    /// `exprs[i]` expresses `rows[i]` over the accepted inserted vectors.
    exprs: Vec<Vec<BigRational>>,
    accepted: usize,
}

impl SpanBasis {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new(), pivots: Vec::new(), exprs: Vec::new(), accepted: 0 }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// Reduces `v` against the current rows. Returns the residual and the
    /// coefficients (over accepted insertions) of the subtracted combination.
    fn reduce(&self, mut v: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut combo = vec![BigRational::zero(); self.accepted];
        for (row, (pivot, expr)) in self
            .rows
            .iter()
            .zip(self.pivots.iter().zip(self.exprs.iter()))
        {
            let f = v[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row.iter()) {
                if !ri.is_zero() {
                    *vi -= &f * ri;
                }
            }
            for (ci, ei) in combo.iter_mut().zip(expr.iter()) {
                if !ei.is_zero() {
                    *ci += &f * ei;
                }
            }
        }
        (v, combo)
    }

    /// Inserts a vector. Returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: Vec<BigRational>) -> bool {
        assert_eq!(v.len(), self.len, "span vector length mismatch");
        let (mut res, combo) = self.reduce(v);
        let Some(pivot) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        // Normalize the residual to a leading 1 and record its expression:
        // the fresh vector minus the combination that was subtracted.
        let lead = res[pivot].clone();
        let inv = lead.recip();
        for x in res.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let mut expr = vec![BigRational::zero(); self.accepted + 1];
        for (e, c) in expr.iter_mut().zip(combo.iter()) {
            *e = -(c * &inv);
        }
        expr[self.accepted] = inv;
        for old in self.exprs.iter_mut() {
            old.push(BigRational::zero());
        }
        // Back-substitute into existing rows to keep the basis fully reduced.
        for i in 0..self.rows.len() {
            let f = self.rows[i][pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (r, n) in self.rows[i].iter_mut().zip(res.iter()) {
                if !n.is_zero() {
                    *r -= &f * n;
                }
            }
            for (r, n) in self.exprs[i].iter_mut().zip(expr.iter()) {
                if !n.is_zero() {
                    *r -= &f * n;
                }
            }
        }
        // Keep rows ordered by pivot column for determinism.
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.rows.insert(at, res);
        self.pivots.insert(at, pivot);
        self.exprs.insert(at, expr);
        self.accepted += 1;
        true
    }

    /// Exact coordinates of `v` over the accepted insertion sequence, or
    /// `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.len, "span vector length mismatch");
        let (res, combo) = self.reduce(v.to_vec());
        if res.iter().all(|x| x.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Does `m` lie in the linear span of `basis`? On success returns exact
/// coordinates, one per basis entry (zero at entries that were linearly
/// dependent on earlier ones).
///
/// All matrices must share the same shape.
pub fn span_contains(basis: &[RationalMatrix], m: &RationalMatrix) -> Result<Option<Vec<BigRational>>> {
    let (r, c) = (m.rows(), m.cols());
    let mut span = SpanBasis::new(r * c);
    // Track which basis entries were accepted so coordinates can be scattered
    // back over the full input list.
    let mut accepted_idx = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        if (b.rows(), b.cols()) != (r, c) {
            return Err(Error::DimensionMismatch(format!(
                "basis element {} is {}x{}, expected {}x{}",
                i,
                b.rows(),
                b.cols(),
                r,
                c
            )));
        }
        if span.insert(b.to_vec()) {
            accepted_idx.push(i);
        }
    }
    Ok(span.coordinates(&m.to_vec()).map(|coords| {
        let mut full = vec![BigRational::zero(); basis.len()];
        for (slot, coeff) in accepted_idx.iter().zip(coords) {
            full[*slot] = coeff;
        }
        full
    }))
}

/// Exact basis of `{Z ∈ span(space) : Z·G = G·Z for every generator G}`.
///
/// Unknowns are the coordinates of `Z` over `space`; each generator
/// contributes the linear constraint `vec([space_i, G])·c = 0`. The null
/// space is read off the RREF with the usual free-variable convention, so the
/// result is deterministic.
pub fn solve_commutant(
    generators: &[RationalMatrix],
    space: &[RationalMatrix],
) -> Result<Vec<RationalMatrix>> {
    if space.is_empty() {
        return Ok(Vec::new());
    }
    let (n, m) = (space[0].rows(), space[0].cols());
    if n != m {
        return Err(Error::DimensionMismatch("commutant needs square matrices".into()));
    }
    for b in space.iter().chain(generators.iter()) {
        if (b.rows(), b.cols()) != (n, n) {
            return Err(Error::DimensionMismatch(
                "commutant generators and space must share one square shape".into(),
            ));
        }
    }
    let d = space.len();
    // Constraint matrix: one block of n² rows per generator, one column per
    // space coordinate.
    let mut constraints = RationalMatrix::zeros(generators.len() * n * n, d);
    for (gi, g) in generators.iter().enumerate() {
        for (i, b) in space.iter().enumerate() {
            let comm = b.commutator(g);
            for (row, v) in comm.entries().iter().enumerate() {
                if !v.is_zero() {
                    constraints.set(gi * n * n + row, i, v.clone());
                }
            }
        }
    }
    let (reduced, pivots) = rref(&constraints);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in 0..d {
        if pivot_set.contains(&free) {
            continue;
        }
        // Null vector with 1 at the free column, back-solved on the pivots.
        let mut coeff = vec![BigRational::zero(); d];
        coeff[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            coeff[pc] = -reduced.get(row, free).clone();
        }
        let mut z = RationalMatrix::zeros(n, n);
        for (c, b) in coeff.iter().zip(space.iter()) {
            if !c.is_zero() {
                z = z.add(&b.scale(c));
            }
        }
        out.push(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::rat;

    #[test]
    fn rref_collapses_dependent_rows() {
        let m = RationalMatrix::from_i64_rows(&[&[2, 4], &[1, 2]]);
        let (r, pivots) = rref(&m);
        assert_eq!(r, RationalMatrix::from_i64_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let (r, pivots) = rref(&RationalMatrix::identity(3));
        assert_eq!(r, RationalMatrix::identity(3));
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_of_zero_has_no_pivots() {
        let (r, pivots) = rref(&RationalMatrix::zeros(2, 2));
        assert!(r.is_zero());
        assert!(pivots.is_empty());
    }

    #[test]
    fn span_membership_with_coordinates() {
        let i = RationalMatrix::identity(2);
        let j = RationalMatrix::ones(2, 2);
        let m = j.sub(&i); // J - I = (-1)·I + 1·J
        let coords = span_contains(&[i.clone(), j.clone()], &m).unwrap().unwrap();
        assert_eq!(coords, vec![rat(-1), rat(1)]);
        assert!(span_contains(&[i], &j).unwrap().is_none());
    }

    #[test]
    fn empty_basis_spans_only_zero() {
        let z = RationalMatrix::zeros(2, 2);
        assert_eq!(span_contains(&[], &z).unwrap(), Some(vec![]));
        assert!(span_contains(&[], &RationalMatrix::identity(2)).unwrap().is_none());
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let gens = [RationalMatrix::identity(2)];
        let full: Vec<RationalMatrix> = (0..4)
            .map(|k| {
                let mut m = RationalMatrix::zeros(2, 2);
                m.set(k / 2, k % 2, rat(1));
                m
            })
            .collect();
        assert_eq!(solve_commutant(&gens, &full).unwrap().len(), 4);
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalars() {
        let full: Vec<RationalMatrix> = (0..4)
            .map(|k| {
                let mut m = RationalMatrix::zeros(2, 2);
                m.set(k / 2, k % 2, rat(1));
                m
            })
            .collect();
        let z = solve_commutant(&full, &full).unwrap();
        assert_eq!(z.len(), 1);
        // The single solution is a scalar matrix.
        let s = &z[0];
        assert_eq!(s.get(0, 0), s.get(1, 1));
        assert!(s.get(0, 1).is_zero() && s.get(1, 0).is_zero());
    }

    /// Oracle frozen from the hand-solved 4x4 linear system: commuting with
    /// diag(1,2) forces the off-diagonal entries to vanish, so the commutant
    /// inside Mat₂ is exactly the diagonal plane.
    #[test]
    fn commutant_of_distinct_diagonal_is_diagonal_matrices() {
        let mut d = RationalMatrix::zeros(2, 2);
        d.set(0, 0, rat(1));
        d.set(1, 1, rat(2));
        let full: Vec<RationalMatrix> = (0..4)
            .map(|k| {
                let mut m = RationalMatrix::zeros(2, 2);
                m.set(k / 2, k % 2, rat(1));
                m
            })
            .collect();
        let z = solve_commutant(&[d], &full).unwrap();
        assert_eq!(z.len(), 2);
        for m in &z {
            assert!(m.get(0, 1).is_zero());
            assert!(m.get(1, 0).is_zero());
        }
        // The two solutions span both diagonal directions.
        let e00 = RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
        let e11 = RationalMatrix::from_i64_rows(&[&[0, 0], &[0, 1]]);
        assert!(span_contains(&z, &e00).unwrap().is_some());
        assert!(span_contains(&z, &e11).unwrap().is_some());
    }
}
