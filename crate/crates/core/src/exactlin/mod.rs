//! Exact dense linear algebra over the rationals, plus the small complex
//! floating-point layer used by numeric cross-checks.
//!
//! Determinism is part of the contract here: row reduction always pivots on
//! the first nonzero entry, and null-space bases follow the standard
//! free-variable convention, so every caller sees reproducible output.

mod complex;
mod matrix;
mod modspan;
mod span;

pub use complex::ComplexMatrixF;
pub use matrix::{kron, rat, ratio, rational_to_f64, render_rational, RationalMatrix};
pub use modspan::{
    add_mod, inv_mod, mul_mod, rational_from_residue, residue_i64, residue_rational, sub_mod,
    ModSpan, MODULUS,
};
pub use span::{rank, rref, solve_commutant, span_contains, SpanBasis};

#[cfg(test)]
mod proptests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |cells| {
                let entries: Vec<BigRational> = cells.iter().map(|&(n, d)| ratio(n, d)).collect();
                RationalMatrix::new(r, c, entries).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r1, p1) = rref(&m);
            let (r2, p2) = rref(&r1);
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }

        #[test]
        fn row_rank_equals_column_rank(m in small_matrix()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn span_coordinates_reconstruct_exactly(
            ms in proptest::collection::vec(small_matrix(), 1..4),
            coeffs in proptest::collection::vec((-3i64..4, 1i64..3), 1..4),
        ) {
            // Force one shared shape.
            let (r, c) = (ms[0].rows(), ms[0].cols());
            let basis: Vec<RationalMatrix> = ms
                .iter()
                .map(|m| {
                    let mut out = RationalMatrix::zeros(r, c);
                    for i in 0..r.min(m.rows()) {
                        for j in 0..c.min(m.cols()) {
                            out.set(i, j, m.get(i, j).clone());
                        }
                    }
                    out
                })
                .collect();
            let mut target = RationalMatrix::zeros(r, c);
            for (m, &(n, d)) in basis.iter().zip(coeffs.iter()) {
                target = target.add(&m.scale(&ratio(n, d)));
            }
            let coords = span_contains(&basis, &target).unwrap();
            prop_assert!(coords.is_some());
            let coords = coords.unwrap();
            let mut rebuilt = RationalMatrix::zeros(r, c);
            for (m, coeff) in basis.iter().zip(coords.iter()) {
                rebuilt = rebuilt.add(&m.scale(coeff));
            }
            prop_assert_eq!(rebuilt, target);
        }

        /// Associativity of the Kronecker product, checked against direct
        /// expansion from the index formula rather than against itself.
        #[test]
        fn kron_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
            let left = kron(&kron(&a, &b), &c);
            let right = kron(&a, &kron(&b, &c));
            prop_assert_eq!(&left, &right);
            // Direct expansion oracle.
            let (rb, cb, rc, cc) = (b.rows(), b.cols(), c.rows(), c.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    for k in 0..rb {
                        for l in 0..cb {
                            for p in 0..rc {
                                for q in 0..cc {
                                    let want = a.get(i, j) * b.get(k, l) * c.get(p, q);
                                    let got = left.get((i * rb + k) * rc + p, (j * cb + l) * cc + q);
                                    prop_assert_eq!(got, &want);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
