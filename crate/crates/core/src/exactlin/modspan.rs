//! Row spans over the prime field of order 2⁶¹−1, used as a certified
//! one-sided bound on rational rank.
//!
//! Reduction modulo a prime is a ring homomorphism, so vectors that are
//! independent mod p are independent over ℚ, and the rank of any integer
//! matrix mod p never exceeds its rational rank. Both facts are used as
//! rigorous inequalities: a mod-p computation can certify "rank at least r"
//! and "null space at most k", never the reverse. Callers that need the
//! opposite bound exhibit explicit rational witnesses instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// The Mersenne prime 2⁶¹−1. Large enough that accidental rank collapse is
/// never observed in practice, small enough for u128 products.
pub const MODULUS: u64 = (1 << 61) - 1;

pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

/// Inverse by Fermat's little theorem. Zero has no inverse; callers pivot on
/// nonzero entries only.
pub fn inv_mod(a: u64) -> u64 {
    debug_assert!(a % MODULUS != 0);
    let mut base = a % MODULUS;
    let mut exp = MODULUS - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Residue of a signed integer.
pub fn residue_i64(x: i64) -> u64 {
    let r = (x % MODULUS as i64).unsigned_abs();
    if x < 0 && r != 0 {
        MODULUS - r
    } else {
        r
    }
}

/// Residue of a rational, when its denominator is a unit mod p (it always
/// is for the denominators arising here, which are far below 2⁶¹−1).
pub fn residue_rational(x: &BigRational) -> Option<u64> {
    let p = BigInt::from(MODULUS);
    let num = x.numer() % &p;
    let den = x.denom() % &p;
    if den.is_zero() {
        return None;
    }
    let lift = |v: BigInt| -> u64 {
        let m = if v.is_negative() { v + &p } else { v };
        m.to_u64().expect("reduced residue fits in u64")
    };
    Some(mul_mod(lift(num), inv_mod(lift(den))))
}

/// A growing row space in reduced echelon form over the field of order
/// 2⁶¹−1. Rows are kept fully reduced: each pivot column holds a leading 1
/// and is zero in every other row, which makes null-space extraction a
/// direct read-off.
#[derive(Debug, Clone)]
pub struct ModSpan {
    len: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModSpan {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the span and absorbs what remains. Returns true
    /// when the vector was independent (the span grew).
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[pc];
            if c != 0 {
                for (vi, ri) in v.iter_mut().zip(row.iter()) {
                    *vi = sub_mod(*vi, mul_mod(c, *ri));
                }
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pivot]);
        for vi in v.iter_mut() {
            *vi = mul_mod(*vi, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (ri, vi) in row.iter_mut().zip(v.iter()) {
                    *ri = sub_mod(*ri, mul_mod(c, *vi));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        true
    }

    /// Basis of `{u : M u = 0}` where `M` has the span's rows: one vector
    /// per free column, with a 1 in that column (the usual convention).
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let pivot_set: std::collections::BTreeSet<usize> = self.pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.len {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.len];
            v[free] = 1;
            for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
                v[pc] = sub_mod(0, row[free]);
            }
            out.push(v);
        }
        out
    }
}

/// Recovers the unique rational `n/d` with `|n|, d < √(p/2)` whose residue
/// is `r`, if one exists, by the half-extended Euclidean walk. The result is
/// a candidate: callers must verify whatever exact property they need.
pub fn rational_from_residue(r: u64) -> Option<BigRational> {
    let bound = 1_518_500_249i128; // ⌊√(2⁶¹−1)⌋; numerator/denominator cap
    let (mut r0, mut r1) = (MODULUS as i128, r as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() >= bound {
        return None;
    }
    let (num, den) = if s1 < 0 { (-r1, -s1) } else { (r1, s1) };
    let candidate = BigRational::new(BigInt::from(num), BigInt::from(den));
    (residue_rational(&candidate) == Some(r)).then_some(candidate)
}
