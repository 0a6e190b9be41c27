//! Centers and central primitive idempotents of semisimple matrix algebras:
//! exact certification over the rationals, plus an independent numeric
//! spectral oracle used to cross-check completeness counts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closure::AlgebraBasis;
use crate::error::{Error, Result};
use crate::exactlin::{
    add_mod, mul_mod, rational_from_residue, rational_to_f64, ratio, residue_i64, solve_commutant,
    sub_mod, ComplexMatrixF, ModSpan, RationalMatrix, SpanBasis,
};
use crate::schemes::CoherentConfiguration;

/// Threshold below which a numeric entry is considered an artifact of
/// floating-point arithmetic rather than a value.
const NUMERIC_NOISE: f64 = 1e-9;
/// How far apart eigenvalue clusters must sit, in units of the grouping
/// tolerance, before spectral projectors are trusted.
const SEPARATION_FACTOR: f64 = 10.0;
const ORACLE_RETRIES: usize = 8;
const ORACLE_SEED: u64 = 0x5eed_c0_c0;
/// Largest matrix size at which primitivity of exact partition members is
/// certified through corner centers, member by member. Above it, the
/// counting argument takes over.
pub(crate) const CORNER_LIMIT: usize = 16;
/// Magnitude cap for the scaled-integer coordinate arithmetic; anything
/// bigger abandons the shortcut rather than risking overflow.
const COORD_LIMIT: i128 = 1 << 40;

/// Exact basis of the center of an [`AlgebraBasis`]. Its dimension counts
/// the simple components of the complexified algebra.
#[derive(Debug, Clone)]
pub struct CenterBasis {
    elements: Vec<RationalMatrix>,
}

impl CenterBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RationalMatrix] {
        &self.elements
    }
}

/// Exact center `{Z ∈ span(A) : ZB = BZ for all B ∈ A}`. Commuting with the
/// generators suffices, since every element of `A` is a sum of products of
/// generators.
///
/// When the algebra carries its coherent structure, the commutator system is
/// solved in coordinates over the configuration's colors with modular
/// elimination, and the result is lifted and re-verified exactly; see
/// [`coherent_center`]. Otherwise (or if that certificate does not close)
/// the commutant is computed by exact row reduction.
pub fn center(a: &AlgebraBasis) -> Result<CenterBasis> {
    if let Some(elements) = coherent_center(a) {
        return Ok(CenterBasis { elements });
    }
    let elements = solve_commutant(a.generators(), a.elements())?;
    Ok(CenterBasis { elements })
}

/// Entry of `m` on each color class of `ext`, when `m` is constant on every
/// class — exactly the membership condition for the adjacency algebra.
fn class_coordinates(ext: &CoherentConfiguration, m: &RationalMatrix) -> Option<Vec<BigRational>> {
    let n = ext.order();
    if m.rows() != n || m.cols() != n {
        return None;
    }
    let mut coords: Vec<Option<&BigRational>> = vec![None; ext.rank()];
    for (i, &e) in ext.colors().iter().enumerate() {
        let v = m.get(i / n, i % n);
        match coords[e as usize] {
            None => coords[e as usize] = Some(v),
            Some(c) if c == v => {}
            Some(_) => return None,
        }
    }
    coords
        .into_iter()
        .map(|c| c.cloned())
        .collect::<Option<Vec<_>>>()
}

fn integer_class_coordinates(ext: &CoherentConfiguration, m: &RationalMatrix) -> Option<Vec<i64>> {
    class_coordinates(ext, m)?
        .iter()
        .map(|c| c.is_integer().then(|| c.numer().to_i64()).flatten())
        .collect()
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Clears denominators: returns `(L·z, L)` with `L` the least common
/// denominator, provided everything stays below [`COORD_LIMIT`].
fn scaled_integer_coords(coords: &[BigRational]) -> Option<(Vec<i128>, i128)> {
    let mut lcm: i128 = 1;
    for c in coords {
        let den = c.denom().to_i128()?;
        lcm = lcm / gcd_i128(lcm, den) * den;
        if lcm > COORD_LIMIT {
            return None;
        }
    }
    let scaled = coords
        .iter()
        .map(|c| {
            let num = c.numer().to_i128()?;
            let den = c.denom().to_i128()?;
            let v = num * (lcm / den);
            (v.abs() <= COORD_LIMIT).then_some(v)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((scaled, lcm))
}

/// `u·v` in coordinates over the configuration's colors, through the
/// intersection numbers: `(u·v)_e = Σ_{c,d} u_c v_d p_{cd}^e`.
fn coord_product_i128(
    table: &[Vec<(u32, u32)>],
    rank: usize,
    u: &[i128],
    v: &[i128],
) -> Vec<i128> {
    let mut out = vec![0i128; rank];
    for (c, &uc) in u.iter().enumerate() {
        if uc == 0 {
            continue;
        }
        for (d, &vd) in v.iter().enumerate() {
            if vd == 0 {
                continue;
            }
            let w = uc * vd;
            for &(e, p) in &table[c * rank + d] {
                out[e as usize] += w * p as i128;
            }
        }
    }
    out
}

/// Whether `[z, g] = 0`, computed exactly in coordinates.
fn coord_commutes(table: &[Vec<(u32, u32)>], rank: usize, z: &[i128], g: &[i64]) -> bool {
    let mut acc = vec![0i128; rank];
    for (c, &zc) in z.iter().enumerate() {
        if zc == 0 {
            continue;
        }
        for (d, &gd) in g.iter().enumerate() {
            if gd == 0 {
                continue;
            }
            let w = zc * gd as i128;
            for &(e, p) in &table[c * rank + d] {
                acc[e as usize] += w * p as i128;
            }
            for &(e, p) in &table[d * rank + c] {
                acc[e as usize] -= w * p as i128;
            }
        }
    }
    acc.iter().all(|&v| v == 0)
}

/// Certified center basis through the coherent structure, or `None` when
/// any step of the certificate fails (the caller then falls back to plain
/// exact elimination).
///
/// The commutator constraints `[Z, g] = 0` have integer coefficients built
/// from the intersection numbers, so the rank of the system modulo a prime
/// is at most its rational rank, and the rational null space — the center in
/// coordinates — has dimension at most the modular nullity. Every modular
/// null vector is lifted to a small rational candidate and re-verified with
/// exact integer arithmetic. When all of them verify, as many independent
/// exact center elements have been exhibited as the nullity allows, and the
/// two bounds pinch: the lifts are a basis.
fn coherent_center(a: &AlgebraBasis) -> Option<Vec<RationalMatrix>> {
    let ext = a.coherent_structure()?;
    let rank = ext.rank();
    let gens: Vec<Vec<i64>> = a
        .generators()
        .iter()
        .map(|g| integer_class_coordinates(ext, g))
        .collect::<Option<_>>()?;
    let table = ext.product_support();

    let mut span = ModSpan::new(rank);
    for g in &gens {
        let mut rows = vec![0u64; rank * rank];
        for (d, &gd) in g.iter().enumerate() {
            if gd == 0 {
                continue;
            }
            let gd = residue_i64(gd);
            for c in 0..rank {
                for &(e, p) in &table[c * rank + d] {
                    let cell = &mut rows[e as usize * rank + c];
                    *cell = add_mod(*cell, mul_mod(gd, p as u64));
                }
                for &(e, p) in &table[d * rank + c] {
                    let cell = &mut rows[e as usize * rank + c];
                    *cell = sub_mod(*cell, mul_mod(gd, p as u64));
                }
            }
        }
        for e in 0..rank {
            let row = &rows[e * rank..(e + 1) * rank];
            if row.iter().any(|&v| v != 0) {
                span.insert(row.to_vec());
            }
        }
        // A few generators usually pin the null space down to the true
        // center already. When every null vector lifts to a verified central
        // element the squeeze argument closes regardless of the rows still
        // unprocessed, so the remaining eliminations can be skipped.
        if let Some(elements) = lift_center_candidates(ext, &span, &gens, &table) {
            return Some(elements);
        }
    }
    None
}

fn lift_center_candidates(
    ext: &CoherentConfiguration,
    span: &ModSpan,
    gens: &[Vec<i64>],
    table: &[Vec<(u32, u32)>],
) -> Option<Vec<RationalMatrix>> {
    let rank = ext.rank();
    let n = ext.order();
    let mut elements = Vec::new();
    for v in span.null_space() {
        let coords: Vec<BigRational> = v
            .into_iter()
            .map(rational_from_residue)
            .collect::<Option<_>>()?;
        let (scaled, _) = scaled_integer_coords(&coords)?;
        if !gens.iter().all(|g| coord_commutes(table, rank, &scaled, g)) {
            return None;
        }
        let entries: Vec<BigRational> = ext
            .colors()
            .iter()
            .map(|&e| coords[e as usize].clone())
            .collect();
        elements.push(RationalMatrix::new(n, n, entries).ok()?);
    }
    Some(elements)
}

/// An idempotent together with the checks it passed. Exact certificates use
/// rational arithmetic end to end; numeric members carry defects bounded by
/// the tolerance they were checked at.
#[derive(Debug, Clone)]
pub struct IdempotentCertificate {
    pub family: String,
    pub member: IdempotentMember,
    pub exact: bool,
    pub idempotent: bool,
    pub central: bool,
    pub primitive: bool,
    /// Trace, available when the member is exact.
    pub trace: Option<BigRational>,
}

impl IdempotentCertificate {
    pub fn certified(&self) -> bool {
        self.idempotent && self.central && self.primitive
    }
}

#[derive(Debug, Clone)]
pub enum IdempotentMember {
    Exact(RationalMatrix),
    Numeric(ComplexMatrixF),
}

impl IdempotentMember {
    pub fn to_complex(&self) -> ComplexMatrixF {
        match self {
            IdempotentMember::Exact(m) => ComplexMatrixF::from_rational(m),
            IdempotentMember::Numeric(m) => m.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, IdempotentMember::Exact(_))
    }
}

/// Certifies `e` as an idempotent of `A` with exact arithmetic: membership
/// in the span (an error when it fails), `e² = e`, commutation with every
/// basis element, and primitivity — the corner `e·A·e` is spanned by
/// `{e·B·e}`, and `e` is primitive exactly when that corner has a
/// one-dimensional center.
pub fn certify_idempotent(
    e: &RationalMatrix,
    a: &AlgebraBasis,
    family: &str,
) -> Result<IdempotentCertificate> {
    if !a.contains(e) {
        return Err(Error::NotInAlgebra(format!(
            "candidate idempotent for family {family} is outside the algebra span"
        )));
    }
    let idempotent = e.mul(e) == *e;
    let central = a.elements().iter().all(|b| e.commutator(b).is_zero());
    let primitive = idempotent && corner_center_dimension(e, a)? == 1;
    Ok(IdempotentCertificate {
        family: family.to_string(),
        member: IdempotentMember::Exact(e.clone()),
        exact: true,
        idempotent,
        central,
        primitive,
        trace: Some(e.trace()),
    })
}

/// Dimension of the center of the corner `e·A·e`: 1 exactly when `e` is a
/// primitive idempotent of `A`.
pub fn corner_center_dimension(e: &RationalMatrix, a: &AlgebraBasis) -> Result<usize> {
    let n = e.rows();
    let mut span = SpanBasis::new(n * n);
    let mut corner = Vec::new();
    for b in a.elements() {
        let ebe = e.mul(b).mul(e);
        if span.insert(ebe.to_vec()) {
            corner.push(ebe);
        }
    }
    if corner.is_empty() {
        return Ok(0);
    }
    Ok(solve_commutant(&corner, &corner)?.len())
}

/// Certifies a numeric idempotent at tolerance `tol`: idempotency and
/// commutation with every basis element are checked with defects ≤ `tol`;
/// primitivity is established by a unique match against the spectral
/// oracle's projectors (inherently primitive by construction).
pub fn certify_idempotent_numeric(
    e: &ComplexMatrixF,
    a: &AlgebraBasis,
    oracle: &[ComplexMatrixF],
    family: &str,
    tol: f64,
) -> IdempotentCertificate {
    let idempotent = e.idempotency_defect() <= tol;
    let central = a.elements().iter().all(|b| {
        let bf = ComplexMatrixF::from_rational(b);
        e.mul(&bf).sup_distance(&bf.mul(e)) <= tol * (1.0 + e.sup_norm() * bf.sup_norm())
    });
    let primitive = match_projector(e, oracle, 1e-6).is_some();
    IdempotentCertificate {
        family: family.to_string(),
        member: IdempotentMember::Numeric(e.clone()),
        exact: false,
        idempotent,
        central,
        primitive,
        trace: None,
    }
}

/// Index of the unique oracle projector within `tol` of `e`, if exactly one
/// matches.
pub fn match_projector(
    e: &ComplexMatrixF,
    oracle: &[ComplexMatrixF],
    tol: f64,
) -> Option<usize> {
    let matches: Vec<usize> = oracle
        .iter()
        .enumerate()
        .filter(|(_, p)| p.sup_distance(e) <= tol)
        .map(|(i, _)| i)
        .collect();
    match matches.as_slice() {
        [only] => Some(*only),
        _ => None,
    }
}

/// Outcome of checking that a family of idempotents partitions the
/// identity. `witness` carries the first failing check, if any.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub pass: bool,
    /// True when every member was exact and all checks ran rationally.
    pub exact: bool,
    pub witness: Option<String>,
}

impl PartitionReport {
    fn fail(exact: bool, witness: String) -> Self {
        PartitionReport {
            pass: false,
            exact,
            witness: Some(witness),
        }
    }
}

/// Checks that the members are pairwise orthogonal, individually certified
/// central idempotents, and sum to the identity. With every member exact
/// the whole check is rational; any numeric member switches the
/// orthogonality and sum checks to tolerance `tol`.
///
/// Primitivity of exact members is certified through corner centers up to
/// [`CORNER_LIMIT`]; past that (and always for numeric members) it rests on
/// the counting argument: nonzero orthogonal central idempotents summing to
/// I decompose the identity's partition into central primitive idempotents,
/// so they are all primitive precisely when there are as many of them as
/// the center has dimensions.
pub fn verify_partition(
    members: &[IdempotentMember],
    a: &AlgebraBasis,
    tol: f64,
) -> Result<PartitionReport> {
    if members.is_empty() {
        return Ok(PartitionReport::fail(true, "empty family".into()));
    }
    let all_exact = members.iter().all(IdempotentMember::is_exact);
    let n = a.matrix_size();

    if all_exact {
        let mats: Vec<&RationalMatrix> = members
            .iter()
            .map(|m| match m {
                IdempotentMember::Exact(e) => e,
                IdempotentMember::Numeric(_) => unreachable!(),
            })
            .collect();
        if n > CORNER_LIMIT {
            return verify_partition_exact_large(&mats, a);
        }
        for (i, e) in mats.iter().enumerate() {
            let cert = certify_idempotent(e, a, &format!("member {i}"))?;
            if !cert.certified() {
                return Ok(PartitionReport::fail(
                    true,
                    format!(
                        "member {i} fails certification (idempotent: {}, central: {}, primitive: {})",
                        cert.idempotent, cert.central, cert.primitive
                    ),
                ));
            }
        }
        for i in 0..mats.len() {
            for j in 0..mats.len() {
                if i != j && !mats[i].mul(mats[j]).is_zero() {
                    return Ok(PartitionReport::fail(
                        true,
                        format!("members {i} and {j} are not orthogonal"),
                    ));
                }
            }
        }
        let mut sum = RationalMatrix::zeros(n, n);
        for e in &mats {
            sum = sum.add(e);
        }
        if sum != RationalMatrix::identity(n) {
            return Ok(PartitionReport::fail(
                true,
                "members do not sum to the identity".into(),
            ));
        }
        return Ok(PartitionReport {
            pass: true,
            exact: true,
            witness: None,
        });
    }

    let mats: Vec<ComplexMatrixF> = members.iter().map(IdempotentMember::to_complex).collect();
    let center_dim = center(a)?.dimension();
    if members.len() != center_dim {
        return Ok(PartitionReport::fail(
            false,
            format!(
                "family has {} members but the center has dimension {center_dim}",
                members.len()
            ),
        ));
    }
    for (i, e) in mats.iter().enumerate() {
        if e.sup_norm() <= tol {
            return Ok(PartitionReport::fail(false, format!("member {i} is zero")));
        }
        if e.idempotency_defect() > tol {
            return Ok(PartitionReport::fail(
                false,
                format!("member {i} is not idempotent within {tol:.1e}"),
            ));
        }
        let central = a.elements().iter().all(|b| {
            let bf = ComplexMatrixF::from_rational(b);
            e.mul(&bf).sup_distance(&bf.mul(e)) <= tol * (1.0 + e.sup_norm() * bf.sup_norm())
        });
        if !central {
            return Ok(PartitionReport::fail(
                false,
                format!("member {i} is not central within {tol:.1e}"),
            ));
        }
    }
    for i in 0..mats.len() {
        for j in 0..mats.len() {
            if i != j && mats[i].mul(&mats[j]).sup_norm() > tol {
                return Ok(PartitionReport::fail(
                    false,
                    format!("members {i} and {j} are not orthogonal within {tol:.1e}"),
                ));
            }
        }
    }
    let mut sum = ComplexMatrixF::zeros(n, n);
    for e in &mats {
        sum = sum.add(e);
    }
    if sum.sup_distance(&ComplexMatrixF::identity(n)) > tol {
        return Ok(PartitionReport::fail(
            false,
            "members do not sum to the identity".into(),
        ));
    }
    Ok(PartitionReport {
        pass: true,
        exact: false,
        witness: None,
    })
}

/// Exact partition check for matrices too large for per-member corner
/// certificates. All checks stay rational; primitivity comes from the
/// counting argument against the exact center dimension. With coherent
/// structure available the products run in coordinates, otherwise on the
/// matrices themselves (correct either way, the former much faster).
fn verify_partition_exact_large(
    mats: &[&RationalMatrix],
    a: &AlgebraBasis,
) -> Result<PartitionReport> {
    if let Some(report) = verify_partition_coordinates(mats, a)? {
        return Ok(report);
    }
    let n = a.matrix_size();
    for (i, e) in mats.iter().enumerate() {
        if !a.contains(e) {
            return Err(Error::NotInAlgebra(format!(
                "candidate idempotent for family member {i} is outside the algebra span"
            )));
        }
        if e.is_zero() {
            return Ok(PartitionReport::fail(true, format!("member {i} is zero")));
        }
        if e.mul(e) != **e {
            return Ok(PartitionReport::fail(
                true,
                format!("member {i} is not idempotent"),
            ));
        }
        if a.generators().iter().any(|g| !e.commutator(g).is_zero()) {
            return Ok(PartitionReport::fail(
                true,
                format!("member {i} is not central"),
            ));
        }
    }
    for i in 0..mats.len() {
        for j in 0..mats.len() {
            if i != j && !mats[i].mul(mats[j]).is_zero() {
                return Ok(PartitionReport::fail(
                    true,
                    format!("members {i} and {j} are not orthogonal"),
                ));
            }
        }
    }
    let mut sum = RationalMatrix::zeros(n, n);
    for e in mats {
        sum = sum.add(e);
    }
    if sum != RationalMatrix::identity(n) {
        return Ok(PartitionReport::fail(
            true,
            "members do not sum to the identity".into(),
        ));
    }
    let center_dim = center(a)?.dimension();
    if mats.len() != center_dim {
        return Ok(PartitionReport::fail(
            true,
            format!(
                "family has {} members but the center has dimension {center_dim}",
                mats.len()
            ),
        ));
    }
    Ok(PartitionReport {
        pass: true,
        exact: true,
        witness: None,
    })
}

/// Coordinate-space core of [`verify_partition_exact_large`]. `Ok(None)`
/// means the shortcut does not apply (no coherent structure, or entries too
/// big for scaled-integer arithmetic) and the caller should use matrix
/// arithmetic; a member that is not constant on the color classes is
/// genuinely outside the algebra and errors out.
fn verify_partition_coordinates(
    mats: &[&RationalMatrix],
    a: &AlgebraBasis,
) -> Result<Option<PartitionReport>> {
    let Some(ext) = a.coherent_structure() else {
        return Ok(None);
    };
    let rank = ext.rank();
    let mut coords = Vec::with_capacity(mats.len());
    for (i, e) in mats.iter().enumerate() {
        let Some(c) = class_coordinates(ext, e) else {
            return Err(Error::NotInAlgebra(format!(
                "candidate idempotent for family member {i} is outside the algebra span"
            )));
        };
        coords.push(c);
    }
    let mut scaled = Vec::with_capacity(mats.len());
    for c in &coords {
        match scaled_integer_coords(c) {
            Some(zl) => scaled.push(zl),
            None => return Ok(None),
        }
    }
    let mut gens = Vec::new();
    for g in a.generators() {
        match integer_class_coordinates(ext, g) {
            Some(c) => gens.push(c),
            None => return Ok(None),
        }
    }
    let table = ext.product_support();

    for (i, (z, l)) in scaled.iter().enumerate() {
        if z.iter().all(|&v| v == 0) {
            return Ok(Some(PartitionReport::fail(
                true,
                format!("member {i} is zero"),
            )));
        }
        let square = coord_product_i128(&table, rank, z, z);
        if square.iter().zip(z.iter()).any(|(&s, &v)| s != l * v) {
            return Ok(Some(PartitionReport::fail(
                true,
                format!("member {i} is not idempotent"),
            )));
        }
        if gens.iter().any(|g| !coord_commutes(&table, rank, z, g)) {
            return Ok(Some(PartitionReport::fail(
                true,
                format!("member {i} is not central"),
            )));
        }
    }
    for i in 0..scaled.len() {
        for j in 0..scaled.len() {
            if i != j {
                let prod = coord_product_i128(&table, rank, &scaled[i].0, &scaled[j].0);
                if prod.iter().any(|&v| v != 0) {
                    return Ok(Some(PartitionReport::fail(
                        true,
                        format!("members {i} and {j} are not orthogonal"),
                    )));
                }
            }
        }
    }
    for e in 0..rank {
        let total: BigRational = coords.iter().map(|c| c[e].clone()).sum();
        let expected = if ext.diagonal_colors().contains(&(e as u32)) {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        if total != expected {
            return Ok(Some(PartitionReport::fail(
                true,
                "members do not sum to the identity".into(),
            )));
        }
    }
    let center_dim = center(a)?.dimension();
    if mats.len() != center_dim {
        return Ok(Some(PartitionReport::fail(
            true,
            format!(
                "family has {} members but the center has dimension {center_dim}",
                mats.len()
            ),
        )));
    }
    Ok(Some(PartitionReport {
        pass: true,
        exact: true,
        witness: None,
    }))
}

fn dmatrix_from_rational(m: &RationalMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rational_to_f64(m.get(i, j)))
}

/// Numeric basis of the center: the floating-point null space of the
/// commutator constraints `[Σ c_i B_i, g] = 0` over all generators `g`,
/// computed by SVD. Returns the center elements as real matrices.
fn numeric_center(a: &AlgebraBasis) -> Vec<DMatrix<f64>> {
    if let Some(out) = coherent_numeric_center(a) {
        return out;
    }
    let n = a.matrix_size();
    let d = a.dimension();
    let basis: Vec<DMatrix<f64>> = a.elements().iter().map(dmatrix_from_rational).collect();
    let generators: Vec<DMatrix<f64>> =
        a.generators().iter().map(dmatrix_from_rational).collect();
    let mut constraints = DMatrix::<f64>::zeros(generators.len() * n * n, d);
    for (gi, g) in generators.iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            let comm = b * g - g * b;
            for i in 0..n {
                for j in 0..n {
                    constraints[(gi * n * n + i * n + j, bi)] = comm[(i, j)];
                }
            }
        }
    }
    let svd = constraints.svd(false, true);
    let vt = svd.v_t.expect("SVD requested V^T");
    let scale = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = NUMERIC_NOISE * (1.0 + scale);
    let mut out = Vec::new();
    for (row, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= threshold {
            let mut z = DMatrix::<f64>::zeros(n, n);
            for (bi, b) in basis.iter().enumerate() {
                z += b * vt[(row, bi)];
            }
            out.push(z);
        }
    }
    out
}

/// Coordinate-space version of [`numeric_center`] for algebras carrying
/// their coherent structure. The same commutator constraints are assembled
/// in coordinates over the colors — every coefficient a small integer, so
/// the Gram matrix of the constraint rows is exact in f64 — and its
/// eigendecomposition separates the null space by an enormous margin.
fn coherent_numeric_center(a: &AlgebraBasis) -> Option<Vec<DMatrix<f64>>> {
    let ext = a.coherent_structure()?;
    let rank = ext.rank();
    let n = ext.order();
    let gens: Vec<Vec<i64>> = a
        .generators()
        .iter()
        .map(|g| integer_class_coordinates(ext, g))
        .collect::<Option<_>>()?;
    let table = ext.product_support();

    let mut gram = DMatrix::<f64>::zeros(rank, rank);
    for g in &gens {
        let mut rows = vec![0i64; rank * rank];
        for (d, &gd) in g.iter().enumerate() {
            if gd == 0 {
                continue;
            }
            for c in 0..rank {
                for &(e, p) in &table[c * rank + d] {
                    rows[e as usize * rank + c] += gd * p as i64;
                }
                for &(e, p) in &table[d * rank + c] {
                    rows[e as usize * rank + c] -= gd * p as i64;
                }
            }
        }
        for e in 0..rank {
            let row = &rows[e * rank..(e + 1) * rank];
            let support: Vec<(usize, f64)> = row
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(c, &v)| (c, v as f64))
                .collect();
            for &(c1, v1) in &support {
                for &(c2, v2) in &support {
                    gram[(c1, c2)] += v1 * v2;
                }
            }
        }
    }

    let eigen = nalgebra::SymmetricEigen::new(gram);
    let lambda_max = eigen.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let threshold = 1e-12 * (1.0 + lambda_max);
    let mut out = Vec::new();
    for (k, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda <= threshold {
            let coords = eigen.eigenvectors.column(k);
            let z = DMatrix::<f64>::from_fn(n, n, |i, j| coords[ext.color(i, j) as usize]);
            out.push(z);
        }
    }
    Some(out)
}

/// Regular representation of the center on itself: `R_i` holds in column
/// `j` the coordinates of `c_i · c_j` over the center basis, recovered
/// through the Frobenius Gram matrix. The center is closed under
/// multiplication, so the expansion residual is pure floating-point noise.
/// `None` when the Gram matrix is not positive definite, i.e. the numeric
/// basis was degenerate.
fn center_regular_actions(center: &[DMatrix<f64>]) -> Option<Vec<DMatrix<f64>>> {
    let k = center.len();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = center[i].dot(&center[j]);
        }
    }
    let chol = gram.cholesky()?;
    let mut actions = Vec::with_capacity(k);
    for ci in center {
        let mut rhs = DMatrix::<f64>::zeros(k, k);
        for (j, cj) in center.iter().enumerate() {
            let prod = ci * cj;
            for (m, cm) in center.iter().enumerate() {
                rhs[(m, j)] = cm.dot(&prod);
            }
        }
        actions.push(chol.solve(&rhs));
    }
    Some(actions)
}

/// One eigenvector of `m` for the (simple, well-separated) eigenvalue `mu`,
/// by inverse iteration: the shifted matrix is factored once and a random
/// start vector is refined a few times. Rounding keeps the nearly singular
/// factorization usable — that is the standard trick — but an exactly
/// singular pivot gets a slightly jittered shift instead.
fn eigenvector_for(
    m: &DMatrix<Complex64>,
    mu: Complex64,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Option<DVector<Complex64>> {
    let k = m.nrows();
    for attempt in 0..3 {
        let jitter = attempt as f64 * 1e-12 * (1.0 + scale);
        let shift = mu + Complex64::new(jitter, jitter);
        let mut shifted = m.clone();
        for d in 0..k {
            shifted[(d, d)] -= shift;
        }
        let lu = shifted.lu();
        let mut w = DVector::<Complex64>::from_fn(k, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut ok = true;
        for _ in 0..3 {
            let Some(next) = lu.solve(&w) else {
                ok = false;
                break;
            };
            let norm = next.norm();
            if !norm.is_finite() || norm == 0.0 {
                ok = false;
                break;
            }
            w = next.unscale(norm);
        }
        if ok {
            return Some(w);
        }
    }
    None
}

/// Spectral projectors of the algebra's simple components, computed without
/// rational arithmetic.
///
/// Everything happens inside the numeric center, which multiplication by a
/// central element acts on with one eigenvalue per simple component. A
/// pseudo-random real (deliberately non-symmetric) combination of the
/// center basis is drawn — a symmetric one would have a real spectrum and
/// so could never separate a complex-conjugate pair of components — and its
/// k×k action is eigendecomposed. Each eigenvector, rescaled so that its
/// square is itself, is a central primitive idempotent in coordinates; the
/// k of them are materialized and certified to be idempotent and to sum to
/// the identity at the requested tolerance. Projectors come back sorted by
/// eigenvalue (real part, then imaginary part). Draws are seeded, so
/// results are reproducible; a failed separation or certification check
/// redraws, up to a fixed retry budget.
pub fn numeric_central_primitive_idempotents(
    a: &AlgebraBasis,
    tol: f64,
) -> Result<Vec<ComplexMatrixF>> {
    let n = a.matrix_size();
    let center = numeric_center(a);
    let k = center.len();
    if k == 0 {
        return Err(Error::Internal(
            "numeric center of a unital algebra came out empty".into(),
        ));
    }
    let actions = center_regular_actions(&center).ok_or_else(|| {
        Error::Internal("numeric center basis has a degenerate Gram matrix".into())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut last_gap = f64::INFINITY;
    'draws: for _ in 0..ORACLE_RETRIES {
        let coeffs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut m = DMatrix::<f64>::zeros(k, k);
        for (r, &g) in actions.iter().zip(coeffs.iter()) {
            m += r * g;
        }
        let Some(schur) = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 2000) else {
            continue;
        };
        let eigenvalues: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
        let lambda_scale = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let tol_group = 1e-6 * (1.0 + lambda_scale);
        let clusters = cluster_eigenvalues(&eigenvalues, tol_group);
        if clusters.len() != k {
            last_gap = tol_group;
            continue;
        }
        let gap = min_cluster_gap(&eigenvalues, &clusters);
        if gap < SEPARATION_FACTOR * tol_group {
            last_gap = gap;
            continue;
        }
        let mc = DMatrix::<Complex64>::from_fn(k, k, |i, j| Complex64::new(m[(i, j)], 0.0));
        let mut projectors: Vec<(Complex64, ComplexMatrixF)> = Vec::with_capacity(k);
        for &mu in &eigenvalues {
            let Some(w) = eigenvector_for(&mc, mu, lambda_scale, &mut rng) else {
                last_gap = gap;
                continue 'draws;
            };
            // W = Σ wᵢcᵢ spans a one-dimensional component of the center, so
            // W² = βW; dividing by β lands on the idempotent itself.
            let mut sq = DVector::<Complex64>::zeros(k);
            for (r, &wi) in actions.iter().zip(w.iter()) {
                for col in 0..k {
                    for row in 0..k {
                        sq[row] += wi * Complex64::new(r[(row, col)], 0.0) * w[col];
                    }
                }
            }
            let den: f64 = w.iter().map(|wi| wi.norm_sqr()).sum();
            let beta: Complex64 =
                w.iter().zip(sq.iter()).map(|(wi, si)| si * wi.conj()).sum::<Complex64>()
                    / Complex64::new(den, 0.0);
            if beta.norm() <= NUMERIC_NOISE * (1.0 + lambda_scale) {
                last_gap = gap;
                continue 'draws;
            }
            let mut e = ComplexMatrixF::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut v = Complex64::new(0.0, 0.0);
                    for (wi, c) in w.iter().zip(center.iter()) {
                        v += wi * c[(i, j)];
                    }
                    e.set(i, j, v / beta);
                }
            }
            projectors.push((mu, e));
        }
        let mut sum = ComplexMatrixF::zeros(n, n);
        for (_, p) in &projectors {
            sum = sum.add(p);
        }
        let well_conditioned = sum.sup_distance(&ComplexMatrixF::identity(n)) <= tol
            && projectors.iter().all(|(_, p)| p.idempotency_defect() <= tol);
        if !well_conditioned {
            last_gap = gap;
            continue;
        }
        projectors.sort_by(|(u, _), (v, _)| {
            (u.re, u.im)
                .partial_cmp(&(v.re, v.im))
                .expect("finite eigenvalue means")
        });
        return Ok(projectors.into_iter().map(|(_, p)| p).collect());
    }
    Err(Error::SpectralAmbiguity {
        retries: ORACLE_RETRIES,
        gap: last_gap,
    })
}

/// Single-linkage grouping: eigenvalues within `tol_group` of any member
/// join that cluster. Indices, sorted by (re, im) inside each cluster.
fn cluster_eigenvalues(eigenvalues: &[Complex64], tol_group: f64) -> Vec<Vec<usize>> {
    let m = eigenvalues.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..m {
        for j in i + 1..m {
            if (eigenvalues[i] - eigenvalues[j]).norm() <= tol_group {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..m {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

fn min_cluster_gap(eigenvalues: &[Complex64], clusters: &[Vec<usize>]) -> f64 {
    let mut gap = f64::INFINITY;
    for a in 0..clusters.len() {
        for b in a + 1..clusters.len() {
            for &i in &clusters[a] {
                for &j in &clusters[b] {
                    gap = gap.min((eigenvalues[i] - eigenvalues[j]).norm());
                }
            }
        }
    }
    gap
}

/// Nearest rational with denominator ≤ `max_den`, found by walking the
/// continued-fraction convergents. `None` when nothing within `tol`.
fn reconstruct_entry(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (x - approx).abs() <= tol {
            return Some(ratio(p1, q1));
        }
        if frac.abs() < f64::EPSILON {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        frac = next - a;
        let p2 = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    ((x - approx).abs() <= tol).then(|| ratio(p1, q1))
}

/// Entrywise rational reconstruction of a numerically real matrix:
/// denominators ≤ `max_den`, entries within 1e-6 of their rational image,
/// imaginary parts below 1e-9. `None` when any entry resists.
pub fn rational_reconstruct(m: &ComplexMatrixF, max_den: i64) -> Option<RationalMatrix> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for v in m.entries() {
        if v.im.abs() > NUMERIC_NOISE {
            return None;
        }
        entries.push(reconstruct_entry(v.re, max_den, 1e-6)?);
    }
    RationalMatrix::new(m.rows(), m.cols(), entries).ok()
}

/// `Σ_i e_i · B · e_i = B` for every basis element — the block decomposition
/// identity a passing partition implies.
pub fn block_decomposition_holds(members: &[RationalMatrix], a: &AlgebraBasis) -> bool {
    let n = a.matrix_size();
    a.elements().iter().all(|b| {
        let mut sum = RationalMatrix::zeros(n, n);
        for e in members {
            sum = sum.add(&e.mul(b).mul(e));
        }
        sum == *b
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{algebra_span_closure, terwilliger};
    use crate::construct::wreath;
    use crate::exactlin::{kron, rat};
    use crate::testutil::{complete, thin_cyclic};

    fn adjacency_algebra(c: &crate::schemes::CoherentConfiguration) -> AlgebraBasis {
        algebra_span_closure(&c.adjacency_matrices()).unwrap()
    }

    #[test]
    fn center_of_the_full_matrix_algebra_is_scalar() {
        let a = terwilliger(&complete(2), 0).unwrap();
        assert_eq!(a.dimension(), 4);
        assert_eq!(center(&a).unwrap().dimension(), 1);
    }

    #[test]
    fn center_of_triangle_terwilliger_has_two_components() {
        let a = terwilliger(&complete(3), 0).unwrap();
        let z = center(&a).unwrap();
        assert_eq!(z.dimension(), 2);
        for zel in z.elements() {
            for b in a.elements() {
                assert!(zel.commutator(b).is_zero());
            }
        }
    }

    #[test]
    fn commutative_algebra_is_its_own_center() {
        let a = adjacency_algebra(&complete(3));
        assert_eq!(a.dimension(), 2);
        assert_eq!(center(&a).unwrap().dimension(), 2);
    }

    #[test]
    fn identity_is_primitive_only_in_simple_algebras() {
        let cases = [
            (terwilliger(&complete(2), 0).unwrap(), true),
            (adjacency_algebra(&complete(3)), false),
            (terwilliger(&complete(3), 0).unwrap(), false),
        ];
        for (a, simple) in cases {
            let n = a.matrix_size();
            let cert = certify_idempotent(&RationalMatrix::identity(n), &a, "trivial").unwrap();
            assert!(cert.idempotent && cert.central);
            assert_eq!(cert.primitive, simple);
            assert_eq!(cert.primitive, center(&a).unwrap().dimension() == 1);
        }
    }

    #[test]
    fn corner_projection_is_idempotent_but_not_central() {
        let a = terwilliger(&complete(2), 0).unwrap();
        let e = RationalMatrix::diagonal_indicator(2, &[0]);
        let cert = certify_idempotent(&e, &a, "corner").unwrap();
        assert!(cert.idempotent);
        assert!(!cert.central);
        assert!(cert.primitive);
        assert_eq!(cert.trace, Some(rat(1)));
    }

    #[test]
    fn normalized_all_ones_matrix_is_the_trivial_idempotent() {
        let a = adjacency_algebra(&complete(3));
        let e = RationalMatrix::ones(3, 3).scale(&ratio(1, 3));
        let cert = certify_idempotent(&e, &a, "trivial").unwrap();
        assert!(cert.certified());
        assert_eq!(cert.trace, Some(rat(1)));
    }

    #[test]
    fn membership_is_checked_before_anything_else() {
        let a = adjacency_algebra(&complete(3));
        let outside = RationalMatrix::diagonal_indicator(3, &[0]);
        assert!(matches!(
            certify_idempotent(&outside, &a, "stray"),
            Err(Error::NotInAlgebra(_))
        ));
    }

    #[test]
    fn singleton_identity_partition_passes() {
        let a = terwilliger(&complete(2), 0).unwrap();
        let members = [IdempotentMember::Exact(RationalMatrix::identity(2))];
        let report = verify_partition(&members, &a, 1e-9).unwrap();
        assert!(report.pass && report.exact);
    }

    #[test]
    fn diagonal_units_partition_the_diagonal_algebra() {
        let e0 = RationalMatrix::diagonal_indicator(2, &[0]);
        let e1 = RationalMatrix::diagonal_indicator(2, &[1]);
        let a = algebra_span_closure(&[e0.clone(), e1.clone()]).unwrap();
        let members = [IdempotentMember::Exact(e0), IdempotentMember::Exact(e1)];
        let report = verify_partition(&members, &a, 1e-9).unwrap();
        assert!(report.pass && report.exact);
    }

    #[test]
    fn failed_partitions_name_a_witness() {
        let a = terwilliger(&complete(2), 0).unwrap();
        let half = RationalMatrix::identity(2).scale(&ratio(1, 2));
        let members = [IdempotentMember::Exact(half)];
        let report = verify_partition(&members, &a, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report.witness.unwrap().contains("member 0"));
    }

    /// The three central primitive idempotents of the Terwilliger algebra
    /// of K₂≀K₃ at (0,0), written down directly.
    fn wreath_triangle_family() -> (AlgebraBasis, Vec<RationalMatrix>) {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let a = terwilliger(&w, lab.point_index(0, 0)).unwrap();
        let outer = RationalMatrix::diagonal_indicator(6, &[1, 2, 4, 5]);
        let j6 = RationalMatrix::ones(6, 6);
        let trivial = RationalMatrix::diagonal_indicator(6, &[0])
            .add(&RationalMatrix::diagonal_indicator(6, &[3]))
            .add(&outer.mul(&j6).mul(&outer).scale(&ratio(1, 4)));
        let half_j2 = RationalMatrix::ones(2, 2).scale(&ratio(1, 2));
        let hat = kron(
            &RationalMatrix::identity(2).sub(&half_j2),
            &RationalMatrix::diagonal_indicator(3, &[1, 2]),
        );
        let mut off = RationalMatrix::zeros(3, 3);
        off.set(1, 2, rat(1));
        off.set(2, 1, rat(1));
        let eta = kron(
            &RationalMatrix::ones(2, 2),
            &RationalMatrix::diagonal_indicator(3, &[1, 2]).sub(&off),
        )
        .scale(&ratio(1, 4));
        (a, vec![trivial, hat, eta])
    }

    #[test]
    fn wreath_triangle_idempotents_partition_exactly() {
        let (a, family) = wreath_triangle_family();
        assert_eq!(center(&a).unwrap().dimension(), 3);
        let members: Vec<IdempotentMember> =
            family.iter().cloned().map(IdempotentMember::Exact).collect();
        let report = verify_partition(&members, &a, 1e-9).unwrap();
        assert!(report.pass && report.exact, "{:?}", report.witness);
        let traces: Vec<BigRational> = family.iter().map(RationalMatrix::trace).collect();
        assert_eq!(traces, vec![rat(3), rat(2), rat(1)]);
        assert!(block_decomposition_holds(&family, &a));
    }

    #[test]
    fn oracle_on_a_simple_algebra_returns_the_identity() {
        let a = terwilliger(&complete(2), 0).unwrap();
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        assert_eq!(projectors.len(), 1);
        assert!(projectors[0].sup_distance(&ComplexMatrixF::identity(2)) <= 1e-9);
    }

    #[test]
    fn oracle_splits_the_triangle_adjacency_algebra() {
        let a = adjacency_algebra(&complete(3));
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        assert_eq!(projectors.len(), 2);
        let third_j = ComplexMatrixF::from_rational(&RationalMatrix::ones(3, 3).scale(&ratio(1, 3)));
        let complement = ComplexMatrixF::identity(3).sub(&third_j);
        assert!(match_projector(&third_j, &projectors, 1e-9).is_some());
        assert!(match_projector(&complement, &projectors, 1e-9).is_some());
        assert_ne!(
            match_projector(&third_j, &projectors, 1e-9),
            match_projector(&complement, &projectors, 1e-9)
        );
    }

    /// The thin cyclic group of order 3 has a complex-conjugate pair of
    /// characters; the oracle must keep their components apart.
    #[test]
    fn oracle_separates_conjugate_components() {
        let a = adjacency_algebra(&thin_cyclic(3));
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        assert_eq!(projectors.len(), 3);
        let real_count = projectors
            .iter()
            .filter(|p| p.entries().iter().all(|v| v.im.abs() <= 1e-9))
            .count();
        assert_eq!(real_count, 1);
    }

    #[test]
    fn oracle_count_matches_exact_center_dimension() {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let algebras = [
            terwilliger(&complete(2), 0).unwrap(),
            terwilliger(&complete(3), 1).unwrap(),
            adjacency_algebra(&complete(3)),
            adjacency_algebra(&thin_cyclic(3)),
            terwilliger(&w, lab.point_index(0, 0)).unwrap(),
        ];
        for a in &algebras {
            let exact = center(a).unwrap().dimension();
            let projectors = numeric_central_primitive_idempotents(a, 1e-9).unwrap();
            assert_eq!(projectors.len(), exact);
        }
    }

    #[test]
    fn oracle_reproduces_the_wreath_triangle_family() {
        let (a, family) = wreath_triangle_family();
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        assert_eq!(projectors.len(), 3);
        let mut seen = std::collections::BTreeSet::new();
        for e in &family {
            let ef = ComplexMatrixF::from_rational(e);
            let hit = match_projector(&ef, &projectors, 1e-9).expect("family member unmatched");
            assert!(projectors[hit].sup_distance(&ef) <= 1e-9);
            seen.insert(hit);
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn reconstruction_of_small_denominators() {
        let mut m = ComplexMatrixF::zeros(1, 3);
        m.set(0, 0, Complex64::new(0.25000000001, 0.0));
        m.set(0, 1, Complex64::new(0.333333333, 0.0));
        m.set(0, 2, Complex64::new(-1.5, 0.0));
        let r = rational_reconstruct(&m, 64).unwrap();
        assert_eq!(r.get(0, 0), &ratio(1, 4));
        assert_eq!(r.get(0, 1), &ratio(1, 3));
        assert_eq!(r.get(0, 2), &ratio(-3, 2));
    }

    #[test]
    fn irrational_entries_fail_reconstruction() {
        let mut m = ComplexMatrixF::zeros(1, 1);
        m.set(0, 0, Complex64::new(0.7071067, 0.0));
        assert!(rational_reconstruct(&m, 64).is_none());
        let mut with_imaginary = ComplexMatrixF::zeros(1, 1);
        with_imaginary.set(0, 0, Complex64::new(0.5, 1e-6));
        assert!(rational_reconstruct(&with_imaginary, 64).is_none());
    }

    /// The modular-certificate center and the exact commutant solver agree:
    /// same dimension, either basis inside the other's span.
    #[test]
    fn coherent_center_agrees_with_commutant_solver() {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let cases = [
            (complete(3), 0),
            (thin_cyclic(3), 0),
            (w, lab.point_index(0, 0)),
        ];
        for (c, x0) in cases {
            let fast = crate::closure::terwilliger_coherent(&c, x0).unwrap();
            assert!(fast.coherent_structure().is_some());
            let slow = terwilliger(&c, x0).unwrap();
            let zf = center(&fast).unwrap();
            let zs = center(&slow).unwrap();
            assert_eq!(zf.dimension(), zs.dimension());
            let mut span = SpanBasis::new(c.order() * c.order());
            for z in zs.elements() {
                span.insert(z.to_vec());
            }
            for z in zf.elements() {
                assert!(span.contains(&z.to_vec()));
                for b in fast.elements() {
                    assert!(z.commutator(b).is_zero());
                }
            }
        }
    }

    #[test]
    fn coherent_center_of_a_large_wreath() {
        let (w, _) = wreath(&complete(2), &crate::testutil::cycle_distance(14)).unwrap();
        let a = crate::closure::terwilliger_coherent(&w, 0).unwrap();
        assert_eq!(a.dimension(), 124);
        // One trivial component, one from the antipodal thin class, one per
        // thick class, one from the top quotient: 1 + 1 + 6 + 1.
        assert_eq!(center(&a).unwrap().dimension(), 9);
    }

    #[test]
    fn oracle_through_coordinates_matches_the_exact_family() {
        let (a_plain, family) = wreath_triangle_family();
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let a = crate::closure::terwilliger_coherent(&w, lab.point_index(0, 0)).unwrap();
        assert!(a.coherent_structure().is_some());
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        assert_eq!(projectors.len(), center(&a_plain).unwrap().dimension());
        for e in &family {
            let ef = ComplexMatrixF::from_rational(e);
            assert!(match_projector(&ef, &projectors, 1e-9).is_some());
        }
    }

    /// Above the corner-certificate size the exact path certifies through
    /// counting, both with coordinates (coherent basis) and without.
    #[test]
    fn large_exact_partitions_use_the_counting_route() {
        let a = crate::closure::terwilliger_coherent(&thin_cyclic(17), 0).unwrap();
        assert_eq!(a.dimension(), 289);
        let identity = RationalMatrix::identity(17);
        let ok = verify_partition(
            &[IdempotentMember::Exact(identity.clone())],
            &a,
            1e-9,
        )
        .unwrap();
        assert!(ok.pass && ok.exact);

        let e = RationalMatrix::diagonal_indicator(17, &[0]);
        let split = [
            IdempotentMember::Exact(e.clone()),
            IdempotentMember::Exact(identity.sub(&e)),
        ];
        let report = verify_partition(&split, &a, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report.witness.unwrap().contains("member 0 is not central"));

        let with_zero = [
            IdempotentMember::Exact(RationalMatrix::zeros(17, 17)),
            IdempotentMember::Exact(identity.clone()),
        ];
        let report = verify_partition(&with_zero, &a, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report.witness.unwrap().contains("member 0 is zero"));

        let c20 = adjacency_algebra(&crate::testutil::cycle_distance(20));
        let j20 = RationalMatrix::ones(20, 20).scale(&ratio(1, 20));
        let coarse = [
            IdempotentMember::Exact(j20.clone()),
            IdempotentMember::Exact(RationalMatrix::identity(20).sub(&j20)),
        ];
        let report = verify_partition(&coarse, &c20, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report
            .witness
            .unwrap()
            .contains("2 members but the center has dimension 11"));

        let units: Vec<RationalMatrix> = (0..20)
            .map(|i| RationalMatrix::diagonal_indicator(20, &[i]))
            .collect();
        let diag = algebra_span_closure(&units).unwrap();
        assert!(diag.coherent_structure().is_none());
        let members: Vec<IdempotentMember> =
            units.into_iter().map(IdempotentMember::Exact).collect();
        let report = verify_partition(&members, &diag, 1e-9).unwrap();
        assert!(report.pass && report.exact);
    }

    #[test]
    fn reconstructed_oracle_projector_recertifies_exactly() {
        let a = adjacency_algebra(&complete(3));
        let projectors = numeric_central_primitive_idempotents(&a, 1e-9).unwrap();
        let mut reconstructed: Vec<RationalMatrix> = projectors
            .iter()
            .map(|p| rational_reconstruct(p, 12).expect("rational projector"))
            .collect();
        reconstructed.sort_by_key(|m| m.get(0, 0).clone());
        for e in &reconstructed {
            assert!(certify_idempotent(e, &a, "reconstructed").unwrap().certified());
        }
        assert_eq!(reconstructed[0], RationalMatrix::ones(3, 3).scale(&ratio(1, 3)));
    }
}
