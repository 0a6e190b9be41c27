//! Coherent closure by 2-dimensional Weisfeiler–Leman refinement, one-point
//! extensions, and span-closure of matrix algebras (Terwilliger algebras in
//! particular).

use std::collections::HashMap;

use num_rational::BigRational;

use crate::construct::WreathLabeling;
use crate::error::{Error, Result};
use crate::exactlin::{add_mod, kron, mul_mod, ModSpan, RationalMatrix, SpanBasis};
use crate::schemes::CoherentConfiguration;

/// A provisional coloring of ordered pairs. It does not need to satisfy any
/// coherence axiom; [`wl_closure`] refines it until it does.
#[derive(Debug, Clone)]
pub struct InitialColoring {
    n: usize,
    colors: Vec<u32>,
}

impl InitialColoring {
    /// Wraps an `n × n` row-major color matrix. Colors may be arbitrary
    /// `u32` values; they are renumbered during refinement.
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} colors for {} points, got {}",
                n * n,
                n,
                colors.len()
            )));
        }
        Ok(Self { n, colors })
    }

    pub fn from_configuration(c: &CoherentConfiguration) -> Self {
        Self {
            n: c.order(),
            colors: c.colors().to_vec(),
        }
    }

    /// Copy of `c`'s coloring with the diagonal entry of `x` moved to a
    /// fresh color, so `x` becomes a fiber of its own under refinement.
    pub fn isolating_point(c: &CoherentConfiguration, x: usize) -> Result<Self> {
        c.check_point(x)?;
        let mut colors = c.colors().to_vec();
        colors[x * c.order() + x] = c.rank() as u32;
        Ok(Self {
            n: c.order(),
            colors,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn color(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.n + y]
    }
}

/// Renumbers pair keys to contiguous colors in first-occurrence order,
/// scanning the matrix row by row.
fn renumber<K: Ord + std::hash::Hash>(keys: &[K]) -> Vec<u32> {
    let mut seen: HashMap<&K, u32> = HashMap::new();
    let mut next = 0u32;
    keys.iter()
        .map(|k| {
            *seen.entry(k).or_insert_with(|| {
                let v = next;
                next += 1;
                v
            })
        })
        .collect()
}

/// Coarsest coherent refinement of the given coloring.
///
/// The first pass replaces each color by the triple
/// `(color(x,y), color(y,x), x == y)`, which makes the coloring
/// transpose-consistent and separates the diagonal. Each further pass
/// replaces `color(x,y)` by the pair of the old color and the multiset over
/// `z` of `(color(x,z), color(z,y))`, until the number of colors stops
/// growing. Refinement only ever splits color classes, so the result
/// refines the input; the stable coloring satisfies the coherence axioms.
pub fn wl_closure(init: &InitialColoring) -> Result<CoherentConfiguration> {
    let n = init.n;
    let keys: Vec<(u32, u32, bool)> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            (init.color(x, y), init.color(y, x), x == y)
        })
        .collect();
    let mut colors = renumber(&keys);
    let mut count = colors.iter().max().map_or(0, |&m| m as usize + 1);
    loop {
        let keys: Vec<(u32, Vec<(u32, u32)>)> = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                let mut paths: Vec<(u32, u32)> = (0..n)
                    .map(|z| (colors[x * n + z], colors[z * n + y]))
                    .collect();
                paths.sort_unstable();
                (colors[i], paths)
            })
            .collect();
        colors = renumber(&keys);
        let new_count = colors.iter().max().map_or(0, |&m| m as usize + 1);
        if new_count == count {
            break;
        }
        count = new_count;
    }
    CoherentConfiguration::validate(n, colors)
}

/// The smallest coherent configuration refining `c` in which `x` is a fiber
/// of its own.
pub fn one_point_extension(
    c: &CoherentConfiguration,
    x: usize,
) -> Result<CoherentConfiguration> {
    wl_closure(&InitialColoring::isolating_point(c, x)?)
}

/// How a basis element of an [`AlgebraBasis`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Identity,
    /// Index into the generator list passed to the closure.
    Generator(usize),
    /// Product `elements[i] · elements[j]` of two earlier basis elements.
    Product(usize, usize),
    /// Adjacency matrix of this color of a coherent configuration whose
    /// adjacency algebra was certified equal to the generated algebra.
    CoherentColor(u32),
}

/// A basis of a unital, product- and transpose-closed matrix algebra,
/// together with the generators it was grown from.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    n: usize,
    elements: Vec<RationalMatrix>,
    provenance: Vec<Provenance>,
    generators: Vec<RationalMatrix>,
    span: SpanBasis,
    coherent: Option<CoherentConfiguration>,
}

impl AlgebraBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Side length of the (square) member matrices.
    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[RationalMatrix] {
        &self.elements
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// The generators as passed in, including any that turned out linearly
    /// dependent.
    pub fn generators(&self) -> &[RationalMatrix] {
        &self.generators
    }

    pub fn contains(&self, m: &RationalMatrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.span.contains(&m.to_vec())
    }

    /// Coefficients of `m` over `elements`, if `m` lies in the span.
    pub fn coordinates(&self, m: &RationalMatrix) -> Option<Vec<BigRational>> {
        if m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        self.span.coordinates(&m.to_vec())
    }

    /// The coherent configuration whose adjacency matrices are this basis,
    /// when the basis came out of [`terwilliger_coherent`]'s certified route.
    /// Its intersection numbers are then the structure constants of the
    /// algebra, which downstream computations exploit.
    pub fn coherent_structure(&self) -> Option<&CoherentConfiguration> {
        self.coherent.as_ref()
    }
}

/// Basis of the smallest unital algebra containing the generators.
///
/// The identity is seeded first, then the generators, then products of
/// basis elements are folded in until a full pass adds no dimension. Each
/// pair of basis elements is multiplied exactly once, after which its
/// product stays in the (only ever growing) span. The generator sets used
/// in this crate are transpose-closed, which makes the algebra
/// transpose-closed; that is asserted after the fact.
pub fn algebra_span_closure(generators: &[RationalMatrix]) -> Result<AlgebraBasis> {
    let n = generators
        .first()
        .ok_or_else(|| {
            Error::Precondition("algebra closure needs at least one generator".into())
        })?
        .rows();
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generators must all be {n}×{n}, got {}×{}",
                g.rows(),
                g.cols()
            )));
        }
    }

    let mut span = SpanBasis::new(n * n);
    let mut elements = Vec::new();
    let mut provenance = Vec::new();
    let identity = RationalMatrix::identity(n);
    span.insert(identity.to_vec());
    elements.push(identity);
    provenance.push(Provenance::Identity);
    for (i, g) in generators.iter().enumerate() {
        if span.insert(g.to_vec()) {
            elements.push(g.clone());
            provenance.push(Provenance::Generator(i));
        }
    }

    let mut multiplied = 0;
    loop {
        let len = elements.len();
        if multiplied == len {
            break;
        }
        for i in 0..len {
            for j in 0..len {
                if i < multiplied && j < multiplied {
                    continue;
                }
                let p = elements[i].mul(&elements[j]);
                if span.insert(p.to_vec()) {
                    elements.push(p);
                    provenance.push(Provenance::Product(i, j));
                }
            }
        }
        multiplied = len;
    }

    for e in &elements {
        if !span.contains(&e.transpose().to_vec()) {
            return Err(Error::Internal(
                "algebra closure produced a basis that is not transpose-closed".into(),
            ));
        }
    }

    Ok(AlgebraBasis {
        n,
        elements,
        provenance,
        generators: generators.to_vec(),
        span,
        coherent: None,
    })
}

fn terwilliger_generators(
    c: &CoherentConfiguration,
    x0: usize,
) -> Result<Vec<RationalMatrix>> {
    if !c.is_homogeneous() {
        return Err(Error::NotHomogeneous(
            "Terwilliger algebras are taken over schemes".into(),
        ));
    }
    c.check_point(x0)?;
    let n = c.order();
    let mut generators = c.adjacency_matrices();
    for s in 0..c.rank() as u32 {
        let orbit = c.point_orbit(x0, s)?;
        if !orbit.is_empty() {
            generators.push(RationalMatrix::diagonal_indicator(n, &orbit));
        }
    }
    Ok(generators)
}

/// The Terwilliger algebra of a scheme at base point `x0`: the algebra
/// generated by all adjacency matrices σ_s together with the diagonal
/// indicators ε of the point orbits `x0·s`.
pub fn terwilliger(c: &CoherentConfiguration, x0: usize) -> Result<AlgebraBasis> {
    algebra_span_closure(&terwilliger_generators(c, x0)?)
}

/// The Terwilliger algebra at `x0`, routed through the one-point extension
/// whenever that can be certified.
///
/// The adjacency algebra of the extension always contains the Terwilliger
/// algebra: the extension refines the base coloring (so every σ_s is a 0/1
/// sum of extension classes) and its fibers refine the point orbits of `x0`
/// (so every ε is a 0/1 sum of diagonal classes). Equality is certified per
/// instance rather than assumed. Working in coordinates over the extension's
/// colors, products of algebra members expand exactly through the
/// intersection numbers, and the whole word closure is run modulo a prime.
/// Since reduction mod p can only lose rank, a full-rank coordinate span
/// proves the Terwilliger algebra already exhausts the extension's algebra,
/// and the extension's adjacency matrices are returned as its basis. A rank
/// deficit mod p proves nothing, so that path falls back to the plain exact
/// span closure.
pub fn terwilliger_coherent(c: &CoherentConfiguration, x0: usize) -> Result<AlgebraBasis> {
    let generators = terwilliger_generators(c, x0)?;
    let n = c.order();
    let ext = one_point_extension(c, x0)?;
    let rank = ext.rank();

    let mut sigma_coords = vec![vec![0u64; rank]; c.rank()];
    for i in 0..n * n {
        sigma_coords[c.colors()[i] as usize][ext.colors()[i] as usize] = 1;
    }

    let diag_color: Vec<usize> = (0..n).map(|x| ext.color(x, x) as usize).collect();
    let mut diag_count = vec![0usize; rank];
    for &e in &diag_color {
        diag_count[e] += 1;
    }
    let mut eps_coords = Vec::new();
    for s in 0..c.rank() as u32 {
        let orbit = c.point_orbit(x0, s)?;
        if orbit.is_empty() {
            continue;
        }
        let mut v = vec![0u64; rank];
        for &x in &orbit {
            v[diag_color[x]] = 1;
        }
        let covered: usize = v
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b != 0)
            .map(|(e, _)| diag_count[e])
            .sum();
        if covered != orbit.len() {
            return Err(Error::Internal(
                "one-point extension fibers fail to refine the base point's orbits".into(),
            ));
        }
        eps_coords.push(v);
    }

    let mut identity_coords = vec![0u64; rank];
    for &e in &diag_color {
        identity_coords[e] = 1;
    }

    // Word closure in coordinates: breadth-first left-multiplication by the
    // generators reaches every word, and anything the span absorbs stays
    // absorbed, so stopping when no element grows the span closes it under
    // multiplication by the whole algebra.
    let table = ext.product_support();
    let mut span = ModSpan::new(rank);
    let mut elems: Vec<Vec<u64>> = Vec::new();
    for v in std::iter::once(&identity_coords)
        .chain(sigma_coords.iter())
        .chain(eps_coords.iter())
    {
        if span.insert(v.clone()) {
            elems.push(v.clone());
        }
    }
    let gens: Vec<Vec<(usize, u64)>> = sigma_coords
        .iter()
        .chain(eps_coords.iter())
        .map(|g| {
            g.iter()
                .enumerate()
                .filter(|&(_, &x)| x != 0)
                .map(|(d, &x)| (d, x))
                .collect()
        })
        .collect();

    let mut next = 0;
    while next < elems.len() && span.dimension() < rank {
        let supp: Vec<(usize, u64)> = elems[next]
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x != 0)
            .map(|(d, &x)| (d, x))
            .collect();
        for g in &gens {
            if span.dimension() == rank {
                break;
            }
            let mut w = vec![0u64; rank];
            for &(gc, gval) in g {
                let row = gc * rank;
                for &(ec, eval) in &supp {
                    let coeff = mul_mod(gval, eval);
                    for &(u, p) in &table[row + ec] {
                        w[u as usize] = add_mod(w[u as usize], mul_mod(coeff, p as u64));
                    }
                }
            }
            if span.insert(w.clone()) {
                elems.push(w);
            }
        }
        next += 1;
    }

    if span.dimension() < rank {
        return algebra_span_closure(&generators);
    }

    let elements = ext.adjacency_matrices();
    let mut full_span = SpanBasis::new(n * n);
    for e in &elements {
        full_span.insert(e.to_vec());
    }
    let provenance = (0..rank as u32).map(Provenance::CoherentColor).collect();
    Ok(AlgebraBasis {
        n,
        elements,
        provenance,
        generators,
        span: full_span,
        coherent: Some(ext),
    })
}

/// Basis of the corner `ε·𝒯(S≀T)·ε` cut out of the Terwilliger algebra of a
/// wreath product by ε = I_X ⊗ ε_{Y∖{y0}}, written on the surviving points
/// X × (Y∖{y0}).
///
/// The same corner is generated independently from the one-point extension
/// of the second factor: `{J_X ⊗ σ_c}` over the colors c of the extension
/// restricted to Y∖{y0}, together with `{σ_s ⊗ I}` over the first factor's
/// colors. Both spans are computed and checked equal before returning.
pub fn restriction_corner_basis(
    w: &CoherentConfiguration,
    lab: &WreathLabeling,
    x0: usize,
    y0: usize,
) -> Result<AlgebraBasis> {
    let (nx, ny) = (lab.base_x.order(), lab.base_y.order());
    lab.base_x.check_point(x0)?;
    lab.base_y.check_point(y0)?;
    if ny < 2 {
        return Err(Error::Precondition(
            "corner restriction needs at least two points in the second factor".into(),
        ));
    }
    if !lab.base_y.is_quasi_thin() {
        return Err(Error::Precondition(
            "corner comparison requires a quasi-thin second factor".into(),
        ));
    }

    let ta = terwilliger(w, lab.point_index(x0, y0))?;
    let keep: Vec<usize> = (0..nx * ny).filter(|i| i % ny != y0).collect();
    let projected: Vec<RationalMatrix> =
        ta.elements().iter().map(|b| b.restrict(&keep)).collect();
    let corner = algebra_span_closure(&projected)?;

    let ext = one_point_extension(&lab.base_y, y0)?;
    let keep_y: Vec<usize> = (0..ny).filter(|&y| y != y0).collect();
    let restricted = ext.restrict(&keep_y)?;
    let jx = RationalMatrix::ones(nx, nx);
    let iy = RationalMatrix::identity(ny - 1);
    let mut generators = Vec::new();
    for c in 0..restricted.rank() as u32 {
        generators.push(kron(&jx, &restricted.adjacency_matrix(c)?));
    }
    for s in 0..lab.base_x.rank() as u32 {
        generators.push(kron(&lab.base_x.adjacency_matrix(s)?, &iy));
    }
    let independent = algebra_span_closure(&generators)?;

    if corner.dimension() != independent.dimension()
        || corner.elements().iter().any(|e| !independent.contains(e))
        || independent.elements().iter().any(|e| !corner.contains(e))
    {
        return Err(Error::Internal(format!(
            "corner of the wreath Terwilliger algebra (dim {}) does not match the \
             algebra generated from the extension of the second factor (dim {})",
            corner.dimension(),
            independent.dimension()
        )));
    }
    Ok(corner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::wreath;
    use crate::exactlin::rat;
    use crate::testutil::{complete, pentagon, thin_cyclic};

    #[test]
    fn coherent_colorings_are_fixed_points() {
        for c in [complete(3), thin_cyclic(4), pentagon()] {
            let closed = wl_closure(&InitialColoring::from_configuration(&c)).unwrap();
            assert!(closed.same_partition(&c));
        }
    }

    #[test]
    fn isolating_a_triangle_point() {
        let ext = one_point_extension(&complete(3), 0).unwrap();
        assert_eq!(ext.rank(), 5);
        assert_eq!(ext.fibers(), &[vec![0], vec![1, 2]]);
    }

    #[test]
    fn extensions_of_thin_schemes_are_discrete() {
        for n in 2..=4usize {
            let ext = one_point_extension(&thin_cyclic(n), 0).unwrap();
            assert_eq!(ext.rank(), n * n);
        }
    }

    #[test]
    fn distinct_diagonal_forces_full_refinement() {
        let init = InitialColoring::new(3, vec![0, 3, 3, 3, 1, 3, 3, 3, 2]).unwrap();
        let closed = wl_closure(&init).unwrap();
        assert_eq!(closed.rank(), 9);
    }

    #[test]
    fn refinement_never_merges_input_colors() {
        let init = InitialColoring::new(4, vec![0, 1, 1, 1, 1, 0, 2, 1, 1, 2, 0, 1, 2, 1, 1, 0])
            .unwrap();
        let closed = wl_closure(&init).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if closed.colors()[i] == closed.colors()[j] {
                    let (a, b) = (
                        init.color(i / 4, i % 4),
                        init.color(j / 4, j % 4),
                    );
                    assert_eq!(a, b, "pairs {i} and {j} merged");
                }
            }
        }
    }

    #[test]
    fn extension_fibers_sit_inside_point_orbits() {
        let k3 = complete(3);
        let ext = one_point_extension(&k3, 0).unwrap();
        for fiber in ext.fibers() {
            let inside_some_orbit = (0..k3.rank() as u32).any(|s| {
                let orbit = k3.point_orbit(0, s).unwrap();
                fiber.iter().all(|p| orbit.contains(p))
            });
            assert!(inside_some_orbit);
        }
    }

    #[test]
    fn closure_of_identity_alone() {
        let basis = algebra_span_closure(&[RationalMatrix::identity(3)]).unwrap();
        assert_eq!(basis.dimension(), 1);
        assert_eq!(basis.provenance(), &[Provenance::Identity]);
    }

    #[test]
    fn closure_output_is_product_closed_and_unital() {
        let k3 = complete(3);
        let basis = terwilliger(&k3, 0).unwrap();
        assert!(basis.contains(&RationalMatrix::identity(3)));
        for a in basis.elements() {
            assert!(basis.contains(&a.transpose()));
            for b in basis.elements() {
                assert!(basis.contains(&a.mul(b)));
            }
        }
        for (k, p) in basis.provenance().iter().enumerate() {
            if let Provenance::Product(i, j) = p {
                assert!(*i < k && *j < k);
            }
        }
    }

    #[test]
    fn terwilliger_of_an_edge_is_the_full_matrix_algebra() {
        let basis = terwilliger(&complete(2), 0).unwrap();
        assert_eq!(basis.dimension(), 4);
    }

    #[test]
    fn terwilliger_of_a_triangle() {
        let basis = terwilliger(&complete(3), 0).unwrap();
        assert_eq!(basis.dimension(), 5);
        // The span is exactly {ε₀, ε_R, ε₀Jε_R, ε_Rε₀ᵀ…}: check the five
        // block matrices over the split {0} ∪ {1,2} are independent members.
        let e0 = RationalMatrix::diagonal_indicator(3, &[0]);
        let er = RationalMatrix::diagonal_indicator(3, &[1, 2]);
        let rest = [1usize, 2];
        let witnesses = [
            e0.clone(),
            er.clone(),
            RationalMatrix::ones_block(3, &[0], &rest),
            RationalMatrix::ones_block(3, &rest, &[0]),
            RationalMatrix::ones_block(3, &rest, &rest),
        ];
        for w in &witnesses {
            assert!(basis.contains(w));
        }
        let mut span = crate::exactlin::SpanBasis::new(9);
        for w in &witnesses {
            assert!(span.insert(w.to_vec()));
        }
    }

    #[test]
    fn terwilliger_of_thin_cyclic_group_is_full() {
        let basis = terwilliger(&thin_cyclic(3), 0).unwrap();
        assert_eq!(basis.dimension(), 9);
    }

    #[test]
    fn terwilliger_of_edge_wreath_triangle() {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let basis = terwilliger(&w, lab.point_index(0, 0)).unwrap();
        assert_eq!(basis.dimension(), 11);
    }

    #[test]
    fn terwilliger_needs_a_scheme() {
        let sum = crate::construct::direct_sum(&complete(2), &complete(2)).unwrap();
        assert!(matches!(
            terwilliger(&sum, 0),
            Err(Error::NotHomogeneous(_))
        ));
    }

    /// Every Terwilliger generator lies in the adjacency-matrix span of the
    /// one-point extension — the extension's coherent algebra contains the
    /// Terwilliger algebra.
    #[test]
    fn extension_algebra_contains_terwilliger_generators() {
        for (c, x) in [
            (complete(3), 0),
            (complete(4), 0),
            (pentagon(), 2),
            (thin_cyclic(4), 1),
        ] {
            let ext = one_point_extension(&c, x).unwrap();
            let adjacency = ext.adjacency_matrices();
            let ta = terwilliger(&c, x).unwrap();
            for g in ta.generators() {
                assert!(
                    crate::exactlin::span_contains(&adjacency, g)
                        .unwrap()
                        .is_some(),
                    "generator escapes the extension algebra"
                );
            }
        }
    }

    /// Adjacency algebra of the extension and the Terwilliger algebra have
    /// equal dimension for quasi-thin schemes, at every base point.
    #[test]
    fn extension_dimension_matches_terwilliger_for_quasi_thin() {
        for c in [complete(2), complete(3)] {
            for x in 0..c.order() {
                let ext = one_point_extension(&c, x).unwrap();
                let ta = terwilliger(&c, x).unwrap();
                assert_eq!(ext.rank(), ta.dimension());
            }
        }
    }

    /// The certified extension route and the plain span closure produce the
    /// same algebra (same dimension, each basis inside the other's span).
    #[test]
    fn coherent_route_agrees_with_span_closure() {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let cases = [
            (complete(2), 0),
            (complete(3), 1),
            (complete(4), 0),
            (thin_cyclic(3), 0),
            (pentagon(), 0),
            (w, lab.point_index(0, 0)),
        ];
        for (c, x0) in cases {
            let fast = terwilliger_coherent(&c, x0).unwrap();
            let slow = terwilliger(&c, x0).unwrap();
            assert_eq!(fast.dimension(), slow.dimension());
            assert!(fast.elements().iter().all(|e| slow.contains(e)));
            assert!(slow.elements().iter().all(|e| fast.contains(e)));
        }
    }

    #[test]
    fn coherent_route_exposes_the_extension() {
        let fast = terwilliger_coherent(&complete(3), 0).unwrap();
        let ext = fast.coherent_structure().expect("certified route");
        assert_eq!(ext.rank(), fast.dimension());
        assert!(matches!(fast.provenance()[0], Provenance::CoherentColor(0)));
        assert!(terwilliger(&complete(3), 0)
            .unwrap()
            .coherent_structure()
            .is_none());
    }

    /// Order-28 wreath product: far beyond what the exact span closure can
    /// reach, and the certified dimension matches the closed-form count
    /// (|T|+1)² + (|T₁|−1) + |T₂| + |T₂|² for K₂ ≀ T.
    #[test]
    fn coherent_route_scales_to_cycle_fourteen() {
        let (w, lab) = wreath(&complete(2), &crate::testutil::cycle_distance(14)).unwrap();
        let ta = terwilliger_coherent(&w, lab.point_index(0, 0)).unwrap();
        assert_eq!(ta.dimension(), 9 * 9 + 1 + 6 + 36);
        assert!(ta.coherent_structure().is_some());
    }

    #[test]
    fn corner_of_edge_wreath_triangle() {
        let (w, lab) = wreath(&complete(2), &complete(3)).unwrap();
        let corner = restriction_corner_basis(&w, &lab, 0, 0).unwrap();
        assert_eq!(corner.matrix_size(), 4);
        assert_eq!(corner.dimension(), 3);
        assert!(corner.contains(&RationalMatrix::identity(4)));
    }

    #[test]
    fn corner_over_two_point_thin_factor_is_the_base_algebra() {
        let (w, lab) = wreath(&complete(2), &thin_cyclic(2)).unwrap();
        let corner = restriction_corner_basis(&w, &lab, 0, 0).unwrap();
        assert_eq!(corner.dimension(), 2);
        let sigma = complete(2).adjacency_matrix(1).unwrap();
        assert!(corner.contains(&sigma));
        let j = RationalMatrix::identity(2).add(&sigma);
        assert_eq!(j.get(0, 1), &rat(1));
        assert!(corner.contains(&j));
    }

    #[test]
    fn corner_preconditions() {
        let one = CoherentConfiguration::from_rows(&[&[0]]).unwrap();
        let (w, lab) = wreath(&complete(3), &one).unwrap();
        assert!(matches!(
            restriction_corner_basis(&w, &lab, 0, 0),
            Err(Error::Precondition(_))
        ));
        let (w, lab) = wreath(&complete(2), &complete(4)).unwrap();
        assert!(matches!(
            restriction_corner_basis(&w, &lab, 0, 0),
            Err(Error::Precondition(_))
        ));
    }
}
