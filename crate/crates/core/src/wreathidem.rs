//! Central primitive idempotents of wreath-product Terwilliger algebras.
//!
//! For `W = S ≀ T` with base point `(x₀, y₀)` and a second factor that is
//! thin, one-class, or quasi-thin, the Wedderburn decomposition of
//! `𝒯(W, (x₀, y₀))` has a closed form. Its central primitive idempotents
//! are the trivial one, the lifts `e ⊗ ε_{y₀}` of the nontrivial central
//! primitive idempotents of `𝒯(S, x₀)`, the lifts `e ⊗ ε_{y₀t}` of the
//! nontrivial central primitive idempotents of the adjacency algebra of
//! `S` — one batch per nonidentity color `t` of `T` — and η-idempotents
//! assembled from rank-one matrix units over the valency-2 colors.
//! [`verify_decomposition`] builds the family on a concrete instance and
//! certifies, exactly wherever the ingredients are rational, that it is the
//! central primitive partition of unity.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::algdecomp::{
    center, certify_idempotent, certify_idempotent_numeric, match_projector,
    numeric_central_primitive_idempotents, rational_reconstruct, verify_partition,
    IdempotentMember, PartitionReport, CORNER_LIMIT,
};
use crate::closure::{
    algebra_span_closure, one_point_extension, terwilliger_coherent, AlgebraBasis,
};
use crate::construct::{wreath, WreathLabeling};
use crate::error::{Error, Result};
use crate::exactlin::{kron, ratio, render_rational, ComplexMatrixF, RationalMatrix, SpanBasis};
use crate::schemes::{CaseTag, CoherentConfiguration, QuasiThinProfile};

/// Tolerance at which family members are paired with spectral-oracle
/// projectors.
const ORACLE_MATCH_TOL: f64 = 1e-6;

/// The trivial central primitive idempotent of the Terwilliger algebra of a
/// scheme at `x0`: `Σ_s n_s⁻¹ ε_s J ε_s`, one block of constant weight per
/// orbit of the base point.
pub fn trivial_idempotent(c: &CoherentConfiguration, x0: usize) -> Result<RationalMatrix> {
    c.check_point(x0)?;
    if c.identity_color().is_none() {
        return Err(Error::NotHomogeneous(
            "the trivial idempotent needs a scheme".into(),
        ));
    }
    let n = c.order();
    let mut e = RationalMatrix::zeros(n, n);
    for s in 0..c.rank() as u32 {
        let orbit = c.point_orbit(x0, s)?;
        let w = ratio(1, orbit.len() as i64);
        for &i in &orbit {
            for &j in &orbit {
                e.set(i, j, w.clone());
            }
        }
    }
    Ok(e)
}

/// A wreath product together with everything the decomposition machinery
/// keeps asking for: the labeling back to the factors, the quasi-thin
/// profile of the second factor at `y0`, and the Terwilliger algebra at the
/// flat base point.
pub struct WreathContext {
    product: CoherentConfiguration,
    labeling: WreathLabeling,
    x0: usize,
    y0: usize,
    profile: QuasiThinProfile,
    ta: AlgebraBasis,
}

impl WreathContext {
    pub fn new(
        cx: &CoherentConfiguration,
        cy: &CoherentConfiguration,
        x0: usize,
        y0: usize,
    ) -> Result<Self> {
        cx.check_point(x0)?;
        cy.check_point(y0)?;
        let (product, labeling) = wreath(cx, cy)?;
        let profile = labeling.base_y.quasi_thin_profile(y0)?;
        let ta = terwilliger_coherent(&product, labeling.point_index(x0, y0))?;
        Ok(WreathContext {
            product,
            labeling,
            x0,
            y0,
            profile,
            ta,
        })
    }

    pub fn product(&self) -> &CoherentConfiguration {
        &self.product
    }

    pub fn labeling(&self) -> &WreathLabeling {
        &self.labeling
    }

    pub fn profile(&self) -> &QuasiThinProfile {
        &self.profile
    }

    pub fn terwilliger(&self) -> &AlgebraBasis {
        &self.ta
    }

    pub fn base_point(&self) -> usize {
        self.labeling.point_index(self.x0, self.y0)
    }

    /// `G_{t,t'} = (2|X|)⁻¹ J_X ⊗ (e_a − e_b)(e_{a'} − e_{b'})ᵀ` for the
    /// valency-2 orbits `y₀t = {a, b}` and `y₀t' = {a', b'}`. The endpoint
    /// pairing must be chosen the same way for every color or the unit
    /// relations break; orbits come back sorted, which fixes it.
    fn g_single(&self, t: u32, tp: u32) -> Result<RationalMatrix> {
        let by = &self.labeling.base_y;
        let o1 = by.point_orbit(self.y0, t)?;
        let o2 = by.point_orbit(self.y0, tp)?;
        if o1.len() != 2 || o2.len() != 2 {
            return Err(Error::Precondition(format!(
                "colors {t} and {tp} must have valency 2 at the base point"
            )));
        }
        let nx = self.labeling.base_x.order();
        let ny = by.order();
        let w = ratio(1, 2 * nx as i64);
        let neg = -w.clone();
        let mut g = RationalMatrix::zeros(nx * ny, nx * ny);
        for x in 0..nx {
            for xp in 0..nx {
                g.set(x * ny + o1[0], xp * ny + o2[0], w.clone());
                g.set(x * ny + o1[1], xp * ny + o2[1], w.clone());
                g.set(x * ny + o1[0], xp * ny + o2[1], neg.clone());
                g.set(x * ny + o1[1], xp * ny + o2[0], neg.clone());
            }
        }
        Ok(g)
    }

    fn eta_sum(&self, ts: &[u32]) -> Result<RationalMatrix> {
        let n = self.labeling.order();
        let mut e = RationalMatrix::zeros(n, n);
        for &t in ts {
            e = e.add(&self.g_single(t, t)?);
        }
        Ok(e)
    }

    /// The η-idempotent of the fiber route: for a one-class second factor
    /// with orbit `w = Y ∖ {y₀}`, `|X|⁻¹ J_X ⊗ (ε_w − |w|⁻¹ 1_w)`. A thin
    /// second factor has only singleton orbits and contributes nothing.
    fn per_fiber_etas(&self) -> Result<Vec<(String, RationalMatrix)>> {
        let by = &self.labeling.base_y;
        if !by.is_one_class() {
            return Ok(Vec::new());
        }
        let identity = self.labeling.y_identity;
        let t = (0..by.rank() as u32)
            .find(|&t| t != identity)
            .ok_or_else(|| Error::Internal("a one-class scheme lost its nonidentity color".into()))?;
        let orbit = by.point_orbit(self.y0, t)?;
        if orbit.len() < 2 {
            return Ok(Vec::new());
        }
        let nx = self.labeling.base_x.order();
        let ny = by.order();
        let m = orbit.len() as i64;
        let diag = ratio(m - 1, nx as i64 * m);
        let off = -ratio(1, nx as i64 * m);
        let n = self.labeling.order();
        let mut e = RationalMatrix::zeros(n, n);
        for x in 0..nx {
            for xp in 0..nx {
                for &y in &orbit {
                    for &yp in &orbit {
                        let v = if y == yp { diag.clone() } else { off.clone() };
                        e.set(x * ny + y, xp * ny + yp, v);
                    }
                }
            }
        }
        Ok(vec![("eta".to_string(), e)])
    }
}

/// Scope of a matrix-unit family: every valency-2 color at once, or the
/// valency-2 orbits of a single class of the split case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GScope {
    AllT2,
    Class(usize),
}

/// Rank-one matrix units over a set of valency-2 colors, verified on
/// construction: linearly independent, multiplying by
/// `G_{t,t'} · G_{t'',t'''} = δ_{t',t''} G_{t,t'''}`, and spanning a
/// two-sided ideal of the Terwilliger algebra.
#[derive(Debug, Clone)]
pub struct GMatrixFamily {
    pub scope: GScope,
    pub colors: Vec<u32>,
    /// `matrices[i][j] = G_{colors[i], colors[j]}`.
    pub matrices: Vec<Vec<RationalMatrix>>,
}

pub fn g_matrices(ctx: &WreathContext, scope: GScope) -> Result<GMatrixFamily> {
    let profile = &ctx.profile;
    let colors: Vec<u32> = match scope {
        GScope::AllT2 => {
            if !matches!(profile.case_tag, CaseTag::Case1 | CaseTag::Case3) {
                return Err(Error::Precondition(
                    "the full matrix-unit family forms an ideal only in the single-class cases"
                        .into(),
                ));
            }
            profile.t2.clone()
        }
        GScope::Class(i) => {
            if profile.case_tag != CaseTag::Case2 {
                return Err(Error::Precondition(
                    "per-class matrix units exist only in the split case".into(),
                ));
            }
            let ui = profile
                .ui
                .as_ref()
                .ok_or_else(|| Error::Internal("split case carries no class orbit sets".into()))?;
            if i >= ui.len() {
                return Err(Error::Precondition(format!(
                    "class {i} out of range ({} classes)",
                    ui.len()
                )));
            }
            if ui[i].is_empty() {
                return Err(Error::Precondition(format!(
                    "class {i} has no valency-2 orbits"
                )));
            }
            ui[i].clone()
        }
    };

    let m = colors.len();
    let mut matrices = Vec::with_capacity(m);
    for &t in &colors {
        let mut row = Vec::with_capacity(m);
        for &tp in &colors {
            row.push(ctx.g_single(t, tp)?);
        }
        matrices.push(row);
    }

    let n = ctx.product.order();
    let mut span = SpanBasis::new(n * n);
    for row in &matrices {
        for g in row {
            if !span.insert(g.to_vec()) {
                return Err(Error::Internal("matrix units are linearly dependent".into()));
            }
        }
    }
    let zero = RationalMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let prod = matrices[i][j].mul(&matrices[k][l]);
                    let expected = if j == k { &matrices[i][l] } else { &zero };
                    if prod != *expected {
                        return Err(Error::Internal(format!(
                            "product of matrix units ({i},{j})·({k},{l}) violates the unit relations"
                        )));
                    }
                }
            }
        }
    }
    for b in ctx.ta.elements() {
        for row in &matrices {
            for g in row {
                if !span.contains(&b.mul(g).to_vec()) || !span.contains(&g.mul(b).to_vec()) {
                    return Err(Error::Internal(
                        "matrix-unit span is not a two-sided ideal of the Terwilliger algebra"
                            .into(),
                    ));
                }
            }
        }
    }
    Ok(GMatrixFamily {
        scope,
        colors,
        matrices,
    })
}

/// The η-idempotents of the decomposition: one sum of diagonal matrix units
/// over all valency-2 colors in the single-class cases, one sum per class
/// away from the base class in the split case.
pub fn eta_idempotents(ctx: &WreathContext) -> Result<Vec<(String, RationalMatrix)>> {
    let profile = &ctx.profile;
    match profile.case_tag {
        CaseTag::Case1 | CaseTag::Case3 => {
            Ok(vec![("eta".to_string(), ctx.eta_sum(&profile.t2)?)])
        }
        CaseTag::Case2 => {
            let ui = profile
                .ui
                .as_ref()
                .ok_or_else(|| Error::Internal("split case carries no class orbit sets".into()))?;
            let i0 = profile
                .i0
                .ok_or_else(|| Error::Internal("split case carries no base class".into()))?;
            let mut out = Vec::new();
            for (i, u) in ui.iter().enumerate() {
                if i == i0 || u.is_empty() {
                    continue;
                }
                out.push((format!("eta:{i}"), ctx.eta_sum(u)?));
            }
            Ok(out)
        }
        CaseTag::NotQuasiThin | CaseTag::TperpEmpty => Err(Error::Precondition(
            "η-idempotents need a quasi-thin second factor with valency-2 colors".into(),
        )),
    }
}

/// One basicness check between two extension fibers: whether all of
/// `Δ × Γ` carries a single color.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberPairRow {
    pub delta: Vec<usize>,
    pub gamma: Vec<usize>,
    pub basic: bool,
    /// The value the trichotomy predicts.
    pub asserted: bool,
    pub agrees: bool,
}

/// Basicness of fiber pairs in the one-point extension, checked against the
/// case of the trichotomy: pairs of valency-2 fibers are never basic in the
/// single-class cases, while distinct-class pairs always are in the split
/// case.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberPairReport {
    pub case_tag: CaseTag,
    pub rows: Vec<FiberPairRow>,
    pub pass: bool,
}

pub fn fiber_pair_membership(cy: &CoherentConfiguration, y0: usize) -> Result<FiberPairReport> {
    let profile = cy.quasi_thin_profile(y0)?;
    let ext = one_point_extension(cy, y0)?;
    let basic = |d: &[usize], g: &[usize]| {
        let first = ext.color(d[0], g[0]);
        d.iter()
            .all(|&p| g.iter().all(|&q| ext.color(p, q) == first))
    };
    let mut rows = Vec::new();
    match profile.case_tag {
        CaseTag::Case1 | CaseTag::Case3 => {
            let pairs: Vec<&Vec<usize>> =
                ext.fibers().iter().filter(|f| f.len() == 2).collect();
            for d in &pairs {
                for g in &pairs {
                    let b = basic(d, g);
                    rows.push(FiberPairRow {
                        delta: (*d).clone(),
                        gamma: (*g).clone(),
                        basic: b,
                        asserted: false,
                        agrees: !b,
                    });
                }
            }
        }
        CaseTag::Case2 => {
            let blocks = profile
                .blocks
                .as_ref()
                .ok_or_else(|| Error::Internal("split case carries no class blocks".into()))?;
            let class_of =
                |f: &[usize]| blocks.iter().position(|b| f.iter().all(|p| b.contains(p)));
            for d in ext.fibers() {
                for g in ext.fibers() {
                    let (ci, cj) = match (class_of(d), class_of(g)) {
                        (Some(ci), Some(cj)) => (ci, cj),
                        _ => {
                            return Err(Error::Internal(
                                "an extension fiber straddles two classes".into(),
                            ))
                        }
                    };
                    if ci == cj {
                        continue;
                    }
                    let b = basic(d, g);
                    rows.push(FiberPairRow {
                        delta: d.clone(),
                        gamma: g.clone(),
                        basic: b,
                        asserted: true,
                        agrees: b,
                    });
                }
            }
        }
        CaseTag::NotQuasiThin | CaseTag::TperpEmpty => {
            return Err(Error::Precondition(
                "fiber-pair membership needs a quasi-thin scheme with valency-2 colors".into(),
            ));
        }
    }
    Ok(FiberPairReport {
        case_tag: profile.case_tag,
        pass: rows.iter().all(|r| r.agrees),
        rows,
    })
}

/// The nontrivial central primitive idempotents of `a`, in spectral-oracle
/// order. Projectors that admit a rational reconstruction are carried
/// exactly, the rest stay numeric; either way the full family (trivial
/// member included) must certify as a partition of unity before anything is
/// returned, so a missed reconstruction degrades precision, not
/// correctness.
fn cpi_set(
    a: &AlgebraBasis,
    trivial: &RationalMatrix,
    max_den: i64,
    tol: f64,
) -> Result<Vec<IdempotentMember>> {
    let zdim = center(a)?.dimension();
    let oracle = numeric_central_primitive_idempotents(a, tol)?;
    if oracle.len() != zdim {
        return Err(Error::Internal(format!(
            "spectral oracle produced {} projectors for a center of dimension {zdim}",
            oracle.len()
        )));
    }
    let mut members = Vec::with_capacity(zdim);
    for p in &oracle {
        members.push(match rational_reconstruct(p, max_den) {
            Some(r) if a.contains(&r) && r.mul(&r) == r => IdempotentMember::Exact(r),
            _ => IdempotentMember::Numeric(p.clone()),
        });
    }
    let partition = verify_partition(&members, a, tol)?;
    if !partition.pass {
        return Err(Error::Internal(format!(
            "spectral projector family failed certification: {}",
            partition.witness.unwrap_or_default()
        )));
    }
    let trivial_f = ComplexMatrixF::from_rational(trivial);
    let mut at = None;
    for (i, m) in members.iter().enumerate() {
        let hit = match m {
            IdempotentMember::Exact(r) => r == trivial,
            IdempotentMember::Numeric(c) => c.sup_distance(&trivial_f) <= ORACLE_MATCH_TOL,
        };
        if hit {
            if at.is_some() {
                return Err(Error::Internal(
                    "two projectors match the trivial idempotent".into(),
                ));
            }
            at = Some(i);
        }
    }
    let at = at.ok_or_else(|| {
        Error::Internal("no projector matches the trivial idempotent".into())
    })?;
    members.remove(at);
    Ok(members)
}

/// `e ↦ e ⊗ ε_w` under the flat labeling `(x, y) ↦ x·|Y| + y`.
fn lift_member(member: &IdempotentMember, ny: usize, ys: &[usize]) -> IdempotentMember {
    match member {
        IdempotentMember::Exact(e) => {
            IdempotentMember::Exact(kron(e, &RationalMatrix::diagonal_indicator(ny, ys)))
        }
        IdempotentMember::Numeric(c) => {
            let mut d = ComplexMatrixF::zeros(ny, ny);
            for &y in ys {
                d.set(y, y, Complex64::new(1.0, 0.0));
            }
            IdempotentMember::Numeric(c.kron(&d))
        }
    }
}

/// How many members of each kind the family has, against the dimension of
/// the center it must exhaust.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountLedger {
    pub trivial: usize,
    pub tilde: usize,
    pub bar: usize,
    pub hat: usize,
    pub eta: usize,
    pub total: usize,
    pub center_dimension: usize,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyMemberReport {
    pub label: String,
    pub exact: bool,
    pub idempotent: bool,
    pub central: bool,
    pub primitive: bool,
    /// Rendered trace, for exact members.
    pub trace: Option<String>,
    pub oracle_match: bool,
    pub oracle_distance: f64,
}

/// Everything [`verify_decomposition`] established, pass or fail. A
/// mathematical failure lands in `pass`/`failure` with the first witness;
/// errors are reserved for unusable input and infrastructure trouble.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionReport {
    pub pass: bool,
    pub order: usize,
    pub rank: usize,
    pub base_point: usize,
    pub case_tag: CaseTag,
    /// Construction routes that apply: `per_fiber`, `eta`, or both.
    pub paths: Vec<String>,
    pub terwilliger_dimension: usize,
    pub center_dimension: usize,
    pub count_ledger: CountLedger,
    pub family: Vec<FamilyMemberReport>,
    pub partition_pass: bool,
    pub partition_exact: bool,
    pub partition_witness: Option<String>,
    pub oracle_agreement: bool,
    /// Whether both routes produced the same family, when both apply.
    pub cross_path_agreement: Option<bool>,
    pub tolerance: f64,
    pub runtime_ms: u64,
    pub failure: Option<String>,
}

/// Builds the closed-form family of central primitive idempotents for
/// `𝒯(S ≀ T, (x₀, y₀))` and certifies it: every member is an idempotent,
/// central, and primitive; the members are pairwise orthogonal and sum to
/// the identity; their count exhausts the center; and each one matches a
/// distinct spectral-oracle projector. When the second factor is both
/// one-class and quasi-thin the fiber and η routes are built independently
/// and compared.
///
/// All checks on rational members run in exact arithmetic; members whose
/// ingredients are irrational (a factor algebra with complex character
/// values) are checked numerically at `tol`.
pub fn verify_decomposition(
    cx: &CoherentConfiguration,
    cy: &CoherentConfiguration,
    x0: usize,
    y0: usize,
    tol: f64,
) -> Result<DecompositionReport> {
    let start = Instant::now();
    let ctx = WreathContext::new(cx, cy, x0, y0)?;
    let by = &ctx.labeling.base_y;
    let fiber_route = by.is_thin() || by.is_one_class();
    let eta_route = matches!(
        ctx.profile.case_tag,
        CaseTag::Case1 | CaseTag::Case2 | CaseTag::Case3
    );
    if !fiber_route && !eta_route {
        return Err(Error::Precondition(
            "the second factor must be thin, one-class, or quasi-thin for the closed-form family"
                .into(),
        ));
    }
    let mut paths = Vec::new();
    if fiber_route {
        paths.push("per_fiber".to_string());
    }
    if eta_route {
        paths.push("eta".to_string());
    }

    let nx = ctx.labeling.base_x.order();
    let ny = by.order();
    let max_den = 4 * (nx as i64) * (nx as i64);

    let tx = terwilliger_coherent(&ctx.labeling.base_x, x0)?;
    let trivial_x = trivial_idempotent(&ctx.labeling.base_x, x0)?;
    let tilde_cpis = cpi_set(&tx, &trivial_x, max_den, tol)?;

    let ax = algebra_span_closure(&ctx.labeling.base_x.adjacency_matrices())?;
    let trivial_adj = RationalMatrix::ones(nx, nx).scale(&ratio(1, nx as i64));
    let adj_cpis = cpi_set(&ax, &trivial_adj, max_den, tol)?;

    let mut family: Vec<(String, IdempotentMember)> = Vec::new();
    family.push((
        "trivial".to_string(),
        IdempotentMember::Exact(trivial_idempotent(&ctx.product, ctx.base_point())?),
    ));
    for (k, m) in tilde_cpis.iter().enumerate() {
        family.push((format!("tilde:{k}"), lift_member(m, ny, &[y0])));
    }
    for t in 0..by.rank() as u32 {
        if t == ctx.labeling.y_identity {
            continue;
        }
        let orbit = by.point_orbit(y0, t)?;
        let prefix = if by.valency(t)? == 1 { "bar" } else { "hat" };
        for (k, m) in adj_cpis.iter().enumerate() {
            family.push((format!("{prefix}:{t}:{k}"), lift_member(m, ny, &orbit)));
        }
    }
    let etas = if eta_route {
        eta_idempotents(&ctx)?
    } else {
        ctx.per_fiber_etas()?
    };
    let cross_path_agreement = if fiber_route && eta_route {
        Some(ctx.per_fiber_etas()? == etas)
    } else {
        None
    };
    for (label, e) in &etas {
        family.push((label.clone(), IdempotentMember::Exact(e.clone())));
    }

    let ta = &ctx.ta;
    let oracle = numeric_central_primitive_idempotents(ta, tol)?;
    let members: Vec<IdempotentMember> = family.iter().map(|(_, m)| m.clone()).collect();
    let partition = match verify_partition(&members, ta, tol) {
        Ok(p) => p,
        Err(Error::NotInAlgebra(witness)) => PartitionReport {
            pass: false,
            exact: members.iter().all(IdempotentMember::is_exact),
            witness: Some(witness),
        },
        Err(e) => return Err(e),
    };
    let zdim = center(ta)?.dimension();

    let n = ctx.product.order();
    let mut failure: Option<String> = None;
    let mut reports = Vec::new();
    let mut matched = Vec::new();
    for (label, member) in &family {
        let (exact, idempotent, central, primitive, trace) = match member {
            IdempotentMember::Exact(e) => {
                let trace = Some(render_rational(&e.trace()));
                if n <= CORNER_LIMIT {
                    match certify_idempotent(e, ta, label) {
                        Ok(cert) => (true, cert.idempotent, cert.central, cert.primitive, trace),
                        Err(Error::NotInAlgebra(witness)) => {
                            if failure.is_none() {
                                failure = Some(witness);
                            }
                            (true, false, false, false, trace)
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    // Member-by-member corner checks are no longer viable at
                    // this size; the partition certificate carries exactly
                    // the same claims through the counting argument.
                    (true, partition.pass, partition.pass, partition.pass, trace)
                }
            }
            IdempotentMember::Numeric(c) => {
                let cert = certify_idempotent_numeric(c, ta, &oracle, label, tol);
                (false, cert.idempotent, cert.central, cert.primitive, None)
            }
        };
        let mc = member.to_complex();
        let hit = match_projector(&mc, &oracle, ORACLE_MATCH_TOL);
        let oracle_distance = match hit {
            Some(i) => mc.sup_distance(&oracle[i]),
            None => oracle
                .iter()
                .map(|p| p.sup_distance(&mc))
                .fold(f64::INFINITY, f64::min),
        };
        matched.push(hit);
        if !(idempotent && central && primitive) && failure.is_none() {
            failure = Some(format!(
                "family member {label} failed certification \
                 (idempotent: {idempotent}, central: {central}, primitive: {primitive})"
            ));
        }
        reports.push(FamilyMemberReport {
            label: label.clone(),
            exact,
            idempotent,
            central,
            primitive,
            trace,
            oracle_match: hit.is_some(),
            oracle_distance,
        });
    }

    let mut hit_indices: Vec<usize> = matched.iter().flatten().copied().collect();
    hit_indices.sort_unstable();
    hit_indices.dedup();
    let oracle_agreement = matched.iter().all(Option::is_some)
        && hit_indices.len() == family.len()
        && family.len() == oracle.len();

    let count = |prefix: &str| {
        reports
            .iter()
            .filter(|r| r.label == prefix || r.label.starts_with(&format!("{prefix}:")))
            .count()
    };
    let ledger = CountLedger {
        trivial: count("trivial"),
        tilde: count("tilde"),
        bar: count("bar"),
        hat: count("hat"),
        eta: count("eta"),
        total: reports.len(),
        center_dimension: zdim,
        matches: reports.len() == zdim,
    };

    if !partition.pass && failure.is_none() {
        failure = partition.witness.clone();
    }
    if !ledger.matches && failure.is_none() {
        failure = Some(format!(
            "family has {} members but the center has dimension {zdim}",
            ledger.total
        ));
    }
    if !oracle_agreement && failure.is_none() {
        failure = Some("spectral-oracle projectors do not match the family bijectively".into());
    }
    if cross_path_agreement == Some(false) && failure.is_none() {
        failure = Some("the per-fiber and η routes produced different families".into());
    }

    let pass = reports
        .iter()
        .all(|r| r.idempotent && r.central && r.primitive)
        && partition.pass
        && ledger.matches
        && oracle_agreement
        && cross_path_agreement.unwrap_or(true);

    Ok(DecompositionReport {
        pass,
        order: n,
        rank: ctx.product.rank(),
        base_point: ctx.base_point(),
        case_tag: ctx.profile.case_tag,
        paths,
        terwilliger_dimension: ta.dimension(),
        center_dimension: zdim,
        count_ledger: ledger,
        family: reports,
        partition_pass: partition.pass,
        partition_exact: partition.exact,
        partition_witness: partition.witness,
        oracle_agreement,
        cross_path_agreement,
        tolerance: tol,
        runtime_ms: start.elapsed().as_millis() as u64,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::direct_product;
    use crate::exactlin::rat;
    use crate::testutil::{complete, cycle_distance, thin_cyclic};

    fn q2() -> CoherentConfiguration {
        wreath(&complete(2), &thin_cyclic(2)).unwrap().0
    }

    fn labels(report: &DecompositionReport) -> Vec<&str> {
        report.family.iter().map(|m| m.label.as_str()).collect()
    }

    #[test]
    fn trivial_idempotent_matches_the_orbit_formula() {
        assert_eq!(
            trivial_idempotent(&complete(2), 0).unwrap(),
            RationalMatrix::identity(2)
        );
        let expected = RationalMatrix::diagonal_indicator(3, &[0])
            .add(&RationalMatrix::ones_block(3, &[1, 2], &[1, 2]).scale(&ratio(1, 2)));
        let e = trivial_idempotent(&complete(3), 0).unwrap();
        assert_eq!(e, expected);
        assert_eq!(e.mul(&e), e);
    }

    #[test]
    fn context_restricts_to_the_factors() {
        let ctx = WreathContext::new(&complete(2), &complete(3), 0, 0).unwrap();
        assert_eq!(ctx.product().order(), 6);
        assert_eq!(ctx.product().rank(), 3);
        assert_eq!(ctx.base_point(), 0);
        assert_eq!(ctx.profile().case_tag, CaseTag::Case1);
        assert_eq!(ctx.terwilliger().dimension(), 11);

        let x_slice = ctx.product().restrict_to_points(&[0, 3]).unwrap();
        assert!(x_slice.same_partition(&complete(2)));
        let y_slice = ctx.product().restrict_to_points(&[0, 1, 2]).unwrap();
        assert!(y_slice.same_partition(&complete(3)));
    }

    #[test]
    fn matrix_units_satisfy_the_unit_relations() {
        let ctx = WreathContext::new(&complete(2), &cycle_distance(5), 0, 0).unwrap();
        let fam = g_matrices(&ctx, GScope::AllT2).unwrap();
        assert_eq!(fam.colors, vec![1, 2]);
        assert_eq!(fam.matrices.len(), 2);
        assert_eq!(fam.matrices[0].len(), 2);
    }

    #[test]
    fn matrix_unit_scopes_follow_the_trichotomy() {
        let split = WreathContext::new(&complete(2), &q2(), 0, 0).unwrap();
        assert!(matches!(
            g_matrices(&split, GScope::AllT2),
            Err(Error::Precondition(_))
        ));
        let fam = g_matrices(&split, GScope::Class(1)).unwrap();
        assert_eq!(fam.colors.len(), 1);
        assert!(matches!(
            g_matrices(&split, GScope::Class(0)),
            Err(Error::Precondition(_))
        ));

        let single = WreathContext::new(&complete(2), &complete(3), 0, 0).unwrap();
        assert!(matches!(
            g_matrices(&single, GScope::Class(0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn eta_is_the_sum_of_diagonal_matrix_units() {
        let ctx = WreathContext::new(&complete(2), &cycle_distance(5), 0, 0).unwrap();
        let fam = g_matrices(&ctx, GScope::AllT2).unwrap();
        let etas = eta_idempotents(&ctx).unwrap();
        assert_eq!(etas.len(), 1);
        assert_eq!(etas[0].0, "eta");
        let e = &etas[0].1;
        assert_eq!(*e, fam.matrices[0][0].add(&fam.matrices[1][1]));
        assert_eq!(e.mul(e), *e);
        assert_eq!(e.trace(), rat(2));
    }

    #[test]
    fn split_case_eta_follows_the_classes() {
        let ctx = WreathContext::new(&complete(2), &q2(), 0, 0).unwrap();
        let etas = eta_idempotents(&ctx).unwrap();
        assert_eq!(etas.len(), 1);
        assert_eq!(etas[0].0, "eta:1");
        let e = &etas[0].1;
        assert_eq!(e.mul(e), *e);
        assert_eq!(e.trace(), rat(1));
    }

    #[test]
    fn fiber_pairs_follow_the_trichotomy() {
        let triangle = fiber_pair_membership(&complete(3), 0).unwrap();
        assert_eq!(triangle.case_tag, CaseTag::Case1);
        assert_eq!(triangle.rows.len(), 1);
        assert!(triangle.rows.iter().all(|r| !r.basic));
        assert!(triangle.pass);

        let split = fiber_pair_membership(&q2(), 0).unwrap();
        assert_eq!(split.case_tag, CaseTag::Case2);
        assert_eq!(split.rows.len(), 4);
        assert!(split.rows.iter().all(|r| r.basic));
        assert!(split.pass);

        let pentagon = fiber_pair_membership(&cycle_distance(5), 0).unwrap();
        assert_eq!(pentagon.case_tag, CaseTag::Case3);
        assert_eq!(pentagon.rows.len(), 4);
        assert!(pentagon.pass);

        assert!(matches!(
            fiber_pair_membership(&complete(4), 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            fiber_pair_membership(&thin_cyclic(3), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn triangle_wreath_decomposition_passes() {
        let report = verify_decomposition(&complete(2), &complete(3), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.case_tag, CaseTag::Case1);
        assert_eq!(report.paths, vec!["per_fiber", "eta"]);
        assert_eq!(labels(&report), vec!["trivial", "hat:1:0", "eta"]);
        let traces: Vec<_> = report
            .family
            .iter()
            .map(|m| m.trace.as_deref().unwrap())
            .collect();
        assert_eq!(traces, vec!["3/1", "2/1", "1/1"]);
        assert_eq!(report.center_dimension, 3);
        assert_eq!(report.terwilliger_dimension, 11);
        assert!(report.partition_exact);
        assert_eq!(report.cross_path_agreement, Some(true));
        assert!(report.oracle_agreement);
        assert!(report.family.iter().all(|m| m.oracle_distance <= 1e-6));
    }

    #[test]
    fn split_case_decomposition_passes() {
        let report = verify_decomposition(&complete(2), &q2(), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.case_tag, CaseTag::Case2);
        assert_eq!(report.paths, vec!["eta"]);
        assert_eq!(
            labels(&report),
            vec!["trivial", "bar:1:0", "hat:2:0", "eta:1"]
        );
        assert_eq!(report.terwilliger_dimension, 19);
        assert_eq!(report.center_dimension, 4);
        assert!(report.partition_exact);
        assert_eq!(report.cross_path_agreement, None);
    }

    #[test]
    fn mixed_exact_numeric_decomposition_passes() {
        let report = verify_decomposition(&thin_cyclic(3), &complete(3), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(
            labels(&report),
            vec!["trivial", "hat:1:0", "hat:1:1", "eta"]
        );
        let exact: Vec<bool> = report.family.iter().map(|m| m.exact).collect();
        assert_eq!(exact, vec![true, false, false, true]);
        assert!(!report.partition_exact);
        assert!(report.oracle_agreement);
        assert_eq!(report.count_ledger.hat, 2);
    }

    #[test]
    fn thin_second_factor_uses_the_fiber_route() {
        let report = verify_decomposition(&complete(2), &thin_cyclic(3), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.case_tag, CaseTag::TperpEmpty);
        assert_eq!(report.paths, vec!["per_fiber"]);
        assert_eq!(labels(&report), vec!["trivial", "bar:1:0", "bar:2:0"]);
        assert_eq!(report.count_ledger.eta, 0);
        assert_eq!(report.center_dimension, 3);
        assert!(report.partition_exact);
    }

    #[test]
    fn one_class_beyond_quasi_thin_still_decomposes() {
        let report = verify_decomposition(&complete(2), &complete(4), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.case_tag, CaseTag::NotQuasiThin);
        assert_eq!(report.paths, vec!["per_fiber"]);
        assert_eq!(labels(&report), vec!["trivial", "hat:1:0", "eta"]);
        assert_eq!(report.center_dimension, 3);
    }

    #[test]
    fn point_first_factor_reduces_to_the_second() {
        let report = verify_decomposition(&complete(1), &complete(3), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(labels(&report), vec!["trivial", "eta"]);
        assert_eq!(report.center_dimension, 2);
        assert_eq!(report.cross_path_agreement, Some(true));
    }

    #[test]
    fn rejects_an_ineligible_second_factor() {
        let square = direct_product(&complete(3), &complete(3)).unwrap();
        assert!(matches!(
            verify_decomposition(&complete(2), &square, 0, 0, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn large_even_cycle_decomposition_is_certified() {
        let report =
            verify_decomposition(&complete(2), &cycle_distance(14), 0, 0, 1e-9).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.case_tag, CaseTag::Case3);
        assert_eq!(report.order, 28);
        assert_eq!(report.terwilliger_dimension, 124);
        let ledger = &report.count_ledger;
        assert_eq!(
            (ledger.trivial, ledger.tilde, ledger.bar, ledger.hat, ledger.eta),
            (1, 0, 1, 6, 1)
        );
        assert_eq!(report.center_dimension, 9);
        assert!(report.partition_exact);
        assert!(report.oracle_agreement);
    }
}
