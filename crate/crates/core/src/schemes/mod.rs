//! Coherent configurations: validation, derived structure, and the
//! combinatorial operations the rest of the library is built on.
//!
//! A coherent configuration on a point set `X` is a partition of `X × X` into
//! nonempty "colors" such that (1) the diagonal is a union of colors, (2) the
//! transpose of every color is a color, and (3) for colors `s,t` and a pair
//! `(x,y)` of color `u`, the count of `z` with `(x,z) ∈ s` and `(z,y) ∈ t`
//! depends only on `(s,t,u)`. Those counts are the intersection numbers
//! `p_{st}^u`. When the diagonal is a single color the configuration is
//! homogeneous (an association scheme).

mod quasithin;

pub use quasithin::{CaseTag, QuasiThinProfile};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Axiom, Error, Result};
use crate::exactlin::{rat, RationalMatrix};

/// Dense-table cap: validation refuses configurations whose rank would make
/// the full `r³` intersection array unreasonably large.
const MAX_DENSE_RANK: usize = 512;

/// A validated coherent configuration with its derived structure.
#[derive(Clone, PartialEq, Eq)]
pub struct CoherentConfiguration {
    n: usize,
    rank: usize,
    /// Row-major color matrix, length `n²`.
    colors: Vec<u32>,
    /// `star[s]` is the color of the transposed relation.
    star: Vec<u32>,
    /// Colors that appear on the diagonal, sorted.
    diagonal_colors: Vec<u32>,
    /// Fibers ordered by their minimal point; each sorted.
    fibers: Vec<Vec<usize>>,
    fiber_of: Vec<usize>,
    /// Source/target fiber index of each color.
    source_fiber: Vec<usize>,
    target_fiber: Vec<usize>,
    /// `|x·s|` for `x` in the source fiber of `s` (constant by axiom 3).
    valencies: Vec<usize>,
    /// Full intersection table, index `(s·rank + t)·rank + u`.
    p: Vec<u32>,
}

impl CoherentConfiguration {
    /// Validates a coloring against the three axioms and derives fibers,
    /// star involution, valencies, and the full intersection table.
    ///
    /// Errors carry a concrete witness: the offending colors and points.
    pub fn validate(n: usize, colors: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("configuration needs at least one point".into()));
        }
        if colors.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} colors for order {}, got {}",
                n * n,
                n,
                colors.len()
            )));
        }
        let rank = (*colors.iter().max().expect("nonempty") + 1) as usize;
        if rank > MAX_DENSE_RANK {
            return Err(Error::Precondition(format!(
                "rank {rank} exceeds the dense intersection-table cap {MAX_DENSE_RANK}"
            )));
        }
        let mut seen = vec![false; rank];
        for &c in &colors {
            seen[c as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::AxiomViolation {
                axiom: Axiom::NonemptyColors,
                colors: vec![missing as u32],
                points: vec![],
                detail: format!("color {missing} never occurs"),
            });
        }

        let at = |x: usize, y: usize| colors[x * n + y];

        // Axiom 1: colors are either entirely on or entirely off the diagonal.
        let diag_set: BTreeSet<u32> = (0..n).map(|x| at(x, x)).collect();
        for x in 0..n {
            for y in 0..n {
                if x != y && diag_set.contains(&at(x, y)) {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::DiagonalUnion,
                        colors: vec![at(x, y)],
                        points: vec![x, y],
                        detail: format!(
                            "color {} appears on the diagonal and at off-diagonal pair ({x},{y})",
                            at(x, y)
                        ),
                    });
                }
            }
        }

        // Axiom 2: fix star by first occurrence, then verify globally.
        let mut star = vec![u32::MAX; rank];
        for x in 0..n {
            for y in 0..n {
                let s = at(x, y) as usize;
                if star[s] == u32::MAX {
                    star[s] = at(y, x);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let s = at(x, y);
                let t = at(y, x);
                if star[s as usize] != t {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::StarClosed,
                        colors: vec![s, star[s as usize], t],
                        points: vec![x, y],
                        detail: format!(
                            "transpose of color {s} is color {} elsewhere but color {t} at ({y},{x})",
                            star[s as usize]
                        ),
                    });
                }
            }
        }

        // Fibers from diagonal colors, ordered by minimal point.
        let mut fiber_of = vec![usize::MAX; n];
        let mut fibers: Vec<Vec<usize>> = Vec::new();
        let mut fiber_by_color: BTreeMap<u32, usize> = BTreeMap::new();
        for x in 0..n {
            let d = at(x, x);
            let id = *fiber_by_color.entry(d).or_insert_with(|| {
                fibers.push(Vec::new());
                fibers.len() - 1
            });
            fibers[id].push(x);
            fiber_of[x] = id;
        }

        // Axiom 3: signature of a pair = sorted run-length counts of
        // (color(x,z), color(z,y)) over z. Fix one representative signature
        // per color, then demand every pair reproduce it.
        let signature = |x: usize, y: usize| -> Vec<(u32, u32, u32)> {
            let mut pairs: Vec<(u32, u32)> = (0..n).map(|z| (at(x, z), at(z, y))).collect();
            pairs.sort_unstable();
            let mut runs: Vec<(u32, u32, u32)> = Vec::new();
            for (s, t) in pairs {
                match runs.last_mut() {
                    Some((rs, rt, c)) if *rs == s && *rt == t => *c += 1,
                    _ => runs.push((s, t, 1)),
                }
            }
            runs
        };
        let mut rep_sig: Vec<Option<Vec<(u32, u32, u32)>>> = vec![None; rank];
        let mut rep_pair: Vec<(usize, usize)> = vec![(0, 0); rank];
        for x in 0..n {
            for y in 0..n {
                let u = at(x, y) as usize;
                let sig = signature(x, y);
                match &rep_sig[u] {
                    None => {
                        rep_sig[u] = Some(sig);
                        rep_pair[u] = (x, y);
                    }
                    Some(reference) => {
                        if *reference != sig {
                            // Name one (s,t) whose count differs for the witness.
                            let (s, t) = first_signature_difference(reference, &sig);
                            return Err(Error::AxiomViolation {
                                axiom: Axiom::ConstantIntersection,
                                colors: vec![s, t, u as u32],
                                points: vec![x, y, rep_pair[u].0, rep_pair[u].1],
                                detail: format!(
                                    "count of ({s},{t})-paths over color {u} differs between pairs {:?} and ({x},{y})",
                                    rep_pair[u]
                                ),
                            });
                        }
                    }
                }
            }
        }

        let mut p = vec![0u32; rank * rank * rank];
        for (u, sig) in rep_sig.iter().enumerate() {
            for &(s, t, count) in sig.as_ref().expect("every color has a representative") {
                p[(s as usize * rank + t as usize) * rank + u] = count;
            }
        }

        // Derived per-color data. Source/target fibers are forced by axiom 3;
        // a contradiction here would mean the check above is broken.
        let mut source_fiber = vec![usize::MAX; rank];
        let mut target_fiber = vec![usize::MAX; rank];
        for x in 0..n {
            for y in 0..n {
                let s = at(x, y) as usize;
                if source_fiber[s] == usize::MAX {
                    source_fiber[s] = fiber_of[x];
                    target_fiber[s] = fiber_of[y];
                } else if source_fiber[s] != fiber_of[x] || target_fiber[s] != fiber_of[y] {
                    return Err(Error::Internal(format!(
                        "color {s} crosses fibers despite constant intersection numbers"
                    )));
                }
            }
        }
        let mut valencies = vec![0usize; rank];
        for s in 0..rank {
            let (x, _) = rep_pair[s];
            valencies[s] = (0..n).filter(|&z| at(x, z) == s as u32).count();
        }

        Ok(Self {
            n,
            rank,
            colors,
            star,
            diagonal_colors: diag_set.into_iter().collect(),
            fibers,
            fiber_of,
            source_fiber,
            target_fiber,
            valencies,
            p,
        })
    }

    /// Test/ingest helper: validate from nested rows.
    pub fn from_rows(rows: &[&[u32]]) -> Result<Self> {
        let n = rows.len();
        let mut colors = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch("ragged color matrix".into()));
            }
            colors.extend_from_slice(row);
        }
        Self::validate(n, colors)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn color(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.n + y]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn star(&self, s: u32) -> u32 {
        self.star[s as usize]
    }

    pub fn diagonal_colors(&self) -> &[u32] {
        &self.diagonal_colors
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn fiber_of(&self, x: usize) -> usize {
        self.fiber_of[x]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.diagonal_colors.len() == 1
    }

    /// The identity color, when the configuration is homogeneous.
    pub fn identity_color(&self) -> Option<u32> {
        if self.is_homogeneous() {
            Some(self.diagonal_colors[0])
        } else {
            None
        }
    }

    /// Thin: homogeneous with every valency 1.
    pub fn is_thin(&self) -> bool {
        self.is_homogeneous() && self.valencies.iter().all(|&v| v == 1)
    }

    /// One-class: homogeneous of rank 2 (identity plus a single class).
    pub fn is_one_class(&self) -> bool {
        self.is_homogeneous() && self.rank == 2
    }

    /// Quasi-thin: homogeneous with every valency 1 or 2.
    pub fn is_quasi_thin(&self) -> bool {
        self.is_homogeneous() && self.valencies.iter().all(|&v| v == 1 || v == 2)
    }

    pub fn intersection(&self, s: u32, t: u32, u: u32) -> u32 {
        self.p[(s as usize * self.rank + t as usize) * self.rank + u as usize]
    }

    /// Sparse view of the intersection numbers: entry `s·rank + t` lists the
    /// pairs `(u, p_{st}^u)` with nonzero count. Lets product loops skip the
    /// zero bulk of the dense table.
    pub fn product_support(&self) -> Vec<Vec<(u32, u32)>> {
        let mut out = vec![Vec::new(); self.rank * self.rank];
        for (st, row) in out.iter_mut().enumerate() {
            let base = st * self.rank;
            for u in 0..self.rank {
                let count = self.p[base + u];
                if count > 0 {
                    row.push((u as u32, count));
                }
            }
        }
        out
    }

    pub fn check_color(&self, s: u32) -> Result<()> {
        if (s as usize) < self.rank {
            Ok(())
        } else {
            Err(Error::ColorOutOfRange { color: s, rank: self.rank })
        }
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { point: x, order: self.n })
        }
    }

    /// The 0/1 adjacency matrix σ_s.
    pub fn adjacency_matrix(&self, s: u32) -> Result<RationalMatrix> {
        self.check_color(s)?;
        let mut m = RationalMatrix::zeros(self.n, self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.color(x, y) == s {
                    m.set(x, y, rat(1));
                }
            }
        }
        Ok(m)
    }

    /// All adjacency matrices in color order.
    pub fn adjacency_matrices(&self) -> Vec<RationalMatrix> {
        (0..self.rank as u32)
            .map(|s| self.adjacency_matrix(s).expect("color in range"))
            .collect()
    }

    /// Valency `n_s = |x·s|`. Only exposed for homogeneous configurations.
    pub fn valency(&self, s: u32) -> Result<usize> {
        self.check_color(s)?;
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous("valency requires a scheme".into()));
        }
        Ok(self.valencies[s as usize])
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    /// Support of the complex product: colors `u` with `p_{st}^u > 0`.
    pub fn complex_product(&self, s: u32, t: u32) -> Result<Vec<u32>> {
        self.check_color(s)?;
        self.check_color(t)?;
        Ok((0..self.rank as u32)
            .filter(|&u| self.intersection(s, t, u) > 0)
            .collect())
    }

    /// The set `x·s = {y : (x,y) ∈ s}`, sorted.
    pub fn point_orbit(&self, x: usize, s: u32) -> Result<Vec<usize>> {
        self.check_point(x)?;
        self.check_color(s)?;
        Ok((0..self.n).filter(|&y| self.color(x, y) == s).collect())
    }

    /// Restriction to a union of fibers. Surviving colors keep their relative
    /// order and are renumbered densely.
    pub fn restrict(&self, points: &[usize]) -> Result<Self> {
        for &x in points {
            self.check_point(x)?;
        }
        let set: BTreeSet<usize> = points.iter().copied().collect();
        for fiber in &self.fibers {
            let inside = fiber.iter().filter(|x| set.contains(x)).count();
            if inside != 0 && inside != fiber.len() {
                return Err(Error::NotFiberUnion(format!(
                    "point set splits the fiber containing {}",
                    fiber[0]
                )));
            }
        }
        let sorted: Vec<usize> = set.into_iter().collect();
        self.restrict_to_points(&sorted)
    }

    /// Restriction to an arbitrary point subset, as a configuration on the
    /// surviving pairs. Unlike `restrict`, this can fail validation: a
    /// restriction to something other than a union of fibers is only coherent
    /// for special subsets (the wreath fiber sets used in this library are).
    pub fn restrict_to_points(&self, points: &[usize]) -> Result<Self> {
        for &x in points {
            self.check_point(x)?;
        }
        if points.is_empty() {
            return Err(Error::Precondition("restriction to empty point set".into()));
        }
        let k = points.len();
        // Renumber surviving colors by first occurrence, scanning row-major.
        let mut renum: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        let mut colors = Vec::with_capacity(k * k);
        for &x in points {
            for &y in points {
                let old = self.color(x, y);
                let new = *renum.entry(old).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                });
                colors.push(new);
            }
        }
        Self::validate(k, colors)
    }

    /// Is a color set closed: contains the identity, closed under star and
    /// complex products? Homogeneous configurations only.
    pub fn is_closed_subset(&self, t_set: &[u32]) -> Result<bool> {
        let identity = self
            .identity_color()
            .ok_or_else(|| Error::NotHomogeneous("closed subsets require a scheme".into()))?;
        let set: BTreeSet<u32> = t_set.iter().copied().collect();
        if set.iter().any(|&s| s as usize >= self.rank) {
            return Err(Error::ColorOutOfRange {
                color: *set.iter().max().expect("nonempty"),
                rank: self.rank,
            });
        }
        if !set.contains(&identity) {
            return Ok(false);
        }
        for &s in &set {
            if !set.contains(&self.star(s)) {
                return Ok(false);
            }
            for &t in &set {
                for u in self.complex_product(s, t)? {
                    if !set.contains(&u) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Smallest closed subset containing `seed` (plus the identity).
    pub fn closed_subset_generate(&self, seed: &[u32]) -> Result<Vec<u32>> {
        let identity = self
            .identity_color()
            .ok_or_else(|| Error::NotHomogeneous("closed subsets require a scheme".into()))?;
        for &s in seed {
            self.check_color(s)?;
        }
        let mut set: BTreeSet<u32> = seed.iter().copied().collect();
        set.insert(identity);
        loop {
            let mut grew = false;
            let snapshot: Vec<u32> = set.iter().copied().collect();
            for &s in &snapshot {
                if set.insert(self.star(s)) {
                    grew = true;
                }
            }
            for &s in &snapshot {
                for &t in &snapshot {
                    for u in self.complex_product(s, t)? {
                        if set.insert(u) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return Ok(set.into_iter().collect());
            }
        }
    }

    /// The thin residue: the closed subset generated by all `s·s*` supports.
    /// This is the standard definition from the general theory of schemes
    /// (the source material uses it without restating it); in the quasi-thin
    /// split case it coincides with the subset `H = {1} ∪ T⊥` that the
    /// profile computes directly.
    pub fn thin_residue(&self) -> Result<Vec<u32>> {
        let mut seed = Vec::new();
        for s in 0..self.rank as u32 {
            seed.extend(self.complex_product(s, self.star(s))?);
        }
        self.closed_subset_generate(&seed)
    }

    /// Blocks `x·T` of a closed color subset, ordered by minimal point.
    pub fn quotient_classes(&self, t_set: &[u32]) -> Result<Vec<Vec<usize>>> {
        if !self.is_closed_subset(t_set)? {
            return Err(Error::NotClosed(format!("{t_set:?}")));
        }
        let set: BTreeSet<u32> = t_set.iter().copied().collect();
        let mut block_of = vec![usize::MAX; self.n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n {
            if block_of[x] != usize::MAX {
                continue;
            }
            let members: Vec<usize> =
                (0..self.n).filter(|&y| set.contains(&self.color(x, y))).collect();
            let id = blocks.len();
            for &y in &members {
                if block_of[y] != usize::MAX {
                    return Err(Error::Internal(
                        "closed subset produced overlapping blocks".into(),
                    ));
                }
                block_of[y] = id;
            }
            blocks.push(members);
        }
        Ok(blocks)
    }

    /// Points `x` with `|x·s| ≤ 1` for every color `s`.
    pub fn regular_points(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| {
                let mut counts = vec![0u32; self.rank];
                for y in 0..self.n {
                    counts[self.color(x, y) as usize] += 1;
                }
                counts.iter().all(|&c| c <= 1)
            })
            .collect()
    }

    /// Every point is regular.
    pub fn is_one_regular(&self) -> bool {
        self.regular_points().len() == self.n
    }

    /// Returns the configuration with points relabeled: new point `perm[x]`
    /// takes the role of old point `x`.
    pub fn permute_points(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::Precondition("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut colors = vec![0u32; self.n * self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                colors[perm[x] * self.n + perm[y]] = self.color(x, y);
            }
        }
        Self::validate(self.n, colors)
    }

    /// Color matrix renumbered by first occurrence, scanning row-major. Two
    /// configurations are equal up to color renaming iff these agree.
    pub fn canonical_colors(&self) -> Vec<u32> {
        let mut renum: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        self.colors
            .iter()
            .map(|&c| {
                *renum.entry(c).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                })
            })
            .collect()
    }

    /// Same points, same partition of `X × X` — colors may be numbered
    /// differently.
    pub fn same_partition(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_colors() == other.canonical_colors()
    }
}

fn first_signature_difference(
    a: &[(u32, u32, u32)],
    b: &[(u32, u32, u32)],
) -> (u32, u32) {
    let to_map = |sig: &[(u32, u32, u32)]| -> BTreeMap<(u32, u32), u32> {
        sig.iter().map(|&(s, t, c)| ((s, t), c)).collect()
    };
    let ma = to_map(a);
    let mb = to_map(b);
    for (&key, &ca) in &ma {
        if mb.get(&key) != Some(&ca) {
            return key;
        }
    }
    for (&key, _) in &mb {
        if !ma.contains_key(&key) {
            return key;
        }
    }
    (0, 0)
}

impl std::fmt::Debug for CoherentConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CoherentConfiguration(order {}, rank {})", self.n, self.rank)?;
        for x in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|y| self.color(x, y).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}
