//! Quasi-thin structure: the valency-1/valency-2 split, the orthogonality
//! map on valency-2 colors, and the trichotomy that drives the idempotent
//! construction for wreath products.
//!
//! For a quasi-thin scheme every valency-2 color `t` satisfies
//! `t·t* = {1, t⊥}` for a unique non-identity color `t⊥`. Writing
//! `T⊥ = {t⊥ : t ∈ T₂}`, exactly one of three things happens:
//! `T⊥` is a single valency-2 color (Case1), a single valency-1 color
//! (Case2), or has at least two elements (Case3). In Case2 the closed subset
//! `H = {1} ∪ T⊥` is the thin residue and the quotient blocks of `H` group
//! into classes: two blocks are related when some color meets their product
//! in a proper subset (equivalently, the block product is not a single
//! color class). The classes partition the point set into the `Y_i` below.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::CoherentConfiguration;
use crate::error::{Error, Result};

/// Outcome of the quasi-thin trichotomy, with the two degenerate outcomes
/// encoded rather than reported as errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `|T⊥| = 1` and the unique orthogonal color has valency 2.
    Case1,
    /// `|T⊥| = 1` and the unique orthogonal color has valency 1.
    Case2,
    /// `|T⊥| ≥ 2`.
    Case3,
    /// Some valency exceeds 2.
    NotQuasiThin,
    /// No valency-2 colors at all (the scheme is thin), so `T⊥ = ∅`.
    TperpEmpty,
}

/// Structural report of a homogeneous scheme relative to a base point.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuasiThinProfile {
    pub y0: usize,
    /// Valency-1 colors, identity included.
    pub t1: Vec<u32>,
    /// Valency-2 colors.
    pub t2: Vec<u32>,
    /// `t ↦ t⊥` for `t ∈ T₂`.
    pub orthogonal: BTreeMap<u32, u32>,
    /// Sorted distinct orthogonal colors.
    pub tperp: Vec<u32>,
    pub case_tag: CaseTag,
    /// Case2 only: the thin residue `{1} ∪ T⊥`.
    pub h: Option<Vec<u32>>,
    /// Case2 only: quotient blocks of `H`, ordered by minimal point.
    pub h_blocks: Option<Vec<Vec<usize>>>,
    /// Case2 only: classes as lists of `h_blocks` indices.
    pub classes: Option<Vec<Vec<usize>>>,
    /// Case2 only: the point sets `Y_i`, one per class.
    pub blocks: Option<Vec<Vec<usize>>>,
    /// Case2 only: index of the class whose block contains `y0`.
    pub i0: Option<usize>,
    /// Case2 only: `U_i = {t ∈ T₂ : y0·t ⊆ Y_i}` per class.
    pub ui: Option<Vec<Vec<u32>>>,
}

impl CoherentConfiguration {
    /// Computes the quasi-thin profile at base point `y0`.
    ///
    /// Degenerate outcomes (a valency above 2, or no valency-2 colors) are
    /// reported through `case_tag`, not as errors.
    pub fn quasi_thin_profile(&self, y0: usize) -> Result<QuasiThinProfile> {
        if y0 >= self.order() {
            return Err(Error::PointOutOfRange { point: y0, order: self.order() });
        }
        let identity = self
            .identity_color()
            .ok_or_else(|| Error::NotHomogeneous("quasi-thin profile requires a scheme".into()))?;

        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        let mut too_thick = false;
        for s in 0..self.rank() as u32 {
            match self.valency(s)? {
                1 => t1.push(s),
                2 => t2.push(s),
                _ => too_thick = true,
            }
        }
        let mut profile = QuasiThinProfile {
            y0,
            t1,
            t2,
            orthogonal: BTreeMap::new(),
            tperp: Vec::new(),
            case_tag: CaseTag::NotQuasiThin,
            h: None,
            h_blocks: None,
            classes: None,
            blocks: None,
            i0: None,
            ui: None,
        };
        if too_thick {
            return Ok(profile);
        }
        if profile.t2.is_empty() {
            profile.case_tag = CaseTag::TperpEmpty;
            return Ok(profile);
        }

        for &t in &profile.t2 {
            let support = self.complex_product(t, self.star(t))?;
            let others: Vec<u32> = support.into_iter().filter(|&u| u != identity).collect();
            if others.len() != 1 {
                return Err(Error::Internal(format!(
                    "valency-2 color {t} has t·t* support {others:?} beyond the identity; \
                     expected exactly one orthogonal color"
                )));
            }
            profile.orthogonal.insert(t, others[0]);
        }
        let tperp: BTreeSet<u32> = profile.orthogonal.values().copied().collect();
        profile.tperp = tperp.iter().copied().collect();

        if profile.tperp.len() >= 2 {
            profile.case_tag = CaseTag::Case3;
            return Ok(profile);
        }
        let perp = profile.tperp[0];
        if profile.t2.contains(&perp) {
            profile.case_tag = CaseTag::Case1;
            return Ok(profile);
        }
        profile.case_tag = CaseTag::Case2;

        // Case2: H = {1} ∪ T⊥ is the thin residue; classes of its blocks.
        let h = vec![identity.min(perp), identity.max(perp)];
        if !self.is_closed_subset(&h)? {
            return Err(Error::Internal(format!(
                "Case2 set {{identity, {perp}}} is not closed"
            )));
        }
        let h_blocks = self.quotient_classes(&h)?;
        let nb = h_blocks.len();
        // Two blocks are related when their product is not a single color.
        let related = |a: &[usize], b: &[usize]| -> bool {
            let first = self.color(a[0], b[0]);
            !(a.iter().all(|&x| b.iter().all(|&y| self.color(x, y) == first)))
        };
        let mut adj = vec![vec![false; nb]; nb];
        for i in 0..nb {
            for j in 0..nb {
                adj[i][j] = related(&h_blocks[i], &h_blocks[j]);
            }
        }
        // The relation must be reflexive and symmetric here; classes are its
        // connected components, and transitivity is verified afterwards.
        for i in 0..nb {
            if !adj[i][i] {
                return Err(Error::Internal(format!(
                    "block {i} is unrelated to itself; Case2 blocks should have size 2"
                )));
            }
            for j in 0..nb {
                if adj[i][j] != adj[j][i] {
                    return Err(Error::Internal("block relation is not symmetric".into()));
                }
            }
        }
        let mut class_of = vec![usize::MAX; nb];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..nb {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut stack = vec![i];
            let mut members = Vec::new();
            class_of[i] = id;
            while let Some(b) = stack.pop() {
                members.push(b);
                for j in 0..nb {
                    if adj[b][j] && class_of[j] == usize::MAX {
                        class_of[j] = id;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        for class in &classes {
            for &a in class {
                for &b in class {
                    if !adj[a][b] {
                        return Err(Error::Internal(
                            "block relation is not transitive on its components".into(),
                        ));
                    }
                }
            }
        }
        let blocks: Vec<Vec<usize>> = classes
            .iter()
            .map(|class| {
                let mut pts: Vec<usize> =
                    class.iter().flat_map(|&b| h_blocks[b].iter().copied()).collect();
                pts.sort_unstable();
                pts
            })
            .collect();
        let i0 = blocks
            .iter()
            .position(|b| b.contains(&y0))
            .ok_or_else(|| Error::Internal("base point missing from every block".into()))?;

        // U_i: the valency-2 colors whose y0-orbit lies inside block i. Each
        // orbit must land in exactly one block.
        let mut ui: Vec<Vec<u32>> = vec![Vec::new(); blocks.len()];
        for &t in &profile.t2 {
            let orbit = self.point_orbit(y0, t)?;
            let homes: BTreeSet<usize> = orbit
                .iter()
                .map(|&y| blocks.iter().position(|b| b.contains(&y)).expect("blocks cover Y"))
                .collect();
            if homes.len() != 1 {
                return Err(Error::Internal(format!(
                    "orbit of color {t} at {y0} straddles blocks {homes:?}"
                )));
            }
            ui[*homes.iter().next().expect("nonempty")].push(t);
        }
        let covered: usize = ui.iter().map(Vec::len).sum();
        if covered != profile.t2.len() {
            return Err(Error::Internal("valency-2 colors not covered by the U_i".into()));
        }

        profile.h = Some(h);
        profile.h_blocks = Some(h_blocks);
        profile.classes = Some(classes);
        profile.blocks = Some(blocks);
        profile.i0 = Some(i0);
        profile.ui = Some(ui);
        Ok(profile)
    }
}
