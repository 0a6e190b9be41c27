//! Constructions that combine coherent configurations: direct sum, direct
//! product, wreath product, and the thin-residue extension of a scheme by a
//! closed color subset. Every construction is re-validated from scratch, so
//! a bug here surfaces as an axiom violation rather than corrupt downstream
//! state.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::schemes::CoherentConfiguration;

/// How the wreath product `S ≀ T` on `X × Y` names its points and colors.
///
/// Points are flattened as `(x, y) ↦ x·|Y| + y`. Colors come in two families:
/// `s̃` relates `(x,y) → (x',y)` when `(x,x') ∈ s` (same second coordinate),
/// and `t̄` relates `(x,y) → (x',y')` when `(y,y') ∈ t ≠ 1_Y` (any first
/// coordinates). Numbering: the identity `1̃` first, then the remaining `s̃`
/// in base-X color order, then the `t̄` in base-Y color order.
#[derive(Debug, Clone)]
pub struct WreathLabeling {
    pub base_x: CoherentConfiguration,
    pub base_y: CoherentConfiguration,
    pub x_identity: u32,
    pub y_identity: u32,
    /// Base-X color `s` → wreath color of `s̃`.
    pub tilde: BTreeMap<u32, u32>,
    /// Base-Y color `t ≠ 1_Y` → wreath color of `t̄`.
    pub bar: BTreeMap<u32, u32>,
}

impl WreathLabeling {
    /// Flat index of the point `(x, y)`.
    pub fn point_index(&self, x: usize, y: usize) -> usize {
        x * self.base_y.order() + y
    }

    pub fn order(&self) -> usize {
        self.base_x.order() * self.base_y.order()
    }
}

/// Disjoint union of two configurations, with all cross pairs colored by
/// their fiber pair. Ranks add, plus one color per ordered cross pair of
/// fibers: `rank = r + r' + 2·f·f'`.
///
/// Colors: those of the first summand, then those of the second (shifted),
/// then `Δ_i × Δ'_j` blocks in lexicographic fiber order, then `Δ'_j × Δ_i`.
pub fn direct_sum(
    a: &CoherentConfiguration,
    b: &CoherentConfiguration,
) -> Result<CoherentConfiguration> {
    let (na, nb) = (a.order(), b.order());
    let (ra, rb) = (a.rank() as u32, b.rank() as u32);
    let (fa, fb) = (a.fibers().len() as u32, b.fibers().len() as u32);
    let n = na + nb;
    let mut colors = vec![0u32; n * n];
    for x in 0..na {
        for y in 0..na {
            colors[x * n + y] = a.color(x, y);
        }
    }
    for x in 0..nb {
        for y in 0..nb {
            colors[(na + x) * n + (na + y)] = ra + b.color(x, y);
        }
    }
    for (x, y) in (0..na).flat_map(|x| (0..nb).map(move |y| (x, y))) {
        let i = a.fiber_of(x) as u32;
        let j = b.fiber_of(y) as u32;
        colors[x * n + (na + y)] = ra + rb + i * fb + j;
        colors[(na + y) * n + x] = ra + rb + fa * fb + j * fa + i;
    }
    CoherentConfiguration::validate(n, colors)
}

/// Tensor/direct product on `X × X'`: the color of a pair is the pair of
/// base colors, numbered `(s, s') ↦ s·r' + s'`. Rank multiplies.
pub fn direct_product(
    a: &CoherentConfiguration,
    b: &CoherentConfiguration,
) -> Result<CoherentConfiguration> {
    let (na, nb) = (a.order(), b.order());
    let rb = b.rank() as u32;
    let n = na * nb;
    let mut colors = vec![0u32; n * n];
    for xa in 0..na {
        for xb in 0..nb {
            for ya in 0..na {
                for yb in 0..nb {
                    let p = xa * nb + xb;
                    let q = ya * nb + yb;
                    colors[p * n + q] = a.color(xa, ya) * rb + b.color(xb, yb);
                }
            }
        }
    }
    CoherentConfiguration::validate(n, colors)
}

/// Wreath product `S ≀ T` of two homogeneous configurations.
/// `rank = |S| + |T| − 1`.
pub fn wreath(
    a: &CoherentConfiguration,
    b: &CoherentConfiguration,
) -> Result<(CoherentConfiguration, WreathLabeling)> {
    let x_identity = a
        .identity_color()
        .ok_or_else(|| Error::NotHomogeneous("wreath factors must be schemes".into()))?;
    let y_identity = b
        .identity_color()
        .ok_or_else(|| Error::NotHomogeneous("wreath factors must be schemes".into()))?;
    let (na, nb) = (a.order(), b.order());

    let mut tilde = BTreeMap::new();
    tilde.insert(x_identity, 0u32);
    let mut next = 1u32;
    for s in 0..a.rank() as u32 {
        if s != x_identity {
            tilde.insert(s, next);
            next += 1;
        }
    }
    let mut bar = BTreeMap::new();
    for t in 0..b.rank() as u32 {
        if t != y_identity {
            bar.insert(t, next);
            next += 1;
        }
    }

    let n = na * nb;
    let mut colors = vec![0u32; n * n];
    for x in 0..na {
        for y in 0..nb {
            for x2 in 0..na {
                for y2 in 0..nb {
                    let p = x * nb + y;
                    let q = x2 * nb + y2;
                    colors[p * n + q] = if y == y2 {
                        tilde[&a.color(x, x2)]
                    } else {
                        bar[&b.color(y, y2)]
                    };
                }
            }
        }
    }
    let config = CoherentConfiguration::validate(n, colors)?;
    let labeling = WreathLabeling {
        base_x: a.clone(),
        base_y: b.clone(),
        x_identity,
        y_identity,
        tilde,
        bar,
    };
    Ok((config, labeling))
}

/// Extension of a scheme by a closed subset `T`: points group into blocks
/// `x·T`, and every color splits into its intersections with the block
/// pairs. The result is a coherent configuration whose fibers are the
/// blocks. New colors are numbered by first occurrence, scanning row-major.
pub fn thin_residue_extension(
    c: &CoherentConfiguration,
    t_set: &[u32],
) -> Result<CoherentConfiguration> {
    let blocks = c.quotient_classes(t_set)?;
    let n = c.order();
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            block_of[x] = i;
        }
    }
    let mut renum: BTreeMap<(u32, usize, usize), u32> = BTreeMap::new();
    let mut next = 0u32;
    let mut colors = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let key = (c.color(x, y), block_of[x], block_of[y]);
            let new = *renum.entry(key).or_insert_with(|| {
                let v = next;
                next += 1;
                v
            });
            colors[x * n + y] = new;
        }
    }
    CoherentConfiguration::validate(n, colors)
}
