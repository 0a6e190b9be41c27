//! Exact computation with coherent configurations and the central
//! idempotent structure of their Terwilliger algebras.
//!
//! A coherent configuration is a coloring of X × X whose adjacency matrices
//! span an algebra closed under multiplication and transposition; an
//! association scheme is the homogeneous case. This crate builds such
//! configurations (direct sums, tensor products, wreath products), refines
//! arbitrary colorings to coherent ones by Weisfeiler–Leman stabilization,
//! and studies the Terwilliger algebra 𝒯(X, S, x₀) — the span closure of
//! the adjacency matrices together with the diagonal indicators of the
//! point orbits of a base point.
//!
//! The centerpiece is [`wreathidem::verify_decomposition`]: for a wreath
//! product S ≀ T with T quasi-thin (every valency 1 or 2) or one-class, it
//! constructs the complete family of central primitive idempotents of the
//! Terwilliger algebra in closed form and certifies every claimed property
//! — idempotency, centrality, primitivity, pairwise orthogonality, the
//! partition of identity, and agreement with an independent numeric
//! spectral oracle. Members with rational entries are checked in exact
//! arithmetic; members involving complex character values are checked
//! numerically at a caller-chosen tolerance. The result is a machine-
//! checkable JSON certificate rather than a bare yes/no.
//!
//! Exactness is load-bearing throughout: linear algebra over the rationals
//! lives in [`exactlin`] (dense row reduction, span bases, a commutant
//! solver, and a modular pre-pass at a 61-bit prime with rational lifting,
//! so big-rational arithmetic only runs where certification demands it).
//! Floating point appears only in the spectral oracle and is always
//! cross-checked against exact data.
//!
//! The [`cli`] module exposes all of this as the `cohcfg` binary over a
//! plain text file format ([`fileio`]); a C ABI for other languages lives
//! in the companion `cohcfg-capi` crate.

pub mod algdecomp;
pub mod cli;
pub mod closure;
pub mod construct;
pub mod error;
pub mod exactlin;
pub mod fileio;
pub mod schemes;
pub mod wreathidem;

#[cfg(test)]
pub(crate) mod testutil;
