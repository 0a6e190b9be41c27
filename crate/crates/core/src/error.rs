//! Error types shared across the library.

use thiserror::Error;

/// Which coherence axiom a configuration failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// The diagonal must be a union of colors.
    DiagonalUnion,
    /// The transpose of each color must again be a single color.
    StarClosed,
    /// Intersection numbers must not depend on the choice of pair.
    ConstantIntersection,
    /// Every color in `0..rank` must be nonempty.
    NonemptyColors,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::DiagonalUnion => "diagonal is a union of colors",
            Axiom::StarClosed => "color transposes are colors",
            Axiom::ConstantIntersection => "intersection numbers are constant",
            Axiom::NonemptyColors => "all colors are nonempty",
        };
        f.write_str(s)
    }
}

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A coloring failed one of the defining axioms. Carries a witness so the
    /// failure can be reproduced by hand: the colors involved and the points
    /// at which the axiom breaks.
    #[error("axiom violation ({axiom}): colors {colors:?} at points {points:?}: {detail}")]
    AxiomViolation {
        axiom: Axiom,
        colors: Vec<u32>,
        points: Vec<usize>,
        detail: String,
    },

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("color {color} out of range (rank {rank})")]
    ColorOutOfRange { color: u32, rank: usize },

    #[error("point {point} out of range (order {order})")]
    PointOutOfRange { point: usize, order: usize },

    #[error("configuration is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("color set is not closed: {0}")]
    NotClosed(String),

    #[error("{0} is not a union of fibers")]
    NotFiberUnion(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not in the span of the algebra: {0}")]
    NotInAlgebra(String),

    #[error("eigenvalue clusters too close to separate after {retries} retries (min gap {gap:.3e})")]
    SpectralAmbiguity { retries: usize, gap: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
