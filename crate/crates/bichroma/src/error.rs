use std::fmt;

/// The errors that can occur while building or analysing colored trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation needed more input points than it was given.
    TooFewPoints { needed: usize, got: usize },
    /// Every point has the same color, so no properly colored edge exists.
    Monochromatic,
    /// Two collinear segments overlap in more than a single point, so the
    /// crossing predicate has no meaningful answer.
    DegenerateOverlap,
    /// All points coincide; the instance cannot be scaled to the unit frame.
    DegenerateExtent,
    /// Two points share the same coordinates.
    DuplicatePoint { a: usize, b: usize },
    /// Three points are collinear, violating the general-position requirement.
    CollinearTriple { a: usize, b: usize, c: usize },
    /// The query point lies inside (or on) the convex hull of a tree that it
    /// was supposed to see from outside.
    InsideHull,
    /// The named edge does not belong to the tree.
    EdgeNotInTree { edge: (usize, usize) },
    /// The requested computation exceeds a configured enumeration budget.
    TooLarge { limit: usize, requested: usize },
    /// A tree failed structural validation (wrong edge count, cycle, improper
    /// coloring, unknown endpoint, ...).
    InvalidTree(String),
    /// A precondition on the geometry of the inputs was violated.
    GeometryViolation(String),
    /// An internal invariant failed; this indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            Error::Monochromatic => {
                write!(f, "all points share one color; no properly colored edge exists")
            }
            Error::DegenerateOverlap => {
                write!(f, "collinear segments overlap in more than one point")
            }
            Error::DegenerateExtent => write!(f, "all points coincide"),
            Error::DuplicatePoint { a, b } => {
                write!(f, "points {a} and {b} have identical coordinates")
            }
            Error::CollinearTriple { a, b, c } => {
                write!(f, "points {a}, {b}, {c} are collinear")
            }
            Error::InsideHull => {
                write!(f, "query point is not strictly outside the convex hull")
            }
            Error::EdgeNotInTree { edge: (u, v) } => {
                write!(f, "edge ({u}, {v}) is not in the tree")
            }
            Error::TooLarge { limit, requested } => {
                write!(f, "instance size {requested} exceeds the enumeration limit {limit}")
            }
            Error::InvalidTree(msg) => write!(f, "invalid tree: {msg}"),
            Error::GeometryViolation(msg) => write!(f, "geometry violation: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
