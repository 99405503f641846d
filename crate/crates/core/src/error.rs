use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid fcc coordinate ({a}, {b}, {c}): coordinate sum must be even")]
    InvalidCoordinate { a: i64, b: i64, c: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("selling reduction did not converge within {steps} steps")]
    NonConvergence { steps: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a packing lattice: shortest vector has length {min_length}, expected at least 2")]
    NotAPackingLattice { min_length: f64 },

    #[error("no superbase permutation maps every length-2 Voronoi vector to a length-2 fcc vector")]
    AssignmentFailure,

    #[error("centers {i} and {j} overlap (distance {distance})")]
    Overlap { i: usize, j: usize, distance: f64 },

    #[error("centers {i} and {j} coincide")]
    Duplicate { i: usize, j: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
