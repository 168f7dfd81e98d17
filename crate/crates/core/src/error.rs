use thiserror::Error;

/// Errors raised by the geometric and spectral routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    /// An input is outside the domain of the operation (point not interior,
    /// zero direction, nonpositive weight, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The input body is malformed: too few vertices, not convex, wrong orientation,
    /// inconsistent dimensions.
    #[error("invalid body: {0}")]
    InvalidBody(String),

    /// The origin (or the requested center) does not lie strictly inside the body.
    #[error("origin is not strictly interior to the body")]
    OriginNotInterior,

    /// A section or point set has lower dimension than required.
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// A central section along a chain of facets collapsed.
    #[error("degenerate section along facet chain {chain:?}: measure {measure:e}")]
    DegenerateSection { chain: Vec<usize>, measure: f64 },

    /// Requested recursion dimension exceeds the configured maximum.
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    /// An iterative method stopped without meeting its tolerance.
    #[error("no convergence after {iterations} iterations (best value {best_value})")]
    NoConvergence {
        iterations: usize,
        best_point: Vec<f64>,
        best_value: f64,
    },

    /// The integration constant of the leading-order profile is not periodic,
    /// which means the shift constant does not balance the density.
    #[error("shift constant inconsistent: periodicity defect {defect:e}")]
    Phi0Inconsistency { defect: f64 },

    /// A check that should hold by construction failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
