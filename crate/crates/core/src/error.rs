use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("face closure violated: simplex {simplex:?} is missing face {face:?}")]
    FaceClosureViolation { simplex: Vec<usize>, face: Vec<usize> },
    #[error("simplices {0:?} and {1:?} intersect outside a common face")]
    ImproperIntersection(Vec<usize>, Vec<usize>),
    #[error("simplex {0:?} has affinely dependent vertices")]
    DegenerateSimplex(Vec<usize>),
    #[error("vertex index {0} out of range")]
    VertexIndexOutOfRange(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {0} exceeds the cap of 3")]
    DimensionCapExceeded(usize),
    #[error("polytope has no points")]
    EmptyPolytope,
    #[error("function does not have compact support")]
    NonCompactSupport,
    #[error("rotation matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("vertex set is not a face of the polytope")]
    NotAFace,
    #[error("sample count must be positive")]
    InvalidSampleCount,
    #[error("value {value} outside the admissible range {range}")]
    OutOfRange { value: f64, range: &'static str },
    #[error("radius sum {0} is not below pi/2")]
    RadiusSumExceedsRegime(f64),
    #[error("subsphere is tangent to a ball boundary")]
    DegenerateTangency,
    #[error("template system is rank deficient (rank {rank} < {unknowns}, residual {residual:e})")]
    RankDeficientSystem {
        rank: usize,
        unknowns: usize,
        residual: f64,
    },
    #[error("degenerate float polytope")]
    DegeneratePolytope,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
