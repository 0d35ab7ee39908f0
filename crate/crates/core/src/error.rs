use thiserror::Error;

/// Every failure the toolkit reports. Vertex numbers in messages are 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("a polygon needs at least 3 vertices, got {count}")]
    TooFewVertices { count: usize },
    #[error("boundary is not simple: {detail}")]
    NotSimple { detail: String },
    #[error("vertices {0:?} are collinear (general position violated)")]
    CollinearTriple([usize; 3]),
    #[error("invalid hole: {0}")]
    InvalidHole(String),
    #[error("operation requires a polygon in general position; input was accepted as degenerate")]
    DegenerateInput,
    #[error("operation requires a polygon without holes")]
    HolesNotSupported,
    #[error("vertex label {label} out of range 1..={n}")]
    InvalidLabel { label: usize, n: usize },
    #[error("segment endpoints coincide (vertex {0})")]
    SameVertex(usize),
    #[error("{{{0}, {1}}} is not a diagonal")]
    NotADiagonal(usize, usize),
    #[error("diagonals {{{0}, {1}}} and {{{2}, {3}}} cross")]
    CrossingDiagonals(usize, usize, usize, usize),
    #[error("enumeration exceeded the cap of {cap} (stopped after {reached})")]
    RegionTooLarge { cap: usize, reached: usize },
    #[error("diagonal set is not a convex diagonalization")]
    NotConvexDiagonalization,
    #[error("diagonal set is not a triangulation")]
    NotATriangulation,
    #[error("{{{0}, {1}}} is not a boundary edge")]
    NotABoundaryEdge(usize, usize),
    #[error("no height certificate found after {doublings} doublings")]
    CertificateNotFound { doublings: u32 },
    #[error("triangulation set is not the vertex set of a face")]
    NotAFace,
    #[error("{{{0}, {1}}} does not join the outer boundary to the hole")]
    NotABridgeDiagonal(usize, usize),
    #[error("target coincides with the current position of vertex {0}")]
    TargetEqualsVertex(usize),
    #[error("polygons have different vertex counts ({0} vs {1})")]
    MismatchedN(usize, usize),
    #[error("move {index} hits a simplicity violation at t = {t}")]
    BrokenChain { index: usize, t: String },
    #[error("polygon is not star-shaped (empty kernel)")]
    NotStar,
    #[error("time parameter must lie in [0, 1]")]
    TimeOutOfRange,
}

impl Error {
    /// Stable variant name, used by the CLI and HTTP layers.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::TooFewVertices { .. } => "TooFewVertices",
            Error::NotSimple { .. } => "NotSimple",
            Error::CollinearTriple(_) => "CollinearTriple",
            Error::InvalidHole(_) => "InvalidHole",
            Error::DegenerateInput => "DegenerateInput",
            Error::HolesNotSupported => "HolesNotSupported",
            Error::InvalidLabel { .. } => "InvalidLabel",
            Error::SameVertex(_) => "SameVertex",
            Error::NotADiagonal(..) => "NotADiagonal",
            Error::CrossingDiagonals(..) => "CrossingDiagonals",
            Error::RegionTooLarge { .. } => "RegionTooLarge",
            Error::NotConvexDiagonalization => "NotConvexDiagonalization",
            Error::NotATriangulation => "NotATriangulation",
            Error::NotABoundaryEdge(..) => "NotABoundaryEdge",
            Error::CertificateNotFound { .. } => "CertificateNotFound",
            Error::NotAFace => "NotAFace",
            Error::NotABridgeDiagonal(..) => "NotABridgeDiagonal",
            Error::TargetEqualsVertex(_) => "TargetEqualsVertex",
            Error::MismatchedN(..) => "MismatchedN",
            Error::BrokenChain { .. } => "BrokenChain",
            Error::NotStar => "NotStar",
            Error::TimeOutOfRange => "TimeOutOfRange",
        }
    }

    /// True for input-validation failures (as opposed to size limits or internal failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::RegionTooLarge { .. } | Error::CertificateNotFound { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
