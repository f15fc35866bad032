use thiserror::Error;

/// Failures reported by map construction and the analyses built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} lists neighbor {1}, but {1} does not list {0}")]
    AsymmetricAdjacency(i64, i64),
    #[error("loop or repeated neighbor between {0} and {1}")]
    LoopOrMultiEdge(i64, i64),
    #[error("face trace violates Euler's formula: V={vertices} E={edges} F={faces} components={components}")]
    NonPlanarTrace {
        vertices: usize,
        edges: usize,
        faces: usize,
        components: usize,
    },
    #[error("vertex {0} declared twice")]
    DuplicateVertex(i64),
    #[error("unknown vertex {0}")]
    UnknownVertex(i64),
    #[error("map has no edges")]
    NoEdges,
    #[error("outer face hint {0}->{1} is not a dart of the map")]
    BadOuterDart(i64, i64),
    #[error("invalid map file: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a simple cycle: {0}")]
    NotACycle(String),
    #[error("cycle bounds the whole map; inside and outside cannot be told apart")]
    CycleTouchesOuterFace,
    #[error("map has no bounded face")]
    NoBoundedFace,
    #[error("vertices {0} and {1} lie in different components")]
    Disconnected(i64, i64),
    #[error("geodesic count {total} exceeds cap {cap}; use sampled mode or raise the cap")]
    CapExceeded { total: u128, cap: u64 },
    #[error("geodesic has an edge strictly inside the cycle")]
    GeodesicEntersCycle,
    #[error("geodesic is not in the requested side class")]
    NotInS1,
    #[error("no geodesic from {0} to {1} on the requested side of the cycle")]
    EmptySideClass(i64, i64),
    #[error("face {0} is not a bounded face")]
    FaceNotBounded(usize),
    #[error("face {0} boundary is not a simple cycle")]
    FaceNotACycle(usize),
    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("subset enumeration exceeded budget of {budget} states")]
    SearchBudgetExceeded { budget: u64 },
    #[error("vertex set touches the rim")]
    TouchesRim,
    #[error("vertex set is not connected")]
    NotConnected,
    #[error("boundary walk meets the unbounded face")]
    MeetsUnboundedFace,

    #[error("decoration elimination would delete the whole window")]
    EverythingIsADecoration,
    #[error("quasi-isometry violation: {0}")]
    ViolationFound(String),
    #[error("vertex {0} has degree below two in the disk")]
    DegreeBelowTwo(i64),
    #[error("measured Cheeger bound is not positive on this window")]
    CheegerNonpositive,

    #[error("{{{p},{q}}} is not a hyperbolic tessellation")]
    NotHyperbolicParameters { p: usize, q: usize },
    #[error("face {0} is not a bounded rim-free simple face")]
    FaceNotInCore(usize),
}

impl Error {
    /// True for errors that signal an exhausted search budget or cap.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::SearchBudgetExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
