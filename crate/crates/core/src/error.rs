use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex `{0}` is declared more than once")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge ({0}, {1}) does not go from the left side to the right side")]
    WrongSide(String, String),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(String, String),
    #[error("edge colors must be parallel to the edge list ({colors} colors for {edges} edges)")]
    ColorCount { colors: usize, edges: usize },
    #[error("labeling is not injective or names an unknown vertex")]
    BadLabeling,
    #[error("left sides of amalgamated graphs differ")]
    LeftSidesDiffer,
    #[error("right vertex `{0}` appears in more than one amalgamated graph")]
    RightCollision(String),
    #[error("graph has {0} vertices, above the enumeration limit of {1}")]
    TooLarge(usize, usize),
    #[error("more than {0} automorphisms; enumeration aborted")]
    TooManyAutomorphisms(usize),
    #[error("map is not a bijection on the vertex set")]
    NotABijection,
    #[error("map is not a cut-involution of the graph")]
    NotCutInvolution,
    #[error("invalid fold: {0}")]
    InvalidFold(String),
    #[error("map is not an endomorphism of the graph")]
    NotEndomorphism,
    #[error("fold lifting hypothesis violated at step {step}: {reason}")]
    LiftHypothesis { step: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid bigraphon: {0}")]
    InvalidBigraphon(String),
    #[error("bigraphons in a tuple must share row and column weights")]
    WeightMismatch,
    #[error("no bigraphon supplied for color {0}")]
    MissingColor(usize),
    #[error("assignment does not match the labeled vertices: {0}")]
    AssignmentMismatch(String),
    #[error("zero base raised to a negative power")]
    Domain,
    #[error("Sinkhorn scaling did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("graph has isolated vertices")]
    IsolatedVertices,
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
