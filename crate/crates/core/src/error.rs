use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("edge label {label} appears {count} times (expected 2)")]
    LabelCount { label: u32, count: usize },
    #[error("broken strand: {0}")]
    BrokenStrand(String),
    #[error("ambiguous orientation: {0}")]
    AmbiguousOrientation(String),
    #[error("not a planar diagram ({faces} faces for {crossings} crossings in {pieces} pieces)")]
    NonPlanar { faces: usize, crossings: usize, pieces: usize },
    #[error("{0} crossings exceeds the supported maximum")]
    TooManyCrossings(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeError {
    #[error("vertex length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("expected a cell of codimension {expected}, got {got}")]
    WrongCodimension { expected: usize, got: usize },
    #[error("vertices are not comparable")]
    NotComparable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("invalid square input: {0}")]
    InvalidInput(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("invalid boundary matching: {0}")]
    InvalidMatching(String),
    #[error("invalid match graph: {0}")]
    InvalidGraph(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("quiver maps do not compose to zero")]
    NotAQuiver,
    #[error("negative decomposition count: {0}")]
    NegativeCount(String),
    #[error("width-three hypothesis fails: {0}")]
    Gate(String),
}

/// Top-level error carrying the module the failure came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pd: {0}")]
    Pd(#[from] PdError),
    #[error("cube: {0}")]
    Cube(#[from] CubeError),
    #[error("homology: {0}")]
    LinAlg(#[from] LinAlgError),
    #[error("steenrod: {0}")]
    Steenrod(#[from] SteenrodError),
    #[error("homotopy: {0}")]
    Homotopy(#[from] HomotopyError),
}
