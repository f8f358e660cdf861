use thiserror::Error;

/// Error type shared by every module.
///
/// Structural errors (bad shapes, invalid input data, ill-defined maps) are
/// distinct from [`Error::Internal`], which marks a broken internal
/// invariant: a certificate that failed to verify, or two independent
/// computation paths disagreeing. Callers may retry structural errors with
/// fixed input; an `Internal` error is a bug and carries a witness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("degree {degree} out of range for complex with top degree {top}")]
    DegreeOutOfRange { degree: usize, top: isize },

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("invalid subcomplex: {0}")]
    InvalidSubcomplex(String),

    #[error("invalid page: {0}")]
    InvalidPage(String),

    #[error("invalid monodromy: {0}")]
    InvalidMonodromy(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),

    #[error("chain is not a cycle: {0}")]
    NotACycle(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid hypotheses: {0}")]
    InvalidHypotheses(String),

    #[error("invalid problem file: {0}")]
    InvalidProblem(String),

    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate a bug in this library rather than bad
    /// input. The command line maps these to a dedicated exit code.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
