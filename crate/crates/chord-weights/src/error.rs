use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// `Parse` and `InvalidDiagram` are user-input errors (the CLI maps them to
/// exit code 2); everything else signals a broken internal invariant or an
/// unsupported request (exit code 3).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input: word, polynomial, or JSON diagram.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally invalid diagram (odd occurrence counts, self-loops,
    /// dangling half-edges, vertex of wrong valence).
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    /// Operation applied outside its domain (division by zero, evaluation of
    /// a negative power at zero, too few chords for a relation).
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact division requested where no exact quotient exists.
    #[error("not divisible: {0}")]
    NotDivisible(String),

    /// Valid input that this build does not handle (e.g. degrees beyond the
    /// supported enumeration range).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Fixed-width arithmetic in the matrix referee would overflow.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A cross-check that must hold by construction failed; indicates a bug.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by user input rather than internal state.
    pub fn is_user_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidDiagram(_))
    }
}
