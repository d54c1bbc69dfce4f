use alloc::string::String;
use alloc::vec::Vec;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter set violates a documented invariant.
    #[error("configuration error: {0}")]
    Config(String),

    /// A vector or matrix has the wrong size.
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A target scenario cannot be simulated with the given frame.
    #[error("scenario error: {0}")]
    Scenario(String),

    /// Strong and weak target at the same range.
    #[error("degenerate scenario: {0}")]
    Degenerate(String),

    /// No candidate chirp parameter survived the design rule.
    #[error("no admissible 2Nc1 among {} candidates: {}", .0.len(), .0.join("; "))]
    Exhausted(Vec<String>),
}

pub type Result<T> = core::result::Result<T, Error>;
