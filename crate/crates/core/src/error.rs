use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An enumeration step would generate more objects than the cap allows.
    #[error("combinatorial limit exceeded: step needs {needed} objects, cap is {cap}")]
    CombinatorialLimit { needed: u128, cap: usize },

    /// A reduction step ran into data that violates its normalization precondition.
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// Syntax error in a query, formula, or database file. Position is 1-based.
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A name or constant does not resolve against the scheme in scope.
    #[error("scope error: {0}")]
    Scope(String),

    /// A value, tuple, or declaration violates a structural invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A formula does not fit the scheme of the relation it is applied to.
    #[error("formula error: {0}")]
    Formula(String),

    #[error("unknown relation '{0}'")]
    UnknownRelation(String),

    /// Operands of an algebra operator are not scheme-compatible.
    #[error("scheme mismatch: {0}")]
    SchemeMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks an enumeration size against the combinatorial cap.
pub fn guard_cap(needed: u128, cap: usize) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::CombinatorialLimit { needed, cap })
    } else {
        Ok(())
    }
}
