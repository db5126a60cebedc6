use thiserror::Error;

/// Errors raised across the library.
///
/// The variants map onto the CLI exit codes: parse and I/O failures exit
/// with 1, precondition failures with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("refusing to materialize: {0}")]
    Guard(String),

    #[error("a tabulated response needs an eigendecomposition, not a bare matrix")]
    NeedsSpectrum,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_square(what: &str, rows: usize, cols: usize, n: usize) -> Result<()> {
    if rows != n || cols != n {
        return Err(Error::Dimension(format!(
            "{what} is {rows}x{cols}, expected {n}x{n}"
        )));
    }
    Ok(())
}
