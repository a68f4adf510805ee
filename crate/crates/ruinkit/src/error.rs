//! Error taxonomy shared by the whole crate.
//!
//! `Domain` means the inputs are outside the mathematical domain of the
//! requested quantity (negative scale, load outside (0,1), moment that the
//! family does not possess, ...). `Numeric` means the inputs were admissible
//! but an iterative procedure failed to deliver the requested accuracy
//! (quadrature did not converge, a bracket contained no sign change, ...).
//!
//! The CLI maps these to exit codes 2 and 3 respectively.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Admissible input, but a numerical procedure failed to converge or
    /// produced an inconsistent result.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
