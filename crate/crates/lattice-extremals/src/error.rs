use core::fmt;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the documented domain of the operation.
    Domain(&'static str),
    /// A series or product needed more than `max_terms` terms.
    MaxTerms { what: &'static str, limit: usize },
    /// An iterative procedure (quadrature, reduction, optimizer) did not converge.
    NoConvergence(&'static str),
    /// Unknown verification suite identifier.
    UnknownSuite,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::MaxTerms { what, limit } => {
                write!(f, "{what}: series did not converge within {limit} terms")
            }
            Error::NoConvergence(what) => write!(f, "{what}: no convergence"),
            Error::UnknownSuite => f.write_str("unknown verification suite"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn ensure(cond: bool, msg: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg))
    }
}
