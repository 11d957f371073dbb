use crate::dyadic::Dyadic;
use thiserror::Error;

/// Errors raised by library operations.
///
/// Callers that need to distinguish resource exhaustion from contract
/// violations match on [`Error::CapExceeded`]; everything else is a violated
/// precondition or an infeasible request.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("allocation of weight {requested} failed: free weight {available}, deficit {deficit}")]
    Allocation {
        requested: Dyadic,
        available: Dyadic,
        deficit: Dyadic,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
