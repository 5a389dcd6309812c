use alloc::string::String;

/// Errors shared by every algorithm in the crate.
///
/// `HypothesisUnmet` means the caller asked for a guarantee whose
/// preconditions do not hold; `InvariantViolation` means a precondition was
/// verified but a step that is supposed to always succeed did not, which is
/// a defect and carries a state dump.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("invariant violation in {step}: {detail}")]
    InvariantViolation { step: String, detail: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(alloc::format!($($arg)*))
    };
}

macro_rules! unmet {
    ($($arg:tt)*) => {
        $crate::error::Error::HypothesisUnmet(alloc::format!($($arg)*))
    };
}

macro_rules! violation {
    ($step:expr, $($arg:tt)*) => {
        $crate::error::Error::InvariantViolation {
            step: alloc::string::String::from($step),
            detail: alloc::format!($($arg)*),
        }
    };
}

pub(crate) use invalid;
pub(crate) use unmet;
pub(crate) use violation;
