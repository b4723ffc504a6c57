use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An iterative reflection did not stabilise within the round budget.
    NotConverged { bound: usize, elements: usize },
    /// Two values that must live over the same category do not.
    CategoryMismatch,
    /// Table data is structurally malformed.
    Malformed(String),
    /// Input violates a precondition of the operation.
    Precondition(String),
    /// Kernel composition across different spaces.
    SpaceMismatch,
    /// Kernel composition across incompatible base data.
    BaseMismatch,
    /// A kernel puts mass outside the fibered product it must live on.
    SupportViolation { source: usize, target: usize },
    /// A point map does not commute with the base maps.
    NonCommutingSquare { point: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotConverged { bound, elements } => write!(
                f,
                "reflection did not converge within {bound} rounds ({elements} elements generated)"
            ),
            Error::CategoryMismatch => f.write_str("values live over different categories"),
            Error::Malformed(msg) => write!(f, "malformed data: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::SpaceMismatch => f.write_str("kernel spaces do not match"),
            Error::BaseMismatch => f.write_str("kernel base data do not match"),
            Error::SupportViolation { source, target } => write!(
                f,
                "support condition violated: mass at source point {source}, target point {target}"
            ),
            Error::NonCommutingSquare { point } => {
                write!(f, "base square does not commute at point {point}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
