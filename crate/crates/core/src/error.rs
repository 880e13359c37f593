use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The oracle returned a negative or non-finite value.
    InvalidOracleValue(f64),
    InvalidMatroid(String),
    InvalidGraph(String),
    InvalidInstance(String),
    /// Precondition of a marginal gain: the element is already in the set.
    ElementPresent(usize),
    /// An exhaustive routine was asked to enumerate a ground set that is too large.
    TooLarge {
        routine: &'static str,
        n: usize,
        limit: usize,
    },
    InsufficientData {
        needed: usize,
        found: usize,
    },
    MissingPairs(Vec<String>),
    Empty(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidOracleValue(v) => {
                write!(f, "oracle returned {v}; set functions must be non-negative and finite")
            }
            Error::InvalidMatroid(msg) => write!(f, "invalid partition matroid: {msg}"),
            Error::InvalidGraph(msg) => write!(f, "invalid graph: {msg}"),
            Error::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
            Error::ElementPresent(v) => write!(f, "element {v} is already in the solution"),
            Error::TooLarge { routine, n, limit } => write!(
                f,
                "{routine} enumerates all subsets and is limited to n <= {limit} (got n = {n})"
            ),
            Error::InsufficientData { needed, found } => write!(
                f,
                "signed-rank test needs at least {needed} non-zero differences, found {found}"
            ),
            Error::MissingPairs(ids) => {
                write!(f, "unpaired instances: {}", ids.join(", "))
            }
            Error::Empty(what) => write!(f, "{what} is empty"),
        }
    }
}

impl core::error::Error for Error {}
