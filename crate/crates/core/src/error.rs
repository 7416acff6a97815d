use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    Domain { name: &'static str, value: f64, expected: &'static str },
    /// The operation is not defined for this distribution family or bound.
    Unsupported(&'static str),
    /// The source has no density, so entropy-based quantities are unavailable.
    MissingDensity { hint: &'static str },
    /// A numerical routine could not reach the requested accuracy.
    Accuracy { what: &'static str, achieved: f64, requested: f64 },
    /// An implicit inequality never crossed zero on the scanned range.
    NoCrossing { what: &'static str, lo: f64, hi: f64 },
    /// Stage one of rate-sharing recovery found several minimal supports.
    AmbiguousSupport { size: usize, count: usize },
    /// The requested work exceeds the configured budget.
    Budget { required: f64, limit: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { name, value, expected } => {
                write!(f, "{name} = {value} is out of range (expected {expected})")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::MissingDensity { hint } => {
                write!(f, "source has no density, entropy undefined; {hint}")
            }
            Error::Accuracy { what, achieved, requested } => {
                write!(f, "{what}: achieved accuracy {achieved:e}, requested {requested:e}")
            }
            Error::NoCrossing { what, lo, hi } => {
                write!(f, "{what}: no sign change on [{lo:e}, {hi:e}]")
            }
            Error::AmbiguousSupport { size, count } => {
                write!(f, "rate-sharing stage one found {count} candidate supports of size {size}")
            }
            Error::Budget { required, limit } => {
                write!(f, "work {required:e} exceeds budget {limit:e}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain { name, value, expected }
}
