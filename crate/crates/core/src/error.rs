use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    Domain {
        name: &'static str,
        value: f64,
    },
    /// A market parameter violates its admissible range.
    InvalidParam {
        key: &'static str,
        value: f64,
    },
    InvalidTolerance(f64),
    /// Grid or iteration counts below their minimum.
    InvalidCount {
        name: &'static str,
        value: usize,
    },
    /// A closed-form expression is singular at the requested point.
    Singular {
        name: &'static str,
        at: f64,
    },
    /// The Stage III root finder hit its iteration cap; `lo..hi` is the last bracket.
    NoConvergence {
        iterations: usize,
        lo: f64,
        hi: f64,
    },
    /// Strict-conditions pricing found no price whose lower level satisfies the existence conditions.
    NoAdmissiblePrice,
    UnknownParam,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { name, value } => write!(f, "{name} = {value} is outside its domain"),
            Error::InvalidParam { key, value } => {
                write!(f, "market parameter {key} = {value} is not admissible")
            }
            Error::InvalidTolerance(tol) => {
                write!(f, "tolerance {tol} must be positive and finite")
            }
            Error::InvalidCount { name, value } => write!(f, "{name} = {value} is too small"),
            Error::Singular { name, at } => write!(f, "{name} is singular at {at}"),
            Error::NoConvergence { iterations, lo, hi } => write!(
                f,
                "root finder did not converge in {iterations} iterations (bracket [{lo}, {hi}])"
            ),
            Error::NoAdmissiblePrice => {
                write!(f, "no price satisfies the lower-level existence conditions")
            }
            Error::UnknownParam => write!(f, "unknown market parameter"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
