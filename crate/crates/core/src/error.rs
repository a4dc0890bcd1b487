use core::fmt;

use crate::limits::SlopeRegime;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The index pair is outside the domain an operation accepts.
    OutOfRange { q: u64, p: u64 },
    /// A primitive (coprime) index pair was required.
    NotCoprime { q: u64, p: u64 },
    /// A lattice point with a negative coordinate or `y > x`.
    InvalidPoint { x: i64, y: i64 },
    ZeroDenominator,
    /// Enumerating a line of nonnegative slope needs an explicit `x` cap.
    CapRequired,
    /// The line carries fewer than two region points, so no ratio exists.
    TooFewPoints { found: usize },
    /// The operation is only defined for negative slopes.
    NonNegativeSlope,
    /// The slope is not in the regime the operation requires.
    WrongRegime(SlopeRegime),
    /// Coordinates or shifts too large for the machine-integer line model.
    Overflow,
    /// The sign of a high-precision expression could not be settled within
    /// the precision budget.
    Undecidable,
    /// An internal consistency check failed.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { q, p } => write!(f, "index ({q}, {p}) is out of range"),
            Error::NotCoprime { q, p } => write!(f, "index ({q}, {p}) is not coprime"),
            Error::InvalidPoint { x, y } => {
                write!(f, "point ({x}, {y}) is outside 0 <= y <= x")
            }
            Error::ZeroDenominator => f.write_str("zero denominator"),
            Error::CapRequired => {
                f.write_str("lines with nonnegative slope need an x cap to enumerate")
            }
            Error::TooFewPoints { found } => {
                write!(f, "line has {found} region point(s); at least 2 are needed")
            }
            Error::NonNegativeSlope => f.write_str("operation requires a negative slope"),
            Error::WrongRegime(r) => write!(f, "slope is in the {r:?} regime"),
            Error::Overflow => f.write_str("integer overflow in line arithmetic"),
            Error::Undecidable => f.write_str("sign not decided within the precision budget"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
