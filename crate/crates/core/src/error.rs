//! Error type shared by every module of the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Construction and precondition failures are ordinary errors; the
/// `Internal*` variants signal a bug in this crate (an exact identity that
/// the theory forces was violated) and are never expected to occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` passed to a field constructor is not prime.
    NotPrime(u64),
    /// Requested structure exceeds the configured enumeration limit.
    SizeExceeded { size: u128, limit: u64 },
    /// Discrete logarithm or multiplicative character evaluated at zero.
    ZeroElement,
    /// Polynomial division or inversion by the zero polynomial.
    DivisionByZeroPoly,
    /// Integer argument outside the supported range.
    OutOfRange(u64),
    /// Arithmetic between cyclotomic integers of different root orders.
    MixedOrders(u64, u64),
    /// A polynomial that was required to divide x^m - 1 (or another stated
    /// modulus) does not.
    NotADivisor,
    /// An integer that was required to divide q^m - 1 does not.
    NotADivisorInt(u64),
    /// A character sum failed to collapse to a rational integer.  The
    /// theory forces every complete sum here to be an integer, so this
    /// always indicates an implementation bug.
    NonIntegerSum,
    /// Two polynomials required to be coprime are not.
    NotCoprime,
    /// A polynomial required to be irreducible is not.
    NotIrreducible,
    /// An element required to be normal is not.
    NotNormal,
    /// A polynomial required to be square-free is not.
    NotSquareFree,
    /// A characteristic-function value landed outside {0, 1}; implementation bug.
    NonBinaryResult,
    /// An internal consistency assertion failed (e.g. a factorization did
    /// not re-expand to its input); implementation bug.
    InternalInconsistency(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::SizeExceeded { size, limit } => {
                write!(f, "field size {size} exceeds enumeration limit {limit}")
            }
            Error::ZeroElement => write!(f, "operation undefined at the zero element"),
            Error::DivisionByZeroPoly => write!(f, "division by the zero polynomial"),
            Error::OutOfRange(n) => write!(f, "argument {n} out of range"),
            Error::MixedOrders(a, b) => {
                write!(f, "cyclotomic integers of different orders {a} and {b}")
            }
            Error::NotADivisor => write!(f, "polynomial is not a divisor of the required modulus"),
            Error::NotADivisorInt(n) => write!(f, "{n} does not divide the group order"),
            Error::NonIntegerSum => write!(f, "character sum did not collapse to an integer"),
            Error::NotCoprime => write!(f, "polynomials are not coprime"),
            Error::NotIrreducible => write!(f, "polynomial is not irreducible"),
            Error::NotNormal => write!(f, "element is not normal"),
            Error::NotSquareFree => write!(f, "polynomial is not square-free"),
            Error::NonBinaryResult => write!(f, "characteristic function value outside {{0,1}}"),
            Error::InternalInconsistency(what) => write!(f, "internal inconsistency: {what}"),
        }
    }
}

impl std::error::Error for Error {}
