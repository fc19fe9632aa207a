use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation that needs at least one element received an empty set.
    EmptySet,
    /// Elements handed to a sorted constructor were not strictly increasing.
    NotIncreasing { index: usize },
    /// `(p, q)` is not a pair of coprime integers with `1 <= p < q`.
    InvalidPair { p: i64, q: i64 },
    /// A dilation factor or modulus that must be positive was not.
    NonPositiveScale(i64),
    /// An affine map was applied to an element outside its domain.
    NotDivisible { element: i64, scale: i64 },
    /// 64-bit element arithmetic would overflow.
    Overflow,
    /// Construction or search parameters out of range.
    InvalidParameters(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySet => f.write_str("operation requires a nonempty set"),
            Error::NotIncreasing { index } => {
                write!(f, "elements are not strictly increasing at index {index}")
            }
            Error::InvalidPair { p, q } => write!(
                f,
                "invalid dilation pair ({p}, {q}): need coprime integers with 1 <= p < q"
            ),
            Error::NonPositiveScale(d) => write!(f, "scale must be positive, got {d}"),
            Error::NotDivisible { element, scale } => {
                write!(f, "element {element} is not divisible by scale {scale}")
            }
            Error::Overflow => f.write_str("64-bit integer overflow in set arithmetic"),
            Error::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
