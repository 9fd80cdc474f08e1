use num_bigint::BigUint;
use thiserror::Error;

/// Errors surfaced by the library.
///
/// Variants map onto the two failure classes the CLI distinguishes:
/// invalid input (everything except [`Error::InvariantBreach`] and
/// [`Error::UniquenessViolation`]) and internal invariant breaches.
#[derive(Debug, Error)]
pub enum Error {
    /// A tuple needs at least three entries.
    #[error("a tensor tuple needs at least 3 entries, got {0}")]
    InvalidTuple(usize),

    /// A tuple entry failed to parse as a non-negative integer.
    #[error("cannot parse tuple entry `{0}` as a non-negative integer")]
    Parse(String),

    /// Castling would replace an entry by a negative value.
    #[error(
        "castling at index {index} is undefined: complement product {complement_product} \
         is smaller than the entry {old_value}"
    )]
    NegativeResult {
        index: usize,
        complement_product: BigUint,
        old_value: BigUint,
    },

    /// The block recurrence is defined for bases >= 2 only.
    #[error("sequence base must be at least 2, got {0}")]
    BaseTooSmall(u64),

    /// The triple does not satisfy 2 <= a <= b <= c with c^2 + b^2 - abc >= 1.
    #[error("({a},{b},{c}) is not admissible: need 2 <= a <= b <= c and c^2 + b^2 - abc >= 1")]
    NotAdmissible { a: u64, b: u64, c: u64 },

    /// The block-multiplicity solver found zero or several canonical solutions.
    /// This must never fire on admissible inputs; it signals a bug.
    #[error("expected exactly one canonical (n,m,i) for ({a},{b},{c}), found {found}")]
    UniquenessViolation { a: u64, b: u64, c: u64, found: usize },

    /// The tensor space is too large for the rank oracle.
    #[error("tensor space dimension {dim} exceeds the oracle bound {bound}")]
    DimensionTooLarge { dim: BigUint, bound: u64 },

    /// The oracle modulus is composite, too small, or out of range.
    #[error(
        "modulus {0} is unusable: it must be a prime below 2^31 and larger than \
         both the space dimension and the group dimension"
    )]
    BadPrime(u64),

    /// An internal consistency check failed; not reachable from user input.
    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::UniquenessViolation { .. } | Error::InvariantBreach(_)
        )
    }
}
