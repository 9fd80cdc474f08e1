//! Dimension tuples and the castling invariant N.
//!
//! A [`TensorTuple`] `(a_1, ..., a_n)` stands for the tensor product space
//! `C^{a_1} ⊗ ... ⊗ C^{a_n}` acted on by `GL_{a_1} × ... × GL_{a_n}`. All
//! derived quantities (the invariant N, the space dimension) are computed
//! with arbitrary-precision integers; the product of entries overflows
//! machine words almost immediately and the classifier must be exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An n-tuple of non-negative dimensions, n >= 3.
///
/// Entry order is preserved as constructed so that reports can echo the
/// user's input; the canonical form (entries sorted ascending) is what all
/// castling operations work on. Two tuples describe the same space exactly
/// when their canonical forms are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorTuple {
    entries: Vec<BigUint>,
}

impl TensorTuple {
    /// Builds a tuple from any sequence of non-negative integers.
    ///
    /// Rejects tuples with fewer than three entries.
    pub fn new<I>(entries: I) -> Result<Self, Error>
    where
        I: IntoIterator,
        I::Item: Into<BigUint>,
    {
        let entries: Vec<BigUint> = entries.into_iter().map(Into::into).collect();
        if entries.len() < 3 {
            return Err(Error::InvalidTuple(entries.len()));
        }
        Ok(TensorTuple { entries })
    }

    /// Number of tensor factors.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; tuples have at least three entries.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entries in construction order.
    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// Whether the entries are already sorted ascending.
    pub fn is_canonical(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// The canonical form: same multiset of entries, sorted ascending.
    pub fn canonicalize(&self) -> TensorTuple {
        let mut entries = self.entries.clone();
        entries.sort();
        TensorTuple { entries }
    }

    /// True if any entry is zero (the space is then trivially prehomogeneous).
    pub fn has_zero_entry(&self) -> bool {
        self.entries.iter().any(|a| a.is_zero())
    }

    /// True if all entries are positive.
    pub fn all_positive(&self) -> bool {
        !self.has_zero_entry()
    }

    /// The dimension of the space, `Π a_i`, exactly.
    pub fn dimension(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, a| acc * a)
    }

    /// The castling invariant `N = Σ a_i² − Π a_i − (n − 1)`, exactly.
    ///
    /// N is invariant under entry permutation, under castling
    /// transformations, and under padding with 1-entries.
    pub fn invariant_n(&self) -> BigInt {
        let sum_sq = self
            .entries
            .iter()
            .fold(BigUint::zero(), |acc, a| acc + a * a);
        BigInt::from(sum_sq) - BigInt::from(self.dimension()) - BigInt::from(self.len() - 1)
    }

    /// The necessary condition for prehomogeneity: `N >= 0`.
    pub fn necessary_condition(&self) -> bool {
        self.invariant_n() >= BigInt::zero()
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_u64_entries(&self) -> Option<Vec<u64>> {
        self.entries
            .iter()
            .map(|a| u64::try_from(a).ok())
            .collect()
    }

    /// The plain text form, `3,35,92`, used in CSV fields and JSON reports.
    pub fn to_plain(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for TensorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_plain())
    }
}

impl fmt::Debug for TensorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorTuple{}", self)
    }
}

impl FromStr for TensorTuple {
    type Err = Error;

    /// Parses the comma-separated text form, e.g. `"3,35,92"` or `" 3, 35 ,92 "`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let value =
                BigUint::from_str(part).map_err(|_| Error::Parse(part.to_string()))?;
            entries.push(value);
        }
        TensorTuple::new(entries)
    }
}

impl Serialize for TensorTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_plain())
    }
}

impl<'de> Deserialize<'de> for TensorTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapters that render arbitrary-precision integers as decimal strings.
///
/// JSON numbers cannot hold values beyond 2^53 faithfully in most consumers,
/// so every potentially-large integer in a report travels as a string.
pub(crate) mod serde_big {
    pub(crate) mod biguint {
        use num_bigint::BigUint;
        use serde::{Deserialize, Deserializer, Serializer};
        use std::str::FromStr;

        pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
            let s = String::deserialize(d)?;
            BigUint::from_str(&s).map_err(serde::de::Error::custom)
        }
    }

    pub(crate) mod bigint {
        use num_bigint::BigInt;
        use serde::{Deserialize, Deserializer, Serializer};
        use std::str::FromStr;

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            let s = String::deserialize(d)?;
            BigInt::from_str(&s).map_err(serde::de::Error::custom)
        }
    }

    pub(crate) mod opt_biguint {
        use num_bigint::BigUint;
        use serde::{Deserialize, Deserializer, Serializer};
        use std::str::FromStr;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<BigUint>, D::Error> {
            let s: Option<String> = Option::deserialize(d)?;
            match s {
                Some(s) => BigUint::from_str(&s)
                    .map(Some)
                    .map_err(serde::de::Error::custom),
                None => Ok(None),
            }
        }
    }
}
