//! Generic-tensor block decompositions for `C^a ⊗ C^b ⊗ C^c`.
//!
//! For `2 ≤ a ≤ b ≤ c` with `c² + b² − abc ≥ 1`, the generic tensor
//! decomposes under `GL_b × GL_c` into `n` blocks of shape
//! `a × a_i × a_{i+1}` and `m` blocks of shape `a × a_{i+1} × a_{i+2}`,
//! where the `a_i` follow the recurrence `a_0 = 0, a_1 = 1,
//! a_i = a·a_{i−1} − a_{i−2}`. This module finds the canonical `(n, m, i)`
//! and lays the blocks out explicitly.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The recurrence `a_0 = 0, a_1 = 1, a_i = base·a_{i−1} − a_{i−2}`.
///
/// For base 2 this is `0, 1, 2, 3, …`; for base 3 the Fibonacci numbers of
/// odd position `0, 1, 3, 8, 21, …`. Strictly increasing from index 1 for
/// any base ≥ 2, and satisfying `a_i·a_{i+2} − a_{i+1}² = −1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibSequence {
    pub base: u64,
    #[serde(with = "serde_terms")]
    pub terms: Vec<BigUint>,
}

mod serde_terms {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(terms: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter().map(|t| t.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let strings: Vec<String> = Vec::deserialize(d)?;
        strings
            .iter()
            .map(|s| BigUint::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// The first `count` terms of the recurrence for `base`.
///
/// Fails with [`Error::BaseTooSmall`] for `base < 2` (the recurrence is
/// no longer monotone there and the subtraction can go negative).
///
/// # Panics
///
/// Panics if `count < 2`; the two seed terms are always part of the
/// sequence.
pub fn fib_sequence(base: u64, count: usize) -> Result<FibSequence, Error> {
    if base < 2 {
        return Err(Error::BaseTooSmall(base));
    }
    assert!(count >= 2, "the sequence starts from two seed terms");
    let mut terms = vec![BigUint::zero(), BigUint::one()];
    while terms.len() < count {
        let next = base * &terms[terms.len() - 1] - &terms[terms.len() - 2];
        terms.push(next);
    }
    Ok(FibSequence { base, terms })
}

/// Whether `(a, b, c)` satisfies `2 ≤ a ≤ b ≤ c` and `c² + b² − abc ≥ 1`.
pub fn kac_admissible(a: u64, b: u64, c: u64) -> bool {
    if !(2 <= a && a <= b && b <= c) {
        return false;
    }
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    &c * &c + &b * &b - a * b * c >= BigInt::one()
}

/// The canonical block multiplicities of a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KacDecomposition {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    /// Number of small (`a × a_i × a_{i+1}`) blocks.
    pub n: u64,
    /// Number of large (`a × a_{i+1} × a_{i+2}`) blocks.
    pub m: u64,
    /// Sequence index of the small block shape.
    pub i: usize,
    /// Terms `a_0 … a_{i+2}` of the recurrence for `a`.
    pub sequence: FibSequence,
}

/// Solves `b = n·a_i + m·a_{i+1}`, `c = n·a_{i+1} + m·a_{i+2}` for the
/// canonical `(n, m, i)`.
///
/// The scan tries each `i` with `a_i ≤ b`; the 2×2 system has determinant
/// −1, so each candidate solves in integers. A solution with `n = 0`
/// encodes the same block structure as `(n, m, i) = (m, 0, i+1)` — the
/// `m` large blocks at index `i` are the small blocks at index `i+1` — so
/// such solutions are normalized to the `n ≥ 1` form before deduplication.
/// Exactly one representative must remain; anything else is
/// [`Error::UniquenessViolation`].
pub fn kac_decompose(a: u64, b: u64, c: u64) -> Result<KacDecomposition, Error> {
    if !kac_admissible(a, b, c) {
        return Err(Error::NotAdmissible { a, b, c });
    }
    let big_b = BigInt::from(b);
    let big_c = BigInt::from(c);

    // Terms as BigInt, grown on demand; the scan stops once a_i > b.
    let mut terms: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    let grow = |terms: &mut Vec<BigInt>, upto: usize| {
        while terms.len() <= upto {
            let next = BigInt::from(a) * &terms[terms.len() - 1] - &terms[terms.len() - 2];
            terms.push(next);
        }
    };

    let mut solutions: Vec<(u64, u64, usize)> = Vec::new();
    let mut i = 0;
    loop {
        grow(&mut terms, i + 2);
        if terms[i] > big_b {
            break;
        }
        // Cramer with determinant a_i·a_{i+2} − a_{i+1}² = −1.
        let n = &big_c * &terms[i + 1] - &big_b * &terms[i + 2];
        let m = &big_b * &terms[i + 1] - &big_c * &terms[i];
        if !n.is_negative() && !m.is_negative() {
            let n = u64::try_from(&n).expect("n is bounded by c");
            let m = u64::try_from(&m).expect("m is bounded by b");
            let normalized = if n == 0 { (m, 0, i + 1) } else { (n, m, i) };
            if !solutions.contains(&normalized) {
                solutions.push(normalized);
            }
        }
        i += 1;
    }

    if solutions.len() != 1 {
        return Err(Error::UniquenessViolation {
            a,
            b,
            c,
            found: solutions.len(),
        });
    }
    let (n, m, i) = solutions[0];
    let sequence = fib_sequence(a, i + 3).expect("a >= 2 by admissibility");
    Ok(KacDecomposition {
        a,
        b,
        c,
        n,
        m,
        i,
        sequence,
    })
}

/// Block shape selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// `a × a_i × a_{i+1}`
    Small,
    /// `a × a_{i+1} × a_{i+2}`
    Large,
}

impl std::fmt::Display for BlockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockKind::Small => "small",
            BlockKind::Large => "large",
        })
    }
}

/// An inclusive 1-based index interval; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: u64,
    pub hi: u64,
}

impl IndexRange {
    pub fn width(&self) -> u64 {
        if self.lo > self.hi {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl Serialize for IndexRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.lo, self.hi).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (lo, hi) = <(u64, u64)>::deserialize(d)?;
        Ok(IndexRange { lo, hi })
    }
}

/// One block of the layout: the `k` interval lives in `[1, b]`, the `l`
/// interval in `[1, c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub k: IndexRange,
    pub l: IndexRange,
}

/// The exact index bookkeeping of a decomposition: small blocks first,
/// then large blocks; the `k` ranges partition `[1, b]` and the `l` ranges
/// partition `[1, c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub blocks: Vec<Block>,
}

/// Lays out the blocks of a decomposition.
///
/// For `i = 0` the small blocks have `a_0 = 0` width along `k`; they are
/// emitted as empty `k` ranges paired with unit `l` ranges.
pub fn block_layout(d: &KacDecomposition) -> BlockLayout {
    let term = |idx: usize| -> u64 {
        u64::try_from(&d.sequence.terms[idx]).expect("layout terms are bounded by b and c")
    };
    let (a_i, a_i1) = (term(d.i), term(d.i + 1));
    let a_i2 = if d.m > 0 { term(d.i + 2) } else { 0 };

    let mut blocks = Vec::new();
    for t in 1..=d.n {
        blocks.push(Block {
            kind: BlockKind::Small,
            k: IndexRange {
                lo: a_i * (t - 1) + 1,
                hi: a_i * t,
            },
            l: IndexRange {
                lo: a_i1 * (t - 1) + 1,
                hi: a_i1 * t,
            },
        });
    }
    for s in 1..=d.m {
        blocks.push(Block {
            kind: BlockKind::Large,
            k: IndexRange {
                lo: a_i * d.n + a_i1 * (s - 1) + 1,
                hi: a_i * d.n + a_i1 * s,
            },
            l: IndexRange {
                lo: a_i1 * d.n + a_i2 * (s - 1) + 1,
                hi: a_i1 * d.n + a_i2 * s,
            },
        });
    }
    BlockLayout { blocks }
}

/// All `(j, k, l)` positions allowed to be non-zero in the canonical form,
/// 1-based, in block order.
pub fn sparsity_pattern(d: &KacDecomposition, layout: &BlockLayout) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for block in &layout.blocks {
        for j in 1..=d.a {
            for k in block.k.iter() {
                for l in block.l.iter() {
                    out.push((j, k, l));
                }
            }
        }
    }
    out
}

/// The full JSON report shape for one decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KacReport {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
    pub m: u64,
    pub i: usize,
    #[serde(with = "serde_terms")]
    pub sequence: Vec<BigUint>,
    pub blocks: Vec<Block>,
}

impl KacDecomposition {
    pub fn layout(&self) -> BlockLayout {
        block_layout(self)
    }

    pub fn report(&self) -> KacReport {
        KacReport {
            a: self.a,
            b: self.b,
            c: self.c,
            n: self.n,
            m: self.m,
            i: self.i,
            sequence: self.sequence.terms.clone(),
            blocks: self.layout().blocks,
        }
    }
}
