//! Decides whether the tensor product space `C^{a_1} ⊗ … ⊗ C^{a_n}` under
//! `GL_{a_1} × … × GL_{a_n}` carries a dense orbit.
//!
//! The decision rests on the castling invariant
//! `N = Σ a_i² − Π a_i − (n − 1)`, which is constant on castling classes:
//! a negative N rules the dense orbit out, N ∈ {0, 1} or N ≥ 3 rules it in,
//! and N = 2 is settled by descending to the minimal element of the
//! castling class and reading off the `(1,…,1,2,k,k)` pattern, which is
//! prehomogeneous exactly when `k ≤ 3`.
//!
//! Verdicts can be independently verified by the [`oracle`] module, which
//! computes the generic orbit dimension as the rank of the linearized
//! action on random tensors over a prime field. The [`kac`] module computes
//! the block decomposition of generic three-factor tensors.
//!
//! ```
//! use prehom::{classify, TensorTuple, Verdict};
//!
//! let space: TensorTuple = "3,35,92".parse().unwrap();
//! let report = classify(&space).unwrap();
//! assert_eq!(report.verdict, Verdict::Prehomogeneous);
//! assert_eq!(report.n_value, 36.into());
//! ```

pub mod castling;
pub mod classify;
pub mod error;
pub mod kac;
pub mod oracle;
pub mod report;
pub mod tuple;

pub use castling::{
    castle_at, enumerate_tree, equivalent, is_minimal, minimize, CastlingStep, DescentTrace,
    TreeChild, TreeNode,
};
pub use classify::{
    classify, match_weierstrass_pattern, residue_obstruction_check, scan, Classification,
    ResidueReport, Rule, Verdict, SCHEMA_VERSION,
};
pub use error::Error;
pub use kac::{
    block_layout, fib_sequence, kac_admissible, kac_decompose, sparsity_pattern, Block,
    BlockKind, BlockLayout, FibSequence, IndexRange, KacDecomposition, KacReport,
};
pub use oracle::{
    cross_validate, is_prime, isotropy_dimension, orbit_rank, CrossRow, CrossValidation,
    OrbitRankReport, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS, MAX_ORACLE_DIMENSION,
    SECOND_PRIME,
};
pub use tuple::TensorTuple;
