//! Independent prehomogeneity verification over a prime field.
//!
//! The orbit of a tensor `T` under the product of general linear groups is
//! dense exactly when the linearized action at a generic point has rank
//! equal to the space dimension. The oracle draws random tensors over
//! `F_p`, builds the matrix whose columns are the images of `T` under the
//! elementary transformations of each factor, and row-reduces it modulo
//! `p`. Exact arithmetic over a large prime sidesteps floating-point rank
//! tolerance entirely: the rank of an integer matrix equals the rank mod
//! `p` for all but finitely many primes, and a sampled rank can only ever
//! undershoot the generic one, never overshoot it.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Verdict};
use crate::error::Error;
use crate::tuple::TensorTuple;

/// Default modulus, `2^31 − 1` (prime).
pub const DEFAULT_PRIME: u64 = 2_147_483_647;
/// Alternate modulus used by the second-prime retry, `2^31 − 99` (prime).
pub const SECOND_PRIME: u64 = 2_147_483_549;
/// Default number of random tensors per verdict.
pub const DEFAULT_TRIALS: u32 = 3;
/// Default seed when none is given.
pub const DEFAULT_SEED: u64 = 0;
/// Largest space dimension the oracle accepts.
pub const MAX_ORACLE_DIMENSION: u64 = 5000;

/// The outcome of an oracle run on one tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRankReport {
    pub tuple: TensorTuple,
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
    /// `Π a_i`, the dimension of the tensor space.
    pub dim_v: u64,
    /// `Σ a_i²`, the dimension of the acting group.
    pub dim_g: u64,
    /// Best rank of the linearized action over all trials (and over the
    /// retry prime, when engaged).
    pub max_rank: u64,
    /// `dim_g − max_rank`; never below `n − 1`, the dimension of the
    /// scaling subgroup contained in every isotropy group.
    pub isotropy_dim_estimate: u64,
    /// Prehomogeneous iff `max_rank = dim_v`.
    pub verdict: Verdict,
    /// Set when a first-pass NotPrehomogeneous verdict was re-checked with
    /// a second prime to guard against characteristic artifacts.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub retry_prime: Option<u64>,
}

/// Trial-division primality test; the oracle only accepts moduli below
/// 2^31, so this is at most ~46k divisions.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d <= p / d {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn validate_prime(prime: u64, must_exceed: u64) -> Result<(), Error> {
    if prime >= 1 << 31 || !is_prime(prime) || prime <= must_exceed {
        return Err(Error::BadPrime(prime));
    }
    Ok(())
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

/// Row-echelon basis of a growing column span, keyed by pivot position.
///
/// Operands stay below 2^31, so `u64` products never overflow.
struct EchelonBasis {
    p: u64,
    rows: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl EchelonBasis {
    fn new(dim: usize, p: u64) -> Self {
        EchelonBasis {
            p,
            rows: vec![None; dim],
            rank: 0,
        }
    }

    /// Reduces `col` against the basis in place; if a nonzero remainder
    /// survives it joins the basis. Returns true when the rank grew.
    fn insert(&mut self, col: &mut [u64]) -> bool {
        let p = self.p;
        let mut start = 0;
        loop {
            let Some(pivot) = (start..col.len()).find(|&i| col[i] != 0) else {
                return false;
            };
            match &self.rows[pivot] {
                Some(row) => {
                    let f = col[pivot];
                    // One reduction per element; values stay below 2p, so a
                    // conditional subtract replaces the second modulo.
                    for i in pivot..col.len() {
                        let v = col[i] + p - f * row[i] % p;
                        col[i] = if v >= p { v - p } else { v };
                    }
                    start = pivot + 1;
                }
                None => {
                    let inv = inv_mod(col[pivot], p);
                    let normalized: Vec<u64> = col.iter().map(|&v| v * inv % p).collect();
                    self.rows[pivot] = Some(normalized);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }
}

/// Deterministic seed mixing; per-tuple, per-prime, per-trial streams are
/// derived from the user seed so parallel and serial runs agree.
fn mix(mut h: u64, v: u64) -> u64 {
    h ^= v;
    h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = h;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_seed(seed: u64, tuple: &TensorTuple, prime: u64, trial: u32) -> u64 {
    let mut h = mix(seed, tuple.len() as u64);
    for entry in tuple.entries() {
        for digit in entry.iter_u64_digits() {
            h = mix(h, digit);
        }
        h = mix(h, u64::MAX); // entry separator
    }
    h = mix(h, prime);
    mix(h, trial as u64)
}

/// Rank of the linearized action at `tensor`, modulo `p`.
///
/// The matrix columns are, for each mode in tuple order and each elementary
/// transformation `E_{rs}` of that factor in row-major `(r, s)` order, the
/// tensor obtained by applying `E_{rs}` along that mode: the mode-`r` slice
/// of the column is the mode-`s` slice of `tensor`, all else zero. Rows are
/// indexed by multi-indices in row-major order, last factor fastest.
fn action_rank(dims: &[usize], tensor: &[u64], p: u64) -> usize {
    let dim_v = tensor.len();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut basis = EchelonBasis::new(dim_v, p);
    let mut col = vec![0u64; dim_v];
    for (mode, &a) in dims.iter().enumerate() {
        let stride = strides[mode];
        let block = stride * a;
        for r in 0..a {
            for s in 0..a {
                col.fill(0);
                let mut outer = 0;
                while outer < dim_v {
                    let dst = outer + r * stride;
                    let src = outer + s * stride;
                    col[dst..dst + stride].copy_from_slice(&tensor[src..src + stride]);
                    outer += block;
                }
                basis.insert(&mut col);
                if basis.rank == dim_v {
                    return dim_v;
                }
            }
        }
    }
    basis.rank
}

fn best_rank_over_trials(
    tuple: &TensorTuple,
    dims: &[usize],
    prime: u64,
    trials: u32,
    seed: u64,
) -> usize {
    let dim_v: usize = dims.iter().product();
    let mut best = 0;
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(trial_seed(seed, tuple, prime, trial));
        let mut tensor: Vec<u64>;
        loop {
            tensor = (0..dim_v).map(|_| rng.gen_range(0..prime)).collect();
            if tensor.iter().any(|&v| v != 0) {
                break;
            }
        }
        best = best.max(action_rank(dims, &tensor, prime));
        if best == dim_v {
            break;
        }
    }
    best
}

/// Runs the rank oracle on `t`.
///
/// Draws up to `trials` random tensors over `F_prime` and reports the best
/// rank of the linearized action, stopping early once the rank ceiling
/// `dim_v` is reached. A first-pass NotPrehomogeneous verdict is re-checked
/// once under a second prime and the better rank kept. With a fixed seed
/// the report is bit-reproducible.
pub fn orbit_rank(
    t: &TensorTuple,
    prime: u64,
    trials: u32,
    seed: u64,
) -> Result<OrbitRankReport, Error> {
    let dim_v_big = t.dimension();
    if dim_v_big > BigUint::from(MAX_ORACLE_DIMENSION) {
        return Err(Error::DimensionTooLarge {
            dim: dim_v_big,
            bound: MAX_ORACLE_DIMENSION,
        });
    }
    let dim_v = u64::try_from(&dim_v_big).expect("bounded by MAX_ORACLE_DIMENSION");
    // The modulus must exceed dim_g and stay below 2^31, so a group
    // dimension at or above 2^31 admits no usable prime at all. This also
    // bounds the entries themselves (each a_i² ≤ dim_g), which a zero entry
    // elsewhere would otherwise leave unconstrained.
    let dim_g_big = t
        .entries()
        .iter()
        .fold(BigUint::from(0u32), |acc, a| acc + a * a);
    if dim_g_big >= BigUint::from(1u64 << 31) {
        return Err(Error::BadPrime(prime));
    }
    let dim_g = u64::try_from(&dim_g_big).expect("bounded above");
    let entries = t.to_u64_entries().expect("entries bounded by dim_g");
    validate_prime(prime, dim_v.max(dim_g))?;

    let dims: Vec<usize> = entries.iter().map(|&a| a as usize).collect();
    let mut max_rank;
    let mut retry_prime = None;
    if dim_v == 0 {
        // A zero entry makes the space zero-dimensional; nothing to sample.
        max_rank = 0;
    } else {
        max_rank = best_rank_over_trials(t, &dims, prime, trials, seed) as u64;
        if max_rank < dim_v {
            let second = if prime == SECOND_PRIME {
                DEFAULT_PRIME
            } else {
                SECOND_PRIME
            };
            validate_prime(second, dim_v.max(dim_g))?;
            max_rank =
                max_rank.max(best_rank_over_trials(t, &dims, second, trials, seed) as u64);
            retry_prime = Some(second);
        }
    }

    let verdict = if max_rank == dim_v {
        Verdict::Prehomogeneous
    } else {
        Verdict::NotPrehomogeneous
    };
    Ok(OrbitRankReport {
        tuple: t.clone(),
        prime,
        trials,
        seed,
        dim_v,
        dim_g,
        max_rank,
        isotropy_dim_estimate: dim_g - max_rank,
        verdict,
        retry_prime,
    })
}

/// `dim_g − max_rank`, checked against the hard lower bound `n − 1`.
///
/// Every isotropy group contains the scaling subgroup of dimension `n − 1`,
/// so a smaller estimate can only come from a rank computation bug.
pub fn isotropy_dimension(report: &OrbitRankReport) -> Result<u64, Error> {
    let floor = (report.tuple.len() - 1) as u64;
    let estimate = report.dim_g - report.max_rank;
    if estimate < floor {
        return Err(Error::InvariantBreach(format!(
            "isotropy estimate {} for {} is below n-1 = {}",
            estimate, report.tuple, floor
        )));
    }
    Ok(estimate)
}

/// One row of a classifier/oracle comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRow {
    pub tuple: TensorTuple,
    pub classifier_verdict: Verdict,
    pub oracle_verdict: Verdict,
    pub max_rank: u64,
    pub dim_v: u64,
}

impl CrossRow {
    pub fn agrees(&self) -> bool {
        self.classifier_verdict == self.oracle_verdict
    }
}

/// A full cross-validation run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub n_values: Vec<usize>,
    pub max_dimension: u64,
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
    pub rows: Vec<CrossRow>,
}

impl CrossValidation {
    /// The rows where the decision procedure and the oracle disagree;
    /// expected empty.
    pub fn discrepancies(&self) -> Vec<&CrossRow> {
        self.rows.iter().filter(|r| !r.agrees()).collect()
    }
}

/// Enumerates every canonical tuple with positive entries, length in
/// `n_values`, and dimension at most `max_dimension`, classifies each, runs
/// the oracle on each, and reports the comparison.
///
/// Tuples run in parallel; per-tuple seeds derive from `(seed, tuple)`, so
/// the output is independent of scheduling. Rows appear per requested
/// length in lexicographic order.
pub fn cross_validate(
    n_values: &[usize],
    max_dimension: u64,
    prime: u64,
    trials: u32,
    seed: u64,
) -> Result<CrossValidation, Error> {
    let mut tuples = Vec::new();
    for &n in n_values {
        assert!(n >= 3, "tuples have at least 3 entries");
        let mut current = Vec::with_capacity(n);
        enumerate_bounded(n, 1, 1, max_dimension, &mut current, &mut tuples);
    }
    let rows: Vec<CrossRow> = tuples
        .par_iter()
        .map(|t| {
            let classification = classify(t)?;
            let report = orbit_rank(t, prime, trials, seed)?;
            Ok(CrossRow {
                tuple: t.clone(),
                classifier_verdict: classification.verdict,
                oracle_verdict: report.verdict,
                max_rank: report.max_rank,
                dim_v: report.dim_v,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(CrossValidation {
        n_values: n_values.to_vec(),
        max_dimension,
        prime,
        trials,
        seed,
        rows,
    })
}

fn enumerate_bounded(
    n: usize,
    min_entry: u64,
    product: u64,
    max_dimension: u64,
    current: &mut Vec<u64>,
    out: &mut Vec<TensorTuple>,
) {
    if current.len() == n {
        out.push(TensorTuple::new(current.iter().copied()).expect("n >= 3"));
        return;
    }
    let remaining = (n - current.len()) as u32;
    let mut entry = min_entry;
    loop {
        // Entries are non-decreasing, so entry^remaining bounds the rest.
        let completion = (product as u128) * (entry as u128).pow(remaining);
        if completion > max_dimension as u128 {
            break;
        }
        current.push(entry);
        enumerate_bounded(n, entry, product * entry, max_dimension, current, out);
        current.pop();
        entry += 1;
    }
}
