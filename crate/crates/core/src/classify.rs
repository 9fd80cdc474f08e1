//! The prehomogeneity decision procedure.
//!
//! The verdict follows from the invariant N alone except when N = 2, where
//! the minimal element of the castling class decides: a minimal tuple of
//! shape `(1,…,1,2,k,k)` is prehomogeneous exactly when `k ≤ 3`, and a
//! minimal tuple with at least four entries all ≥ 2 is prehomogeneous.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::castling::{minimize, DescentTrace};
use crate::error::Error;
use crate::tuple::TensorTuple;

/// The three possible outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Prehomogeneous,
    NotPrehomogeneous,
    /// A zero entry makes the space zero-dimensional, hence trivially
    /// prehomogeneous.
    TriviallyPrehomogeneous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Prehomogeneous => "Prehomogeneous",
            Verdict::NotPrehomogeneous => "NotPrehomogeneous",
            Verdict::TriviallyPrehomogeneous => "TriviallyPrehomogeneous",
        };
        f.write_str(s)
    }
}

/// Which branch of the decision procedure produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    ZeroEntry,
    #[serde(rename = "N_Negative")]
    NNegative,
    #[serde(rename = "N_ZeroOrOne")]
    NZeroOrOne,
    #[serde(rename = "N_Two_WeierstrassPattern")]
    NTwoWeierstrassPattern,
    #[serde(rename = "N_Two_AllAtLeastTwo")]
    NTwoAllAtLeastTwo,
    #[serde(rename = "N_AtLeastThree")]
    NAtLeastThree,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::ZeroEntry => "ZeroEntry",
            Rule::NNegative => "N_Negative",
            Rule::NZeroOrOne => "N_ZeroOrOne",
            Rule::NTwoWeierstrassPattern => "N_Two_WeierstrassPattern",
            Rule::NTwoAllAtLeastTwo => "N_Two_AllAtLeastTwo",
            Rule::NAtLeastThree => "N_AtLeastThree",
        };
        f.write_str(s)
    }
}

/// A full classification report for one tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub schema_version: String,
    /// The tuple as given, original entry order preserved.
    pub input: TensorTuple,
    pub verdict: Verdict,
    pub rule: Rule,
    #[serde(with = "crate::tuple::serde_big::bigint")]
    pub n_value: BigInt,
    /// The minimal element of the castling class; absent for zero-entry
    /// tuples, which are never castled.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minimal: Option<TensorTuple>,
    /// Present exactly when `rule` is the Weierstrass pattern; the verdict
    /// is then prehomogeneous iff `k ≤ 3`.
    #[serde(
        with = "crate::tuple::serde_big::opt_biguint",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub weierstrass_k: Option<BigUint>,
    /// The descent from the canonical input to the minimal element; absent
    /// for zero-entry tuples.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<DescentTrace>,
}

impl Classification {
    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        match self.rule {
            Rule::ZeroEntry => format!("{} (N={}, zero entry)", self.verdict, self.n_value),
            Rule::NTwoWeierstrassPattern => format!(
                "{} (N={}, minimal {}, k={})",
                self.verdict,
                self.n_value,
                self.minimal.as_ref().expect("minimal present"),
                self.weierstrass_k.as_ref().expect("k present"),
            ),
            _ => format!(
                "{} (N={}, minimal {})",
                self.verdict,
                self.n_value,
                self.minimal.as_ref().expect("minimal present"),
            ),
        }
    }
}

/// Reads off `k` when the multiset of entries is `{1,…,1, 2, k, k}`.
///
/// After discarding the 1-entries the remainder must be `{2}` (giving
/// `k = 1`), `{2,2,2}` (giving `k = 2`, which keeps `k` unique), or
/// `{2,k,k}` with `k ≥ 3`.
pub fn match_weierstrass_pattern(minimal: &TensorTuple) -> Option<BigUint> {
    let two = BigUint::from(2u32);
    let canonical = minimal.canonicalize();
    let stripped: Vec<&BigUint> = canonical
        .entries()
        .iter()
        .filter(|a| **a > BigUint::one())
        .collect();
    match stripped.as_slice() {
        [a] if **a == two => Some(BigUint::one()),
        [a, b, c] if **a == two && **b == two && **c == two => Some(two),
        [a, b, c] if **a == two && b == c && **b > two => Some((*b).clone()),
        _ => None,
    }
}

/// Classifies a tuple.
///
/// Zero-entry tuples short-circuit to trivially prehomogeneous without any
/// castling. Otherwise the verdict follows from N, descending to the
/// minimal tuple only in the N = 2 case. The full descent trace is always
/// attached for auditability.
///
/// The only error is an internal invariant breach: an N = 2 minimal tuple
/// matching neither decision branch, which cannot happen.
pub fn classify(t: &TensorTuple) -> Result<Classification, Error> {
    let n_value = t.invariant_n();
    if t.has_zero_entry() {
        return Ok(Classification {
            schema_version: SCHEMA_VERSION.to_string(),
            input: t.clone(),
            verdict: Verdict::TriviallyPrehomogeneous,
            rule: Rule::ZeroEntry,
            n_value,
            minimal: None,
            weierstrass_k: None,
            trace: None,
        });
    }

    let trace = minimize(t);
    let minimal = trace.terminal.clone();
    let two = BigInt::from(2);

    let (verdict, rule, weierstrass_k) = if n_value < BigInt::from(0) {
        (Verdict::NotPrehomogeneous, Rule::NNegative, None)
    } else if n_value < two {
        (Verdict::Prehomogeneous, Rule::NZeroOrOne, None)
    } else if n_value > two {
        (Verdict::Prehomogeneous, Rule::NAtLeastThree, None)
    } else if let Some(k) = match_weierstrass_pattern(&minimal) {
        let verdict = if k <= BigUint::from(3u32) {
            Verdict::Prehomogeneous
        } else {
            Verdict::NotPrehomogeneous
        };
        (verdict, Rule::NTwoWeierstrassPattern, Some(k))
    } else {
        let stripped: Vec<&BigUint> = minimal
            .entries()
            .iter()
            .filter(|a| **a > BigUint::one())
            .collect();
        if stripped.len() >= 4 {
            (Verdict::Prehomogeneous, Rule::NTwoAllAtLeastTwo, None)
        } else {
            return Err(Error::InvariantBreach(format!(
                "N = 2 minimal tuple {} matches no decision branch",
                minimal
            )));
        }
    };

    Ok(Classification {
        schema_version: SCHEMA_VERSION.to_string(),
        input: t.clone(),
        verdict,
        rule,
        n_value,
        minimal: Some(minimal),
        weierstrass_k,
        trace: Some(trace),
    })
}

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: &str = "1";

/// Outcome of the mod-9 obstruction scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidueReport {
    pub max: u64,
    pub scanned: u64,
    /// Triples whose N is ≡ 1 or 4 (mod 9); provably none exist.
    pub violations: Vec<ResidueViolation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidueViolation {
    pub triple: TensorTuple,
    #[serde(with = "crate::tuple::serde_big::bigint")]
    pub n_value: BigInt,
    pub residue: u8,
}

/// Scans all triples `1 ≤ a ≤ b ≤ c ≤ max` and reports any with
/// `N ≡ 1 or 4 (mod 9)`. None exist; a non-empty violation list signals a
/// bug in the invariant computation.
pub fn residue_obstruction_check(max: u64) -> ResidueReport {
    assert!(max >= 1);
    let nine = BigInt::from(9);
    let mut scanned = 0;
    let mut violations = Vec::new();
    for a in 1..=max {
        for b in a..=max {
            for c in b..=max {
                scanned += 1;
                let triple = TensorTuple::new([a, b, c]).expect("length 3");
                let n_value = triple.invariant_n();
                let residue = n_value.mod_floor(&nine);
                let residue = u8::try_from(&residue).expect("residue in 0..9");
                if residue == 1 || residue == 4 {
                    violations.push(ResidueViolation {
                        triple,
                        n_value,
                        residue,
                    });
                }
            }
        }
    }
    ResidueReport {
        max,
        scanned,
        violations,
    }
}

/// Classifies every non-decreasing tuple of length `n` with entries in
/// `[1, max_entry]`, in lexicographic order.
///
/// Tuples are classified in parallel; the output order is independent of
/// scheduling.
pub fn scan(n: usize, max_entry: u64) -> Result<Vec<Classification>, Error> {
    assert!(n >= 3, "scan needs n >= 3");
    assert!(max_entry >= 1, "scan needs max_entry >= 1");
    let mut tuples = Vec::new();
    let mut current = vec![1u64; n];
    loop {
        tuples.push(TensorTuple::new(current.iter().copied()).expect("n >= 3"));
        // Advance the non-decreasing odometer.
        let mut pos = n;
        loop {
            if pos == 0 {
                return tuples
                    .par_iter()
                    .map(classify)
                    .collect::<Result<Vec<_>, _>>();
            }
            pos -= 1;
            if current[pos] < max_entry {
                current[pos] += 1;
                for later in pos + 1..n {
                    current[later] = current[pos];
                }
                break;
            }
        }
    }
}
