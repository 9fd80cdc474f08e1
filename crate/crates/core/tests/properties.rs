//! Cross-module property suites: castling algebra, descent behavior,
//! classifier consistency, and oracle expectations.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use prehom::{
    castle_at, classify, equivalent, is_minimal, kac_admissible, minimize, orbit_rank,
    Verdict, TensorTuple, DEFAULT_PRIME,
};

fn t(entries: &[u64]) -> TensorTuple {
    TensorTuple::new(entries.iter().copied()).unwrap()
}

fn tuple_entries() -> impl Strategy<Value = Vec<u64>> {
    (3usize..=6).prop_flat_map(|n| vec(1u64..=12, n))
}

proptest! {
    #[test]
    fn castling_is_involutive(entries in tuple_entries(), pick in any::<prop::sample::Index>()) {
        let tuple = TensorTuple::new(entries).unwrap();
        let j = pick.index(tuple.len());
        if let Ok(step) = castle_at(&tuple, j) {
            let back_at = step
                .result
                .entries()
                .iter()
                .position(|a| *a == step.new_value)
                .unwrap();
            let back = castle_at(&step.result, back_at).unwrap();
            prop_assert_eq!(back.result, tuple.canonicalize());
        }
    }

    #[test]
    fn invariant_survives_castling_walks(
        entries in tuple_entries(),
        picks in vec(any::<prop::sample::Index>(), 1..6),
    ) {
        let mut tuple = TensorTuple::new(entries).unwrap().canonicalize();
        let n = tuple.invariant_n();
        for pick in picks {
            let j = pick.index(tuple.len());
            if let Ok(step) = castle_at(&tuple, j) {
                tuple = step.result;
            }
            prop_assert_eq!(tuple.invariant_n(), n.clone());
        }
    }

    #[test]
    fn minimize_terminal_is_minimal_and_stable(entries in tuple_entries()) {
        let tuple = TensorTuple::new(entries).unwrap();
        let trace = minimize(&tuple);
        prop_assert!(is_minimal(&trace.terminal));
        prop_assert!(minimize(&trace.terminal).is_empty());
        prop_assert!(equivalent(&tuple, &trace.terminal));
        let mut dim = tuple.dimension();
        for step in &trace.steps {
            let next = step.result.dimension();
            prop_assert!(next < dim);
            dim = next;
        }
    }

    #[test]
    fn randomized_descent_reaches_the_same_terminal(
        entries in tuple_entries(),
        choice_seed in any::<u64>(),
    ) {
        let tuple = TensorTuple::new(entries).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(choice_seed);
        let mut current = tuple.canonicalize();
        loop {
            let steps: Vec<_> = (0..current.len())
                .filter_map(|j| castle_at(&current, j).ok())
                .filter(|s| !s.new_value.is_zero() && s.new_value < s.old_value)
                .collect();
            if steps.is_empty() {
                break;
            }
            let pick = rng.gen_range(0..steps.len());
            current = steps[pick].result.clone();
        }
        prop_assert_eq!(current, minimize(&tuple).terminal);
    }

    #[test]
    fn padding_preserves_invariant_and_verdict(
        entries in (3usize..=6).prop_flat_map(|n| vec(0u64..=12, n)),
        pad in 1usize..=3,
    ) {
        let base = TensorTuple::new(entries.iter().copied()).unwrap();
        let mut padded = vec![1u64; pad];
        padded.extend_from_slice(&entries);
        let padded = TensorTuple::new(padded).unwrap();
        prop_assert_eq!(base.invariant_n(), padded.invariant_n());
        prop_assert_eq!(
            classify(&base).unwrap().verdict,
            classify(&padded).unwrap().verdict
        );
    }

    #[test]
    fn verdict_is_castling_invariant(entries in tuple_entries(), pick in any::<prop::sample::Index>()) {
        let tuple = TensorTuple::new(entries).unwrap();
        let j = pick.index(tuple.len());
        if let Ok(step) = castle_at(&tuple, j) {
            let before = classify(&tuple).unwrap().verdict;
            let after = classify(&step.result).unwrap().verdict;
            // Castling to a zero entry leaves the positive-dimension class,
            // where the verdict turns into the trivial one.
            if step.result.all_positive() {
                prop_assert_eq!(before, after);
            } else {
                prop_assert_eq!(after, Verdict::TriviallyPrehomogeneous);
            }
        }
    }

    #[test]
    fn sufficient_condition_implies_prehomogeneous(
        entries in (2usize..=5).prop_flat_map(|n| vec(0u64..=9, n)),
        slack in 0u64..=5,
    ) {
        // Any tuple with one entry at least the product of the others.
        let product: u64 = entries.iter().product();
        let mut full = entries.clone();
        full.push(product + slack);
        let tuple = TensorTuple::new(full).unwrap();
        let verdict = classify(&tuple).unwrap().verdict;
        prop_assert!(
            verdict == Verdict::Prehomogeneous || verdict == Verdict::TriviallyPrehomogeneous,
            "verdict {:?} for {}",
            verdict,
            tuple
        );
    }
}

/// A product-decreasing, all-positive castle exists at a non-maximal entry
/// only on tuples of the shape `(1,…,1,b,c)` with `2 ≤ b < c < 2b`, where
/// the step at `b` descends. Checked exhaustively on small dimensions.
#[test]
fn descent_position_shape_is_exhaustive() {
    fn check(entries: &[u64]) {
        let product: u64 = entries.iter().product();
        let max = *entries.last().unwrap();
        for &e in entries {
            let q = product / e;
            if q <= e {
                continue;
            }
            let new = q - e;
            if new == 0 || new >= e {
                continue;
            }
            // A strictly decreasing positive step exists at e.
            if e == max {
                continue;
            }
            let non_ones: Vec<u64> = entries.iter().copied().filter(|&x| x > 1).collect();
            assert_eq!(non_ones.len(), 2, "unexpected descent shape {entries:?}");
            let (b, c) = (non_ones[0], non_ones[1]);
            assert_eq!(e, b, "descent at unexpected entry in {entries:?}");
            assert!(2 <= b && b < c && c < 2 * b, "shape violation {entries:?}");
        }
    }

    fn enumerate(n: usize, max_dim: u64, min: u64, acc: &mut Vec<u64>, count: &mut u64) {
        if acc.len() == n {
            check(acc);
            *count += 1;
            return;
        }
        let product: u64 = acc.iter().product();
        let mut e = min;
        while product * e <= max_dim {
            acc.push(e);
            enumerate(n, max_dim, e, acc, count);
            acc.pop();
            e += 1;
        }
    }

    let mut count = 0;
    for (n, max_dim) in [(3, 10_000), (4, 10_000), (5, 3_000)] {
        enumerate(n, max_dim, 1, &mut Vec::new(), &mut count);
    }
    assert!(count > 100_000, "exhaustive sweep too small: {count}");
}

/// Agreement of the raw checker above with the library castle on a sample.
#[test]
fn raw_descent_checker_agrees_with_castle_at() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for _ in 0..500 {
        let n = rng.gen_range(3..=5);
        let entries: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
        let mut sorted = entries.clone();
        sorted.sort();
        let tuple = t(&sorted);
        let product: u64 = sorted.iter().product();
        for (j, &e) in sorted.iter().enumerate() {
            let q = product / e;
            let lib = castle_at(&tuple, j);
            if q < e {
                assert!(lib.is_err());
            } else {
                let step = lib.unwrap();
                assert_eq!(step.complement_product, (q).into());
                assert_eq!(step.new_value, (q - e).into());
            }
        }
    }
}

/// Triples with all entries at least 2 and N ≥ 3 satisfy `ab ≤ 2c`.
#[test]
fn large_invariant_triples_satisfy_the_product_bound() {
    for a in 2u64..=50 {
        for b in a..=50 {
            for c in b..=50 {
                let triple = t(&[a, b, c]);
                if triple.invariant_n() >= BigInt::from(3) {
                    assert!(a * b <= 2 * c, "ab > 2c at ({a},{b},{c})");
                }
            }
        }
    }
}

/// Minimal tuples of length 4 or 5 with entries in [2,12] and N ≥ 0 have
/// some entry at least the product of the others.
#[test]
fn minimal_dense_tuples_have_a_dominating_entry() {
    fn enumerate(n: usize, min: u64, acc: &mut Vec<u64>, found: &mut u64) {
        if acc.len() == n {
            let tuple = t(acc);
            if tuple.invariant_n() >= BigInt::zero() && is_minimal(&tuple) {
                let product: u64 = acc.iter().product();
                assert!(
                    acc.iter().any(|&a| a >= product / a),
                    "no dominating entry in {acc:?}"
                );
                *found += 1;
            }
            return;
        }
        for e in min..=12 {
            acc.push(e);
            enumerate(n, e, acc, found);
            acc.pop();
        }
    }
    let mut found = 0;
    enumerate(4, 2, &mut Vec::new(), &mut found);
    enumerate(5, 2, &mut Vec::new(), &mut found);
    assert!(found > 0, "the sweep should hit some minimal tuples");
}

/// Admissible triples are prehomogeneous.
#[test]
fn admissible_triples_classify_prehomogeneous() {
    for a in 2u64..=30 {
        for b in a..=30 {
            for c in b..=30 {
                if kac_admissible(a, b, c) {
                    let verdict = classify(&t(&[a, b, c])).unwrap().verdict;
                    assert_eq!(verdict, Verdict::Prehomogeneous, "({a},{b},{c})");
                }
            }
        }
    }
}

/// Generic block triples `(a, a_i, a_{i+1})` are prehomogeneous.
#[test]
fn fibonacci_blocks_are_prehomogeneous() {
    for a in 2u64..=6 {
        let seq = prehom::fib_sequence(a, 8).unwrap();
        for i in 1..=5usize {
            let ai = u64::try_from(&seq.terms[i]).unwrap();
            let ai1 = u64::try_from(&seq.terms[i + 1]).unwrap();
            let triple = t(&[a, ai, ai1]);
            let verdict = classify(&triple).unwrap().verdict;
            assert_eq!(verdict, Verdict::Prehomogeneous, "(a={a}, i={i})");
        }
    }
}

/// Structural consistency of classification reports over a scan sweep:
/// the rule agrees with the invariant, `weierstrass_k` appears exactly
/// under its rule and then decides the verdict, and traces chain properly.
#[test]
fn classification_reports_are_internally_consistent() {
    let rows: Vec<_> = prehom::scan(3, 12)
        .unwrap()
        .into_iter()
        .chain(prehom::scan(4, 6).unwrap())
        .collect();
    for c in rows {
        match c.rule {
            prehom::Rule::ZeroEntry => unreachable!("scan emits positive entries"),
            prehom::Rule::NNegative => assert!(c.n_value < BigInt::zero()),
            prehom::Rule::NZeroOrOne => {
                assert!(c.n_value == BigInt::zero() || c.n_value == BigInt::from(1))
            }
            prehom::Rule::NTwoWeierstrassPattern | prehom::Rule::NTwoAllAtLeastTwo => {
                assert_eq!(c.n_value, BigInt::from(2))
            }
            prehom::Rule::NAtLeastThree => assert!(c.n_value >= BigInt::from(3)),
        }
        assert_eq!(
            c.weierstrass_k.is_some(),
            c.rule == prehom::Rule::NTwoWeierstrassPattern
        );
        if let Some(k) = &c.weierstrass_k {
            let expected = if *k <= 3u64.into() {
                Verdict::Prehomogeneous
            } else {
                Verdict::NotPrehomogeneous
            };
            assert_eq!(c.verdict, expected);
        }
        let trace = c.trace.expect("non-zero-entry rows carry a trace");
        assert_eq!(trace.terminal, c.minimal.unwrap());
        let mut prev = c.input.canonicalize();
        for step in &trace.steps {
            assert_eq!(step.source, prev);
            prev = step.result.clone();
        }
        assert_eq!(prev, trace.terminal);
    }
}

/// Isotropy estimates for the `(2,k,k)` family: `k+1` from the pencil
/// argument for k ≥ 3; the prehomogeneous k = 2 member saturates at
/// `dim_g − dim_v = 4` instead.
#[test]
fn weierstrass_family_isotropy_estimates() {
    for k in 2u64..=6 {
        let report = orbit_rank(&t(&[2, k, k]), DEFAULT_PRIME, 3, 11).unwrap();
        let expected = if k == 2 { 4 } else { k + 1 };
        assert_eq!(
            report.isotropy_dim_estimate, expected,
            "(2,{k},{k}) estimate"
        );
        assert!(report.isotropy_dim_estimate >= 2);
    }
}
