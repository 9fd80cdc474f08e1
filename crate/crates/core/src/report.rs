//! Deterministic report emission: sorted-key JSON and `;`-delimited CSV.

use serde::Serialize;

use crate::classify::Classification;
use crate::oracle::CrossRow;

/// Serializes a report as pretty JSON with keys sorted.
///
/// Routing through `serde_json::Value` sorts object keys, so byte-identical
/// requests produce byte-identical output.
pub fn to_sorted_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let value = serde_json::to_value(value)?;
    serde_json::to_string_pretty(&value)
}

/// Header line for classification scan CSV.
pub const SCAN_CSV_HEADER: &str = "tuple;N;verdict;rule;minimal;k;trace_len";

/// One scan row; empty fields where a value is absent.
pub fn classification_csv_row(c: &Classification) -> String {
    format!(
        "{};{};{};{};{};{};{}",
        c.input.to_plain(),
        c.n_value,
        c.verdict,
        c.rule,
        c.minimal.as_ref().map(|m| m.to_plain()).unwrap_or_default(),
        c.weierstrass_k
            .as_ref()
            .map(|k| k.to_string())
            .unwrap_or_default(),
        c.trace
            .as_ref()
            .map(|t| t.len().to_string())
            .unwrap_or_default(),
    )
}

/// Full scan CSV with header.
pub fn scan_to_csv(rows: &[Classification]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&classification_csv_row(row));
        out.push('\n');
    }
    out
}

/// Header line for cross-validation CSV.
pub const CROSS_CSV_HEADER: &str = "tuple;classifier_verdict;oracle_verdict;max_rank;dim_v";

pub fn cross_csv_row(row: &CrossRow) -> String {
    format!(
        "{};{};{};{};{}",
        row.tuple.to_plain(),
        row.classifier_verdict,
        row.oracle_verdict,
        row.max_rank,
        row.dim_v
    )
}

/// Full cross-validation CSV with header.
pub fn cross_to_csv(rows: &[CrossRow]) -> String {
    let mut out = String::from(CROSS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&cross_csv_row(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::tuple::TensorTuple;

    #[test]
    fn scan_csv_shape() {
        let c = classify(&TensorTuple::new([2u64, 5, 5]).unwrap()).unwrap();
        assert_eq!(
            classification_csv_row(&c),
            "2,5,5;2;NotPrehomogeneous;N_Two_WeierstrassPattern;2,5,5;5;0"
        );

        let c = classify(&TensorTuple::new([0u64, 7, 9]).unwrap()).unwrap();
        assert_eq!(
            classification_csv_row(&c),
            "0,7,9;128;TriviallyPrehomogeneous;ZeroEntry;;;"
        );
    }

    #[test]
    fn classification_json_round_trips() {
        let c = classify(&TensorTuple::new([3u64, 35, 92]).unwrap()).unwrap();
        let json = to_sorted_json(&c).unwrap();
        assert!(json.contains("\"schema_version\": \"1\""));
        let back: Classification = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn oracle_report_json_round_trips() {
        use crate::oracle::{orbit_rank, OrbitRankReport, DEFAULT_PRIME};
        let report =
            orbit_rank(&TensorTuple::new([2u64, 5, 5]).unwrap(), DEFAULT_PRIME, 2, 3).unwrap();
        let json = to_sorted_json(&report).unwrap();
        let back: OrbitRankReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn cross_row_csv_shape() {
        use crate::classify::Verdict;
        use crate::oracle::CrossRow;
        let row = CrossRow {
            tuple: TensorTuple::new([2u64, 5, 5]).unwrap(),
            classifier_verdict: Verdict::NotPrehomogeneous,
            oracle_verdict: Verdict::NotPrehomogeneous,
            max_rank: 48,
            dim_v: 50,
        };
        assert_eq!(
            cross_csv_row(&row),
            "2,5,5;NotPrehomogeneous;NotPrehomogeneous;48;50"
        );
    }

    #[test]
    fn json_keys_are_sorted() {
        let c = classify(&TensorTuple::new([2u64, 5, 5]).unwrap()).unwrap();
        let json = to_sorted_json(&c).unwrap();
        let top_level: Vec<usize> = ["\"input\"", "\"minimal\"", "\"n_value\"", "\"rule\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        let mut sorted = top_level.clone();
        sorted.sort();
        assert_eq!(top_level, sorted);
    }
}
