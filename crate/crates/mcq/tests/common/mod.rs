#![allow(dead_code)]

use std::collections::BTreeSet;

use molreward_core::parse;
use molreward_mcq::table::finalize_percentiles;
use molreward_mcq::{Mcq, PropertyRecord, PropertyValue};

pub fn numeric_pool(property: &str, rows: &[(&str, f64)]) -> Vec<PropertyRecord> {
    let mut pool: Vec<PropertyRecord> = rows
        .iter()
        .map(|(s, v)| PropertyRecord::new(parse(s).unwrap(), property, PropertyValue::Numeric(*v)))
        .collect();
    finalize_percentiles(&mut pool);
    pool
}

pub fn label_pool(property: &str, rows: &[(&str, &[&str])]) -> Vec<PropertyRecord> {
    rows.iter()
        .map(|(s, l)| {
            let labels = l.iter().map(|x| x.to_string()).collect();
            PropertyRecord::new(parse(s).unwrap(), property, PropertyValue::Labels(labels))
        })
        .collect()
}

/// Similarity recomputed from the raw bit sets.
pub fn jaccard(a: &PropertyRecord, b: &PropertyRecord) -> f64 {
    let x: BTreeSet<usize> = a.fingerprint.ones().collect();
    let y: BTreeSet<usize> = b.fingerprint.ones().collect();
    let union = x.union(&y).count();
    if union == 0 {
        return 0.0;
    }
    x.intersection(&y).count() as f64 / union as f64
}

/// Percentile by sorting: average of the 1-based positions the value could
/// occupy, rescaled so a unique value at position k maps to (k - 0.5)/n.
pub fn sorted_percentile(values: &[f64], x: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let first = v.iter().position(|&y| y == x).unwrap();
    let last = v.iter().rposition(|&y| y == x).unwrap();
    let mid = (first + last) as f64 / 2.0 + 0.5;
    100.0 * mid / v.len() as f64
}

pub fn question(options: &[&str]) -> Mcq {
    Mcq {
        id: String::new(),
        question: String::new(),
        options: options.iter().map(|s| s.to_string()).collect(),
        key: 0,
        kind: molreward_mcq::McqKind::Identify,
        property: "p".into(),
        label: None,
        direction: None,
        split: None,
        context: None,
        values: Vec::new(),
    }
}
