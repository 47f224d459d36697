//! Property tables: a header line, then `smiles, property, value` rows
//! separated by tabs (or commas when the header uses commas). Numeric values
//! parse as numbers; anything else is a `;`-separated label set.

use std::collections::{BTreeMap, BTreeSet};

use molreward_core::molgraph::{fingerprint, Fingerprint, DEFAULT_NBITS, DEFAULT_RADIUS};
use molreward_core::{parse, write_canonical, Molecule};

use crate::percentile::percentile_rank;
use crate::McqError;

#[derive(Clone, Debug, PartialEq)]
pub enum PropertyValue {
    Numeric(f64),
    Labels(BTreeSet<String>),
}

impl PropertyValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            PropertyValue::Numeric(v) => Some(*v),
            PropertyValue::Labels(_) => None,
        }
    }

    pub fn has_label(&self, label: &str) -> bool {
        matches!(self, PropertyValue::Labels(l) if l.contains(label))
    }

    pub fn display(&self) -> String {
        match self {
            PropertyValue::Numeric(v) => format!("{v}"),
            PropertyValue::Labels(l) => l.iter().cloned().collect::<Vec<_>>().join("; "),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyRecord {
    /// Canonical SMILES.
    pub smiles: String,
    pub molecule: Molecule,
    pub fingerprint: Fingerprint,
    pub property: String,
    pub value: PropertyValue,
    /// Midrank percentile within the record's property pool (numeric only).
    pub percentile: Option<f64>,
}

impl PropertyRecord {
    pub fn new(molecule: Molecule, property: &str, value: PropertyValue) -> PropertyRecord {
        PropertyRecord {
            smiles: write_canonical(&molecule),
            fingerprint: fingerprint(&molecule, DEFAULT_NBITS, DEFAULT_RADIUS),
            molecule,
            property: property.to_string(),
            value,
            percentile: None,
        }
    }
}

fn parse_value(text: &str) -> Result<PropertyValue, String> {
    if let Ok(v) = text.parse::<f64>() {
        return if v.is_finite() { Ok(PropertyValue::Numeric(v)) } else { Err(format!("non-finite value {text}")) };
    }
    let labels: BTreeSet<String> =
        text.split(';').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect();
    if labels.is_empty() {
        return Err("empty value".into());
    }
    Ok(PropertyValue::Labels(labels))
}

/// Reads a property table. Duplicate (molecule, property) rows keep the first.
pub fn read_table(text: &str) -> Result<Vec<PropertyRecord>, McqError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(McqError::Table { line: 1, msg: "missing header".into() })?;
    let sep = if header.contains('\t') { '\t' } else { ',' };
    let columns: Vec<String> = header.split(sep).map(|c| c.trim().to_lowercase()).collect();
    if columns != ["smiles", "property", "value"] {
        return Err(McqError::Table { line: 1, msg: format!("header must be smiles{sep}property{sep}value") });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, line) in lines {
        let err = |msg: String| McqError::Table { line: i + 1, msg };
        let fields: Vec<&str> = line.split(sep).map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        }
        let mol = parse(fields[0]).map_err(|e| err(format!("SMILES {:?}: {e}", fields[0])))?;
        if fields[1].is_empty() {
            return Err(err("empty property name".into()));
        }
        let value = parse_value(fields[2]).map_err(err)?;
        let record = PropertyRecord::new(mol, fields[1], value);
        if seen.insert((record.smiles.clone(), record.property.clone())) {
            out.push(record);
        }
    }
    Ok(out)
}

/// Groups records by property and fills in numeric percentiles.
pub fn pools(records: &[PropertyRecord]) -> BTreeMap<String, Vec<PropertyRecord>> {
    let mut map: BTreeMap<String, Vec<PropertyRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.property.clone()).or_default().push(r.clone());
    }
    for pool in map.values_mut() {
        finalize_percentiles(pool);
    }
    map
}

pub fn finalize_percentiles(pool: &mut [PropertyRecord]) {
    let values: Vec<f64> = pool.iter().filter_map(|r| r.value.as_number()).collect();
    if values.is_empty() {
        return;
    }
    for r in pool.iter_mut() {
        r.percentile = r.value.as_number().map(|v| percentile_rank(&values, v));
    }
}
