#![allow(dead_code)]

use std::sync::Arc;

use molreward_bloom::BloomFilter;
use molreward_core::{parse, write_canonical};
use molreward_rewards::{
    BuildOptions, EsterificationTemplate, GradeContext, HeuristicSolubility, PlausibilityReference,
};

pub const CATALOG: &[&str] = &[
    "C", "CCO", "CC(=O)O", "CCOC(C)=O", "C1CCC1", "c1ccccc1", "Oc1ccccc1", "Cc1ccccc1",
    "OCc1ccccc1", "CCN", "CC(C)O", "CCCO", "OCCO", "NCCO", "CC(=O)N", "c1ccncc1",
    "CCCCCCCC", "SCCS", "OO", "C1CCCCC1", "CC(=O)c1ccccc1",
];

pub fn corpus() -> Vec<String> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/corpus.smi"))
        .expect("corpus file");
    text.lines().filter_map(|l| l.split_whitespace().next()).map(str::to_string).collect()
}

pub fn small_options() -> BuildOptions {
    BuildOptions { capacity: 20_000, fp_rate: 0.001, source: "test".into() }
}

pub fn reference() -> PlausibilityReference {
    PlausibilityReference::build(CATALOG, &small_options()).unwrap()
}

pub fn purchasable() -> BloomFilter {
    let mut f = BloomFilter::new(1000, 0.001).unwrap();
    for s in ["CC(=O)O", "CCO", "OC(=O)c1ccccc1", "CO", "OCc1ccccc1"] {
        f.insert(write_canonical(&parse(s).unwrap()).as_bytes());
    }
    f
}

pub fn context() -> GradeContext {
    GradeContext::new()
        .with_reference(Arc::new(reference()))
        .with_catalog(Arc::new(purchasable()))
        .with_reaction_oracle(Arc::new(EsterificationTemplate))
        .with_property_oracle(Arc::new(HeuristicSolubility))
}
