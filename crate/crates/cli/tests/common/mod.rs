#![allow(dead_code)]

use std::path::{Path, PathBuf};

use molreward_cli::build::{bloom_build, ref_build};
use molreward_cli::{Engine, EngineConfig, PropertyOracleConfig, ReactionOracleConfig};
use molreward_rewards::{format_response, BuildOptions};
use serde_json::{json, Value};
use tempfile::TempDir;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus_path() -> PathBuf {
    repo_root().join("data/corpus.smi")
}

pub struct Artifacts {
    pub dir: TempDir,
    pub reference: PathBuf,
    pub catalog: PathBuf,
}

/// Reference and catalog built from the shipped data with small filters.
pub fn artifacts() -> Artifacts {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("reference");
    let options = BuildOptions { capacity: 20_000, fp_rate: 0.001, source: "corpus".into() };
    ref_build(&corpus_path(), &reference, &options).unwrap();
    let catalog = dir.path().join("catalog.bloom");
    bloom_build(&repo_root().join("data/purchasable.smi"), 1000, 0.001, &catalog).unwrap();
    Artifacts { dir, reference, catalog }
}

pub fn full_config(a: &Artifacts) -> EngineConfig {
    EngineConfig {
        reference: Some(a.reference.clone()),
        catalog: Some(a.catalog.clone()),
        reaction_oracle: Some(ReactionOracleConfig::Esterification),
        property_oracle: Some(PropertyOracleConfig::Heuristic),
        ..Default::default()
    }
}

pub fn engine(a: &Artifacts) -> Engine {
    Engine::from_config(full_config(a)).unwrap()
}

pub fn exact_record(id: impl Into<Value>, gold: &str, answer: &str) -> Value {
    json!({
        "id": id.into(),
        "task_kind": "reaction_prediction",
        "problem": "Predict the product.",
        "response": format_response("reasoning", answer),
        "gold": {"smiles": gold},
    })
}
