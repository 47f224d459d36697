//! Multiple-choice questions about molecular properties: distractor
//! selection by fingerprint similarity, co-occurrence splits that keep
//! train and test molecules apart, and in-context variants.

pub mod generate;
pub mod graph;
pub mod icl;
pub mod percentile;
pub mod shard;
pub mod table;
pub mod templates;

pub use generate::{generate_mcq, generate_set, Direction, Mcq, McqKind, QuestionKind, SetConfig, Thresholds};
pub use graph::{build_cooccurrence_graph, split_leakage_free, CooccurrenceGraph, Split};
pub use icl::make_icl_variant;
pub use percentile::percentile_rank;
pub use table::{read_table, PropertyRecord, PropertyValue};
pub use templates::TemplateLibrary;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McqError {
    #[error("line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("template library: {0}")]
    Template(String),
    #[error("only {found} qualifying distractors for {target}, need {needed}")]
    InsufficientDistractors { target: String, found: usize, needed: usize },
    #[error("question kind does not apply to this record: {0}")]
    KindMismatch(String),
    #[error("need at least {min} options, got {got}")]
    TooFewOptions { min: usize, got: usize },
    #[error("co-occurrence graph is empty")]
    EmptyGraph,
    #[error("largest component has {size} of {total} molecules; test fraction {fraction} cannot be met")]
    Unsatisfiable { size: usize, total: usize, fraction: f64 },
    #[error("test fraction {0} must lie in (0, 1)")]
    Fraction(f64),
}
