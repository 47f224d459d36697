//! Verifiable rewards for chemistry tasks: response parsing, per-task
//! verifiers, the plausibility reference and quality motifs.

pub mod error;
pub mod grade;
pub mod oracle;
pub mod plausibility;
pub mod quality;
pub mod record;
pub mod response;
pub mod task;
pub mod verify;

pub use error::GradeError;
pub use grade::{grade, GradeContext, Reason, RewardResult};
pub use oracle::{
    EsterificationTemplate, HeuristicSolubility, HttpPropertyOracle, HttpReactionOracle, LookupReactionOracle,
    OracleError, PropertyOracle, ReactionOracle, UnavailableOracle,
};
pub use plausibility::{BuildOptions, Manifest, Plausibility, PlausibilityReference, ReferenceError};
pub use quality::{quality_flags, QualityFlag, QualityReport};
pub use record::{grade_line, grade_record, task_from_record};
pub use response::{format_response, parse_response, ParsedResponse};
pub use task::{Direction, EditConstraints, Flags, Gold, TaskKind, TaskSpec};
pub use verify::{Outcome, ReasonCode};
