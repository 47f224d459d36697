//! Operational surface of the reward engine: configuration, batch grading,
//! artifact builders and the HTTP grading service.

pub mod batch;
pub mod build;
pub mod config;
pub mod engine;
pub mod server;

pub use batch::{grade_lines, grade_stream, BatchSummary};
pub use config::{ConfigError, EngineConfig, PropertyOracleConfig, ReactionOracleConfig, ServerConfig};
pub use engine::{Engine, Fault, Graded};
