//! Loaded, immutable grading state shared by the CLI and the server.

use std::sync::Arc;
use std::time::Duration;

use molreward_bloom::BloomFilter;
use molreward_core::molgraph::PatternLibrary;
use molreward_rewards::oracle::{
    EsterificationTemplate, HeuristicSolubility, HttpPropertyOracle, HttpReactionOracle, UnavailableOracle,
};
use molreward_rewards::record::{error_json, result_json, RECORD_VERSION};
use molreward_rewards::{grade_record, GradeContext, GradeError, PlausibilityReference};
use serde_json::{json, Map, Value};

use crate::config::{ConfigError, EngineConfig, PropertyOracleConfig, ReactionOracleConfig};

/// How a record failed to grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The record itself is bad (unknown kind, malformed gold, ...).
    Record,
    /// The engine lacks a resource the record needs.
    Config,
    /// An oracle dependency is down.
    Unavailable,
}

impl Fault {
    pub fn of(error: &GradeError) -> Fault {
        match error {
            GradeError::MissingContext(_) => Fault::Config,
            e if e.is_transient() => Fault::Unavailable,
            _ => Fault::Record,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graded {
    pub json: Value,
    pub fault: Option<Fault>,
}

pub struct Engine {
    pub ctx: GradeContext,
    pub config: EngineConfig,
    versions: Value,
}

fn significant_lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect()
}

impl Engine {
    pub fn from_config(config: EngineConfig) -> Result<Engine, ConfigError> {
        config.validate()?;
        let invalid = |m: String| ConfigError::Invalid(m);
        let mut ctx = GradeContext::new();
        let mut versions = Map::new();
        versions.insert("engine".into(), json!(env!("CARGO_PKG_VERSION")));
        versions.insert("record".into(), json!(RECORD_VERSION));

        let reference = match &config.reference {
            Some(dir) => {
                let r = PlausibilityReference::load(dir)
                    .map_err(|e| invalid(format!("plausibility reference {}: {e}", dir.display())))?;
                let v = r.manifest().version_string();
                ctx = ctx.with_reference(Arc::new(r));
                json!(v)
            }
            None => Value::Null,
        };
        versions.insert("reference".into(), reference);

        let catalog = match &config.catalog {
            Some(path) => {
                let f = BloomFilter::load(path).map_err(|e| invalid(format!("catalog {}: {e}", path.display())))?;
                let v = json!({
                    "format_version": molreward_bloom::FORMAT_VERSION,
                    "m": f.m(),
                    "k": f.k(),
                    "inserted": f.inserted(),
                });
                ctx = ctx.with_catalog(Arc::new(f));
                v
            }
            None => Value::Null,
        };
        versions.insert("catalog".into(), catalog);

        if let Some(path) = &config.patterns {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.clone(), source })?;
            PatternLibrary::parse(&text).map_err(|e| invalid(format!("patterns {}: {e}", path.display())))?;
            if significant_lines(&text) != significant_lines(PatternLibrary::builtin_source()) {
                return Err(invalid(format!("pattern library {} differs from the compiled-in library", path.display())));
            }
        }
        let header = PatternLibrary::builtin_source().lines().next().unwrap_or_default();
        versions.insert("patterns".into(), json!(header.trim_start_matches("#!").trim()));

        let reaction = match &config.reaction_oracle {
            Some(ReactionOracleConfig::Http { url, timeout_ms }) => {
                ctx = ctx.with_reaction_oracle(Arc::new(HttpReactionOracle::new(url.clone(), Duration::from_millis(*timeout_ms))));
                "http"
            }
            Some(ReactionOracleConfig::Esterification) => {
                ctx = ctx.with_reaction_oracle(Arc::new(EsterificationTemplate));
                "esterification"
            }
            Some(ReactionOracleConfig::Unavailable) => {
                ctx = ctx.with_reaction_oracle(Arc::new(UnavailableOracle));
                "unavailable"
            }
            None => "none",
        };
        let property = match &config.property_oracle {
            Some(PropertyOracleConfig::Http { url, timeout_ms }) => {
                ctx = ctx.with_property_oracle(Arc::new(HttpPropertyOracle::new(url.clone(), Duration::from_millis(*timeout_ms))));
                "http"
            }
            Some(PropertyOracleConfig::Heuristic) => {
                ctx = ctx.with_property_oracle(Arc::new(HeuristicSolubility));
                "heuristic"
            }
            Some(PropertyOracleConfig::Unavailable) => {
                ctx = ctx.with_property_oracle(Arc::new(UnavailableOracle));
                "unavailable"
            }
            None => "none",
        };
        versions.insert("oracles".into(), json!({"reaction": reaction, "property": property}));
        Ok(Engine { ctx, config, versions: Value::Object(versions) })
    }

    /// Artifact and schema versions, as reported by `/healthz`.
    pub fn versions(&self) -> &Value {
        &self.versions
    }

    /// Fills in configured flag defaults for fields the record leaves out.
    fn with_flag_defaults(&self, record: &Value) -> Option<Value> {
        let obj = record.as_object()?;
        let mut flags = match serde_json::to_value(self.config.flags) {
            Ok(Value::Object(m)) => m,
            _ => return None,
        };
        match obj.get("flags") {
            None | Some(Value::Null) => {}
            Some(Value::Object(given)) => flags.extend(given.clone()),
            Some(_) => return None,
        }
        let mut out = obj.clone();
        out.insert("flags".into(), Value::Object(flags));
        Some(Value::Object(out))
    }

    pub fn grade_value(&self, record: &Value) -> Graded {
        let effective = self.with_flag_defaults(record);
        match grade_record(effective.as_ref().unwrap_or(record), &self.ctx) {
            Ok(r) => Graded { json: result_json(record, &r), fault: None },
            Err(e) => Graded { json: error_json(record, &e), fault: Some(Fault::of(&e)) },
        }
    }

    /// Grades one JSONL line; invalid JSON becomes a `malformed_record` error.
    pub fn grade_line(&self, line: &str) -> Graded {
        match serde_json::from_str::<Value>(line) {
            Ok(record) => self.grade_value(&record),
            Err(e) => {
                let err = GradeError::MalformedRecord(format!("invalid JSON: {e}"));
                Graded { json: error_json(&Value::Null, &err), fault: Some(Fault::Record) }
            }
        }
    }
}
