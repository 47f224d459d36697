//! Declarative engine configuration (TOML).

use std::path::{Path, PathBuf};

use molreward_rewards::Flags;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "MOLREWARD_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Parse { path: PathBuf, source: Box<toml::de::Error> },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReactionOracleConfig {
    Http { url: String, timeout_ms: u64 },
    /// Built-in acid + alcohol esterification template.
    Esterification,
    /// Configured but always down; useful for exercising error paths.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PropertyOracleConfig {
    Http { url: String, timeout_ms: u64 },
    /// Deterministic logS stub from oxygen and heavy-atom counts.
    Heuristic,
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub bind: String,
    pub max_in_flight: usize,
    pub request_timeout_ms: u64,
    /// Largest record array accepted by one request.
    pub max_batch: usize,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { bind: "127.0.0.1:8080".into(), max_in_flight: 64, request_timeout_ms: 30_000, max_batch: 10_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GradeSettings {
    /// Worker threads for batch grading; 0 uses every core.
    pub parallelism: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Plausibility reference directory written by `ref-build`.
    pub reference: Option<PathBuf>,
    /// Purchasable-catalog Bloom filter written by `bloom-build`.
    pub catalog: Option<PathBuf>,
    /// Pattern library file; must match the compiled-in library.
    pub patterns: Option<PathBuf>,
    pub reaction_oracle: Option<ReactionOracleConfig>,
    pub property_oracle: Option<PropertyOracleConfig>,
    /// Defaults for records that omit `flags` or some of its fields.
    pub flags: Flags,
    pub grade: GradeSettings,
    pub server: ServerConfig,
}

impl EngineConfig {
    pub fn from_toml(text: &str) -> Result<EngineConfig, toml::de::Error> {
        toml::from_str(text)
    }

    /// Reads a config file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<EngineConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|source| ConfigError::Parse { path: path.into(), source: Box::new(source) })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.reference, &mut cfg.catalog, &mut cfg.patterns].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Loads `path`, or the file named by `MOLREWARD_CONFIG`, or the defaults.
    pub fn resolve(path: Option<&Path>) -> Result<EngineConfig, ConfigError> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(EngineConfig::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        for (name, p) in [("reference", &self.reference), ("catalog", &self.catalog), ("patterns", &self.patterns)] {
            if let Some(p) = p {
                if !p.exists() {
                    return invalid(format!("{name} path {} does not exist", p.display()));
                }
            }
        }
        let timeouts = [
            match &self.reaction_oracle {
                Some(ReactionOracleConfig::Http { timeout_ms, .. }) => Some(("reaction_oracle.timeout_ms", *timeout_ms)),
                _ => None,
            },
            match &self.property_oracle {
                Some(PropertyOracleConfig::Http { timeout_ms, .. }) => Some(("property_oracle.timeout_ms", *timeout_ms)),
                _ => None,
            },
            Some(("server.request_timeout_ms", self.server.request_timeout_ms)),
        ];
        for (name, t) in timeouts.into_iter().flatten() {
            if t == 0 {
                return invalid(format!("{name} must be > 0"));
            }
        }
        if self.server.max_in_flight == 0 {
            return invalid("server.max_in_flight must be > 0".into());
        }
        if self.server.max_batch == 0 {
            return invalid("server.max_batch must be > 0".into());
        }
        Ok(())
    }
}
