//! Question generation for a single target and for whole property tables.

use std::collections::{BTreeMap, BTreeSet};

use molreward_core::molgraph::tanimoto;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{build_cooccurrence_graph, split_leakage_free};
use crate::icl::make_icl_variant;
use crate::shard::similarity_shards;
use crate::table::{pools, PropertyRecord, PropertyValue};
use crate::templates::TemplateLibrary;
use crate::McqError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Minimum absolute gap between target and distractor values.
    pub window: f64,
    /// Window used for pKa-like properties.
    pub pka_window: f64,
    /// Minimum percentile separation for outlier questions (inclusive).
    pub percentile_gap: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { window: 0.25, pka_window: 0.35, percentile_gap: 10.0 }
    }
}

impl Thresholds {
    pub fn window_for(&self, property: &str) -> f64 {
        if property.to_lowercase().contains("pka") {
            self.pka_window
        } else {
            self.window
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Higher,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuestionKind {
    /// Pick the molecule matching a value or label.
    Identify,
    /// Pick the molecule that stands out in the given direction.
    Outlier(Direction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McqKind {
    Identify,
    Outlier,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mcq {
    pub id: String,
    pub question: String,
    pub options: Vec<String>,
    pub key: usize,
    pub kind: McqKind,
    pub property: String,
    /// Label asked about by categorical questions.
    #[serde(skip)]
    pub label: Option<String>,
    /// Direction of outlier questions.
    #[serde(skip)]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
    /// Property value of each option, aligned with `options`.
    #[serde(skip)]
    pub values: Vec<PropertyValue>,
}

impl Mcq {
    pub fn answer(&self) -> &str {
        &self.options[self.key]
    }
}

fn qualifies(
    kind: QuestionKind,
    label: Option<&str>,
    target: &PropertyRecord,
    other: &PropertyRecord,
    t: &Thresholds,
) -> bool {
    match (kind, label) {
        (QuestionKind::Identify, Some(l)) => !other.value.has_label(l),
        (QuestionKind::Identify, None) => match (target.value.as_number(), other.value.as_number()) {
            (Some(a), Some(b)) => (a - b).abs() > t.window_for(&target.property),
            _ => false,
        },
        (QuestionKind::Outlier(dir), _) => match (target.percentile, other.percentile) {
            (Some(a), Some(b)) => match dir {
                Direction::Higher => a - b >= t.percentile_gap,
                Direction::Lower => b - a >= t.percentile_gap,
            },
            _ => false,
        },
    }
}

/// Builds one question about `target` with distractors drawn from `pool`.
///
/// Distractors are the qualifying pool members most similar to the target
/// (Tanimoto, ties by SMILES). The option order is a seeded shuffle.
pub fn generate_mcq(
    target: &PropertyRecord,
    pool: &[PropertyRecord],
    kind: QuestionKind,
    n_options: usize,
    thresholds: &Thresholds,
    templates: &TemplateLibrary,
    seed: u64,
) -> Result<Mcq, McqError> {
    if n_options < 2 {
        return Err(McqError::TooFewOptions { min: 2, got: n_options });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label = match (&target.value, kind) {
        (PropertyValue::Labels(labels), QuestionKind::Identify) => {
            let labels: Vec<&String> = labels.iter().collect();
            Some(labels[rng.random_range(0..labels.len())].clone())
        }
        (PropertyValue::Labels(_), QuestionKind::Outlier(_)) => {
            return Err(McqError::KindMismatch("outlier questions need numeric values".into()))
        }
        (PropertyValue::Numeric(_), QuestionKind::Outlier(_)) if target.percentile.is_none() => {
            return Err(McqError::KindMismatch("target has no percentile".into()))
        }
        _ => None,
    };

    let mut candidates: Vec<(f64, &PropertyRecord)> = pool
        .iter()
        .filter(|r| r.property == target.property && r.smiles != target.smiles)
        .filter(|r| qualifies(kind, label.as_deref(), target, r, thresholds))
        .map(|r| (tanimoto(&target.fingerprint, &r.fingerprint).unwrap_or(0.0), r))
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.smiles.cmp(&b.1.smiles)));
    let mut chosen: Vec<&PropertyRecord> = Vec::with_capacity(n_options);
    chosen.push(target);
    let mut seen = BTreeSet::from([target.smiles.as_str()]);
    for (_, r) in candidates {
        if chosen.len() == n_options {
            break;
        }
        if seen.insert(r.smiles.as_str()) {
            chosen.push(r);
        }
    }
    if chosen.len() < n_options {
        return Err(McqError::InsufficientDistractors {
            target: target.smiles.clone(),
            found: chosen.len() - 1,
            needed: n_options - 1,
        });
    }
    chosen.shuffle(&mut rng);
    let key = chosen.iter().position(|r| r.smiles == target.smiles).expect("target among options");

    let value = target.value.display();
    let (template, mcq_kind, direction) = match (kind, &label) {
        (QuestionKind::Identify, Some(_)) => ("identify_label", McqKind::Identify, None),
        (QuestionKind::Identify, None) => ("identify_numeric", McqKind::Identify, None),
        (QuestionKind::Outlier(d @ Direction::Higher), _) => ("outlier_higher", McqKind::Outlier, Some(d)),
        (QuestionKind::Outlier(d @ Direction::Lower), _) => ("outlier_lower", McqKind::Outlier, Some(d)),
    };
    let fields = [
        ("property", target.property.as_str()),
        ("value", value.as_str()),
        ("label", label.as_deref().unwrap_or("")),
    ];
    Ok(Mcq {
        id: String::new(),
        question: templates.render(template, &fields, &mut rng),
        options: chosen.iter().map(|r| r.smiles.clone()).collect(),
        key,
        kind: mcq_kind,
        property: target.property.clone(),
        label,
        direction,
        split: None,
        context: None,
        values: chosen.iter().map(|r| r.value.clone()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetConfig {
    pub seed: u64,
    pub n_options: usize,
    /// Upper bound on generated questions; 0 means no limit.
    pub max_questions: usize,
    pub test_fraction: f64,
    /// Largest number of molecules in one similarity shard.
    pub shard_size: usize,
    /// Similarity needed to join an existing shard leader.
    pub shard_similarity: f64,
    pub thresholds: Thresholds,
    /// Also emit an in-context variant of every question with 3+ options.
    pub icl: bool,
}

impl Default for SetConfig {
    fn default() -> Self {
        SetConfig {
            seed: 0,
            n_options: 4,
            max_questions: 0,
            test_fraction: 0.2,
            shard_size: 32,
            shard_similarity: 0.25,
            thresholds: Thresholds::default(),
            icl: false,
        }
    }
}

pub(crate) fn mix_seed(seed: u64, parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for part in parts {
        for b in part.bytes().chain([0xff]) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Generates questions for every property in `records`, then assigns each
/// to train or test so no molecule appears on both sides.
///
/// Molecules are first clustered into similarity shards; every question
/// draws its options from a single shard, which bounds the size of the
/// co-occurrence components the split has to place.
pub fn generate_set(
    records: &[PropertyRecord],
    config: &SetConfig,
    templates: &TemplateLibrary,
) -> Result<Vec<Mcq>, McqError> {
    let pools = pools(records);
    let mut molecules: BTreeMap<&str, &PropertyRecord> = BTreeMap::new();
    for r in records {
        molecules.entry(r.smiles.as_str()).or_insert(r);
    }
    let unique: Vec<&PropertyRecord> = molecules.into_values().collect();
    let shards = similarity_shards(&unique, config.shard_size, config.shard_similarity, config.seed);
    let mut shard_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, shard) in shards.iter().enumerate() {
        for &m in shard {
            shard_of.insert(unique[m].smiles.as_str(), i);
        }
    }

    let mut questions = Vec::new();
    for (property, pool) in &pools {
        let mut by_shard: BTreeMap<usize, Vec<PropertyRecord>> = BTreeMap::new();
        for r in pool {
            by_shard.entry(shard_of[r.smiles.as_str()]).or_default().push(r.clone());
        }
        for members in by_shard.values() {
            for target in members {
                let seed = mix_seed(config.seed, &[property, &target.smiles]);
                let kind = match target.percentile {
                    Some(p) if seed & 1 == 1 => {
                        QuestionKind::Outlier(if p >= 50.0 { Direction::Higher } else { Direction::Lower })
                    }
                    _ => QuestionKind::Identify,
                };
                match generate_mcq(target, members, kind, config.n_options, &config.thresholds, templates, seed) {
                    Ok(q) => questions.push(q),
                    Err(McqError::InsufficientDistractors { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    questions.shuffle(&mut rng);
    if config.max_questions > 0 {
        questions.truncate(config.max_questions);
    }
    if questions.is_empty() {
        return Ok(questions);
    }
    let graph = build_cooccurrence_graph(&questions);
    let split = split_leakage_free(&graph, config.test_fraction)?;
    let mut out = Vec::with_capacity(questions.len() * if config.icl { 2 } else { 1 });
    for (i, mut q) in questions.into_iter().enumerate() {
        q.id = format!("mcq-{i:05}");
        q.split = split.side_of(q.answer()).map(str::to_string);
        let variant = if config.icl && q.options.len() >= 3 {
            Some(make_icl_variant(&q, mix_seed(config.seed, &[&q.id]))?)
        } else {
            None
        };
        out.push(q);
        out.extend(variant);
    }
    Ok(out)
}
