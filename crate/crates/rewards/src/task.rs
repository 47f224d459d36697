//! Task kinds, grading flags and typed gold payloads.

use std::fmt;
use std::str::FromStr;

use molreward_core::molgraph::Formula;
use molreward_core::{parse, Molecule};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::GradeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    IupacMatch,
    SmilesCompletion,
    MolecularFormula,
    FunctionalGroup,
    Elucidation,
    Retrosynthesis,
    ReactionPrediction,
    MoleculeCaption,
    SolubilityEdit,
    Mcq,
}

impl TaskKind {
    pub const ALL: [TaskKind; 10] = [
        TaskKind::IupacMatch,
        TaskKind::SmilesCompletion,
        TaskKind::MolecularFormula,
        TaskKind::FunctionalGroup,
        TaskKind::Elucidation,
        TaskKind::Retrosynthesis,
        TaskKind::ReactionPrediction,
        TaskKind::MoleculeCaption,
        TaskKind::SolubilityEdit,
        TaskKind::Mcq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::IupacMatch => "iupac_match",
            TaskKind::SmilesCompletion => "smiles_completion",
            TaskKind::MolecularFormula => "molecular_formula",
            TaskKind::FunctionalGroup => "functional_group",
            TaskKind::Elucidation => "elucidation",
            TaskKind::Retrosynthesis => "retrosynthesis",
            TaskKind::ReactionPrediction => "reaction_prediction",
            TaskKind::MoleculeCaption => "molecule_caption",
            TaskKind::SolubilityEdit => "solubility_edit",
            TaskKind::Mcq => "mcq",
        }
    }

    /// Kinds whose answers are checked against the plausibility reference
    /// and are eligible for the quality bonus.
    pub fn checks_quality(self) -> bool {
        matches!(
            self,
            TaskKind::SmilesCompletion
                | TaskKind::MolecularFormula
                | TaskKind::FunctionalGroup
                | TaskKind::Elucidation
                | TaskKind::SolubilityEdit
        )
    }

    /// Kinds where the answer is a newly designed molecule, so mixtures are
    /// restricted to a single counterion pair.
    pub fn is_open_design(self) -> bool {
        self.checks_quality()
    }

    /// Kinds whose gold carries a molecular formula.
    pub fn formula_bearing(self) -> bool {
        matches!(self, TaskKind::MolecularFormula | TaskKind::FunctionalGroup | TaskKind::Elucidation)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = GradeError;

    fn from_str(s: &str) -> Result<TaskKind, GradeError> {
        TaskKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GradeError::UnknownTaskKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flags {
    pub partial_credit: bool,
    pub quality_bonus: bool,
    /// Compare stereochemistry in exact-match kinds.
    pub stereo: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { partial_credit: false, quality_bonus: false, stereo: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EditConstraints {
    /// Require the same Murcko scaffold as the original.
    pub scaffold: bool,
    /// Minimum Tanimoto similarity to the original.
    pub similarity: Option<f64>,
    /// Pattern names whose counts must not change.
    pub preserve_groups: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Gold {
    Exact { target: Molecule },
    Completion { prefix: String },
    Formula { formula: Formula },
    FunctionalGroup { formula: Formula, groups: Vec<String> },
    Elucidation { target: Molecule, formula: Option<Formula>, threshold: f64 },
    Retrosynthesis { target: Molecule },
    Mcq { options: Vec<String>, key: usize },
    SolubilityEdit { original: Molecule, direction: Direction, magnitude: f64, constraints: EditConstraints },
}

pub const ELUCIDATION_THRESHOLD: f64 = 0.7;

#[derive(Clone, Debug)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub gold: Gold,
    pub flags: Flags,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExact {
    smiles: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompletion {
    prefix: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormula {
    formula: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroups {
    formula: String,
    groups: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElucidation {
    smiles: String,
    formula: Option<String>,
    threshold: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMcq {
    options: Vec<String>,
    key: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdit {
    smiles: String,
    direction: Direction,
    magnitude: f64,
    #[serde(default)]
    constraints: EditConstraints,
}

fn shape<T: serde::de::DeserializeOwned>(kind: TaskKind, gold: &Value) -> Result<T, GradeError> {
    T::deserialize(gold).map_err(|e| GradeError::InvalidGold(format!("{kind} payload: {e}")))
}

fn gold_molecule(smiles: &str) -> Result<Molecule, GradeError> {
    parse(smiles).map_err(|e| GradeError::InvalidGold(format!("gold SMILES {smiles:?}: {e}")))
}

fn gold_formula(text: &str) -> Result<Formula, GradeError> {
    Formula::parse(text).map_err(|e| GradeError::InvalidGold(format!("gold formula {text:?}: {e}")))
}

impl TaskSpec {
    /// Builds a task from its JSON gold payload. Payloads that do not match
    /// the kind, or that hold unparseable molecules or formulas, are
    /// configuration faults.
    pub fn from_json(kind: TaskKind, gold: &Value, flags: Flags) -> Result<TaskSpec, GradeError> {
        let gold = match kind {
            TaskKind::IupacMatch | TaskKind::ReactionPrediction | TaskKind::MoleculeCaption => {
                let r: RawExact = shape(kind, gold)?;
                Gold::Exact { target: gold_molecule(&r.smiles)? }
            }
            TaskKind::SmilesCompletion => {
                let r: RawCompletion = shape(kind, gold)?;
                Gold::Completion { prefix: r.prefix }
            }
            TaskKind::MolecularFormula => {
                let r: RawFormula = shape(kind, gold)?;
                Gold::Formula { formula: gold_formula(&r.formula)? }
            }
            TaskKind::FunctionalGroup => {
                let r: RawGroups = shape(kind, gold)?;
                if !(1..=3).contains(&r.groups.len()) {
                    return Err(GradeError::InvalidGold(format!(
                        "functional_group needs 1-3 groups, got {}",
                        r.groups.len()
                    )));
                }
                let lib = molreward_core::molgraph::PatternLibrary::builtin();
                if let Some(g) = r.groups.iter().find(|g| !lib.contains(g)) {
                    return Err(GradeError::UnknownGroup(g.clone()));
                }
                Gold::FunctionalGroup { formula: gold_formula(&r.formula)?, groups: r.groups }
            }
            TaskKind::Elucidation => {
                let r: RawElucidation = shape(kind, gold)?;
                let threshold = r.threshold.unwrap_or(ELUCIDATION_THRESHOLD);
                if !(0.0..=1.0).contains(&threshold) {
                    return Err(GradeError::InvalidGold(format!("threshold {threshold} outside [0, 1]")));
                }
                Gold::Elucidation {
                    target: gold_molecule(&r.smiles)?,
                    formula: r.formula.as_deref().map(gold_formula).transpose()?,
                    threshold,
                }
            }
            TaskKind::Retrosynthesis => {
                let r: RawExact = shape(kind, gold)?;
                Gold::Retrosynthesis { target: gold_molecule(&r.smiles)? }
            }
            TaskKind::Mcq => {
                let r: RawMcq = shape(kind, gold)?;
                if r.options.len() < 2 {
                    return Err(GradeError::InvalidGold("mcq needs at least two options".into()));
                }
                if r.key >= r.options.len() {
                    return Err(GradeError::InvalidGold(format!(
                        "mcq key {} out of range for {} options",
                        r.key,
                        r.options.len()
                    )));
                }
                Gold::Mcq { options: r.options, key: r.key }
            }
            TaskKind::SolubilityEdit => {
                let r: RawEdit = shape(kind, gold)?;
                if !(r.magnitude.is_finite() && r.magnitude >= 0.0) {
                    return Err(GradeError::InvalidGold(format!("magnitude {} must be >= 0", r.magnitude)));
                }
                if let Some(s) = r.constraints.similarity {
                    if !(0.0..=1.0).contains(&s) {
                        return Err(GradeError::InvalidGold(format!("similarity {s} outside [0, 1]")));
                    }
                }
                let lib = molreward_core::molgraph::PatternLibrary::builtin();
                if let Some(g) = r.constraints.preserve_groups.iter().find(|g| !lib.contains(g)) {
                    return Err(GradeError::UnknownGroup(g.clone()));
                }
                Gold::SolubilityEdit {
                    original: gold_molecule(&r.smiles)?,
                    direction: r.direction,
                    magnitude: r.magnitude,
                    constraints: r.constraints,
                }
            }
        };
        Ok(TaskSpec { kind, gold, flags })
    }
}
