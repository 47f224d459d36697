//! Reward composition: `format * accuracy + bonus`.

use std::sync::Arc;

use molreward_bloom::BloomFilter;
use serde::Serialize;

use crate::error::GradeError;
use crate::oracle::{PropertyOracle, ReactionOracle};
use crate::plausibility::PlausibilityReference;
use crate::quality::quality_flags;
use crate::response::parse_response;
use crate::task::{Gold, TaskKind, TaskSpec};
use crate::verify::{self, Outcome, ReasonCode};

/// Shared, read-only resources that verifiers may need.
#[derive(Clone, Default)]
pub struct GradeContext {
    pub reference: Option<Arc<PlausibilityReference>>,
    pub catalog: Option<Arc<BloomFilter>>,
    pub reaction_oracle: Option<Arc<dyn ReactionOracle>>,
    pub property_oracle: Option<Arc<dyn PropertyOracle>>,
}

impl GradeContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_reference(mut self, r: Arc<PlausibilityReference>) -> Self {
        self.reference = Some(r);
        self
    }

    pub fn with_catalog(mut self, c: Arc<BloomFilter>) -> Self {
        self.catalog = Some(c);
        self
    }

    pub fn with_reaction_oracle(mut self, o: Arc<dyn ReactionOracle>) -> Self {
        self.reaction_oracle = Some(o);
        self
    }

    pub fn with_property_oracle(mut self, o: Arc<dyn PropertyOracle>) -> Self {
        self.property_oracle = Some(o);
        self
    }

    fn reference(&self) -> Result<&PlausibilityReference, GradeError> {
        self.reference.as_deref().ok_or(GradeError::MissingContext("plausibility reference"))
    }

    fn catalog(&self) -> Result<&BloomFilter, GradeError> {
        self.catalog.as_deref().ok_or(GradeError::MissingContext("purchasable catalog"))
    }

    fn reaction_oracle(&self) -> Result<&dyn ReactionOracle, GradeError> {
        self.reaction_oracle.as_deref().ok_or(GradeError::MissingContext("reaction oracle"))
    }

    fn property_oracle(&self) -> Result<&dyn PropertyOracle, GradeError> {
        self.property_oracle.as_deref().ok_or(GradeError::MissingContext("property oracle"))
    }

    /// Fails when a resource required by `kind` is absent.
    pub fn require(&self, kind: TaskKind) -> Result<(), GradeError> {
        match kind {
            TaskKind::SmilesCompletion | TaskKind::MolecularFormula | TaskKind::FunctionalGroup => {
                self.reference().map(drop)
            }
            TaskKind::SolubilityEdit => {
                self.reference()?;
                self.property_oracle().map(drop)
            }
            TaskKind::Retrosynthesis => {
                self.catalog()?;
                self.reaction_oracle().map(drop)
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reason {
    pub code: ReasonCode,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewardResult {
    pub reward: f64,
    pub format: u8,
    pub accuracy: f64,
    pub bonus: u8,
    pub reason: Reason,
}

fn accuracy(task: &TaskSpec, answer: &str, ctx: &GradeContext) -> Result<Outcome, GradeError> {
    let partial = task.flags.partial_credit;
    Ok(match &task.gold {
        Gold::Exact { target } => verify::verify_exact(answer, target, task.flags.stereo),
        Gold::Completion { prefix } => verify::verify_completion(prefix, answer, ctx.reference()?),
        Gold::Formula { formula } => verify::verify_formula(answer, formula, ctx.reference()?, partial),
        Gold::FunctionalGroup { formula, groups } => {
            verify::verify_functional_group(answer, formula, groups, ctx.reference()?, partial)?
        }
        Gold::Elucidation { target, formula, threshold } => verify::verify_elucidation(
            answer,
            target,
            *threshold,
            formula.as_ref(),
            ctx.reference.as_deref(),
            partial,
        ),
        Gold::Retrosynthesis { target } => {
            verify::verify_retrosynthesis(answer, target, ctx.catalog()?, ctx.reaction_oracle()?)?
        }
        Gold::Mcq { options, key } => verify::verify_mcq(answer, options, *key),
        Gold::SolubilityEdit { original, direction, magnitude, constraints } => verify::verify_solubility_edit(
            answer,
            original,
            *direction,
            *magnitude,
            constraints,
            ctx.property_oracle()?,
            ctx.reference()?,
        )?,
    })
}

pub fn grade(task: &TaskSpec, raw: &str, ctx: &GradeContext) -> Result<RewardResult, GradeError> {
    ctx.require(task.kind)?;
    let parsed = parse_response(raw);
    if !parsed.well_formed {
        return Ok(RewardResult {
            reward: 0.0,
            format: 0,
            accuracy: 0.0,
            bonus: 0,
            reason: Reason {
                code: ReasonCode::FormatError,
                message: parsed.defect.unwrap_or_default(),
            },
        });
    }
    let outcome = accuracy(task, &parsed.answer, ctx)?;
    let mut message = outcome.message;
    let mut bonus = 0;
    if task.flags.quality_bonus && task.kind.checks_quality() && outcome.accuracy == 1.0 {
        if let Some(mol) = &outcome.molecule {
            let report = quality_flags(mol);
            if report.ok() {
                bonus = 1;
                message.push_str("; quality bonus");
            } else {
                let names: Vec<&str> = report.flags.iter().map(|f| f.name()).collect();
                message.push_str(&format!("; no bonus ({})", names.join(", ")));
            }
        }
    }
    Ok(RewardResult {
        reward: outcome.accuracy + f64::from(bonus),
        format: 1,
        accuracy: outcome.accuracy,
        bonus,
        reason: Reason { code: outcome.code, message },
    })
}
