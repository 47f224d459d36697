//! Per-task accuracy checks.

use std::collections::HashSet;
use std::sync::OnceLock;

use molreward_bloom::BloomFilter;
use molreward_core::molgraph::{
    fingerprint, heavy_atom_count, murcko_scaffold, tanimoto, Formula, PatternLibrary, DEFAULT_NBITS,
    DEFAULT_RADIUS,
};
use molreward_core::{canonicalize, parse, parse_reaction, write_canonical, Molecule};
use serde::Serialize;

use crate::error::GradeError;
use crate::oracle::{OracleError, PropertyOracle, ReactionOracle};
use crate::plausibility::PlausibilityReference;
use crate::task::{Direction, EditConstraints};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonCode {
    Ok,
    PartialCredit,
    FormatError,
    ParseError,
    MixtureRejected,
    Mismatch,
    FormulaMismatch,
    GroupMissing,
    NotReasonable,
    BelowThreshold,
    PrefixMismatch,
    NotPurchasable,
    ProductMismatch,
    ScaffoldChanged,
    SimilarityTooLow,
    GroupChanged,
    WrongDirection,
    InsufficientChange,
    WrongOption,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::Ok => "ok",
            ReasonCode::PartialCredit => "partial_credit",
            ReasonCode::FormatError => "format_error",
            ReasonCode::ParseError => "parse_error",
            ReasonCode::MixtureRejected => "mixture_rejected",
            ReasonCode::Mismatch => "mismatch",
            ReasonCode::FormulaMismatch => "formula_mismatch",
            ReasonCode::GroupMissing => "group_missing",
            ReasonCode::NotReasonable => "not_reasonable",
            ReasonCode::BelowThreshold => "below_threshold",
            ReasonCode::PrefixMismatch => "prefix_mismatch",
            ReasonCode::NotPurchasable => "not_purchasable",
            ReasonCode::ProductMismatch => "product_mismatch",
            ReasonCode::ScaffoldChanged => "scaffold_changed",
            ReasonCode::SimilarityTooLow => "similarity_too_low",
            ReasonCode::GroupChanged => "group_changed",
            ReasonCode::WrongDirection => "wrong_direction",
            ReasonCode::InsufficientChange => "insufficient_change",
            ReasonCode::WrongOption => "wrong_option",
        }
    }
}

/// Accuracy of one answer with the reason behind it. `molecule` holds the
/// principal answer component when one was parsed, for the quality check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub accuracy: f64,
    pub code: ReasonCode,
    pub message: String,
    pub molecule: Option<Molecule>,
}

impl Outcome {
    fn new(accuracy: f64, code: ReasonCode, message: impl Into<String>, molecule: Option<Molecule>) -> Outcome {
        Outcome { accuracy, code, message: message.into(), molecule }
    }

    fn fail(code: ReasonCode, message: impl Into<String>) -> Outcome {
        Outcome::new(0.0, code, message, None)
    }

    fn pass(molecule: Option<Molecule>) -> Outcome {
        Outcome::new(1.0, ReasonCode::Ok, "correct", molecule)
    }

    /// Downgrades a failure to half credit when the formula matched.
    fn partial(self, enabled: bool, formula_ok: bool) -> Outcome {
        if enabled && formula_ok && self.accuracy == 0.0 {
            let message = format!("formula matches; {}", self.message);
            Outcome { accuracy: 0.5, code: ReasonCode::PartialCredit, message, ..self }
        } else {
            self
        }
    }
}

const COUNTERIONS: &[&str] = &[
    "[Li+]", "[Na+]", "[K+]", "[Rb+]", "[Cs+]", "[Mg+2]", "[Ca+2]", "[Zn+2]", "[NH4+]",
    "[F-]", "[Cl-]", "[Br-]", "[I-]", "[OH-]",
    "O=C([O-])O", "CC(=O)[O-]", "O=C([O-])C(F)(F)F", "CS(=O)(=O)[O-]", "O=[N+]([O-])[O-]",
    "O=S(=O)([O-])O", "O=S(=O)([O-])[O-]", "O=P([O-])(O)O",
];

/// Canonical SMILES of the recognised counterions.
pub fn counterions() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        COUNTERIONS.iter().map(|s| canonicalize(s).expect("counterion list parses")).collect()
    })
}

/// Parses a designed-molecule answer. Up to two components are allowed when
/// the smaller is a recognised counterion; the principal component is
/// returned next to the full molecule.
pub fn parse_design_answer(answer: &str) -> Result<(Molecule, Molecule), Outcome> {
    let mol = parse(answer)
        .map_err(|e| Outcome::fail(ReasonCode::ParseError, format!("answer does not parse: {e}")))?;
    let comps = mol.components();
    match comps.len() {
        1 => Ok((mol.clone(), mol)),
        2 => {
            let parts: Vec<Molecule> = comps
                .iter()
                .map(|c| {
                    let mut keep = vec![false; mol.atom_count()];
                    for &i in c {
                        keep[i] = true;
                    }
                    mol.subgraph(&keep)
                })
                .collect();
            let (small, large) = if heavy_atom_count(&parts[0]) <= heavy_atom_count(&parts[1]) {
                (&parts[0], &parts[1])
            } else {
                (&parts[1], &parts[0])
            };
            if counterions().contains(&write_canonical(small)) {
                Ok((large.clone(), mol))
            } else {
                Err(Outcome::fail(ReasonCode::MixtureRejected, "second component is not a recognised counterion"))
            }
        }
        n => Err(Outcome::fail(ReasonCode::MixtureRejected, format!("answer has {n} components"))),
    }
}

fn plausible(reference: &PlausibilityReference, principal: &Molecule) -> Result<(), Outcome> {
    let verdict = reference.check(principal);
    if verdict.is_reasonable() {
        Ok(())
    } else {
        Err(Outcome::fail(ReasonCode::NotReasonable, verdict.describe()))
    }
}

fn canonical(mol: &Molecule, stereo: bool) -> String {
    if stereo {
        write_canonical(mol)
    } else {
        write_canonical(&mol.without_stereo())
    }
}

pub fn verify_exact(answer: &str, target: &Molecule, stereo: bool) -> Outcome {
    let mol = match parse(answer) {
        Ok(m) => m,
        Err(e) => return Outcome::fail(ReasonCode::ParseError, format!("answer does not parse: {e}")),
    };
    if canonical(&mol, stereo) == canonical(target, stereo) {
        Outcome::pass(Some(mol))
    } else {
        Outcome::fail(ReasonCode::Mismatch, "answer differs from the target")
    }
}

pub fn verify_formula(
    answer: &str,
    formula: &Formula,
    reference: &PlausibilityReference,
    partial_credit: bool,
) -> Outcome {
    let (principal, full) = match parse_design_answer(answer) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let got = Formula::of(&full);
    if &got != formula {
        return Outcome::fail(ReasonCode::FormulaMismatch, format!("answer formula {got}, expected {formula}"));
    }
    match plausible(reference, &principal) {
        Ok(()) => Outcome::pass(Some(principal)),
        Err(o) => o.partial(partial_credit, true),
    }
}

pub fn verify_functional_group(
    answer: &str,
    formula: &Formula,
    groups: &[String],
    reference: &PlausibilityReference,
    partial_credit: bool,
) -> Result<Outcome, GradeError> {
    let lib = PatternLibrary::builtin();
    if let Some(g) = groups.iter().find(|g| !lib.contains(g)) {
        return Err(GradeError::UnknownGroup(g.clone()));
    }
    let (principal, full) = match parse_design_answer(answer) {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let got = Formula::of(&full);
    if &got != formula {
        return Ok(Outcome::fail(ReasonCode::FormulaMismatch, format!("answer formula {got}, expected {formula}")));
    }
    let missing: Vec<&str> = groups
        .iter()
        .filter(|g| lib.count(&full, g).unwrap_or(0) == 0)
        .map(String::as_str)
        .collect();
    let outcome = if !missing.is_empty() {
        Outcome::fail(ReasonCode::GroupMissing, format!("missing {}", missing.join(", ")))
    } else {
        match plausible(reference, &principal) {
            Ok(()) => Outcome::pass(Some(principal)),
            Err(o) => o,
        }
    };
    Ok(outcome.partial(partial_credit, true))
}

pub fn similarity(a: &Molecule, b: &Molecule) -> f64 {
    let fa = fingerprint(a, DEFAULT_NBITS, DEFAULT_RADIUS);
    let fb = fingerprint(b, DEFAULT_NBITS, DEFAULT_RADIUS);
    tanimoto(&fa, &fb).expect("same fingerprint width")
}

/// Similarity check with an inclusive threshold. When the gold carries a
/// formula and partial credit is on, a formula match alone earns 0.5. A
/// configured reference additionally requires the answer to be reasonable.
pub fn verify_elucidation(
    answer: &str,
    target: &Molecule,
    threshold: f64,
    formula: Option<&Formula>,
    reference: Option<&PlausibilityReference>,
    partial_credit: bool,
) -> Outcome {
    let (principal, full) = match parse_design_answer(answer) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let formula_ok = formula.is_some_and(|f| &Formula::of(&full) == f);
    let sim = similarity(&full, target);
    let outcome = if sim < threshold {
        Outcome::fail(ReasonCode::BelowThreshold, format!("similarity {sim:.4} < {threshold}"))
    } else {
        match reference.map(|r| plausible(r, &principal)) {
            Some(Err(o)) => o,
            _ => Outcome::new(1.0, ReasonCode::Ok, format!("similarity {sim:.4}"), Some(principal)),
        }
    };
    outcome.partial(partial_credit, formula_ok)
}

pub fn verify_completion(prefix: &str, answer: &str, reference: &PlausibilityReference) -> Outcome {
    if !answer.as_bytes().starts_with(prefix.as_bytes()) {
        return Outcome::fail(ReasonCode::PrefixMismatch, "answer does not extend the prefix");
    }
    let (principal, _) = match parse_design_answer(answer) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match plausible(reference, &principal) {
        Ok(()) => Outcome::pass(Some(principal)),
        Err(o) => o,
    }
}

fn oracle_fault(e: OracleError) -> GradeError {
    GradeError::OracleUnavailable(e.to_string())
}

/// Accepts either `A.B` or a reaction SMILES whose reactant side is used.
pub fn verify_retrosynthesis(
    answer: &str,
    target: &Molecule,
    catalog: &BloomFilter,
    oracle: &dyn ReactionOracle,
) -> Result<Outcome, GradeError> {
    let reactants = if answer.contains('>') {
        match parse_reaction(answer) {
            Ok(r) => r.reactants,
            Err(e) => return Ok(Outcome::fail(ReasonCode::ParseError, format!("answer does not parse: {e}"))),
        }
    } else {
        let parsed: Result<Vec<Molecule>, _> = answer.split('.').map(parse).collect();
        match parsed {
            Ok(r) => r,
            Err(e) => return Ok(Outcome::fail(ReasonCode::ParseError, format!("answer does not parse: {e}"))),
        }
    };
    for (i, r) in reactants.iter().enumerate() {
        let smiles = write_canonical(r);
        if !catalog.contains(smiles.as_bytes()) {
            return Ok(Outcome::fail(ReasonCode::NotPurchasable, format!("reactant {i} ({smiles}) is not purchasable")));
        }
    }
    let product = oracle.predict(&reactants).map_err(oracle_fault)?;
    Ok(match product {
        Some(p) if write_canonical(&p) == write_canonical(target) => Outcome::pass(None),
        Some(p) => Outcome::fail(ReasonCode::ProductMismatch, format!("predicted product {}", write_canonical(&p))),
        None => Outcome::fail(ReasonCode::ProductMismatch, "no reaction predicted"),
    })
}

/// Canonical SMILES when the text parses, otherwise trimmed lowercase text.
pub fn normalize_option(text: &str) -> String {
    let t = text.trim();
    match canonicalize(t) {
        Ok(c) => c,
        Err(_) => t.to_lowercase(),
    }
}

pub fn verify_mcq(answer: &str, options: &[String], key: usize) -> Outcome {
    let got = normalize_option(answer);
    if got == normalize_option(&options[key]) {
        Outcome::pass(None)
    } else if options.iter().any(|o| normalize_option(o) == got) {
        Outcome::fail(ReasonCode::WrongOption, "answer is a distractor")
    } else {
        Outcome::fail(ReasonCode::WrongOption, "answer matches no option")
    }
}

/// Absorbs rounding in predicted property differences.
pub const DELTA_TOLERANCE: f64 = 1e-9;

pub fn verify_solubility_edit(
    answer: &str,
    original: &Molecule,
    direction: Direction,
    magnitude: f64,
    constraints: &EditConstraints,
    oracle: &dyn PropertyOracle,
    reference: &PlausibilityReference,
) -> Result<Outcome, GradeError> {
    let (principal, full) = match parse_design_answer(answer) {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    if constraints.scaffold {
        let before = write_canonical(&murcko_scaffold(original));
        let after = write_canonical(&murcko_scaffold(&principal));
        if before != after {
            return Ok(Outcome::fail(ReasonCode::ScaffoldChanged, format!("scaffold {before} became {after}")));
        }
    }
    if let Some(min) = constraints.similarity {
        let sim = similarity(&principal, original);
        if sim < min {
            return Ok(Outcome::fail(ReasonCode::SimilarityTooLow, format!("similarity {sim:.4} < {min}")));
        }
    }
    let lib = PatternLibrary::builtin();
    for g in &constraints.preserve_groups {
        let count = |m: &Molecule| lib.count(m, g).ok_or_else(|| GradeError::UnknownGroup(g.clone()));
        let (before, after) = (count(original)?, count(&full)?);
        if before != after {
            return Ok(Outcome::fail(ReasonCode::GroupChanged, format!("{g} count {before} became {after}")));
        }
    }
    if let Err(o) = plausible(reference, &principal) {
        return Ok(o);
    }
    let before = oracle.predict(original).map_err(oracle_fault)?;
    let after = oracle.predict(&principal).map_err(oracle_fault)?;
    let delta = after - before;
    let signed = match direction {
        Direction::Increase => delta,
        Direction::Decrease => -delta,
    };
    Ok(if signed + DELTA_TOLERANCE >= magnitude {
        Outcome::new(1.0, ReasonCode::Ok, format!("property change {delta:+.4}"), Some(principal))
    } else if signed <= 0.0 && magnitude > 0.0 {
        Outcome::fail(ReasonCode::WrongDirection, format!("property change {delta:+.4}"))
    } else {
        Outcome::fail(ReasonCode::InsufficientChange, format!("property change {delta:+.4}, need {magnitude}"))
    })
}
