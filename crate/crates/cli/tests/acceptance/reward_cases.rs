//! Hand-constructed (task, response) cases with expected rewards.

use std::sync::Arc;

use molreward_bloom::BloomFilter;
use molreward_core::canonicalize;
use molreward_rewards::response::{ANSWER_END, ANSWER_START, THINK_END, THINK_START};
use molreward_rewards::{
    format_response, grade, BuildOptions, EsterificationTemplate, Flags, GradeContext, HeuristicSolubility,
    PlausibilityReference, TaskSpec,
};
use serde_json::{json, Value};

const CATALOG: &[&str] = &[
    "C", "CCO", "CC(=O)O", "CCOC(C)=O", "C1CCC1", "c1ccccc1", "Oc1ccccc1", "Cc1ccccc1", "OCc1ccccc1", "CCN",
    "CC(C)O", "CCCO", "OCCO", "NCCO", "CC(=O)N", "c1ccncc1", "CCCCCCCC", "SCCS", "OO", "C1CCCCC1",
    "CC(=O)c1ccccc1", "CCC(=O)CC(C)(C)C", "CC(C)(C)CC(=O)CC(C)(C)C",
];

const PURCHASABLE: &[&str] = &["CC(=O)O", "CCO", "OC(=O)c1ccccc1", "CO", "OCc1ccccc1"];

pub struct Case {
    pub kind: &'static str,
    pub gold: Value,
    pub flags: Flags,
    pub response: String,
    pub reward: f64,
    pub code: &'static str,
}

pub fn context() -> GradeContext {
    let options = BuildOptions { capacity: 20_000, fp_rate: 0.001, source: "acceptance".into() };
    let reference = PlausibilityReference::build(CATALOG, &options).expect("reference");
    let mut catalog = BloomFilter::new(1000, 0.001).expect("filter");
    for s in PURCHASABLE {
        catalog.insert(canonicalize(s).expect("catalog smiles"));
    }
    GradeContext::new()
        .with_reference(Arc::new(reference))
        .with_catalog(Arc::new(catalog))
        .with_reaction_oracle(Arc::new(EsterificationTemplate))
        .with_property_oracle(Arc::new(HeuristicSolubility))
}

fn r(answer: &str) -> String {
    format_response("reasoning", answer)
}

const PLAIN: Flags = Flags { partial_credit: false, quality_bonus: false, stereo: true };
const PARTIAL: Flags = Flags { partial_credit: true, quality_bonus: false, stereo: true };
const BONUS: Flags = Flags { partial_credit: false, quality_bonus: true, stereo: true };
const BOTH: Flags = Flags { partial_credit: true, quality_bonus: true, stereo: true };
const NO_STEREO: Flags = Flags { partial_credit: false, quality_bonus: false, stereo: false };

pub fn cases() -> Vec<Case> {
    let c = |kind, gold: Value, flags, response: String, reward, code| Case { kind, gold, flags, response, reward, code };
    let ethanol = json!({"smiles": "CCO"});
    let c2h6o = json!({"formula": "C2H6O"});
    let hydroxyl = json!({"formula": "C2H6O", "groups": ["hydroxyl"]});
    let knot = json!({"smiles": "CC(C)(C)CC(=O)CC(C)(C)C", "threshold": 0.7});
    let ester = json!({"smiles": "CCOC(C)=O"});
    let options = json!({"options": ["CCO", "c1ccccc1", "CCN", "none of these"], "key": 1});
    let none_key = json!({"options": ["CCO", "c1ccccc1", "CCN", "none of these"], "key": 3});
    let sol = |dir: &str, mag: f64, constraints: Value| {
        json!({"smiles": "c1ccccc1", "direction": dir, "magnitude": mag, "constraints": constraints})
    };
    let scaffold = json!({"scaffold": true});
    vec![
        // format failures earn nothing, whatever the answer
        c("reaction_prediction", ethanol.clone(), PLAIN, "CCO".into(), 0.0, "format_error"),
        c("reaction_prediction", ethanol.clone(), PLAIN, format!("{THINK_START}t{ANSWER_START}CCO{ANSWER_END}"), 0.0, "format_error"),
        c("reaction_prediction", ethanol.clone(), PLAIN, format!("{ANSWER_START}CCO{ANSWER_END}{THINK_START}t{THINK_END}"), 0.0, "format_error"),
        c("reaction_prediction", ethanol.clone(), PLAIN, format!("{}{ANSWER_START}CCO{ANSWER_END}", r("CCO")), 0.0, "format_error"),
        c("reaction_prediction", ethanol.clone(), PLAIN, format!("sure! {}", r("CCO")), 0.0, "format_error"),
        c("molecular_formula", c2h6o.clone(), BOTH, format!("{THINK_START}{THINK_END}{ANSWER_START}CCO"), 0.0, "format_error"),
        c("mcq", options.clone(), PLAIN, format!("{THINK_START}x{THINK_END}c1ccccc1"), 0.0, "format_error"),
        c("elucidation", knot.clone(), BONUS, String::new(), 0.0, "format_error"),
        // exact match
        c("reaction_prediction", ethanol.clone(), PLAIN, r("OCC"), 1.0, "ok"),
        c("reaction_prediction", ethanol.clone(), PLAIN, r("CCN"), 0.0, "mismatch"),
        c("reaction_prediction", ethanol.clone(), PLAIN, r("C("), 0.0, "parse_error"),
        c("iupac_match", json!({"smiles": "c1ccccc1"}), PLAIN, r("C1=CC=CC=C1"), 1.0, "ok"),
        c("molecule_caption", json!({"smiles": "C[C@H](N)O"}), PLAIN, r("N[C@@H](C)O"), 1.0, "ok"),
        c("molecule_caption", json!({"smiles": "C[C@H](N)O"}), PLAIN, r("N[C@H](C)O"), 0.0, "mismatch"),
        c("molecule_caption", json!({"smiles": "C[C@H](N)O"}), NO_STEREO, r("N[C@H](C)O"), 1.0, "ok"),
        c("reaction_prediction", json!({"smiles": "CC(=O)[O-].[Na+]"}), PLAIN, r("[Na+].CC([O-])=O"), 1.0, "ok"),
        c("reaction_prediction", ethanol.clone(), BONUS, r("CCO"), 1.0, "ok"),
        // molecular formula
        c("molecular_formula", c2h6o.clone(), PLAIN, r("CCO"), 1.0, "ok"),
        c("molecular_formula", c2h6o.clone(), PARTIAL, r("COC"), 0.5, "partial_credit"),
        c("molecular_formula", c2h6o.clone(), PLAIN, r("COC"), 0.0, "not_reasonable"),
        c("molecular_formula", c2h6o.clone(), PARTIAL, r("CCN"), 0.0, "formula_mismatch"),
        c("molecular_formula", json!({"formula": "C4H12O2"}), PARTIAL, r("CCO.CCO"), 0.0, "mixture_rejected"),
        c("molecular_formula", c2h6o.clone(), PARTIAL, r("C(O"), 0.0, "parse_error"),
        c("molecular_formula", json!({"formula": "C6H6O"}), BONUS, r("Oc1ccccc1"), 2.0, "ok"),
        c("molecular_formula", json!({"formula": "C8H18"}), BONUS, r("CCCCCCCC"), 1.0, "ok"),
        c("molecular_formula", json!({"formula": "C2H6S2"}), BONUS, r("SCCS"), 1.0, "ok"),
        c("molecular_formula", json!({"formula": "H2O2"}), BONUS, r("OO"), 1.0, "ok"),
        c("molecular_formula", c2h6o.clone(), BOTH, r("COC"), 0.5, "partial_credit"),
        c("molecular_formula", json!({"formula": "C6H12"}), PLAIN, r("C1CCCCC1"), 1.0, "ok"),
        // functional group
        c("functional_group", hydroxyl.clone(), PLAIN, r("CCO"), 1.0, "ok"),
        c("functional_group", hydroxyl.clone(), PARTIAL, r("COC"), 0.5, "partial_credit"),
        c("functional_group", hydroxyl.clone(), PLAIN, r("COC"), 0.0, "group_missing"),
        c("functional_group", hydroxyl.clone(), PARTIAL, r("CCCO"), 0.0, "formula_mismatch"),
        c("functional_group", json!({"formula": "C7H8O", "groups": ["hydroxyl"]}), BONUS, r("OCc1ccccc1"), 2.0, "ok"),
        c("functional_group", hydroxyl.clone(), BONUS, r("CCO"), 2.0, "ok"),
        // elucidation: the 0.7 threshold is inclusive
        c("elucidation", knot.clone(), PLAIN, r("CCC(=O)CC(C)(C)C"), 1.0, "ok"),
        c("elucidation", json!({"smiles": "CC(C)(C)CC(=O)CC(C)(C)C", "threshold": 0.71}), PLAIN, r("CCC(=O)CC(C)(C)C"), 0.0, "below_threshold"),
        c("elucidation", json!({"smiles": "c1ccccc1"}), PLAIN, r("C1=CC=CC=C1"), 1.0, "ok"),
        c("elucidation", json!({"smiles": "c1ccccc1"}), PLAIN, r("C"), 0.0, "below_threshold"),
        c("elucidation", json!({"smiles": "c1ccccc1", "formula": "C6H6"}), PARTIAL, r("C#CC#CCC"), 0.5, "partial_credit"),
        c("elucidation", json!({"smiles": "c1ccccc1", "formula": "C6H6"}), PLAIN, r("C#CC#CCC"), 0.0, "below_threshold"),
        c("elucidation", json!({"smiles": "c1ccccc1"}), BONUS, r("c1ccccc1"), 2.0, "ok"),
        // smiles completion
        c("smiles_completion", json!({"prefix": "C1CC"}), PLAIN, r("C1CCC1"), 1.0, "ok"),
        c("smiles_completion", json!({"prefix": "C1CC"}), PLAIN, r("CCO"), 0.0, "prefix_mismatch"),
        c("smiles_completion", json!({"prefix": "C1CC"}), PLAIN, r("C1CC1X"), 0.0, "parse_error"),
        c("smiles_completion", json!({"prefix": "C1CC"}), PLAIN, r("C1CC1"), 0.0, "not_reasonable"),
        c("smiles_completion", json!({"prefix": "C1CC"}), BONUS, r("C1CCC1"), 2.0, "ok"),
        // retrosynthesis: purchasable reactants that reach the target
        c("retrosynthesis", ester.clone(), PLAIN, r("CC(=O)O.CCO"), 1.0, "ok"),
        c("retrosynthesis", ester.clone(), PLAIN, r("OCC.OC(C)=O>>CCOC(C)=O"), 1.0, "ok"),
        c("retrosynthesis", ester.clone(), PLAIN, r("CC(=O)O.CCCO"), 0.0, "not_purchasable"),
        c("retrosynthesis", ester.clone(), PLAIN, r("OC(=O)c1ccccc1.CCO"), 0.0, "product_mismatch"),
        c("retrosynthesis", ester.clone(), PLAIN, r("CCO.CO"), 0.0, "product_mismatch"),
        c("retrosynthesis", json!({"smiles": "COC(=O)c1ccccc1"}), PLAIN, r("OC(=O)c1ccccc1.CO"), 1.0, "ok"),
        c("retrosynthesis", ester.clone(), BONUS, r("CC(=O)O.CCO"), 1.0, "ok"),
        c("retrosynthesis", ester.clone(), PLAIN, r("C("), 0.0, "parse_error"),
        // multiple choice
        c("mcq", options.clone(), PLAIN, r("c1ccccc1"), 1.0, "ok"),
        c("mcq", options.clone(), PLAIN, r("C1=CC=CC=C1"), 1.0, "ok"),
        c("mcq", options.clone(), PLAIN, r("OCC"), 0.0, "wrong_option"),
        c("mcq", none_key.clone(), PLAIN, r("  None Of These "), 1.0, "ok"),
        c("mcq", none_key.clone(), PLAIN, r("none"), 0.0, "wrong_option"),
        // solubility edit
        c("solubility_edit", sol("increase", 1.0, scaffold.clone()), PLAIN, r("Oc1ccccc1"), 1.0, "ok"),
        c("solubility_edit", sol("increase", 1.0, scaffold.clone()), PLAIN, r("OC1CCCCC1"), 0.0, "scaffold_changed"),
        c("solubility_edit", sol("decrease", 1.0, scaffold.clone()), PLAIN, r("Oc1ccccc1"), 0.0, "wrong_direction"),
        c("solubility_edit", sol("increase", 1.5, scaffold.clone()), PLAIN, r("Oc1ccccc1"), 0.0, "insufficient_change"),
        c("solubility_edit", sol("decrease", 0.2, scaffold.clone()), PLAIN, r("Cc1ccccc1"), 1.0, "ok"),
        c("solubility_edit", sol("increase", 1.0, json!({"similarity": 0.99})), PLAIN, r("Oc1ccccc1"), 0.0, "similarity_too_low"),
        c("solubility_edit", sol("increase", 0.5, json!({"preserve_groups": ["benzene_ring"]})), PLAIN, r("OC1CCCCC1"), 0.0, "group_changed"),
        c("solubility_edit", sol("increase", 0.5, json!({})), PLAIN, r("OCCO"), 1.0, "ok"),
        c("solubility_edit", sol("increase", 1.0, scaffold.clone()), BONUS, r("Oc1ccccc1"), 2.0, "ok"),
    ]
}

/// Grades every case; returns descriptions of the failures.
pub fn run(ctx: &GradeContext) -> (usize, Vec<String>) {
    let cases = cases();
    let mut failures = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let outcome = TaskSpec::from_json(case.kind.parse().expect("kind"), &case.gold, case.flags)
            .map_err(|e| e.to_string())
            .and_then(|task| grade(&task, &case.response, ctx).map_err(|e| e.to_string()));
        match outcome {
            Ok(res) if res.reward == case.reward && res.reason.code.as_str() == case.code => {}
            Ok(res) => failures.push(format!(
                "case {i} ({}): reward {} code {} expected {} {}",
                case.kind,
                res.reward,
                res.reason.code.as_str(),
                case.reward,
                case.code
            )),
            Err(e) => failures.push(format!("case {i} ({}): {e}", case.kind)),
        }
    }
    (cases.len(), failures)
}
