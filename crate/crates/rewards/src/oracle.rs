//! Forward-reaction and property predictors used by the retrosynthesis and
//! solubility-edit verifiers.

use std::collections::HashMap;
use std::time::Duration;

use molreward_core::{parse, write_canonical, Atom, Bond, BondOrder, Element, Molecule};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0}")]
    Unavailable(String),
    #[error("bad oracle response: {0}")]
    Protocol(String),
}

/// Predicts the major product of a set of reactants. `Ok(None)` means the
/// oracle is healthy but predicts no reaction.
pub trait ReactionOracle: Send + Sync {
    fn predict(&self, reactants: &[Molecule]) -> Result<Option<Molecule>, OracleError>;
}

/// Predicts a scalar property such as logS.
pub trait PropertyOracle: Send + Sync {
    fn predict(&self, mol: &Molecule) -> Result<f64, OracleError>;
}

/// An oracle that is configured but down; every call fails.
#[derive(Clone, Debug, Default)]
pub struct UnavailableOracle;

impl ReactionOracle for UnavailableOracle {
    fn predict(&self, _: &[Molecule]) -> Result<Option<Molecule>, OracleError> {
        Err(OracleError::Unavailable("oracle disabled".into()))
    }
}

impl PropertyOracle for UnavailableOracle {
    fn predict(&self, _: &Molecule) -> Result<f64, OracleError> {
        Err(OracleError::Unavailable("oracle disabled".into()))
    }
}

/// Deterministic logS stand-in: `(6 * oxygens - heavy atoms) / 5`, so adding
/// a hydroxyl raises the value by exactly 1.
#[derive(Clone, Debug, Default)]
pub struct HeuristicSolubility;

impl PropertyOracle for HeuristicSolubility {
    fn predict(&self, mol: &Molecule) -> Result<f64, OracleError> {
        let heavy = mol.atoms().iter().filter(|a| !a.element.is_hydrogen()).count() as i64;
        let oxygens = mol.atoms().iter().filter(|a| a.element == Element::O).count() as i64;
        Ok((6 * oxygens - heavy) as f64 / 5.0)
    }
}

fn reactant_key(reactants: &[Molecule]) -> String {
    let mut parts: Vec<String> = reactants.iter().map(write_canonical).collect();
    parts.sort();
    parts.join(".")
}

/// Table of known reactions keyed by the sorted canonical reactant set.
#[derive(Clone, Debug, Default)]
pub struct LookupReactionOracle {
    table: HashMap<String, Molecule>,
}

impl LookupReactionOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, reactants: &[&str], product: &str) -> Result<(), molreward_core::SmilesError> {
        let mols = reactants.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
        self.table.insert(reactant_key(&mols), parse(product)?);
        Ok(())
    }
}

impl ReactionOracle for LookupReactionOracle {
    fn predict(&self, reactants: &[Molecule]) -> Result<Option<Molecule>, OracleError> {
        Ok(self.table.get(&reactant_key(reactants)).cloned())
    }
}

/// Single-template forward model: a carboxylic acid and an aliphatic
/// alcohol condense to the ester. Anything else predicts no reaction.
#[derive(Clone, Debug, Default)]
pub struct EsterificationTemplate;

fn acid_site(mol: &Molecule) -> Option<(usize, usize)> {
    for c in 0..mol.atom_count() {
        let atom = mol.atom(c);
        if atom.element != Element::C || atom.aromatic {
            continue;
        }
        let mut carbonyl = false;
        let mut hydroxyl = None;
        for &(o, b) in mol.neighbors(c) {
            let oa = mol.atom(o);
            if oa.element != Element::O || oa.charge != 0 {
                continue;
            }
            match mol.bond(b).order {
                BondOrder::Double => carbonyl = true,
                BondOrder::Single if oa.hydrogens == 1 && mol.degree(o) == 1 => hydroxyl = Some(o),
                _ => {}
            }
        }
        if let (true, Some(o)) = (carbonyl, hydroxyl) {
            return Some((c, o));
        }
    }
    None
}

fn alcohol_site(mol: &Molecule) -> Option<usize> {
    (0..mol.atom_count()).find(|&o| {
        let a = mol.atom(o);
        if a.element != Element::O || a.charge != 0 || a.hydrogens != 1 || mol.degree(o) != 1 {
            return false;
        }
        let (c, b) = mol.neighbors(o)[0];
        let ca = mol.atom(c);
        mol.bond(b).order == BondOrder::Single
            && ca.element == Element::C
            && !ca.aromatic
            && mol.neighbors(c).iter().all(|&(_, cb)| mol.bond(cb).order == BondOrder::Single)
    })
}

fn plain_parts(mol: &Molecule) -> (Vec<Atom>, Vec<Bond>) {
    let mol = mol.without_stereo();
    let orders = mol.kekule_orders();
    let atoms = mol.atoms().iter().cloned().map(|mut a| {
        a.aromatic = false;
        a
    });
    let bonds = mol.bonds().iter().zip(orders).map(|(b, o)| Bond::new(b.a, b.b, o));
    (atoms.collect(), bonds.collect())
}

fn condense(acid: &Molecule, alcohol: &Molecule) -> Option<Molecule> {
    let (carbon, hydroxyl) = acid_site(acid)?;
    let oxygen = alcohol_site(alcohol)?;
    let (acid_atoms, acid_bonds) = plain_parts(acid);
    let (alc_atoms, alc_bonds) = plain_parts(alcohol);
    let remap = |i: usize| if i > hydroxyl { i - 1 } else { i };
    let offset = acid_atoms.len() - 1;
    let mut atoms: Vec<Atom> = acid_atoms
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != hydroxyl)
        .map(|(_, a)| a)
        .collect();
    atoms.extend(alc_atoms);
    atoms[offset + oxygen].hydrogens = 0;
    let mut bonds: Vec<Bond> = acid_bonds
        .into_iter()
        .filter(|b| b.a != hydroxyl && b.b != hydroxyl)
        .map(|b| Bond::new(remap(b.a), remap(b.b), b.order))
        .collect();
    bonds.extend(alc_bonds.into_iter().map(|b| Bond::new(b.a + offset, b.b + offset, b.order)));
    bonds.push(Bond::new(remap(carbon), offset + oxygen, BondOrder::Single));
    Molecule::from_parts(atoms, bonds).ok()
}

impl ReactionOracle for EsterificationTemplate {
    fn predict(&self, reactants: &[Molecule]) -> Result<Option<Molecule>, OracleError> {
        if reactants.len() != 2 {
            return Ok(None);
        }
        let (a, b) = (&reactants[0], &reactants[1]);
        Ok(condense(a, b).or_else(|| condense(b, a)))
    }
}

fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into()
}

fn transport(e: ureq::Error) -> OracleError {
    OracleError::Unavailable(e.to_string())
}

#[derive(Serialize)]
struct ReactionRequest {
    reactants: Vec<String>,
}

#[derive(Deserialize)]
struct ReactionReply {
    product: Option<String>,
}

/// Remote forward predictor. POSTs `{"reactants": [smiles]}` and expects
/// `{"product": smiles | null}`.
#[derive(Clone)]
pub struct HttpReactionOracle {
    agent: ureq::Agent,
    url: String,
}

impl HttpReactionOracle {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        HttpReactionOracle { agent: agent(timeout), url: url.into() }
    }
}

impl ReactionOracle for HttpReactionOracle {
    fn predict(&self, reactants: &[Molecule]) -> Result<Option<Molecule>, OracleError> {
        let body = ReactionRequest { reactants: reactants.iter().map(write_canonical).collect() };
        let reply: ReactionReply = self
            .agent
            .post(&self.url)
            .send_json(&body)
            .map_err(transport)?
            .body_mut()
            .read_json()
            .map_err(|e| OracleError::Protocol(e.to_string()))?;
        reply
            .product
            .map(|s| parse(&s).map_err(|e| OracleError::Protocol(format!("product {s:?}: {e}"))))
            .transpose()
    }
}

#[derive(Serialize)]
struct PropertyRequest {
    smiles: String,
}

#[derive(Deserialize)]
struct PropertyReply {
    value: f64,
}

/// Remote property predictor. POSTs `{"smiles": s}` and expects
/// `{"value": number}`.
#[derive(Clone)]
pub struct HttpPropertyOracle {
    agent: ureq::Agent,
    url: String,
}

impl HttpPropertyOracle {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        HttpPropertyOracle { agent: agent(timeout), url: url.into() }
    }
}

impl PropertyOracle for HttpPropertyOracle {
    fn predict(&self, mol: &Molecule) -> Result<f64, OracleError> {
        let reply: PropertyReply = self
            .agent
            .post(&self.url)
            .send_json(&PropertyRequest { smiles: write_canonical(mol) })
            .map_err(transport)?
            .body_mut()
            .read_json()
            .map_err(|e| OracleError::Protocol(e.to_string()))?;
        if !reply.value.is_finite() {
            return Err(OracleError::Protocol(format!("non-finite value {}", reply.value)));
        }
        Ok(reply.value)
    }
}
