//! Query graphs with per-atom predicates and a small subgraph matcher.
//!
//! Library file format (UTF-8, line oriented):
//!
//! ```text
//! #! molreward-patterns v1
//! # comment
//! name<TAB>atom atom ...<TAB>bond bond ...
//! ```
//!
//! An atom is an element set (`C`, `N|O`, or `*` for any non-hydrogen)
//! optionally followed by `{pred,pred}`. Predicates: `h=n`, `h>=n`,
//! `h<=n` (total hydrogens), `deg=n`, `deg>=n`, `deg<=n` (heavy
//! neighbours), `chg=n`, `arom=0|1`, `ring=0|1`, `sat=1` (no multiple or
//! aromatic bonds), `oxo=0` (no double bond to O or S), `hsat=1` (at least
//! one hydrogen or only single bonds). A bond is `i-j:o` with `o` one of
//! `-` `=` `#` `:` `~` (any). Several lines may share a name; their matches
//! are pooled. The bonds column may be omitted for single-atom queries.

use std::collections::BTreeSet;
use std::path::Path;

use thiserror::Error;

use crate::element::Element;
use crate::mol::{BondOrder, Molecule};

pub const LIBRARY_HEADER: &str = "#! molreward-patterns v1";

const BUILTIN: &str = include_str!("../../data/patterns.txt");

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("missing or unsupported header (expected '{LIBRARY_HEADER}')")]
    Header,
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("reading pattern library: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Eq,
    Ge,
    Le,
}

impl Cmp {
    fn test(self, value: i64, target: i64) -> bool {
        match self {
            Cmp::Eq => value == target,
            Cmp::Ge => value >= target,
            Cmp::Le => value <= target,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Pred {
    Hydrogens(Cmp, i64),
    Degree(Cmp, i64),
    Charge(i64),
    Aromatic(bool),
    InRing(bool),
    Saturated,
    NoOxo,
    HydrogenOrSaturated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAtom {
    /// Empty means any non-hydrogen element.
    elements: Vec<Element>,
    preds: Vec<Pred>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryBond {
    Order(BondOrder),
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    atoms: Vec<QueryAtom>,
    bonds: Vec<(usize, usize, QueryBond)>,
}

fn parse_atom(tok: &str) -> Result<QueryAtom, String> {
    let (els, preds) = match tok.find('{') {
        Some(i) => {
            let body = tok[i + 1..]
                .strip_suffix('}')
                .ok_or_else(|| format!("unterminated predicate list in '{tok}'"))?;
            (&tok[..i], body)
        }
        None => (tok, ""),
    };
    let elements = if els == "*" {
        Vec::new()
    } else {
        els.split('|')
            .map(|s| Element::from_symbol(s).ok_or_else(|| format!("unknown element '{s}'")))
            .collect::<Result<_, _>>()?
    };
    let mut out = Vec::new();
    for p in preds.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, cmp, val) = if let Some((k, v)) = p.split_once(">=") {
            (k, Cmp::Ge, v)
        } else if let Some((k, v)) = p.split_once("<=") {
            (k, Cmp::Le, v)
        } else if let Some((k, v)) = p.split_once('=') {
            (k, Cmp::Eq, v)
        } else {
            return Err(format!("bad predicate '{p}'"));
        };
        let num: i64 = val.trim_start_matches('+').parse().map_err(|_| format!("bad value in '{p}'"))?;
        let flag = |n: i64| match n {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(format!("'{p}' expects 0 or 1")),
        };
        let pred = match (key, cmp) {
            ("h", c) => Pred::Hydrogens(c, num),
            ("deg", c) => Pred::Degree(c, num),
            ("chg", Cmp::Eq) => Pred::Charge(num),
            ("arom", Cmp::Eq) => Pred::Aromatic(flag(num)?),
            ("ring", Cmp::Eq) => Pred::InRing(flag(num)?),
            ("sat", Cmp::Eq) if num == 1 => Pred::Saturated,
            ("oxo", Cmp::Eq) if num == 0 => Pred::NoOxo,
            ("hsat", Cmp::Eq) if num == 1 => Pred::HydrogenOrSaturated,
            _ => return Err(format!("unsupported predicate '{p}'")),
        };
        out.push(pred);
    }
    Ok(QueryAtom { elements, preds: out })
}

fn parse_bond(tok: &str, natoms: usize) -> Result<(usize, usize, QueryBond), String> {
    let (ends, ord) = tok.split_once(':').ok_or_else(|| format!("bad bond '{tok}'"))?;
    let (a, b) = ends.split_once('-').ok_or_else(|| format!("bad bond '{tok}'"))?;
    let a: usize = a.parse().map_err(|_| format!("bad bond '{tok}'"))?;
    let b: usize = b.parse().map_err(|_| format!("bad bond '{tok}'"))?;
    if a >= natoms || b >= natoms || a == b {
        return Err(format!("bond '{tok}' references invalid atoms"));
    }
    let q = match ord {
        "-" => QueryBond::Order(BondOrder::Single),
        "=" => QueryBond::Order(BondOrder::Double),
        "#" => QueryBond::Order(BondOrder::Triple),
        ":" => QueryBond::Order(BondOrder::Aromatic),
        "~" => QueryBond::Any,
        _ => return Err(format!("bad bond order in '{tok}'")),
    };
    Ok((a, b, q))
}

impl Pattern {
    /// Parses `atoms` and `bonds` columns of a library line.
    pub fn new(name: &str, atoms: &str, bonds: &str) -> Result<Pattern, String> {
        let atoms: Vec<QueryAtom> = atoms
            .split_whitespace()
            .map(parse_atom)
            .collect::<Result<_, _>>()?;
        if atoms.is_empty() {
            return Err("pattern has no atoms".into());
        }
        let bonds: Vec<(usize, usize, QueryBond)> = bonds
            .split_whitespace()
            .map(|t| parse_bond(t, atoms.len()))
            .collect::<Result<_, _>>()?;
        let p = Pattern { name: name.to_string(), atoms, bonds };
        if !p.connected() {
            return Err("query graph is not connected".into());
        }
        Ok(p)
    }

    fn connected(&self) -> bool {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.bonds {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    fn atom_ok(&self, q: usize, mol: &Molecule, i: usize, ring: &[bool]) -> bool {
        let qa = &self.atoms[q];
        let a = mol.atom(i);
        let el_ok = if qa.elements.is_empty() {
            !a.element.is_hydrogen()
        } else {
            qa.elements.contains(&a.element)
        };
        if !el_ok {
            return false;
        }
        let saturated = || {
            !a.aromatic && mol.neighbors(i).iter().all(|&(_, b)| mol.bond(b).order == BondOrder::Single)
        };
        qa.preds.iter().all(|p| match *p {
            Pred::Hydrogens(c, n) => c.test(i64::from(mol.total_hydrogens(i)), n),
            Pred::Degree(c, n) => c.test(mol.heavy_degree(i) as i64, n),
            Pred::Charge(n) => i64::from(a.charge) == n,
            Pred::Aromatic(f) => a.aromatic == f,
            Pred::InRing(f) => ring[i] == f,
            Pred::Saturated => saturated(),
            Pred::NoOxo => !mol.neighbors(i).iter().any(|&(w, b)| {
                mol.bond(b).order == BondOrder::Double
                    && matches!(mol.atom(w).element, Element::O | Element::S)
            }),
            Pred::HydrogenOrSaturated => mol.total_hydrogens(i) >= 1 || saturated(),
        })
    }

    /// Distinct embeddings, each the sorted set of matched atoms.
    pub fn embeddings(&self, mol: &Molecule) -> BTreeSet<Vec<usize>> {
        let ring = mol.ring_atoms();
        // Visit query atoms in BFS order so each one after the first has an
        // already mapped neighbour.
        let mut order = vec![0usize];
        let mut via: Vec<Option<usize>> = vec![None];
        let mut placed = vec![false; self.atoms.len()];
        placed[0] = true;
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            for &(a, b, _) in &self.bonds {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !placed[y] {
                        placed[y] = true;
                        order.push(y);
                        via.push(Some(x));
                    }
                }
            }
        }
        let mut found = BTreeSet::new();
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; mol.atom_count()];
        self.extend(mol, &ring, &order, &via, 0, &mut map, &mut used, &mut found);
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        mol: &Molecule,
        ring: &[bool],
        order: &[usize],
        via: &[Option<usize>],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        if depth == order.len() {
            let mut set = map.to_vec();
            set.sort_unstable();
            found.insert(set);
            return;
        }
        let q = order[depth];
        let candidates: Vec<usize> = match via[depth] {
            None => (0..mol.atom_count()).collect(),
            Some(p) => mol.neighbors(map[p]).iter().map(|&(w, _)| w).collect(),
        };
        for i in candidates {
            if used[i] || !self.atom_ok(q, mol, i, ring) {
                continue;
            }
            let bonds_ok = self.bonds.iter().all(|&(a, b, qb)| {
                let other = if a == q {
                    b
                } else if b == q {
                    a
                } else {
                    return true;
                };
                if map[other] == usize::MAX {
                    return true;
                }
                match mol.bond_between(i, map[other]) {
                    None => false,
                    Some(bi) => match qb {
                        QueryBond::Any => true,
                        QueryBond::Order(o) => mol.bond(bi).order == o,
                    },
                }
            });
            if !bonds_ok {
                continue;
            }
            map[q] = i;
            used[i] = true;
            self.extend(mol, ring, order, via, depth + 1, map, used, found);
            used[i] = false;
            map[q] = usize::MAX;
        }
    }
}

/// Named patterns; alternatives sharing a name are pooled.
#[derive(Clone, Debug, Default)]
pub struct PatternLibrary {
    patterns: Vec<Pattern>,
}

impl PatternLibrary {
    pub fn parse(text: &str) -> Result<PatternLibrary, PatternError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == LIBRARY_HEADER => {}
            _ => return Err(PatternError::Header),
        }
        let mut patterns = Vec::new();
        for (i, line) in lines {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if !(2..=3).contains(&cols.len()) {
                return Err(PatternError::Line {
                    line: i + 1,
                    msg: "expected name, atoms and bonds separated by tabs".into(),
                });
            }
            let p = Pattern::new(cols[0].trim(), cols[1], cols.get(2).copied().unwrap_or(""))
                .map_err(|msg| PatternError::Line { line: i + 1, msg })?;
            patterns.push(p);
        }
        Ok(PatternLibrary { patterns })
    }

    pub fn load(path: &Path) -> Result<PatternLibrary, PatternError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The bundled library.
    pub fn builtin() -> &'static PatternLibrary {
        static LIB: std::sync::OnceLock<PatternLibrary> = std::sync::OnceLock::new();
        LIB.get_or_init(|| PatternLibrary::parse(BUILTIN).expect("bundled pattern library is valid"))
    }

    /// Text of the bundled library file.
    pub fn builtin_source() -> &'static str {
        BUILTIN
    }

    /// Distinct pattern names in file order.
    pub fn names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in &self.patterns {
            if !out.contains(&p.name.as_str()) {
                out.push(&p.name);
            }
        }
        out
    }

    pub fn contains(&self, name: &str) -> bool {
        self.patterns.iter().any(|p| p.name == name)
    }

    /// Number of distinct embeddings of every alternative named `name`, or
    /// `None` for an unknown name.
    pub fn count(&self, mol: &Molecule, name: &str) -> Option<usize> {
        let mut any = false;
        let mut all = BTreeSet::new();
        for p in self.patterns.iter().filter(|p| p.name == name) {
            any = true;
            all.extend(p.embeddings(mol));
        }
        any.then_some(all.len())
    }

    /// Names of all patterns present at least once.
    pub fn present(&self, mol: &Molecule) -> Vec<String> {
        self.names()
            .into_iter()
            .filter(|n| self.count(mol, n).unwrap_or(0) > 0)
            .map(str::to_string)
            .collect()
    }
}

/// Number of distinct embeddings of `p` in `mol`.
pub fn match_pattern(mol: &Molecule, p: &Pattern) -> usize {
    p.embeddings(mol).len()
}
