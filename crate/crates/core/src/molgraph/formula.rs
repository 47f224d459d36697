//! Element counts and Hill-notation formulas.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::element::Element;
use crate::mol::Molecule;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    counts: BTreeMap<Element, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character '{ch}' at position {pos}")]
    Syntax { ch: char, pos: usize },
    #[error("unknown element '{0}'")]
    UnknownElement(String),
}

impl Formula {
    /// Counts every atom including attached and explicit hydrogens. Formal
    /// charges are not represented.
    pub fn of(mol: &Molecule) -> Formula {
        let mut counts = BTreeMap::new();
        for a in mol.atoms() {
            *counts.entry(a.element).or_insert(0) += 1;
            if a.hydrogens > 0 {
                *counts.entry(Element::H).or_insert(0) += u32::from(a.hydrogens);
            }
        }
        Formula { counts }
    }

    /// Reads a formula such as `C2H6O`. Element order is free and repeated
    /// elements are summed.
    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(FormulaError::Empty);
        }
        let chars: Vec<char> = text.chars().collect();
        let mut counts = BTreeMap::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_uppercase() {
                return Err(FormulaError::Syntax { ch: c, pos: i });
            }
            let mut sym = c.to_string();
            i += 1;
            while i < chars.len() && chars[i].is_ascii_lowercase() {
                sym.push(chars[i]);
                i += 1;
            }
            let el = Element::from_symbol(&sym).ok_or(FormulaError::UnknownElement(sym))?;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let n: u32 = if i == start {
                1
            } else {
                chars[start..i].iter().collect::<String>().parse().unwrap_or(u32::MAX)
            };
            if n > 0 {
                *counts.entry(el).or_insert(0) += n;
            }
        }
        Ok(Formula { counts })
    }

    pub fn count(&self, el: Element) -> u32 {
        self.counts.get(&el).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<Element, u32> {
        &self.counts
    }

    /// Element-wise sum.
    pub fn add(&self, other: &Formula) -> Formula {
        let mut counts = self.counts.clone();
        for (&el, &n) in &other.counts {
            *counts.entry(el).or_insert(0) += n;
        }
        Formula { counts }
    }

    /// Carbon first, then hydrogen, then the rest alphabetically; with no
    /// carbon every element is alphabetical.
    pub fn hill_string(&self) -> String {
        let mut order: Vec<Element> = self.counts.keys().copied().collect();
        let has_c = self.counts.contains_key(&Element::C);
        order.sort_by(|a, b| {
            let key = |e: &Element| {
                if has_c && *e == Element::C {
                    0
                } else if has_c && *e == Element::H {
                    1
                } else {
                    2
                }
            };
            key(a).cmp(&key(b)).then_with(|| a.symbol().cmp(b.symbol()))
        });
        let mut s = String::new();
        for el in order {
            s.push_str(el.symbol());
            let n = self.counts[&el];
            if n > 1 {
                s.push_str(&n.to_string());
            }
        }
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hill_string())
    }
}

pub fn molecular_formula(mol: &Molecule) -> Formula {
    Formula::of(mol)
}
