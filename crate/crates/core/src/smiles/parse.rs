use std::collections::BTreeMap;

use crate::element::Element;
use crate::error::SmilesError;
use crate::mol::{Atom, Bond, BondOrder, BondStereo, Molecule, TetraStereo, IMPLICIT};
use crate::perceive;

const RING_SLOT: usize = usize::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BondSym {
    Single,
    Double,
    Triple,
    Aromatic,
    Up,
    Down,
}

impl BondSym {
    fn order(self) -> Option<BondOrder> {
        match self {
            BondSym::Single | BondSym::Up | BondSym::Down => Some(BondOrder::Single),
            BondSym::Double => Some(BondOrder::Double),
            BondSym::Triple => Some(BondOrder::Triple),
            BondSym::Aromatic => Some(BondOrder::Aromatic),
        }
    }

    fn is_directional(self) -> bool {
        matches!(self, BondSym::Up | BondSym::Down)
    }
}

struct RawBond {
    a: usize,
    b: usize,
    order: BondOrder,
    /// Atom written on the left of a `/` or `\`, and whether it was `/`.
    dir: Option<(usize, bool)>,
}

struct RingOpen {
    atom: usize,
    sym: Option<BondSym>,
    pos: usize,
    slot: usize,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    organic: Vec<bool>,
    chiral: Vec<Option<bool>>,
    has_prev: Vec<bool>,
    nbrs: Vec<Vec<usize>>,
    bonds: Vec<RawBond>,
    rings: BTreeMap<u16, RingOpen>,
}

/// Parses a SMILES string into a validated molecule.
pub fn parse(text: &str) -> Result<Molecule, SmilesError> {
    if text.is_empty() {
        return Err(SmilesError::Empty);
    }
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        organic: Vec::new(),
        chiral: Vec::new(),
        has_prev: Vec::new(),
        nbrs: Vec::new(),
        bonds: Vec::new(),
        rings: BTreeMap::new(),
    };
    p.run()?;
    p.finish()
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        let mut prev: Option<usize> = None;
        let mut branches: Vec<(usize, usize, usize)> = Vec::new();
        let mut pending: Option<(BondSym, usize)> = None;
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'[' | b'A'..=b'Z' | b'a'..=b'z' => {
                    let idx = if c == b'[' { self.bracket_atom()? } else { self.organic_atom()? };
                    if let Some(p) = prev {
                        let sym = pending.take().map(|(s, _)| s);
                        self.has_prev[idx] = true;
                        self.nbrs[idx].insert(0, p);
                        self.nbrs[p].push(idx);
                        self.add_bond(p, idx, sym, p);
                    } else if let Some((_, pos)) = pending {
                        return Err(SmilesError::syntax(pos, "bond without a preceding atom"));
                    }
                    self.finish_atom(idx);
                    prev = Some(idx);
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if pending.is_some() {
                        return Err(SmilesError::syntax(start, "consecutive bond symbols"));
                    }
                    if prev.is_none() {
                        return Err(SmilesError::syntax(start, "bond without a preceding atom"));
                    }
                    let sym = match c {
                        b'-' => BondSym::Single,
                        b'=' => BondSym::Double,
                        b'#' => BondSym::Triple,
                        b':' => BondSym::Aromatic,
                        b'/' => BondSym::Up,
                        _ => BondSym::Down,
                    };
                    pending = Some((sym, start));
                    self.pos += 1;
                }
                b'$' => {
                    return Err(SmilesError::Unsupported { pos: start, what: "quadruple bond".into() })
                }
                b'*' => {
                    return Err(SmilesError::Unsupported { pos: start, what: "wildcard atom".into() })
                }
                b'0'..=b'9' | b'%' => {
                    let Some(atom) = prev else {
                        return Err(SmilesError::syntax(start, "ring closure without an atom"));
                    };
                    let label = self.ring_label()?;
                    let sym = pending.take().map(|(s, _)| s);
                    self.ring_bond(atom, label, sym, start)?;
                }
                b'(' => {
                    let Some(atom) = prev else {
                        return Err(SmilesError::syntax(start, "branch without an atom"));
                    };
                    if pending.is_some() {
                        return Err(SmilesError::syntax(start, "bond symbol before branch"));
                    }
                    branches.push((atom, self.atoms.len(), start));
                    self.pos += 1;
                }
                b')' => {
                    let Some((atom, count, _)) = branches.pop() else {
                        return Err(SmilesError::syntax(start, "unbalanced ')'"));
                    };
                    if pending.is_some() {
                        return Err(SmilesError::syntax(start, "bond symbol before ')'"));
                    }
                    if self.atoms.len() == count {
                        return Err(SmilesError::syntax(start, "empty branch"));
                    }
                    prev = Some(atom);
                    self.pos += 1;
                }
                b'.' => {
                    if prev.is_none() || pending.is_some() {
                        return Err(SmilesError::syntax(start, "misplaced '.'"));
                    }
                    prev = None;
                    self.pos += 1;
                }
                c if c.is_ascii_whitespace() => {
                    return Err(SmilesError::syntax(start, "whitespace in SMILES"));
                }
                _ => return Err(SmilesError::syntax(start, "unexpected character")),
            }
        }
        if let Some((_, pos)) = pending {
            return Err(SmilesError::syntax(pos, "dangling bond symbol"));
        }
        if let Some(&(_, _, pos)) = branches.last() {
            return Err(SmilesError::syntax(pos, "unclosed branch"));
        }
        if let Some((&label, open)) = self.rings.iter().next() {
            return Err(SmilesError::UnmatchedRing { label, pos: open.pos });
        }
        if prev.is_none() {
            return Err(SmilesError::syntax(self.pos, "SMILES ends without an atom"));
        }
        Ok(())
    }

    fn new_atom(&mut self, atom: Atom, organic: bool, chiral: Option<bool>) -> usize {
        self.atoms.push(atom);
        self.organic.push(organic);
        self.chiral.push(chiral);
        self.has_prev.push(false);
        self.nbrs.push(Vec::new());
        self.atoms.len() - 1
    }

    /// Inserts the implicit hydrogen of a chiral bracket atom in its
    /// written position (after the preceding atom).
    fn finish_atom(&mut self, idx: usize) {
        if self.chiral[idx].is_some() && self.atoms[idx].hydrogens == 1 {
            self.nbrs[idx].push(IMPLICIT);
        }
    }

    fn add_bond(&mut self, a: usize, b: usize, sym: Option<BondSym>, first: usize) {
        let order = match sym.and_then(BondSym::order) {
            Some(o) => o,
            None if self.atoms[a].aromatic && self.atoms[b].aromatic => BondOrder::Aromatic,
            None => BondOrder::Single,
        };
        let dir = sym
            .filter(|s| s.is_directional())
            .map(|s| (first, s == BondSym::Up));
        self.bonds.push(RawBond { a, b, order, dir });
    }

    fn organic_atom(&mut self) -> Result<usize, SmilesError> {
        let start = self.pos;
        let rest = &self.text[self.pos..];
        let (sym, len, aromatic) = match rest {
            [b'C', b'l', ..] => ("Cl", 2, false),
            [b'B', b'r', ..] => ("Br", 2, false),
            [b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I', ..] => {
                (std::str::from_utf8(&rest[..1]).unwrap_or(""), 1, false)
            }
            [b'b' | b'c' | b'n' | b'o' | b'p' | b's', ..] => {
                (std::str::from_utf8(&rest[..1]).unwrap_or(""), 1, true)
            }
            _ => {
                let end = rest
                    .iter()
                    .take(2)
                    .take_while(|c| c.is_ascii_alphabetic())
                    .count()
                    .max(1);
                return Err(SmilesError::UnknownElement {
                    symbol: String::from_utf8_lossy(&rest[..end]).into_owned(),
                    pos: start,
                });
            }
        };
        let upper = sym[..1].to_ascii_uppercase() + &sym[1..];
        let element = Element::from_symbol(&upper).expect("organic subset symbol");
        self.pos += len;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        Ok(self.new_atom(atom, true, None))
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        let mut v: u32 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            v = v.saturating_mul(10).saturating_add(u32::from(c - b'0'));
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    fn bracket_atom(&mut self) -> Result<usize, SmilesError> {
        let open = self.pos;
        self.pos += 1;
        let isotope = match self.number() {
            Some(v) if v == 0 || v > 999 => {
                return Err(SmilesError::syntax(open + 1, "isotope out of range"))
            }
            Some(v) => Some(v as u16),
            None => None,
        };
        let sym_pos = self.pos;
        let rest = &self.text[self.pos..];
        let (element, aromatic, len) = {
            let two = rest.get(..2).and_then(|s| std::str::from_utf8(s).ok());
            let one = rest.get(..1).and_then(|s| std::str::from_utf8(s).ok());
            let lower_two = matches!(two, Some("se" | "as" | "te"));
            if let Some(t) = two.filter(|t| {
                t.as_bytes()[0].is_ascii_uppercase()
                    && t.as_bytes()[1].is_ascii_lowercase()
                    && Element::from_symbol(t).is_some()
            }) {
                (Element::from_symbol(t), false, 2)
            } else if lower_two {
                let t = two.unwrap_or_default();
                let up = t[..1].to_ascii_uppercase() + &t[1..];
                (Element::from_symbol(&up), true, 2)
            } else if let Some(o) = one {
                let b = o.as_bytes()[0];
                if b == b'*' {
                    return Err(SmilesError::Unsupported { pos: sym_pos, what: "wildcard atom".into() });
                }
                if b.is_ascii_uppercase() {
                    (Element::from_symbol(o), false, 1)
                } else if matches!(b, b'b' | b'c' | b'n' | b'o' | b'p' | b's') {
                    (Element::from_symbol(&o.to_ascii_uppercase()), true, 1)
                } else {
                    (None, false, 0)
                }
            } else {
                (None, false, 0)
            }
        };
        let Some(element) = element else {
            let end = rest.iter().take_while(|c| c.is_ascii_alphabetic()).count().clamp(1, 2);
            return Err(SmilesError::UnknownElement {
                symbol: String::from_utf8_lossy(&rest[..end.min(rest.len())]).into_owned(),
                pos: sym_pos,
            });
        };
        self.pos += len;

        let mut chiral = None;
        if self.peek() == Some(b'@') {
            self.pos += 1;
            chiral = Some(false);
            if self.peek() == Some(b'@') {
                self.pos += 1;
                chiral = Some(true);
            }
            if self.peek().is_some_and(|c| c.is_ascii_uppercase() && c != b'H') {
                return Err(SmilesError::Unsupported {
                    pos: self.pos,
                    what: "chirality class other than @/@@".into(),
                });
            }
        }
        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hydrogens = match self.peek() {
                Some(c @ b'0'..=b'9') => {
                    self.pos += 1;
                    c - b'0'
                }
                _ => 1,
            };
        }
        let mut charge: i32 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit = if sign == b'+' { 1 } else { -1 };
            let cpos = self.pos;
            self.pos += 1;
            if let Some(n) = self.number() {
                charge = unit * n.min(100) as i32;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    self.pos += 1;
                    charge += unit;
                }
            }
            if charge.abs() > 4 {
                return Err(SmilesError::syntax(cpos, "charge magnitude exceeds 4"));
            }
        }
        let mut map_index = None;
        if self.peek() == Some(b':') {
            self.pos += 1;
            match self.number() {
                Some(n) => map_index = Some(n),
                None => return Err(SmilesError::syntax(self.pos, "atom class needs a number")),
            }
        }
        if self.peek() != Some(b']') {
            return Err(SmilesError::syntax(self.pos, "expected ']'"));
        }
        self.pos += 1;
        if aromatic && !element.can_be_aromatic() {
            return Err(SmilesError::syntax(sym_pos, "element cannot be aromatic"));
        }
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        atom.isotope = isotope;
        atom.hydrogens = hydrogens;
        atom.charge = charge as i8;
        atom.map_index = map_index;
        Ok(self.new_atom(atom, false, chiral))
    }

    fn ring_label(&mut self) -> Result<u16, SmilesError> {
        let start = self.pos;
        if self.peek() == Some(b'%') {
            self.pos += 1;
            let d = self.text.get(self.pos..self.pos + 2);
            match d {
                Some(&[a @ b'0'..=b'9', b @ b'0'..=b'9']) => {
                    self.pos += 2;
                    Ok(u16::from(a - b'0') * 10 + u16::from(b - b'0'))
                }
                _ => Err(SmilesError::syntax(start, "'%' must be followed by two digits")),
            }
        } else {
            let d = self.text[self.pos] - b'0';
            self.pos += 1;
            Ok(u16::from(d))
        }
    }

    fn ring_bond(
        &mut self,
        atom: usize,
        label: u16,
        sym: Option<BondSym>,
        pos: usize,
    ) -> Result<(), SmilesError> {
        let Some(open) = self.rings.remove(&label) else {
            let slot = self.nbrs[atom].len();
            self.nbrs[atom].push(RING_SLOT);
            self.rings.insert(label, RingOpen { atom, sym, pos, slot });
            return Ok(());
        };
        if open.atom == atom {
            return Err(SmilesError::syntax(pos, "ring closure bonds an atom to itself"));
        }
        if self.bonds.iter().any(|b| {
            (b.a == atom && b.b == open.atom) || (b.a == open.atom && b.b == atom)
        }) {
            return Err(SmilesError::syntax(pos, "ring closure duplicates an existing bond"));
        }
        let o1 = open.sym.and_then(BondSym::order);
        let o2 = sym.and_then(BondSym::order);
        if let (Some(x), Some(y)) = (o1, o2) {
            if x != y {
                return Err(SmilesError::syntax(pos, "ring closure bond symbols disagree"));
            }
        }
        self.nbrs[open.atom][open.slot] = atom;
        self.nbrs[atom].push(open.atom);
        let (chosen, first) = match (open.sym, sym) {
            (Some(s), _) if s.is_directional() => (Some(s), open.atom),
            (_, Some(s)) if s.is_directional() => (Some(s), atom),
            (Some(s), _) => (Some(s), open.atom),
            (None, s) => (s, atom),
        };
        self.add_bond(open.atom, atom, chosen, first);
        Ok(())
    }

    fn finish(mut self) -> Result<Molecule, SmilesError> {
        let n = self.atoms.len();
        // Tetrahedral configurations.
        for i in 0..n {
            let Some(cw) = self.chiral[i] else { continue };
            let mut order = self.nbrs[i].clone();
            if order.len() == 3 && self.atoms[i].hydrogens == 0 {
                // A lone pair takes the place an implicit hydrogen would.
                let at = usize::from(self.has_prev[i]);
                order.insert(at, IMPLICIT);
            }
            if let Ok(order) = <[usize; 4]>::try_from(order) {
                self.atoms[i].stereo = Some(TetraStereo { order, clockwise: cw });
            }
        }

        // Kekulé bookkeeping.
        let mut used = vec![0u32; n];
        for b in &self.bonds {
            used[b.a] += b.order.valence();
            used[b.b] += b.order.valence();
        }
        let needs_pi: Vec<bool> = (0..n)
            .map(|i| {
                let a = &self.atoms[i];
                a.aromatic && perceive::aromatic_needs_pi(a, used[i] + u32::from(a.hydrogens))
            })
            .collect();

        let mut bonds: Vec<Bond> = self
            .bonds
            .iter()
            .map(|b| Bond::new(b.a, b.b, b.order))
            .collect();
        for (bi, b) in self.bonds.iter().enumerate() {
            if b.order != BondOrder::Double {
                continue;
            }
            let side = |u: usize, v: usize| -> Option<(usize, bool)> {
                self.bonds.iter().enumerate().find_map(|(oi, o)| {
                    if oi == bi {
                        return None;
                    }
                    let (first, slash) = o.dir?;
                    let x = if o.a == u && o.b != v {
                        o.b
                    } else if o.b == u && o.a != v {
                        o.a
                    } else {
                        return None;
                    };
                    // `true` = "up" relative to the double bond.
                    let up = if first == u { slash } else { !slash };
                    Some((x, up))
                })
            };
            if let (Some((x, sx)), Some((y, sy))) = (side(b.a, b.b), side(b.b, b.a)) {
                bonds[bi].stereo = Some(BondStereo { anchor_a: x, anchor_b: y, cis: sx == sy });
            }
        }
        let implicit: Vec<bool> = self.organic.clone();
        Ok(perceive::normalize(self.atoms, bonds, &needs_pi, Some(&implicit))?)
    }
}
