//! The attributed molecular graph shared by every other module.

use std::collections::{BTreeSet, VecDeque};

use crate::element::Element;
use crate::error::MoleculeError;
use crate::perceive;

/// Placeholder used in a stereo neighbour list for an implicit hydrogen or a
/// lone pair.
pub const IMPLICIT: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to the valence of either endpoint in a Kekulé structure;
    /// aromatic bonds count as one here, the pi bond is accounted separately.
    pub fn valence(self) -> u32 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

/// Tetrahedral configuration. Looking from `order[0]`, the remaining three
/// neighbours run clockwise when `clockwise` is set (SMILES `@@`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TetraStereo {
    pub order: [usize; 4],
    pub clockwise: bool,
}

impl TetraStereo {
    /// Configuration flag for the same centre described with neighbours in
    /// `order` (which must be a permutation of `self.order`).
    pub fn clockwise_for(&self, order: &[usize; 4]) -> Option<bool> {
        let mut perm = [0usize; 4];
        for (i, r) in order.iter().enumerate() {
            perm[i] = self.order.iter().position(|x| x == r)?;
        }
        Some(self.clockwise ^ permutation_is_odd(&perm))
    }
}

pub(crate) fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// Cis/trans configuration of a double bond, given as one reference
/// neighbour on each end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BondStereo {
    /// Neighbour of `Bond::a` (other than `Bond::b`).
    pub anchor_a: usize,
    /// Neighbour of `Bond::b` (other than `Bond::a`).
    pub anchor_b: usize,
    pub cis: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub isotope: Option<u16>,
    pub aromatic: bool,
    /// Total attached hydrogens that are not graph atoms.
    pub hydrogens: u8,
    pub stereo: Option<TetraStereo>,
    pub map_index: Option<u32>,
}

impl Atom {
    pub fn new(element: Element) -> Self {
        Atom {
            element,
            charge: 0,
            isotope: None,
            aromatic: false,
            hydrogens: 0,
            stereo: None,
            map_index: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    pub stereo: Option<BondStereo>,
}

impl Bond {
    pub fn new(a: usize, b: usize, order: BondOrder) -> Self {
        Bond { a, b, order, stereo: None }
    }

    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// An immutable molecular graph.
///
/// Aromaticity is held in a normalised form: a bond is `Aromatic` exactly
/// when its order differs between Kekulé structures of the molecule, so two
/// Kekulé inputs of the same compound produce identical graphs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Molecule {
    /// Builds a molecule from atoms whose `hydrogens` are already final and
    /// bonds that may contain `Aromatic` orders. Aromatic bonds are
    /// kekulized, valences checked and aromaticity re-perceived.
    pub fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Molecule, MoleculeError> {
        let needs_pi: Vec<bool> = atoms.iter().map(|a| a.aromatic).collect();
        perceive::normalize(atoms, bonds, &needs_pi, None)
    }

    /// Assembles a molecule whose bond orders are already normalised.
    pub(crate) fn assemble(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Molecule, MoleculeError> {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        let mut seen = BTreeSet::new();
        for (i, b) in bonds.iter().enumerate() {
            if b.a == b.b {
                return Err(MoleculeError::SelfBond(b.a));
            }
            if b.a >= atoms.len() || b.b >= atoms.len() {
                return Err(MoleculeError::DanglingBond(i));
            }
            if !seen.insert((b.a.min(b.b), b.a.max(b.b))) {
                return Err(MoleculeError::DuplicateBond(b.a, b.b));
            }
            adjacency[b.a].push((b.b, i));
            adjacency[b.b].push((b.a, i));
        }
        Ok(Molecule { atoms, bonds, adjacency })
    }

    pub fn empty() -> Molecule {
        Molecule::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(neighbour, bond index)` pairs of atom `i`, in insertion order.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|&(_, bi)| bi)
    }

    /// Sum of bond valences including one extra unit for an aromatic atom's
    /// pi bond, plus attached hydrogens.
    pub fn valence(&self, i: usize) -> u32 {
        let a = &self.atoms[i];
        let bonds: u32 = self.adjacency[i]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.valence())
            .sum();
        bonds + u32::from(a.aromatic) + u32::from(a.hydrogens)
    }

    /// Total hydrogen count: attached hydrogens plus explicit hydrogen
    /// neighbours.
    pub fn total_hydrogens(&self, i: usize) -> u32 {
        u32::from(self.atoms[i].hydrogens)
            + self.adjacency[i]
                .iter()
                .filter(|(n, _)| self.atoms[*n].element.is_hydrogen())
                .count() as u32
    }

    /// Number of non-hydrogen neighbours.
    pub fn heavy_degree(&self, i: usize) -> usize {
        self.adjacency[i]
            .iter()
            .filter(|(n, _)| !self.atoms[*n].element.is_hydrogen())
            .count()
    }

    /// Connected components, each a sorted list of atom indices, ordered by
    /// their smallest atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.atoms.len()];
        let mut out = Vec::new();
        for start in 0..self.atoms.len() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(a) = queue.pop_front() {
                comp.push(a);
                for &(n, _) in &self.adjacency[a] {
                    if !seen[n] {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Renumbers atoms so that old atom `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Molecule {
        assert_eq!(perm.len(), self.atoms.len(), "permutation length mismatch");
        let map = |i: usize| if i == IMPLICIT { IMPLICIT } else { perm[i] };
        let mut atoms = vec![Atom::new(Element::H); self.atoms.len()];
        for (i, a) in self.atoms.iter().enumerate() {
            let mut a = a.clone();
            if let Some(st) = a.stereo.as_mut() {
                st.order = st.order.map(map);
            }
            atoms[perm[i]] = a;
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: perm[b.a],
                b: perm[b.b],
                order: b.order,
                stereo: b.stereo.map(|s| BondStereo {
                    anchor_a: perm[s.anchor_a],
                    anchor_b: perm[s.anchor_b],
                    cis: s.cis,
                }),
            })
            .collect();
        Molecule::assemble(atoms, bonds).expect("permutation preserves validity")
    }

    /// Induced subgraph on `keep`. Atoms that lose bonds are capped with
    /// hydrogens (one per lost bond order unit); stereo that references a
    /// removed atom is dropped. The result is re-normalised.
    pub fn subgraph(&self, keep: &[bool]) -> Molecule {
        let kekule = self.kekule_orders();
        let mut index = vec![usize::MAX; self.atoms.len()];
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if keep[i] {
                index[i] = atoms.len();
                atoms.push(a.clone());
            }
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let ni = index[i];
            let mut lost = 0u32;
            for &(n, b) in &self.adjacency[i] {
                if !keep[n] {
                    lost += kekule[b].valence();
                }
            }
            let atom = &mut atoms[ni];
            atom.hydrogens = atom.hydrogens.saturating_add(lost.min(255) as u8);
            atom.stereo = match a.stereo {
                Some(st) if lost == 0 => Some(TetraStereo {
                    order: st.order.map(|r| if r == IMPLICIT { IMPLICIT } else { index[r] }),
                    clockwise: st.clockwise,
                }),
                Some(st) if lost == 1 && !st.order.contains(&IMPLICIT) => {
                    // The removed neighbour becomes the implicit hydrogen.
                    Some(TetraStereo {
                        order: st.order.map(|r| if keep[r] { index[r] } else { IMPLICIT }),
                        clockwise: st.clockwise,
                    })
                }
                _ => None,
            };
        }
        for a in &mut atoms {
            a.aromatic = false;
        }
        let needs_pi = vec![false; atoms.len()];
        let bonds = self
            .bonds
            .iter()
            .enumerate()
            .filter(|(_, b)| keep[b.a] && keep[b.b])
            .map(|(i, b)| Bond {
                a: index[b.a],
                b: index[b.b],
                order: kekule[i],
                stereo: b.stereo.and_then(|s| {
                    (keep[s.anchor_a] && keep[s.anchor_b]).then(|| BondStereo {
                        anchor_a: index[s.anchor_a],
                        anchor_b: index[s.anchor_b],
                        cis: s.cis,
                    })
                }),
            })
            .collect();
        perceive::normalize(atoms, bonds, &needs_pi, None)
            .expect("subgraph of a valid molecule stays valid")
    }

    /// One Kekulé assignment of the bond orders (no `Aromatic` entries).
    pub fn kekule_orders(&self) -> Vec<BondOrder> {
        let needs_pi: Vec<bool> = self.atoms.iter().map(|a| a.aromatic).collect();
        let mut bonds = self.bonds.clone();
        perceive::kekulize(&self.atoms, &mut bonds, &needs_pi)
            .expect("normalised molecules are kekulizable");
        bonds.into_iter().map(|b| b.order).collect()
    }

    /// Copy with every tetrahedral and double-bond configuration removed.
    pub fn without_stereo(&self) -> Molecule {
        let mut m = self.clone();
        for a in &mut m.atoms {
            a.stereo = None;
        }
        for b in &mut m.bonds {
            b.stereo = None;
        }
        m
    }

    /// Bonds that lie on at least one cycle.
    pub fn ring_bonds(&self) -> Vec<bool> {
        crate::graph::ring_bonds(self)
    }

    /// Atoms that lie on at least one cycle.
    pub fn ring_atoms(&self) -> Vec<bool> {
        let rb = self.ring_bonds();
        let mut out = vec![false; self.atoms.len()];
        for (i, b) in self.bonds.iter().enumerate() {
            if rb[i] {
                out[b.a] = true;
                out[b.b] = true;
            }
        }
        out
    }
}
