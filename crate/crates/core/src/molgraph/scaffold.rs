//! Murcko scaffolds and ring-system fragments.

use std::collections::BTreeSet;

use crate::mol::{BondOrder, Molecule};
use crate::smiles::write_canonical;

use super::rings::ring_systems;

/// Adds terminal atoms attached to `keep` by a double or triple bond.
fn with_exocyclic_multiple(mol: &Molecule, keep: &mut [bool]) {
    let base: Vec<bool> = keep.to_vec();
    for (i, b) in mol.bonds().iter().enumerate() {
        let multiple = matches!(mol.bond(i).order, BondOrder::Double | BondOrder::Triple);
        if !multiple {
            continue;
        }
        for (x, y) in [(b.a, b.b), (b.b, b.a)] {
            if base[x] && !base[y] && mol.heavy_degree(y) == 1 {
                keep[y] = true;
            }
        }
    }
}

/// Ring systems plus the linkers between them, with terminal side chains
/// stripped. Exocyclic doubly bonded atoms on kept atoms are retained.
/// Acyclic molecules give an empty molecule.
pub fn murcko_scaffold(mol: &Molecule) -> Molecule {
    let ring = mol.ring_atoms();
    if !ring.iter().any(|&r| r) {
        return Molecule::empty();
    }
    let n = mol.atom_count();
    let mut keep = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| mol.degree(i)).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| !ring[i] && degree[i] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !keep[v] {
            continue;
        }
        keep[v] = false;
        for &(w, _) in mol.neighbors(v) {
            if keep[w] {
                degree[w] -= 1;
                if !ring[w] && degree[w] <= 1 {
                    queue.push(w);
                }
            }
        }
    }
    // Components without rings disappear entirely.
    for comp in mol.components() {
        if !comp.iter().any(|&a| ring[a]) {
            for a in comp {
                keep[a] = false;
            }
        }
    }
    with_exocyclic_multiple(mol, &mut keep);
    mol.subgraph(&keep).without_stereo()
}

/// Canonical SMILES of every fused ring system, cut out at exocyclic
/// single bonds and capped with hydrogen. Sorted and deduplicated.
pub fn ring_cut_fragments(mol: &Molecule) -> Vec<String> {
    let mut out = BTreeSet::new();
    for system in ring_systems(mol) {
        let mut keep = vec![false; mol.atom_count()];
        for &a in &system {
            keep[a] = true;
        }
        with_exocyclic_multiple(mol, &mut keep);
        out.insert(write_canonical(&mol.subgraph(&keep).without_stereo()));
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{canonicalize, parse};

    fn scaffold(s: &str) -> String {
        write_canonical(&murcko_scaffold(&parse(s).unwrap()))
    }

    fn can(s: &str) -> String {
        canonicalize(s).unwrap()
    }

    #[test]
    fn scaffolds() {
        assert_eq!(scaffold("Cc1ccccc1"), can("c1ccccc1"));
        assert_eq!(scaffold("c1ccccc1"), can("c1ccccc1"));
        assert_eq!(scaffold("CCCCCC"), "");
        assert_eq!(scaffold("CC(=O)c1ccccc1"), can("c1ccccc1"));
        assert_eq!(scaffold("O=C1CCCCC1"), can("O=C1CCCCC1"));
        assert_eq!(scaffold("c1ccccc1C(=O)c1ccccc1"), can("O=C(c1ccccc1)c1ccccc1"));
        assert_eq!(scaffold("CCc1ccccc1CCc1ccncc1"), can("c1ccc(CCc2ccncc2)cc1"));
    }

    #[test]
    fn fragments() {
        let f = |s: &str| ring_cut_fragments(&parse(s).unwrap());
        assert_eq!(f("Cc1ccccc1"), vec!["c1ccccc1".to_string()]);
        assert!(f("CCCCCC").is_empty());
        assert_eq!(f("c1ccc(-c2ccccc2)cc1"), vec!["c1ccccc1".to_string()]);
        assert_eq!(f("O=C1CCCCC1CCc1ccccc1"), {
            let mut v = vec![can("O=C1CCCCC1"), can("c1ccccc1")];
            v.sort();
            v
        });
    }
}
