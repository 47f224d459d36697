//! Kekulization, hydrogen/valence perception and the resonance-invariant
//! aromaticity model.
//!
//! A bond is marked aromatic iff it is double in some Kekulé structure and
//! single in another. Every benzenoid ring qualifies, fixed double bonds
//! (pyrrole C=C, carbonyls) do not, and the result does not depend on which
//! Kekulé structure the input used.

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::error::MoleculeError;
use crate::graph::ring_bonds_from_adjacency;
use crate::mol::{Atom, Bond, BondOrder, Molecule, IMPLICIT};

fn adjacency(n: usize, bonds: &[Bond]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        if b.a < n && b.b < n && b.a != b.b {
            adj[b.a].push((b.b, i));
            adj[b.b].push((b.a, i));
        }
    }
    adj
}

/// Whether an aromatic atom must receive a pi bond during kekulization.
/// `used` counts aromatic bonds as one and includes attached hydrogens.
pub(crate) fn aromatic_needs_pi(atom: &Atom, used: u32) -> bool {
    match atom.element.target_valence(atom.charge, used) {
        Some(v) => v > used,
        None => false,
    }
}

/// Implicit hydrogens of an unbracketed atom with Kekulé bond-order sum `used`.
pub(crate) fn organic_implicit_h(atom: &Atom, used: u32) -> Option<u32> {
    atom.element.target_valence(0, used).map(|v| v - used)
}

pub(crate) fn normalize(
    mut atoms: Vec<Atom>,
    mut bonds: Vec<Bond>,
    needs_pi: &[bool],
    implicit_h: Option<&[bool]>,
) -> Result<Molecule, MoleculeError> {
    let n = atoms.len();
    let adj = adjacency(n, &bonds);
    let in_ring = ring_bonds_from_adjacency(&adj, bonds.len());

    for (i, b) in bonds.iter_mut().enumerate() {
        if b.order == BondOrder::Aromatic
            && (!in_ring[i] || !atoms[b.a].aromatic || !atoms[b.b].aromatic)
        {
            b.order = BondOrder::Single;
        }
    }
    kekulize(&atoms, &mut bonds, needs_pi)?;

    for (i, atom) in atoms.iter_mut().enumerate() {
        let used: u32 = adj[i].iter().map(|&(_, b)| bonds[b].order.valence()).sum();
        if implicit_h.is_some_and(|f| f[i]) {
            let h = organic_implicit_h(atom, used).ok_or_else(|| MoleculeError::Valence {
                atom: i,
                element: atom.element.symbol().to_string(),
            })?;
            atom.hydrogens = h as u8;
        }
        if let Some(max) = atom.element.max_valence(atom.charge) {
            if used + u32::from(atom.hydrogens) > max {
                return Err(MoleculeError::Valence {
                    atom: i,
                    element: atom.element.symbol().to_string(),
                });
            }
        }
        atom.aromatic = false;
    }

    for (i, flag) in delocalized_bonds(n, &bonds, &adj, &in_ring).into_iter().enumerate() {
        if flag {
            bonds[i].order = BondOrder::Aromatic;
            bonds[i].stereo = None;
            atoms[bonds[i].a].aromatic = true;
            atoms[bonds[i].b].aromatic = true;
        } else if bonds[i].order != BondOrder::Double {
            bonds[i].stereo = None;
        }
    }
    for b in &mut bonds {
        if let Some(s) = b.stereo {
            let ok_a = adj[b.a].iter().any(|&(x, _)| x == s.anchor_a && x != b.b);
            let ok_b = adj[b.b].iter().any(|&(x, _)| x == s.anchor_b && x != b.a);
            if !ok_a || !ok_b {
                b.stereo = None;
            }
        }
    }
    for (i, atom) in atoms.iter_mut().enumerate() {
        if let Some(st) = atom.stereo {
            let implicit = st.order.iter().filter(|&&r| r == IMPLICIT).count();
            let valid = atom.hydrogens as usize <= 1
                && implicit <= 1
                && adj[i].len() + implicit == 4
                && st.order.iter().all(|&r| r == IMPLICIT || adj[i].iter().any(|&(x, _)| x == r));
            if !valid {
                atom.stereo = None;
            }
        }
    }
    Molecule::assemble(atoms, bonds)
}

/// Replaces aromatic bonds by a Kekulé assignment over atoms needing a pi
/// bond; remaining aromatic bonds become single.
pub(crate) fn kekulize(atoms: &[Atom], bonds: &mut [Bond], needs_pi: &[bool]) -> Result<(), MoleculeError> {
    let pi: Vec<bool> = (0..atoms.len()).map(|i| atoms[i].aromatic && needs_pi[i]).collect();
    if !pi.iter().any(|&p| p) {
        for b in bonds.iter_mut() {
            if b.order == BondOrder::Aromatic {
                b.order = BondOrder::Single;
            }
        }
        return Ok(());
    }
    let mut graph = UnGraph::<usize, usize>::default();
    let mut node = vec![None; atoms.len()];
    for (i, &p) in pi.iter().enumerate() {
        if p {
            node[i] = Some(graph.add_node(i));
        }
    }
    for (bi, b) in bonds.iter().enumerate() {
        if b.order == BondOrder::Aromatic {
            if let (Some(x), Some(y)) = (node[b.a], node[b.b]) {
                graph.add_edge(x, y, bi);
            }
        }
    }
    let matching = maximum_matching(&graph);
    for (i, nd) in node.iter().enumerate() {
        if let Some(nd) = nd {
            if matching.mate(*nd).is_none() {
                return Err(MoleculeError::Kekulize { atom: i });
            }
        }
    }
    for b in bonds.iter_mut() {
        if b.order == BondOrder::Aromatic {
            b.order = match (node[b.a], node[b.b]) {
                (Some(x), Some(y)) if matching.mate(x) == Some(y) => BondOrder::Double,
                _ => BondOrder::Single,
            };
        }
    }
    Ok(())
}

/// Bonds whose order varies across Kekulé structures. Input must be fully
/// kekulized.
fn delocalized_bonds(
    n: usize,
    bonds: &[Bond],
    adj: &[Vec<(usize, usize)>],
    in_ring: &[bool],
) -> Vec<bool> {
    let mut out = vec![false; bonds.len()];
    let doubles = |i: usize| {
        adj[i]
            .iter()
            .filter(|&&(_, b)| bonds[b].order == BondOrder::Double)
            .count()
    };
    let triples = |i: usize| {
        adj[i]
            .iter()
            .any(|&(_, b)| bonds[b].order == BondOrder::Triple)
    };
    let simple: Vec<bool> = (0..n).map(|i| doubles(i) == 1 && !triples(i)).collect();
    let pi: Vec<bool> = (0..n)
        .map(|i| {
            simple[i]
                && adj[i]
                    .iter()
                    .any(|&(x, b)| bonds[b].order == BondOrder::Double && simple[x])
        })
        .collect();

    // Components of the pi graph.
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in 0..n {
        if !pi[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(a) = stack.pop() {
            for &(x, b) in &adj[a] {
                if pi[x] && comp[x] == usize::MAX && bonds[b].order != BondOrder::Triple {
                    comp[x] = ncomp;
                    stack.push(x);
                }
            }
        }
        ncomp += 1;
    }

    for c in 0..ncomp {
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
        let edges: Vec<usize> = (0..bonds.len())
            .filter(|&b| {
                comp[bonds[b].a] == c
                    && comp[bonds[b].b] == c
                    && matches!(bonds[b].order, BondOrder::Single | BondOrder::Double)
            })
            .collect();
        if !edges.iter().any(|&b| in_ring[b]) {
            continue;
        }
        for &e in &edges {
            if !in_ring[e] {
                continue;
            }
            let (u, v) = (bonds[e].a, bonds[e].b);
            let is_double = bonds[e].order == BondOrder::Double;
            let mut graph = UnGraph::<(), ()>::default();
            let mut idx = vec![NodeIndex::end(); n];
            for &m in &members {
                if !is_double && (m == u || m == v) {
                    continue;
                }
                idx[m] = graph.add_node(());
            }
            for &f in &edges {
                if f == e {
                    continue;
                }
                let (x, y) = (idx[bonds[f].a], idx[bonds[f].b]);
                if x != NodeIndex::end() && y != NodeIndex::end() {
                    graph.add_edge(x, y, ());
                }
            }
            if maximum_matching(&graph).is_perfect() {
                out[e] = true;
            }
        }
    }
    out
}
