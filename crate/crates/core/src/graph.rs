//! Small graph utilities over `Molecule` adjacency.

use crate::mol::Molecule;

/// Marks bonds that are not bridges, i.e. that lie on some cycle.
pub(crate) fn ring_bonds(mol: &Molecule) -> Vec<bool> {
    let adj: Vec<Vec<(usize, usize)>> = (0..mol.atom_count())
        .map(|i| mol.neighbors(i).to_vec())
        .collect();
    ring_bonds_from_adjacency(&adj, mol.bond_count())
}

/// Bridge detection (Tarjan low-link), iterative to avoid deep recursion.
pub(crate) fn ring_bonds_from_adjacency(adj: &[Vec<(usize, usize)>], nbonds: usize) -> Vec<bool> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut in_ring = vec![true; nbonds];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (atom, parent bond, next neighbour position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, pbond, ref mut pos)) = stack.last_mut() {
            if *pos < adj[v].len() {
                let (w, b) = adj[v][*pos];
                *pos += 1;
                if b == pbond {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, b, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        in_ring[pbond] = false;
                    }
                }
            }
        }
    }
    in_ring
}
