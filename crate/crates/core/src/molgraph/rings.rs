//! Smallest set of smallest rings and fused ring systems.

use std::collections::VecDeque;

use crate::mol::Molecule;

/// Rotates a cycle to start at its smallest atom, walking towards the
/// smaller of that atom's two ring neighbours.
fn normalize_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let (pos, _) = cycle.iter().enumerate().min_by_key(|&(_, a)| *a).expect("non-empty cycle");
    cycle.rotate_left(pos);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// BFS parents from `root` over ring bonds, visiting neighbours in index
/// order.
fn bfs_tree(mol: &Molecule, ring: &[bool], root: usize) -> (Vec<usize>, Vec<usize>) {
    let n = mol.atom_count();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let mut nb: Vec<usize> = mol
            .neighbors(v)
            .iter()
            .filter(|&&(_, b)| ring[b])
            .map(|&(w, _)| w)
            .collect();
        nb.sort_unstable();
        for w in nb {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    (parent, dist)
}

fn path_to_root(parent: &[usize], mut v: usize) -> Vec<usize> {
    let mut path = vec![v];
    while parent[v] != usize::MAX {
        v = parent[v];
        path.push(v);
    }
    path
}

/// Smallest set of smallest rings as atom cycles. Candidates are ordered
/// by size and then by atom-index sequence, and accepted greedily while
/// linearly independent over GF(2).
pub fn perceive_rings(mol: &Molecule) -> Vec<Vec<usize>> {
    let ring = mol.ring_bonds();
    let nbonds = mol.bond_count();
    let ring_bond_count = ring.iter().filter(|&&r| r).count();
    if ring_bond_count == 0 {
        return Vec::new();
    }
    let ring_atoms = mol.ring_atoms();
    let ring_atom_count = ring_atoms.iter().filter(|&&r| r).count();
    let ring_components = {
        let comps = mol.components();
        comps
            .iter()
            .filter(|c| c.iter().any(|&a| ring_atoms[a]))
            .map(|c| {
                // Ring-bond subgraph components within this component.
                let mut seen = vec![false; mol.atom_count()];
                let mut count = 0;
                for &s in c {
                    if !ring_atoms[s] || seen[s] {
                        continue;
                    }
                    count += 1;
                    let mut stack = vec![s];
                    seen[s] = true;
                    while let Some(v) = stack.pop() {
                        for &(w, b) in mol.neighbors(v) {
                            if ring[b] && !seen[w] {
                                seen[w] = true;
                                stack.push(w);
                            }
                        }
                    }
                }
                count
            })
            .sum::<usize>()
    };
    let target = ring_bond_count + ring_components - ring_atom_count;

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for v in (0..mol.atom_count()).filter(|&a| ring_atoms[a]) {
        let (parent, dist) = bfs_tree(mol, &ring, v);
        for (bi, b) in mol.bonds().iter().enumerate() {
            if !ring[bi] || dist[b.a] == usize::MAX || dist[b.b] == usize::MAX {
                continue;
            }
            let (x, y) = (b.a, b.b);
            if parent[x] == y || parent[y] == x {
                continue;
            }
            let px = path_to_root(&parent, x);
            let py = path_to_root(&parent, y);
            // Paths must meet only at the root.
            if px.iter().filter(|a| py.contains(a)).count() != 1 {
                continue;
            }
            let mut cycle = px;
            cycle.pop();
            let mut back = py;
            back.reverse();
            cycle.extend(back);
            candidates.push(normalize_cycle(cycle));
        }
        // Even cycles through a vertex opposite the root: v..x - w - y..v.
        for w in (0..mol.atom_count()).filter(|&a| ring_atoms[a] && dist[a] != usize::MAX) {
            let mut preds: Vec<usize> = mol
                .neighbors(w)
                .iter()
                .filter(|&&(u, b)| ring[b] && dist[u] != usize::MAX && dist[u] + 1 == dist[w])
                .map(|&(u, _)| u)
                .collect();
            preds.sort_unstable();
            for i in 0..preds.len() {
                for j in i + 1..preds.len() {
                    let px = path_to_root(&parent, preds[i]);
                    let py = path_to_root(&parent, preds[j]);
                    if px.iter().filter(|a| py.contains(a)).count() != 1 {
                        continue;
                    }
                    let mut cycle = vec![w];
                    cycle.extend(px);
                    cycle.pop();
                    let mut back = py;
                    back.reverse();
                    cycle.extend(back);
                    candidates.push(normalize_cycle(cycle));
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    candidates.dedup();

    let words = nbonds.div_ceil(64);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut out = Vec::new();
    for cycle in candidates {
        if out.len() == target {
            break;
        }
        let mut vec = vec![0u64; words];
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let bi = mol.bond_between(a, b).expect("cycle follows bonds");
            vec[bi / 64] ^= 1 << (bi % 64);
        }
        for (pivot, row) in &basis {
            if vec[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in vec.iter_mut().zip(row) {
                    *x ^= y;
                }
            }
        }
        let Some(pivot) = (0..nbonds).find(|&i| vec[i / 64] >> (i % 64) & 1 == 1) else {
            continue;
        };
        // Keep the basis fully reduced on pivot columns.
        for (_, row) in basis.iter_mut() {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&vec) {
                    *x ^= y;
                }
            }
        }
        basis.push((pivot, vec));
        out.push(cycle);
    }
    out
}

/// Fused ring systems: connected components of the ring-bond subgraph,
/// each a sorted atom list. Spiro-joined rings form one system.
pub fn ring_systems(mol: &Molecule) -> Vec<Vec<usize>> {
    let ring = mol.ring_bonds();
    let ring_atoms = mol.ring_atoms();
    let mut seen = vec![false; mol.atom_count()];
    let mut out = Vec::new();
    for s in 0..mol.atom_count() {
        if !ring_atoms[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &(w, b) in mol.neighbors(v) {
                if ring[b] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
