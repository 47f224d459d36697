#![allow(dead_code)]

//! Test-only helpers: an independent isomorphism oracle and the shared
//! molecule corpus.

use molreward_core::{BondOrder, Molecule, IMPLICIT};

pub fn corpus() -> Vec<String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/corpus.smi");
    std::fs::read_to_string(path)
        .expect("corpus file")
        .lines()
        .filter_map(|l| l.split_whitespace().next().map(str::to_string))
        .collect()
}

fn atom_label(m: &Molecule, i: usize) -> (u8, i8, Option<u16>, u8, bool, Option<u32>, usize) {
    let a = m.atom(i);
    (
        a.element.atomic_number(),
        a.charge,
        a.isotope,
        a.hydrogens,
        a.aromatic,
        a.map_index,
        m.degree(i),
    )
}

/// Backtracking isomorphism test comparing atom labels, bond orders,
/// tetrahedral parity and double-bond configuration.
pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    if a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count() {
        return false;
    }
    let mut la: Vec<_> = (0..a.atom_count()).map(|i| atom_label(a, i)).collect();
    let mut lb: Vec<_> = (0..b.atom_count()).map(|i| atom_label(b, i)).collect();
    la.sort();
    lb.sort();
    if la != lb {
        return false;
    }
    let mut map = vec![usize::MAX; a.atom_count()];
    let mut used = vec![false; b.atom_count()];
    // Order atoms of `a` so that each one is adjacent to an earlier one
    // whenever possible.
    let mut order = Vec::new();
    let mut seen = vec![false; a.atom_count()];
    for s in 0..a.atom_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut k = order.len();
        order.push(s);
        while k < order.len() {
            let v = order[k];
            k += 1;
            for &(w, _) in a.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    search(a, b, &order, 0, &mut map, &mut used)
}

fn search(a: &Molecule, b: &Molecule, order: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if k == order.len() {
        return stereo_matches(a, b, map);
    }
    let v = order[k];
    for c in 0..b.atom_count() {
        if used[c] || atom_label(a, v) != atom_label(b, c) {
            continue;
        }
        let ok = a.neighbors(v).iter().all(|&(w, bi)| {
            map[w] == usize::MAX
                || b.bond_between(c, map[w]).is_some_and(|bj| b.bond(bj).order == a.bond(bi).order)
        });
        if !ok {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if search(a, b, order, k + 1, map, used) {
            return true;
        }
        used[c] = false;
        map[v] = usize::MAX;
    }
    false
}

fn parity(order: &[usize; 4], reference: &[usize; 4]) -> Option<bool> {
    let mut perm = [0usize; 4];
    for (i, x) in order.iter().enumerate() {
        perm[i] = reference.iter().position(|r| r == x)?;
    }
    let mut odd = false;
    for i in 0..4 {
        for j in i + 1..4 {
            if perm[i] > perm[j] {
                odd = !odd;
            }
        }
    }
    Some(odd)
}

fn stereo_matches(a: &Molecule, b: &Molecule, map: &[usize]) -> bool {
    let f = |x: usize| if x == IMPLICIT { IMPLICIT } else { map[x] };
    for i in 0..a.atom_count() {
        match (a.atom(i).stereo, b.atom(map[i]).stereo) {
            (None, None) => {}
            (Some(sa), Some(sb)) => {
                let mapped = sa.order.map(f);
                match parity(&mapped, &sb.order) {
                    Some(odd) if (sb.clockwise ^ odd) == sa.clockwise => {}
                    _ => return false,
                }
            }
            _ => return false,
        }
    }
    for bd in a.bonds() {
        let bj = b.bond_between(map[bd.a], map[bd.b]).expect("mapped bond");
        let other = b.bond(bj);
        match (bd.stereo, other.stereo) {
            (None, None) => {}
            (Some(sa), Some(sb)) => {
                if other.order != BondOrder::Double {
                    return false;
                }
                let (ya, yb) = if other.a == map[bd.a] {
                    (sb.anchor_a, sb.anchor_b)
                } else {
                    (sb.anchor_b, sb.anchor_a)
                };
                let cis_b = sb.cis ^ (ya != map[sa.anchor_a]) ^ (yb != map[sa.anchor_b]);
                if cis_b != sa.cis {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}
