//! Independent reference computations used by the acceptance checks.

use std::collections::VecDeque;

use molreward_core::{BondOrder, Molecule, IMPLICIT};
use molreward_grpo::TokenProbs;

/// Population standard deviation via the pairwise-difference identity.
pub fn pairwise_std(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut s = 0.0;
    for a in x {
        for b in x {
            s += (a - b) * (a - b);
        }
    }
    (s / (2.0 * n * n)).sqrt()
}

/// Clip term by cases on the advantage sign.
pub fn clip_by_cases(ratio: f64, a: f64, eps: f64) -> f64 {
    if a >= 0.0 {
        a * ratio.min(1.0 + eps)
    } else {
        a * ratio.max(1.0 - eps)
    }
}

/// Per-group objective with the KL term written through logarithms.
pub fn objective(adv: &[f64], probs: &[TokenProbs], eps: f64, beta: f64) -> f64 {
    let mut total = 0.0;
    for (i, c) in probs.iter().enumerate() {
        let mut s = 0.0;
        for t in 0..c.theta.len() {
            let log_ratio = c.reference[t].ln() - c.theta[t].ln();
            let kl = log_ratio.exp() - log_ratio - 1.0;
            s += clip_by_cases(c.theta[t] / c.old[t], adv[i], eps) - beta * kl;
        }
        total += s / c.theta.len() as f64;
    }
    total
}

/// Atoms touching at least one bond that survives removal of itself, found by
/// breadth-first search for an alternative path.
pub fn ring_atoms(m: &Molecule) -> Vec<bool> {
    let mut out = vec![false; m.atom_count()];
    for (bi, bond) in m.bonds().iter().enumerate() {
        let mut seen = vec![false; m.atom_count()];
        let mut queue = VecDeque::from([bond.a]);
        seen[bond.a] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, b) in m.neighbors(v) {
                if b != bi && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen[bond.b] {
            out[bond.a] = true;
            out[bond.b] = true;
        }
    }
    out
}

fn atom_label(m: &Molecule, i: usize) -> (u8, i8, Option<u16>, u8, bool, Option<u32>, usize) {
    let a = m.atom(i);
    (a.element.atomic_number(), a.charge, a.isotope, a.hydrogens, a.aromatic, a.map_index, m.degree(i))
}

/// Backtracking isomorphism test on atom labels, bond orders, tetrahedral
/// parity and double-bond configuration.
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
    let mut map = vec![usize::MAX; a.atom_count()];
    let mut used = vec![false; b.atom_count()];
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
            map[w] == usize::MAX || b.bond_between(c, map[w]).is_some_and(|bj| b.bond(bj).order == a.bond(bi).order)
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

fn odd_permutation(order: &[usize; 4], reference: &[usize; 4]) -> Option<bool> {
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
            (Some(sa), Some(sb)) => match odd_permutation(&sa.order.map(f), &sb.order) {
                Some(odd) if (sb.clockwise ^ odd) == sa.clockwise => {}
                _ => return false,
            },
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
                let (ya, yb) = if other.a == map[bd.a] { (sb.anchor_a, sb.anchor_b) } else { (sb.anchor_b, sb.anchor_a) };
                if (sb.cis ^ (ya != map[sa.anchor_a]) ^ (yb != map[sa.anchor_b])) != sa.cis {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}
