//! Canonical atom ranking: invariant refinement followed by a search over
//! tie-breaking choices that keeps the lexicographically smallest string.

use crate::mol::Molecule;

use super::write::write_ranked;

/// Upper bound on the number of complete orderings examined per molecule.
const LEAF_BUDGET: usize = 4096;

fn dense_rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn class_count(ranks: &[usize]) -> usize {
    ranks.iter().copied().max().map_or(0, |m| m + 1)
}

fn initial_ranks(mol: &Molecule) -> Vec<usize> {
    let keys: Vec<_> = (0..mol.atom_count())
        .map(|i| {
            let a = mol.atom(i);
            (
                mol.degree(i),
                a.element.atomic_number(),
                a.isotope.unwrap_or(0),
                a.charge,
                a.hydrogens,
                a.aromatic,
                a.map_index.unwrap_or(0),
                a.stereo.is_some(),
            )
        })
        .collect();
    dense_rank(&keys)
}

/// Iterative neighbourhood refinement until the partition is stable.
fn refine(mol: &Molecule, ranks: &mut Vec<usize>) {
    let mut classes = class_count(ranks);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..mol.atom_count())
            .map(|i| {
                let mut nb: Vec<(usize, u8)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(w, b)| {
                        let bd = mol.bond(b);
                        (ranks[w], bd.order.code() + 8 * u8::from(bd.stereo.is_some()))
                    })
                    .collect();
                nb.sort_unstable();
                (ranks[i], nb)
            })
            .collect();
        *ranks = dense_rank(&keys);
        let c = class_count(ranks);
        if c == classes {
            return;
        }
        classes = c;
    }
}

struct Search<'a> {
    mol: &'a Molecule,
    best: Option<(String, Vec<usize>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
    leaves: usize,
}

impl Search<'_> {
    fn leaf(&mut self, ranks: Vec<usize>) {
        self.leaves += 1;
        let (s, order) = write_ranked(self.mol, &ranks);
        match &self.best {
            Some((b, best_order, _)) if *b == s => {
                let mut g = vec![0usize; order.len()];
                for (k, &a) in order.iter().enumerate() {
                    g[a] = best_order[k];
                }
                if g.iter().enumerate().any(|(i, &x)| i != x) {
                    self.automorphisms.push(g);
                }
            }
            Some((b, _, _)) if *b < s => {}
            _ => self.best = Some((s, order, ranks)),
        }
    }

    fn node(&mut self, mut ranks: Vec<usize>, path: &mut Vec<usize>) {
        refine(self.mol, &mut ranks);
        let n = ranks.len();
        if class_count(&ranks) == n {
            self.leaf(ranks);
            return;
        }
        let mut size = vec![0usize; n];
        for &r in &ranks {
            size[r] += 1;
        }
        let target = (0..n).find(|&r| size[r] > 1).expect("a tied class exists");
        let members: Vec<usize> = (0..n).filter(|&i| ranks[i] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &m in &members {
            if self.leaves >= LEAF_BUDGET && self.best.is_some() {
                return;
            }
            if !explored.is_empty() && self.equivalent(m, &explored, path) {
                continue;
            }
            let next: Vec<usize> = ranks
                .iter()
                .enumerate()
                .map(|(i, &r)| 2 * r + usize::from(r == target && i != m))
                .collect();
            path.push(m);
            self.node(next, path);
            path.pop();
            explored.push(m);
        }
    }

    /// Whether `m` lies in the orbit of an explored atom under the known
    /// automorphisms that fix every atom on the current path.
    fn equivalent(&self, m: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.mol.atom_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for g in &self.automorphisms {
            if path.iter().any(|&p| g[p] != p) {
                continue;
            }
            any = true;
            for (i, &gi) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, gi));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, m);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }
}

/// Canonical rank of every atom (0-based, all distinct).
pub fn canonical_ranks(mol: &Molecule) -> Vec<usize> {
    canonical(mol).1
}

fn canonical(mol: &Molecule) -> (String, Vec<usize>) {
    if mol.is_empty() {
        return (String::new(), Vec::new());
    }
    let mut search = Search { mol, best: None, automorphisms: Vec::new(), leaves: 0 };
    search.node(initial_ranks(mol), &mut Vec::new());
    let (s, _, ranks) = search.best.expect("at least one leaf");
    (s, ranks)
}

/// Deterministic SMILES that is identical for every atom ordering of the
/// same molecule. Stereo configurations are kept.
pub fn write_canonical(mol: &Molecule) -> String {
    canonical(mol).0
}
