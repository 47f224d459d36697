//! Structural motifs that disqualify an answer from the quality bonus.

use std::fmt;

use molreward_core::molgraph::PatternLibrary;
use molreward_core::{BondOrder, Element, Molecule};
use serde::Serialize;

pub const MIN_CHAIN_CARBONS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityFlag {
    MultiThiol,
    Peroxide,
    Hydrazine,
    ChargedAmine,
    Nitro,
    LongSaturatedChain,
}

impl QualityFlag {
    pub fn name(self) -> &'static str {
        match self {
            QualityFlag::MultiThiol => "multi_thiol",
            QualityFlag::Peroxide => "peroxide",
            QualityFlag::Hydrazine => "hydrazine",
            QualityFlag::ChargedAmine => "charged_amine",
            QualityFlag::Nitro => "nitro",
            QualityFlag::LongSaturatedChain => "long_saturated_chain",
        }
    }
}

impl fmt::Display for QualityFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QualityReport {
    pub flags: Vec<QualityFlag>,
    pub longest_chain: usize,
}

impl QualityReport {
    pub fn ok(&self) -> bool {
        self.flags.is_empty()
    }
}

pub fn quality_flags(mol: &Molecule) -> QualityReport {
    let lib = PatternLibrary::builtin();
    let count = |name: &str| lib.count(mol, name).expect("builtin motif pattern");
    let mut flags = Vec::new();
    if count("thiol") >= 2 {
        flags.push(QualityFlag::MultiThiol);
    }
    for (name, flag) in [
        ("peroxide", QualityFlag::Peroxide),
        ("hydrazine", QualityFlag::Hydrazine),
        ("charged_amine", QualityFlag::ChargedAmine),
        ("nitro", QualityFlag::Nitro),
    ] {
        if count(name) >= 1 {
            flags.push(flag);
        }
    }
    let longest_chain = longest_saturated_chain(mol);
    if longest_chain >= MIN_CHAIN_CARBONS {
        flags.push(QualityFlag::LongSaturatedChain);
    }
    QualityReport { flags, longest_chain }
}

/// Atom count of the longest simple path through acyclic, neutral,
/// non-aromatic carbons joined by single bonds and bearing no multiple bonds.
pub fn longest_saturated_chain(mol: &Molecule) -> usize {
    let ring = mol.ring_atoms();
    let n = mol.atom_count();
    let ok: Vec<bool> = (0..n)
        .map(|i| {
            let a = mol.atom(i);
            a.element == Element::C
                && a.charge == 0
                && !a.aromatic
                && !ring[i]
                && mol.neighbors(i).iter().all(|&(_, b)| mol.bond(b).order == BondOrder::Single)
        })
        .collect();
    // Non-ring atoms induce a forest, so the longest path is a tree diameter.
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            if !ok[i] {
                return Vec::new();
            }
            mol.neighbors(i).iter().map(|&(j, _)| j).filter(|&j| ok[j]).collect()
        })
        .collect();
    let farthest = |start: usize| -> (usize, usize, Vec<bool>) {
        let mut seen = vec![false; n];
        let mut frontier = vec![start];
        seen[start] = true;
        let (mut last, mut depth) = (start, 0);
        while !frontier.is_empty() {
            depth += 1;
            last = frontier[0];
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        (last, depth, seen)
    };
    let mut visited = vec![false; n];
    let mut best = 0;
    for s in 0..n {
        if !ok[s] || visited[s] {
            continue;
        }
        let (end, _, seen) = farthest(s);
        for (v, &x) in visited.iter_mut().zip(&seen) {
            *v |= x;
        }
        best = best.max(farthest(end).1);
    }
    best
}
