//! Co-occurrence graph over MCQ options and the leakage-free split.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::graph::{NodeIndex, UnGraph};
use petgraph::unionfind::UnionFind;
use petgraph::visit::EdgeRef;

use crate::generate::Mcq;
use crate::McqError;

/// Molecules as nodes, with an edge between any two that share a question.
#[derive(Clone, Debug, Default)]
pub struct CooccurrenceGraph {
    graph: UnGraph<String, ()>,
    index: BTreeMap<String, NodeIndex>,
}

impl CooccurrenceGraph {
    fn node(&mut self, smiles: &str) -> NodeIndex {
        if let Some(&n) = self.index.get(smiles) {
            return n;
        }
        let n = self.graph.add_node(smiles.to_string());
        self.index.insert(smiles.to_string(), n);
        n
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.graph.edge_references().map(|e| (self.graph[e.source()].as_str(), self.graph[e.target()].as_str()))
    }

    /// Connected components, largest first, ties by smallest member.
    pub fn components(&self) -> Vec<Vec<String>> {
        let mut uf = UnionFind::<usize>::new(self.graph.node_count());
        for e in self.graph.edge_references() {
            uf.union(e.source().index(), e.target().index());
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for n in self.graph.node_indices() {
            groups.entry(uf.find(n.index())).or_default().push(self.graph[n].clone());
        }
        let mut comps: Vec<Vec<String>> = groups
            .into_values()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        comps
    }
}

pub fn build_cooccurrence_graph(mcqs: &[Mcq]) -> CooccurrenceGraph {
    let mut g = CooccurrenceGraph::default();
    for q in mcqs {
        let nodes: Vec<NodeIndex> = q.options.iter().map(|o| g.node(o)).collect();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if a != b {
                    g.graph.update_edge(a, b, ());
                }
            }
        }
    }
    g
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Split {
    pub train: BTreeSet<String>,
    pub test: BTreeSet<String>,
}

impl Split {
    pub fn side_of(&self, smiles: &str) -> Option<&'static str> {
        if self.test.contains(smiles) {
            Some("test")
        } else if self.train.contains(smiles) {
            Some("train")
        } else {
            None
        }
    }
}

/// Assigns whole components to train or test.
///
/// Components are placed largest first; each goes to test when that brings
/// the test molecule count strictly closer to `test_fraction * N`.
pub fn split_leakage_free(graph: &CooccurrenceGraph, test_fraction: f64) -> Result<Split, McqError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(McqError::Fraction(test_fraction));
    }
    let comps = graph.components();
    let total = graph.node_count();
    let Some(largest) = comps.first() else {
        return Err(McqError::EmptyGraph);
    };
    if largest.len() as f64 > test_fraction.max(1.0 - test_fraction) * total as f64 {
        return Err(McqError::Unsatisfiable { size: largest.len(), total, fraction: test_fraction });
    }
    let target = test_fraction * total as f64;
    let mut split = Split::default();
    let mut in_test = 0usize;
    for comp in comps {
        let with = (in_test + comp.len()) as f64;
        if (with - target).abs() < (in_test as f64 - target).abs() {
            in_test += comp.len();
            split.test.extend(comp);
        } else {
            split.train.extend(comp);
        }
    }
    Ok(split)
}
