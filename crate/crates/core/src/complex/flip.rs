use std::collections::{HashMap, VecDeque};

use serde_json::json;

use super::diagset::{DiagSet, DiagonalIndex};
use super::triangulations::triangulation_sets;
use crate::error::Result;
use crate::geom::Region;
use crate::visibility::Diagonal;

/// Triangulations joined by single flips.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    index: DiagonalIndex,
    nodes: Vec<DiagSet>,
    arcs: Vec<(usize, usize)>,
}

/// Nodes are the triangulations in canonical order; two are joined iff their diagonal
/// sets differ in exactly one diagonal each way.
pub fn flip_graph(region: &Region, cap: usize) -> Result<FlipGraph> {
    let index = DiagonalIndex::new(region);
    let nodes = triangulation_sets(region, &index, cap)?;
    // triangulations sharing all but one diagonal meet in the same punctured set
    let mut buckets: HashMap<DiagSet, Vec<usize>> = HashMap::new();
    for (i, t) in nodes.iter().enumerate() {
        for d in t.iter() {
            buckets.entry(t.without(d)).or_default().push(i);
        }
    }
    let mut arcs = Vec::new();
    for members in buckets.values() {
        for x in 0..members.len() {
            for y in x + 1..members.len() {
                let (a, b) = (members[x].min(members[y]), members[x].max(members[y]));
                arcs.push((a, b));
            }
        }
    }
    arcs.sort_unstable();
    arcs.dedup();
    Ok(FlipGraph { index, nodes, arcs })
}

/// A triangulation as sorted 1-based diagonal labels.
pub type LabeledTriangulation = Vec<[usize; 2]>;

impl FlipGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[DiagSet] {
        &self.nodes
    }

    pub fn triangulation(&self, i: usize) -> Vec<Diagonal> {
        self.index.to_diagonals(&self.nodes[i])
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(a, b) in &self.arcs {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.arcs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Arcs as pairs of diagonal-label lists, independent of node numbering.
    pub fn labeled_arcs(&self) -> Vec<(LabeledTriangulation, LabeledTriangulation)> {
        let mut out: Vec<_> = self
            .arcs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.index.labels(&self.nodes[a]), self.index.labels(&self.nodes[b]));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        out.sort();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph F {\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let label: Vec<String> = self.index.to_diagonals(t).iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("  {} [label=\"{}\"];\n", i + 1, label.join(" ")));
        }
        for &(a, b) in &self.arcs {
            out.push_str(&format!("  {} -- {};\n", a + 1, b + 1));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<Vec<[usize; 2]>> = self.nodes.iter().map(|t| self.index.labels(t)).collect();
        let arcs: Vec<[usize; 2]> = self.arcs.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
        json!({ "nodes": nodes, "arcs": arcs, "connected": self.is_connected() })
    }
}
