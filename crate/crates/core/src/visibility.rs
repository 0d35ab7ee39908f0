//! Diagonals and visibility graphs.

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::geom::{Location, Region};

/// An unordered vertex pair `{a, b}` stored with `a < b` (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal {
    pub a: usize,
    pub b: usize,
}

impl Diagonal {
    pub fn new(i: usize, j: usize) -> Diagonal {
        debug_assert_ne!(i, j);
        Diagonal { a: i.min(j), b: i.max(j) }
    }

    /// From 1-based labels.
    pub fn from_labels(i: usize, j: usize) -> Diagonal {
        Diagonal::new(i - 1, j - 1)
    }

    pub fn labels(&self) -> [usize; 2] {
        [self.a + 1, self.b + 1]
    }

    pub fn has_endpoint(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn shares_endpoint(&self, other: &Diagonal) -> bool {
        self.has_endpoint(other.a) || self.has_endpoint(other.b)
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a + 1, self.b + 1)
    }
}

/// How a vertex pair relates to the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    BoundaryEdge,
    Diagonal,
    NotVisible,
}

/// Classifies the segment between vertices `i` and `j` (0-based).
///
/// A pair is a diagonal when the segment properly crosses no boundary edge, passes
/// through no third vertex, and has its midpoint strictly inside the region.
pub fn classify_pair(region: &Region, i: usize, j: usize) -> Result<PairKind> {
    if i == j {
        return Err(Error::SameVertex(i + 1));
    }
    if region.is_boundary_edge(i, j) {
        return Ok(PairKind::BoundaryEdge);
    }
    for (u, v) in region.boundary_edges() {
        if u == i || u == j || v == i || v == j {
            continue;
        }
        if region.cross_properly(i, j, u, v) {
            return Ok(PairKind::NotVisible);
        }
    }
    if region.is_degenerate() {
        let (p, q) = (region.point(i), region.point(j));
        for k in 0..region.n() {
            if k != i && k != j && crate::geom::on_segment(p, q, region.point(k)) {
                return Ok(PairKind::NotVisible);
            }
        }
        // an edge running along the segment is not a proper crossing but still blocks it
        for (u, v) in region.boundary_edges() {
            if region.orient(i, j, u) == 0 && region.orient(i, j, v) == 0 {
                let (pu, pv) = (region.point(u), region.point(v));
                if crate::geom::segments_intersect(p, q, pu, pv) && !(u == i || u == j) && !(v == i || v == j) {
                    return Ok(PairKind::NotVisible);
                }
            }
        }
    } else {
        for k in 0..region.n() {
            if k != i && k != j && region.orient(i, j, k) == 0 {
                return Ok(PairKind::NotVisible);
            }
        }
    }
    let mid = region.point(i).midpoint(region.point(j));
    Ok(if region.locate(&mid) == Location::Inside { PairKind::Diagonal } else { PairKind::NotVisible })
}

/// `true` iff `{i, j}` (0-based) is an interior diagonal. Adjacent vertices give `false`.
pub fn is_diagonal(region: &Region, i: usize, j: usize) -> Result<bool> {
    Ok(classify_pair(region, i, j)? == PairKind::Diagonal)
}

/// All diagonals in lexicographic order.
pub fn diagonals(region: &Region) -> Vec<Diagonal> {
    let n = region.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if classify_pair(region, i, j).expect("distinct vertices") == PairKind::Diagonal {
                out.push(Diagonal::new(i, j));
            }
        }
    }
    out
}

/// Open segments of two diagonals are disjoint (shared endpoints allowed).
pub fn noncrossing(region: &Region, d1: Diagonal, d2: Diagonal) -> Result<bool> {
    for d in [d1, d2] {
        if !is_diagonal(region, d.a, d.b)? {
            return Err(Error::NotADiagonal(d.a + 1, d.b + 1));
        }
    }
    Ok(!diagonals_cross(region, d1, d2))
}

/// Crossing test for two known diagonals.
#[inline]
pub fn diagonals_cross(region: &Region, d1: Diagonal, d2: Diagonal) -> bool {
    if d1 == d2 || d1.shares_endpoint(&d2) {
        return false;
    }
    region.cross_properly(d1.a, d1.b, d2.a, d2.b)
}

/// Labeled graph on the vertices whose edges are the boundary edges plus all diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VisibilityGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl VisibilityGraph {
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> VisibilityGraph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        VisibilityGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted 0-based pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    /// Edges in `self` but not in `other`.
    pub fn difference(&self, other: &VisibilityGraph) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|&(i, j)| !other.contains(i, j)).collect()
    }

    pub fn is_superset_of(&self, other: &VisibilityGraph) -> bool {
        other.edges.iter().all(|&(i, j)| self.contains(i, j))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
        json!({ "n": self.n, "edges": edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph V {\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for &(i, j) in &self.edges {
            out.push_str(&format!("  {} -- {};\n", i + 1, j + 1));
        }
        out.push_str("}\n");
        out
    }
}

/// Boundary edges plus every pair that passes [`is_diagonal`].
pub fn visibility_graph(region: &Region) -> VisibilityGraph {
    let n = region.n();
    let mut edges: Vec<(usize, usize)> = region.boundary_edges().collect();
    edges.extend(diagonals(region).into_iter().map(|d| (d.a, d.b)));
    VisibilityGraph::from_edges(n, edges)
}
