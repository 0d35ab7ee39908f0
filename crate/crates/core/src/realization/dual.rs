use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::complex::{triangles, triangulation_sets, DiagonalIndex};
use crate::error::{Error, Result};
use crate::geom::Region;
use crate::num::bigint_to_json;
use crate::visibility::Diagonal;

/// Dual tree of a triangulation, rooted at the triangle on a chosen boundary edge.
#[derive(Clone, Debug)]
pub struct DualTree {
    /// Triangles as counterclockwise vertex triples (0-based).
    pub triangles: Vec<[usize; 3]>,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Breadth-first order from the root.
    pub order: Vec<usize>,
    /// `|r(t)|`: number of triangles whose root path passes through `t`.
    pub subtree_size: Vec<usize>,
    pub root_edge: (usize, usize),
}

impl DualTree {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// `r(t)`: the triangles of the subtree below `t`, including `t`.
    pub fn r(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children[out[i]].iter().copied());
            i += 1;
        }
        out
    }

    /// Depth of each triangle (root has depth 0).
    pub fn depth(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for &t in &self.order {
            if let Some(p) = self.parent[t] {
                d[t] = d[p] + 1;
            }
        }
        d
    }
}

/// Default root edge `{n-1, n}` (0-based `(n-2, n-1)`).
pub fn default_root_edge(region: &Region) -> (usize, usize) {
    let n = region.n();
    (n - 2, n - 1)
}

fn require_polygon(region: &Region) -> Result<()> {
    region.require_general_position()?;
    if region.hole_count() > 0 {
        return Err(Error::HolesNotSupported);
    }
    Ok(())
}

/// Root edge oriented as a boundary edge `(v, next(v))`.
pub(crate) fn orient_root_edge(region: &Region, root_edge: (usize, usize)) -> Result<(usize, usize)> {
    let (a, b) = root_edge;
    let n = region.n();
    if a >= n || b >= n || !region.is_boundary_edge(a, b) {
        return Err(Error::NotABoundaryEdge(a + 1, b + 1));
    }
    Ok(if region.next(a) == b { (a, b) } else { (b, a) })
}

pub fn dual_tree(region: &Region, triangulation: &[Diagonal], root_edge: (usize, usize)) -> Result<DualTree> {
    require_polygon(region)?;
    let index = DiagonalIndex::new(region);
    let set = index.set_from(triangulation)?;
    let tris = triangles(region, &index, &set)?;
    dual_tree_of(region, tris, root_edge)
}

pub(crate) fn dual_tree_of(region: &Region, tris: Vec<[usize; 3]>, root_edge: (usize, usize)) -> Result<DualTree> {
    let root_edge = orient_root_edge(region, root_edge)?;
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    let root = *owner.get(&root_edge).ok_or(Error::NotATriangulation)?;
    let m = tris.len();
    let mut parent = vec![None; m];
    let mut children = vec![Vec::new(); m];
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(t) = queue.pop_front() {
        order.push(t);
        let tri = tris[t];
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if let Some(&s) = owner.get(&(v, u)) {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some(t);
                    children[t].push(s);
                    queue.push_back(s);
                }
            }
        }
    }
    if order.len() != m {
        return Err(Error::NotATriangulation);
    }
    let mut subtree_size = vec![1; m];
    for &t in order.iter().rev() {
        if let Some(p) = parent[t] {
            subtree_size[p] += subtree_size[t];
        }
    }
    Ok(DualTree { triangles: tris, root, parent, children, order, subtree_size, root_edge })
}

/// Integer labels of the triangles (`theta`) and of the vertices (`theta_hat`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaAssignment {
    pub theta: Vec<BigInt>,
    pub theta_hat: Vec<BigInt>,
}

pub(crate) fn pow3(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(3), e)
}

impl ThetaAssignment {
    /// `theta(t) = 3^(|r(t)|-1) - sum over children c of 3^(|r(c)|-1)`.
    pub fn from_tree(n: usize, tree: &DualTree) -> ThetaAssignment {
        let theta: Vec<BigInt> = (0..tree.len())
            .map(|t| {
                let own = pow3(tree.subtree_size[t] - 1);
                tree.children[t].iter().fold(own, |acc, &c| acc - pow3(tree.subtree_size[c] - 1))
            })
            .collect();
        let mut theta_hat = vec![BigInt::zero(); n];
        for (t, tri) in tree.triangles.iter().enumerate() {
            for &v in tri {
                if theta[t] > theta_hat[v] {
                    theta_hat[v] = theta[t].clone();
                }
            }
        }
        ThetaAssignment { theta, theta_hat }
    }

    /// Re-checks `sum over r(t) of theta = 3^(|r(t)|-1)` for every triangle by walking
    /// each subtree, and that every label is a positive integer.
    pub fn verify(&self, tree: &DualTree) -> bool {
        (0..tree.len()).all(|t| {
            let r = tree.r(t);
            let total: BigInt = r.iter().map(|&x| &self.theta[x]).sum();
            self.theta[t] >= BigInt::one() && total == pow3(r.len() - 1)
        })
    }
}

pub fn theta_assignment(
    region: &Region,
    triangulation: &[Diagonal],
    root_edge: (usize, usize),
) -> Result<ThetaAssignment> {
    let tree = dual_tree(region, triangulation, root_edge)?;
    Ok(ThetaAssignment::from_tree(region.n(), &tree))
}

/// Integer point of one triangulation: `theta_hat` of every vertex off the root edge, in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationPoint {
    pub triangulation: Vec<Diagonal>,
    pub coords: Vec<BigInt>,
}

impl RealizationPoint {
    pub fn sum(&self) -> BigInt {
        self.coords.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub root_edge: (usize, usize),
    pub points: Vec<RealizationPoint>,
}

impl Realization {
    pub fn to_json(&self) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| {
                json!({
                    "triangulation": p.triangulation.iter().map(|d| d.labels()).collect::<Vec<_>>(),
                    "coords": p.coords.iter().map(bigint_to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        let (a, b) = self.root_edge;
        json!({ "rootEdge": [a.min(b) + 1, a.max(b) + 1], "points": points })
    }
}

/// One point per triangulation, in enumeration order.
pub fn realize(region: &Region, root_edge: Option<(usize, usize)>, cap: usize) -> Result<Realization> {
    require_polygon(region)?;
    let root_edge = root_edge.unwrap_or_else(|| default_root_edge(region));
    orient_root_edge(region, root_edge)?;
    let index = DiagonalIndex::new(region);
    let n = region.n();
    let mut points = Vec::new();
    for set in triangulation_sets(region, &index, cap)? {
        let tree = dual_tree_of(region, triangles(region, &index, &set)?, root_edge)?;
        let theta = ThetaAssignment::from_tree(n, &tree);
        let coords =
            (0..n).filter(|&v| v != root_edge.0 && v != root_edge.1).map(|v| theta.theta_hat[v].clone()).collect();
        points.push(RealizationPoint { triangulation: index.to_diagonals(&set), coords });
    }
    Ok(Realization { root_edge, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn diags(labels: &[(usize, usize)]) -> Vec<Diagonal> {
        labels.iter().map(|&(a, b)| Diagonal::from_labels(a, b)).collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_is_a_single_node() {
        let t = fixtures::convex_polygon(3);
        let tree = dual_tree(&t, &[], (1, 2)).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.r(tree.root), vec![tree.root]);
        assert_eq!(ThetaAssignment::from_tree(3, &tree).theta, big(&[1]));
    }

    #[test]
    fn pentagon_fans() {
        let p = fixtures::convex_polygon(5);
        let tree = dual_tree(&p, &diags(&[(5, 2), (5, 3)]), (3, 4)).unwrap();
        let sizes: Vec<usize> = tree.order.iter().map(|&t| tree.subtree_size[t]).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
        let th = ThetaAssignment::from_tree(5, &tree);
        let by_order: Vec<BigInt> = tree.order.iter().map(|&t| th.theta[t].clone()).collect();
        assert_eq!(by_order, big(&[6, 2, 1]));
        assert_eq!(th.theta_hat[..3], big(&[1, 2, 6])[..]);
        assert!(th.verify(&tree));

        let th = theta_assignment(&p, &diags(&[(1, 3), (1, 4)]), (3, 4)).unwrap();
        assert_eq!(th.theta_hat[..3], big(&[6, 1, 2])[..]);
    }

    #[test]
    fn square_points() {
        let r = realize(&fixtures::unit_square(), None, 10).unwrap();
        let mut pts: Vec<Vec<BigInt>> = r.points.iter().map(|p| p.coords.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![big(&[1, 2]), big(&[2, 1])]);
    }

    #[test]
    fn errors() {
        let p = fixtures::convex_polygon(5);
        assert_eq!(dual_tree(&p, &diags(&[(1, 3)]), (3, 4)).unwrap_err(), Error::NotATriangulation);
        assert_eq!(dual_tree(&p, &diags(&[(1, 3), (1, 4)]), (0, 2)).unwrap_err(), Error::NotABoundaryEdge(1, 3));
        let r = fixtures::square_with_triangle_hole();
        assert_eq!(realize(&r, None, 10).unwrap_err(), Error::HolesNotSupported);
    }
}
