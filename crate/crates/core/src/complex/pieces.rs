use std::collections::HashSet;

use super::diagset::{DiagSet, DiagonalIndex};
use crate::geom::Region;

/// Local convexity test: at every vertex, each angular gap between consecutive
/// segments (boundary edges and members of `set`) inside the region is below pi.
///
/// This is equivalent to every piece of the induced partition being convex,
/// including the requirement that a piece has no hole.
pub fn is_convex_set(region: &Region, index: &DiagonalIndex, set: &DiagSet) -> bool {
    (0..region.n()).all(|v| vertex_is_resolved(region, index, set, v))
}

/// The gaps at `v` are all below pi.
pub fn vertex_is_resolved(region: &Region, index: &DiagonalIndex, set: &DiagSet, v: usize) -> bool {
    let mut last = region.next(v);
    for &d in index.around(v) {
        if set.contains(d) {
            let w = index.diagonal(d).other(v);
            if region.orient(v, last, w) <= 0 {
                return false;
            }
            last = w;
        }
    }
    region.orient(v, last, region.prev(v)) > 0
}

/// Boundary cycles of the pieces cut out by `set`, each listed counterclockwise
/// (region on the left) starting from its smallest vertex.
///
/// Walks half-edges: boundary edges `v -> next(v)` and both directions of every member
/// of `set`; after arriving at `v` from `u` the walk continues along the first segment
/// clockwise from `v -> u`.
pub fn pieces(region: &Region, index: &DiagonalIndex, set: &DiagSet) -> Vec<Vec<usize>> {
    let n = region.n();
    // neighbours of each vertex in sweep order: next(v), diagonals of set, prev(v)
    let fans: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut fan = vec![region.next(v)];
            fan.extend(index.around(v).iter().filter(|&&d| set.contains(d)).map(|&d| index.diagonal(d).other(v)));
            fan.push(region.prev(v));
            fan
        })
        .collect();
    let mut half_edges: Vec<(usize, usize)> = region.boundary_edges().collect();
    for d in set.iter() {
        let dg = index.diagonal(d);
        half_edges.push((dg.a, dg.b));
        half_edges.push((dg.b, dg.a));
    }
    half_edges.sort_unstable();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for &start in &half_edges {
        if used.contains(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let (mut u, mut v) = start;
        loop {
            used.insert((u, v));
            cycle.push(u);
            let fan = &fans[v];
            let pos = fan.iter().position(|&w| w == u).expect("arrival edge in fan");
            debug_assert!(pos > 0, "walk left the region");
            let w = fan[pos - 1];
            u = v;
            v = w;
            if (u, v) == start {
                break;
            }
        }
        let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
        cycle.rotate_left(min_pos);
        out.push(cycle);
    }
    out.sort();
    out
}

/// A piece cycle is a convex polygon: no repeated vertex and strict left turns throughout.
pub fn is_convex_cycle(region: &Region, cycle: &[usize]) -> bool {
    let k = cycle.len();
    let distinct: HashSet<usize> = cycle.iter().copied().collect();
    if distinct.len() != k || k < 3 {
        return false;
    }
    (0..k).all(|i| region.orient(cycle[i], cycle[(i + 1) % k], cycle[(i + 2) % k]) > 0)
}
