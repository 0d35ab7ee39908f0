use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use super::diagset::{sweep_cmp, DiagonalIndex};
use super::faces::convex_diagonalizations;
use crate::error::{Error, Result};
use crate::geom::{Point, Polygon, Region};
use crate::num::Rational;
use crate::visibility::{self, Diagonal};

/// A simple polygon obtained by cutting a one-hole region open along a bridge diagonal.
#[derive(Clone, Debug)]
pub struct SplitPolygon {
    pub polygon: Polygon,
    /// Region vertex (0-based) behind each vertex of `polygon`.
    pub label_map: Vec<usize>,
    pub bridge: Diagonal,
    /// Slit parameter `2^-k`: copies move `2^-k` of the bridge inward and `4^-k` of it sideways.
    pub k: u32,
    /// Outcome of the combinatorial bijection check; `None` when enumeration hit the cap.
    pub bijection_verified: Option<bool>,
}

const MAX_REFINEMENTS: u32 = 48;

/// Splits `d` (outer vertex to hole vertex) into two boundary edges.
///
/// The copies of the endpoints are pushed slightly along and to either side of `d`;
/// the push shrinks until the visibility graph of the result, read through the label
/// map, equals the visibility of the region among segments not crossing `d`.
pub fn hole_split(region: &Region, d: Diagonal, cap: usize) -> Result<SplitPolygon> {
    region.require_general_position()?;
    if region.hole_count() != 1 {
        return Err(Error::InvalidHole(format!("splitting needs exactly one hole, found {}", region.hole_count())));
    }
    let (a, b) = match (region.cycle_of(d.a), region.cycle_of(d.b)) {
        (0, 1) => (d.a, d.b),
        (1, 0) => (d.b, d.a),
        _ => return Err(Error::NotABridgeDiagonal(d.a + 1, d.b + 1)),
    };
    if !visibility::is_diagonal(region, a, b)? {
        return Err(Error::NotADiagonal(d.a + 1, d.b + 1));
    }
    let expected = expected_edges(region, a, b);
    for k in 1..=MAX_REFINEMENTS {
        let (points, label_map) = slit(region, a, b, k);
        let Ok(polygon) = Polygon::new(points) else { continue };
        let seen = visibility::visibility_graph(&polygon);
        let mapped: HashSet<(usize, usize)> = seen
            .edges()
            .iter()
            .map(|&(x, y)| {
                let (p, q) = (label_map[x], label_map[y]);
                (p.min(q), p.max(q))
            })
            .collect();
        // one copy per region edge, plus both slit edges standing for d
        if mapped == expected.0 && seen.edge_count() == expected.1 {
            let mut split =
                SplitPolygon { polygon, label_map, bridge: Diagonal::new(a, b), k, bijection_verified: None };
            split.bijection_verified = match verify_bijection(region, &split, cap) {
                Ok(v) => Some(v),
                Err(Error::RegionTooLarge { .. }) => None,
                Err(e) => return Err(e),
            };
            return Ok(split);
        }
    }
    Err(Error::NotABridgeDiagonal(d.a + 1, d.b + 1))
}

/// Region visibility edges compatible with the bridge (including it) and the number of
/// edges the split polygon must have.
fn expected_edges(region: &Region, a: usize, b: usize) -> (HashSet<(usize, usize)>, usize) {
    let bridge = Diagonal::new(a, b);
    let mut set = HashSet::new();
    for &(x, y) in visibility::visibility_graph(region).edges() {
        let e = Diagonal::new(x, y);
        let crosses = !region.is_boundary_edge(x, y) && visibility::diagonals_cross(region, e, bridge);
        if !crosses {
            set.insert((x, y));
        }
    }
    let count = set.len() + 1;
    (set, count)
}

fn slit(region: &Region, a: usize, b: usize, k: u32) -> (Vec<Point>, Vec<usize>) {
    let pa = region.point(a);
    let pb = region.point(b);
    let delta = Rational::new(BigInt::one(), BigInt::one() << k as usize);
    let delta2 = &delta * &delta;
    let vx = &pb.x - &pa.x;
    let vy = &pb.y - &pa.y;
    // along: delta * v, side: delta^2 * left(v) with left(x, y) = (-y, x)
    let (ax, ay) = (&vx * &delta, &vy * &delta);
    let (sx, sy) = (-&vy * &delta2, &vx * &delta2);
    let at = |p: &Point, fx: &Rational, fy: &Rational| Point::new(&p.x + fx, &p.y + fy);
    let a1 = at(pa, &(&ax + &sx), &(&ay + &sy));
    let a2 = at(pa, &(&ax - &sx), &(&ay - &sy));
    let b1 = at(pb, &(-&ax + &sx), &(-&ay + &sy));
    let b2 = at(pb, &(-&ax - &sx), &(-&ay - &sy));

    let mut points = Vec::new();
    let mut map = Vec::new();
    let mut v = region.next(a);
    while v != a {
        points.push(region.point(v).clone());
        map.push(v);
        v = region.next(v);
    }
    points.push(a1);
    map.push(a);
    points.push(b1);
    map.push(b);
    let mut v = region.next(b);
    while v != b {
        points.push(region.point(v).clone());
        map.push(v);
        v = region.next(v);
    }
    points.push(b2);
    map.push(b);
    points.push(a2);
    map.push(a);
    (points, map)
}

/// Convex diagonalizations of the split polygon, read through the label map and joined
/// with the bridge, are exactly the convex diagonalizations of the region containing it.
pub fn verify_bijection(region: &Region, split: &SplitPolygon, cap: usize) -> Result<bool> {
    let r_index = DiagonalIndex::new(region);
    let bridge = r_index.index_of(split.bridge).ok_or(Error::NotADiagonal(split.bridge.a + 1, split.bridge.b + 1))?;
    let q_index = DiagonalIndex::new(&split.polygon);
    // diagonal map, which must be injective
    let mut image = Vec::with_capacity(q_index.len());
    for i in 0..q_index.len() {
        let qd = q_index.diagonal(i);
        let rd = Diagonal::new(split.label_map[qd.a], split.label_map[qd.b]);
        match r_index.index_of(rd) {
            Some(j) if j != bridge => image.push(j),
            _ => return Ok(false),
        }
    }
    let distinct: HashSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() {
        return Ok(false);
    }
    let ours: HashSet<_> = convex_diagonalizations(&split.polygon, &q_index, cap)?
        .into_iter()
        .map(|s| {
            let mut t = r_index.empty_set();
            t.insert(bridge);
            for i in s.iter() {
                t.insert(image[i]);
            }
            t
        })
        .collect();
    let theirs: HashSet<_> =
        convex_diagonalizations(region, &r_index, cap)?.into_iter().filter(|s| s.contains(bridge)).collect();
    Ok(ours == theirs)
}

/// Which copy of `a` a diagonal `{a, y}` of the region attaches to after the split:
/// `true` for the copy on the left of `a -> b`.
pub fn attaches_left(region: &Region, a: usize, b: usize, y: usize) -> bool {
    sweep_cmp(region, a, b, y) == std::cmp::Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_with_hole_splits_into_nine_gon() {
        let r = fixtures::square_with_triangle_hole();
        // outer corner 1 (0,0) to the nearest hole vertex
        let d = fixtures::nearest_bridge(&r, 0);
        let s = hole_split(&r, d, 1_000_000).unwrap();
        assert_eq!(s.polygon.n(), 9);
        assert_eq!(s.bijection_verified, Some(true));
    }

    #[test]
    fn non_bridge_rejected() {
        let r = fixtures::square_with_triangle_hole();
        // two outer corners
        assert_eq!(hole_split(&r, Diagonal::new(0, 2), 1000).unwrap_err(), Error::NotABridgeDiagonal(1, 3));
    }
}
