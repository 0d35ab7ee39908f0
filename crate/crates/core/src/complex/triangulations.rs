use std::collections::BTreeSet;

use super::diagset::{canonical_cmp, DiagSet, DiagonalIndex};
use crate::error::{Error, Result};
use crate::geom::Region;
use crate::visibility::Diagonal;

/// Every triangulation of the region as a set of diagonal indices, in canonical order.
///
/// Grows triangulations one triangle at a time from a frontier of directed edges that
/// still need a triangle on their left. Every partial state extends to at least one
/// triangulation, so the search has no dead ends.
pub fn triangulation_sets(region: &Region, index: &DiagonalIndex, cap: usize) -> Result<Vec<DiagSet>> {
    region.require_general_position()?;
    let mut search = Search { region, index, cap, out: Vec::new() };
    let frontier: BTreeSet<(usize, usize)> = region.boundary_edges().collect();
    search.grow(frontier, index.empty_set())?;
    let mut out = search.out;
    out.sort_by(canonical_cmp);
    Ok(out)
}

/// Diagonal lists of all triangulations. Fails with `RegionTooLarge` past `cap`.
pub fn enumerate_triangulations(region: &Region, cap: usize) -> Result<Vec<Vec<Diagonal>>> {
    let index = DiagonalIndex::new(region);
    Ok(triangulation_sets(region, &index, cap)?.iter().map(|t| index.to_diagonals(t)).collect())
}

struct Search<'a> {
    region: &'a Region,
    index: &'a DiagonalIndex,
    cap: usize,
    out: Vec<DiagSet>,
}

enum Side {
    /// Closes a frontier edge.
    Frontier,
    /// Introduces the diagonal with this index.
    New(usize),
}

impl Search<'_> {
    fn grow(&mut self, mut frontier: BTreeSet<(usize, usize)>, chosen: DiagSet) -> Result<()> {
        let Some((u, v)) = frontier.pop_first() else {
            if self.out.len() >= self.cap {
                return Err(Error::RegionTooLarge { cap: self.cap, reached: self.out.len() + 1 });
            }
            self.out.push(chosen);
            return Ok(());
        };
        let region = self.region;
        for w in 0..region.n() {
            if w == u || w == v || region.orient(u, v, w) <= 0 {
                continue;
            }
            let Some(vw) = self.side(&frontier, &chosen, v, w) else { continue };
            let Some(wu) = self.side(&frontier, &chosen, w, u) else { continue };
            if let (Side::New(a), Side::New(b)) = (&vw, &wu) {
                if self.index.crosses(*a, *b) {
                    continue;
                }
            }
            if !self.empty_triangle(u, v, w) {
                continue;
            }
            let mut next_frontier = frontier.clone();
            let mut next_chosen = chosen.clone();
            for (side, (x, y)) in [(vw, (v, w)), (wu, (w, u))] {
                match side {
                    Side::Frontier => {
                        next_frontier.remove(&(x, y));
                    }
                    Side::New(d) => {
                        next_chosen.insert(d);
                        next_frontier.insert((y, x));
                    }
                }
            }
            self.grow(next_frontier, next_chosen)?;
        }
        Ok(())
    }

    fn side(&self, frontier: &BTreeSet<(usize, usize)>, chosen: &DiagSet, x: usize, y: usize) -> Option<Side> {
        if frontier.contains(&(x, y)) {
            return Some(Side::Frontier);
        }
        let d = self.index.index_of(Diagonal::new(x, y))?;
        if chosen.contains(d) || !self.index.compatible(chosen, d) {
            return None;
        }
        Some(Side::New(d))
    }

    fn empty_triangle(&self, u: usize, v: usize, w: usize) -> bool {
        let r = self.region;
        (0..r.n()).all(|p| {
            p == u || p == v || p == w || !(r.orient(u, v, p) > 0 && r.orient(v, w, p) > 0 && r.orient(w, u, p) > 0)
        })
    }
}

/// Triangles of a triangulation as counterclockwise vertex triples.
pub fn triangles(region: &Region, index: &DiagonalIndex, set: &DiagSet) -> Result<Vec<[usize; 3]>> {
    let cycles = super::pieces::pieces(region, index, set);
    let mut out = Vec::with_capacity(cycles.len());
    for c in cycles {
        if c.len() != 3 {
            return Err(Error::NotATriangulation);
        }
        out.push([c[0], c[1], c[2]]);
    }
    // a region with holes also fails here when some piece is an annulus
    if out.len() != region.n() + 2 * region.hole_count() - 2 {
        return Err(Error::NotATriangulation);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_has_one_empty_triangulation() {
        let t = fixtures::convex_polygon(3);
        let all = enumerate_triangulations(&t, 10).unwrap();
        assert_eq!(all, vec![Vec::<Diagonal>::new()]);
    }

    #[test]
    fn convex_hexagon_has_14() {
        let hex = fixtures::convex_polygon(6);
        let all = enumerate_triangulations(&hex, 100).unwrap();
        assert_eq!(all.len(), 14);
        assert!(all.iter().all(|t| t.len() == 3));
    }

    #[test]
    fn cap_is_enforced() {
        let hex = fixtures::convex_polygon(6);
        assert_eq!(enumerate_triangulations(&hex, 5), Err(Error::RegionTooLarge { cap: 5, reached: 6 }));
    }

    #[test]
    fn hex_h_reflex_incidence() {
        let h = fixtures::hex_h();
        let all = enumerate_triangulations(&h, 100).unwrap();
        assert_eq!(all.len(), 6);
        for t in &all {
            assert!(t.iter().any(|d| d.has_endpoint(1)));
            assert!(t.iter().any(|d| d.has_endpoint(4)));
        }
    }

    #[test]
    fn hole_region_triangulation_size() {
        let r = fixtures::square_with_triangle_hole();
        let all = enumerate_triangulations(&r, 100_000).unwrap();
        assert!(!all.is_empty());
        // n + 3h - 3 diagonals with n = 7, h = 1
        assert!(all.iter().all(|t| t.len() == 7));
    }
}
