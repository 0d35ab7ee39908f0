use std::collections::HashMap;
use std::ops::Deref;

use num_traits::{Signed, Zero};

use super::{cross, on_segment, orient, segments_intersect, signed_area, Point};
use crate::error::{Error, Result};
use crate::num::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Accept collinear vertex triples and mark the result degenerate instead of rejecting it.
    pub allow_degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A validated planar region bounded by one outer cycle and zero or more hole cycles.
///
/// Vertices are indexed `0..n` in input order (label = index + 1). Each boundary cycle
/// is stored in traversal order with the region on the left: the outer cycle runs
/// counterclockwise and holes run clockwise. Labels never change; when the input
/// orientation is reversed only the traversal order is.
#[derive(Clone, Debug)]
pub struct Region {
    points: Vec<Point>,
    cycles: Vec<Vec<usize>>,
    next: Vec<usize>,
    prev: Vec<usize>,
    cycle_of: Vec<usize>,
    signs: Vec<i8>,
    degenerate: bool,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.cycles == other.cycles
    }
}

impl Eq for Region {}

impl Region {
    pub fn from_cycles(input: Vec<Vec<Point>>, options: ValidateOptions) -> Result<Region> {
        if input.is_empty() {
            return Err(Error::TooFewVertices { count: 0 });
        }
        for cycle in &input {
            if cycle.len() < 3 {
                return Err(Error::TooFewVertices { count: cycle.len() });
            }
        }
        let mut points = Vec::new();
        let mut cycles = Vec::new();
        for cycle in &input {
            let start = points.len();
            points.extend(cycle.iter().cloned());
            cycles.push((start..points.len()).collect::<Vec<_>>());
        }
        let n = points.len();

        let mut seen: HashMap<&Point, usize> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = seen.insert(p, i) {
                return Err(Error::NotSimple { detail: format!("vertices {} and {} coincide", j + 1, i + 1) });
            }
        }

        let signs = orientation_table(&points);
        let collinear = first_collinear(&signs, n);

        for (c, cycle) in cycles.iter_mut().enumerate() {
            let pts: Vec<Point> = cycle.iter().map(|&i| points[i].clone()).collect();
            let area = signed_area(&pts);
            if area.is_zero() {
                return Err(Error::NotSimple { detail: format!("boundary cycle {c} has zero area") });
            }
            let want_positive = c == 0;
            if area.is_positive() != want_positive {
                cycle.reverse();
            }
        }

        let mut next = vec![0; n];
        let mut prev = vec![0; n];
        let mut cycle_of = vec![0; n];
        for (c, cycle) in cycles.iter().enumerate() {
            let k = cycle.len();
            for (pos, &v) in cycle.iter().enumerate() {
                next[v] = cycle[(pos + 1) % k];
                prev[v] = cycle[(pos + k - 1) % k];
                cycle_of[v] = c;
            }
        }

        let region = Region { points, cycles, next, prev, cycle_of, signs, degenerate: collinear.is_some() };
        region.check_simple()?;
        region.check_holes()?;
        if let Some(triple) = collinear {
            if !options.allow_degenerate {
                return Err(Error::CollinearTriple(triple.map(|i| i + 1)));
            }
        }
        Ok(region)
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.n();
        for a in 0..n {
            let b = self.next[a];
            for c in 0..n {
                if c <= a {
                    continue;
                }
                let d = self.next[c];
                let shares = a == d || b == c;
                if shares {
                    if self.degenerate {
                        // adjacent edges a-b, b-d (or c-a, a-b) must not fold back onto each other
                        let (u, mid, w) = if b == c { (a, b, d) } else { (c, a, b) };
                        if self.folds_back(u, mid, w) {
                            return Err(Error::NotSimple { detail: format!("edges at vertex {} overlap", mid + 1) });
                        }
                    }
                    continue;
                }
                let hit = if self.degenerate {
                    segments_intersect(&self.points[a], &self.points[b], &self.points[c], &self.points[d])
                } else {
                    self.cross_properly(a, b, c, d)
                };
                if hit {
                    return Err(Error::NotSimple {
                        detail: format!("edges {{{}, {}}} and {{{}, {}}} intersect", a + 1, b + 1, c + 1, d + 1),
                    });
                }
            }
        }
        Ok(())
    }

    fn folds_back(&self, u: usize, mid: usize, w: usize) -> bool {
        if self.orient(u, mid, w) != 0 {
            return false;
        }
        let (pu, pm, pw) = (&self.points[u], &self.points[mid], &self.points[w]);
        let dot = (&pu.x - &pm.x) * (&pw.x - &pm.x) + (&pu.y - &pm.y) * (&pw.y - &pm.y);
        dot.is_positive()
    }

    fn check_holes(&self) -> Result<()> {
        for h in 1..self.cycles.len() {
            let probe = &self.points[self.cycles[h][0]];
            if self.locate_in_cycle(0, probe) != Location::Inside {
                return Err(Error::InvalidHole(format!("hole {h} is not strictly inside the outer boundary")));
            }
            for other in 1..self.cycles.len() {
                if other != h && self.locate_in_cycle(other, probe) != Location::Outside {
                    return Err(Error::InvalidHole(format!("hole {h} lies inside hole {other}")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn next(&self, i: usize) -> usize {
        self.next[i]
    }

    pub fn prev(&self, i: usize) -> usize {
        self.prev[i]
    }

    /// Boundary cycles in traversal order, outer first.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_of(&self, i: usize) -> usize {
        self.cycle_of[i]
    }

    pub fn hole_count(&self) -> usize {
        self.cycles.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn require_general_position(&self) -> Result<()> {
        if self.degenerate {
            Err(Error::DegenerateInput)
        } else {
            Ok(())
        }
    }

    /// Cached orientation sign of the vertex triple.
    #[inline]
    pub fn orient(&self, i: usize, j: usize, k: usize) -> i8 {
        let n = self.points.len();
        self.signs[(i * n + j) * n + k]
    }

    /// Open segments `ab` and `cd` (vertex indices) cross at a single point.
    #[inline]
    pub fn cross_properly(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.orient(a, b, c) * self.orient(a, b, d) < 0 && self.orient(c, d, a) * self.orient(c, d, b) < 0
    }

    pub fn is_boundary_edge(&self, i: usize, j: usize) -> bool {
        self.next[i] == j || self.next[j] == i
    }

    /// Directed boundary edges `(v, next(v))`, region on the left.
    pub fn boundary_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).map(move |v| (v, self.next[v]))
    }

    /// Total enclosed area (outer minus holes).
    pub fn area(&self) -> Rational {
        self.cycles
            .iter()
            .map(|cycle| {
                let pts: Vec<Point> = cycle.iter().map(|&i| self.points[i].clone()).collect();
                signed_area(&pts)
            })
            .sum()
    }

    /// Label-preserving check that the boundary vertex `i` has an interior angle above pi.
    pub fn is_reflex(&self, i: usize) -> bool {
        self.orient(self.prev[i], i, self.next[i]) < 0
    }

    pub fn locate_in_cycle(&self, cycle: usize, q: &Point) -> Location {
        let verts = &self.cycles[cycle];
        let k = verts.len();
        let mut inside = false;
        for pos in 0..k {
            let a = &self.points[verts[pos]];
            let b = &self.points[verts[(pos + 1) % k]];
            if on_segment(a, b, q) {
                return Location::Boundary;
            }
            let upward = a.y <= q.y && q.y < b.y;
            let downward = b.y <= q.y && q.y < a.y;
            if upward && cross(a, b, q).is_positive() || downward && cross(a, b, q).is_negative() {
                inside = !inside;
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Exact location of an arbitrary point relative to the region.
    pub fn locate(&self, q: &Point) -> Location {
        match self.locate_in_cycle(0, q) {
            Location::Inside => {}
            other => return other,
        }
        for h in 1..self.cycles.len() {
            match self.locate_in_cycle(h, q) {
                Location::Outside => {}
                Location::Boundary => return Location::Boundary,
                Location::Inside => return Location::Outside,
            }
        }
        Location::Inside
    }

    pub fn check_label(&self, label: usize) -> Result<usize> {
        if label == 0 || label > self.n() {
            Err(Error::InvalidLabel { label, n: self.n() })
        } else {
            Ok(label - 1)
        }
    }

    /// Vertex coordinates of each input cycle, in label order (as originally given).
    pub fn cycles_in_label_order(&self) -> Vec<Vec<Point>> {
        self.cycles
            .iter()
            .map(|cycle| {
                let mut idx = cycle.clone();
                idx.sort_unstable();
                idx.into_iter().map(|i| self.points[i].clone()).collect()
            })
            .collect()
    }
}

fn orientation_table(points: &[Point]) -> Vec<i8> {
    let n = points.len();
    let mut signs = vec![0i8; n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = orient(&points[i], &points[j], &points[k]);
                for (a, b, c, sign) in
                    [(i, j, k, s), (j, k, i, s), (k, i, j, s), (j, i, k, -s), (i, k, j, -s), (k, j, i, -s)]
                {
                    signs[(a * n + b) * n + c] = sign;
                }
            }
        }
    }
    signs
}

fn first_collinear(signs: &[i8], n: usize) -> Option<[usize; 3]> {
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if signs[(i * n + j) * n + k] == 0 {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// A validated simple polygon without holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon(Region);

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon> {
        Self::with_options(vertices, ValidateOptions::default())
    }

    pub fn with_options(vertices: Vec<Point>, options: ValidateOptions) -> Result<Polygon> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices { count: vertices.len() });
        }
        Region::from_cycles(vec![vertices], options).map(Polygon)
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Polygon> {
        Self::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn into_region(self) -> Region {
        self.0
    }

    /// Vertices in label order.
    pub fn vertices(&self) -> &[Point] {
        self.0.points()
    }

    /// Wraps a region that has no holes.
    pub fn from_region(region: Region) -> Result<Polygon> {
        if region.hole_count() > 0 {
            return Err(Error::HolesNotSupported);
        }
        Ok(Polygon(region))
    }
}

impl Deref for Polygon {
    type Target = Region;
    fn deref(&self) -> &Region {
        &self.0
    }
}

/// A bounded connected region whose boundary is an outer loop plus disjoint hole loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedPolygon(Region);

impl GeneralizedPolygon {
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<GeneralizedPolygon> {
        Self::with_options(outer, holes, ValidateOptions::default())
    }

    pub fn with_options(
        outer: Vec<Point>,
        holes: Vec<Vec<Point>>,
        options: ValidateOptions,
    ) -> Result<GeneralizedPolygon> {
        let mut cycles = vec![outer];
        cycles.extend(holes);
        Region::from_cycles(cycles, options).map(GeneralizedPolygon)
    }

    pub fn from_ints(outer: &[(i64, i64)], holes: &[&[(i64, i64)]]) -> Result<GeneralizedPolygon> {
        let conv = |c: &[(i64, i64)]| c.iter().map(|&(x, y)| Point::from_ints(x, y)).collect::<Vec<_>>();
        Self::new(conv(outer), holes.iter().map(|h| conv(h)).collect())
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn into_region(self) -> Region {
        self.0
    }
}

impl Deref for GeneralizedPolygon {
    type Target = Region;
    fn deref(&self) -> &Region {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_unit_square() {
        let sq = Polygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(sq.area(), crate::num::int(1));
        assert!(!sq.is_degenerate());
    }

    #[test]
    fn rejects_bowtie() {
        let err = Polygon::from_ints(&[(0, 0), (2, 2), (2, 0), (0, 2)]).unwrap_err();
        assert_eq!(err.kind(), "NotSimple");
    }

    #[test]
    fn rejects_collinear_triple() {
        let err = Polygon::from_ints(&[(0, 0), (1, 0), (2, 0), (1, 1)]).unwrap_err();
        assert_eq!(err, Error::CollinearTriple([1, 2, 3]));
    }

    #[test]
    fn degenerate_flag() {
        let pts = [(0, 0), (1, 0), (2, 0), (1, 1)].map(|(x, y)| Point::from_ints(x, y)).to_vec();
        let poly = Polygon::with_options(pts, ValidateOptions { allow_degenerate: true }).unwrap();
        assert!(poly.is_degenerate());
        assert_eq!(poly.require_general_position(), Err(Error::DegenerateInput));
    }

    #[test]
    fn degenerate_mode_still_rejects_touching_edges() {
        // vertex 5 touches edge {1, 2}
        let pts = [(0, 0), (4, 0), (4, 4), (2, 4), (2, 0), (0, 4)].map(|(x, y)| Point::from_ints(x, y)).to_vec();
        let err = Polygon::with_options(pts, ValidateOptions { allow_degenerate: true }).unwrap_err();
        assert_eq!(err.kind(), "NotSimple");
    }

    #[test]
    fn too_few_vertices() {
        assert_eq!(Polygon::from_ints(&[(0, 0), (1, 0)]).unwrap_err(), Error::TooFewVertices { count: 2 });
    }

    #[test]
    fn clockwise_input_keeps_labels() {
        let cw = Polygon::from_ints(&[(0, 0), (0, 1), (1, 1), (1, 0)]).unwrap();
        assert_eq!(cw.point(1), &Point::from_ints(0, 1));
        assert_eq!(cw.next(0), 3);
        assert!(cw.area() > crate::num::int(0));
    }

    #[test]
    fn hole_validation() {
        let ok =
            GeneralizedPolygon::from_ints(&[(0, 0), (12, 0), (12, 12), (0, 12)], &[&[(4, 5), (7, 4), (6, 8)]]).unwrap();
        assert_eq!(ok.hole_count(), 1);
        // hole stored clockwise
        let h = &ok.cycles()[1];
        let pts: Vec<Point> = h.iter().map(|&i| ok.point(i).clone()).collect();
        assert!(signed_area(&pts) < crate::num::int(0));
        assert_eq!(ok.area(), crate::num::int(144) - Rational::new(11.into(), 2.into()));
        let outside =
            GeneralizedPolygon::from_ints(&[(0, 0), (12, 0), (12, 12), (0, 12)], &[&[(14, 5), (17, 4), (16, 8)]]);
        assert_eq!(outside.unwrap_err().kind(), "InvalidHole");
    }

    #[test]
    fn locate_points() {
        let sq = Polygon::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap();
        assert_eq!(sq.locate(&Point::from_ints(2, 2)), Location::Inside);
        assert_eq!(sq.locate(&Point::from_ints(4, 2)), Location::Boundary);
        assert_eq!(sq.locate(&Point::from_ints(5, 2)), Location::Outside);
        assert_eq!(sq.locate(&Point::from_ints(0, 0)), Location::Boundary);
    }
}
