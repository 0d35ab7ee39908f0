use num_traits::{Signed, Zero};

use super::{cross, Point, Polygon};
use crate::num::{self, Rational};

/// Intersection of the inner half-planes of every boundary edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelRegion {
    Empty,
    Point(Point),
    Segment(Point, Point),
    /// Convex polygon, counterclockwise, at least three vertices.
    Polygon(Vec<Point>),
}

impl KernelRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self, KernelRegion::Empty)
    }

    pub fn is_full_dimensional(&self) -> bool {
        matches!(self, KernelRegion::Polygon(_))
    }

    /// A point of the kernel: the vertex centroid of a full-dimensional kernel
    /// (strictly interior), the midpoint of a segment kernel, or the point itself.
    pub fn witness(&self) -> Option<Point> {
        match self {
            KernelRegion::Empty => None,
            KernelRegion::Point(p) => Some(p.clone()),
            KernelRegion::Segment(a, b) => Some(a.midpoint(b)),
            KernelRegion::Polygon(vs) => {
                let k = num::int(vs.len() as i64);
                let sx: Rational = vs.iter().map(|p| p.x.clone()).sum();
                let sy: Rational = vs.iter().map(|p| p.y.clone()).sum();
                Some(Point::new(sx / &k, sy / k))
            }
        }
    }

    /// Closed-membership test.
    pub fn contains(&self, q: &Point) -> bool {
        match self {
            KernelRegion::Empty => false,
            KernelRegion::Point(p) => p == q,
            KernelRegion::Segment(a, b) => super::on_segment(a, b, q),
            KernelRegion::Polygon(vs) => {
                let k = vs.len();
                (0..k).all(|i| !cross(&vs[i], &vs[(i + 1) % k], q).is_negative())
            }
        }
    }
}

/// Incremental exact half-plane intersection, starting from the bounding box.
pub fn kernel(poly: &Polygon) -> KernelRegion {
    let pts = poly.vertices();
    let one = num::int(1);
    let min_x = pts.iter().map(|p| &p.x).min().unwrap() - &one;
    let max_x = pts.iter().map(|p| &p.x).max().unwrap() + &one;
    let min_y = pts.iter().map(|p| &p.y).min().unwrap() - &one;
    let max_y = pts.iter().map(|p| &p.y).max().unwrap() + &one;
    let mut hull = vec![
        Point::new(min_x.clone(), min_y.clone()),
        Point::new(max_x.clone(), min_y),
        Point::new(max_x, max_y.clone()),
        Point::new(min_x, max_y),
    ];
    for (a, b) in poly.boundary_edges() {
        hull = clip(&hull, poly.point(a), poly.point(b));
        if hull.is_empty() {
            return KernelRegion::Empty;
        }
    }
    classify(hull)
}

/// Keeps the part of the convex cycle `hull` on the closed left side of line `ab`.
fn clip(hull: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let k = hull.len();
    let side: Vec<Rational> = hull.iter().map(|p| cross(a, b, p)).collect();
    let mut out: Vec<Point> = Vec::with_capacity(k + 1);
    let mut push = |p: Point| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for i in 0..k {
        let j = (i + 1) % k;
        let (si, sj) = (&side[i], &side[j]);
        if !si.is_negative() {
            push(hull[i].clone());
        }
        if (si.is_positive() && sj.is_negative()) || (si.is_negative() && sj.is_positive()) {
            let t = si / (si - sj);
            push(hull[i].lerp(&hull[j], &t));
        }
        if k == 1 {
            break;
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn classify(mut hull: Vec<Point>) -> KernelRegion {
    hull.dedup();
    match hull.len() {
        0 => KernelRegion::Empty,
        1 => KernelRegion::Point(hull.pop().unwrap()),
        _ => {
            let a = hull[0].clone();
            let area_nonzero =
                (1..hull.len()).any(|i| (i + 1..hull.len()).any(|j| !cross(&a, &hull[i], &hull[j]).is_zero()));
            if area_nonzero {
                KernelRegion::Polygon(hull)
            } else {
                let lo = hull.iter().min().unwrap().clone();
                let hi = hull.iter().max().unwrap().clone();
                KernelRegion::Segment(lo, hi)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_polygon_is_own_kernel() {
        let sq = Polygon::from_ints(&[(0, 0), (3, 0), (3, 3), (0, 3)]).unwrap();
        match kernel(&sq) {
            KernelRegion::Polygon(vs) => {
                let mut got = vs.clone();
                got.sort();
                let mut want = sq.vertices().to_vec();
                want.sort();
                assert_eq!(got, want);
            }
            other => panic!("unexpected kernel {other:?}"),
        }
    }

    #[test]
    fn clip_degenerates_to_segment() {
        // two opposite half-planes sharing a boundary line leave a segment
        let square =
            vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(2, 2), Point::from_ints(0, 2)];
        let once = clip(&square, &Point::from_ints(0, 1), &Point::from_ints(2, 1));
        let twice = clip(&once, &Point::from_ints(2, 1), &Point::from_ints(0, 1));
        assert_eq!(classify(twice), KernelRegion::Segment(Point::from_ints(0, 1), Point::from_ints(2, 1)));
    }
}
