//! Exact planar primitives. Every predicate here is sign-exact over rationals.

mod kernel;
mod region;

pub use kernel::{kernel, KernelRegion};
pub use region::{GeneralizedPolygon, Location, Polygon, Region, ValidateOptions};

use num_traits::{Signed, Zero};

use crate::num::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point { x: num::int(x), y: num::int(y) }
    }

    /// `self + (other - self) * t`
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point { x: &self.x + (&other.x - &self.x) * t, y: &self.y + (&other.y - &self.y) * t }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point { x: num::midpoint(&self.x, &other.x), y: num::midpoint(&self.y, &other.y) }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", num::format_rational(&self.x), num::format_rational(&self.y))
    }
}

/// Twice the signed area of triangle `abc`: `det(b - a, c - a)`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// +1 for a left turn, -1 for a right turn, 0 when collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    num::sign(&cross(a, b, c))
}

pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> Rational {
    cross(a, b, c).abs() / num::int(2)
}

/// Shoelace signed area of a closed vertex cycle (positive for counterclockwise).
pub fn signed_area(points: &[Point]) -> Rational {
    let n = points.len();
    let mut twice = Rational::zero();
    for i in 0..n {
        let a = &points[i];
        let b = &points[(i + 1) % n];
        twice += &a.x * &b.y - &b.x * &a.y;
    }
    twice / num::int(2)
}

/// `p` lies on the closed segment `ab` (assumes nothing about general position).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// The closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// The open segments cross at a single interior point of both.
pub fn segments_cross_properly(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn triangle_area_examples() {
        assert_eq!(triangle_area(&p(0, 0), &p(1, 0), &p(0, 1)), ratio(1, 2));
        assert_eq!(triangle_area(&p(0, 0), &p(1, 1), &p(3, 3)), num::int(0));
        assert_eq!(triangle_area(&p(0, 0), &p(4, 0), &p(2, 3)), num::int(6));
    }

    #[test]
    fn segment_tests() {
        assert!(segments_cross_properly(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(!segments_cross_properly(&p(0, 0), &p(1, 1), &p(1, 1), &p(2, 0)));
        assert!(segments_intersect(&p(0, 0), &p(1, 1), &p(1, 1), &p(2, 0)));
        assert!(segments_intersect(&p(0, 0), &p(4, 0), &p(2, 0), &p(6, 0)));
        assert!(!segments_intersect(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)));
    }
}
