//! Named polygons used throughout the tests and documentation, plus random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geom::{kernel, GeneralizedPolygon, Point, Polygon, Region};
use crate::visibility::{self, Diagonal};

fn poly(coords: &[(i64, i64)]) -> Polygon {
    Polygon::from_ints(coords).expect("fixture polygon is valid")
}

/// The "H"-shaped hexagon with reflex vertices 2 and 5.
pub fn hex_h() -> Polygon {
    poly(&[(0, 0), (2, 1), (4, 0), (4, 4), (2, 3), (0, 4)])
}

/// Pentagon with a single reflex vertex (label 4).
pub fn reflex_pentagon() -> Polygon {
    poly(&[(0, 0), (4, 0), (4, 4), (2, 1), (0, 4)])
}

pub fn unit_square() -> Polygon {
    poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
}

/// Convex n-gon with integer vertices close to a circle of radius 1000.
pub fn convex_polygon(n: usize) -> Polygon {
    assert!(n >= 3);
    let coords: Vec<(i64, i64)> = (0..n)
        .map(|k| {
            let angle = 0.1 + std::f64::consts::TAU * k as f64 / n as f64;
            ((1000.0 * angle.cos()).round() as i64, (1000.0 * angle.sin()).round() as i64)
        })
        .collect();
    poly(&coords)
}

/// Two opposing dents whose inner half-planes are disjoint: empty kernel.
pub fn comb() -> Polygon {
    poly(&[(0, 0), (4, 1), (5, 8), (6, 0), (12, 1), (11, 11), (7, 10), (6, 3), (5, 11), (1, 10)])
}

/// 12 x 12 square with a small triangular hole near its centre (n = 7, h = 1).
pub fn square_with_triangle_hole() -> Region {
    GeneralizedPolygon::from_ints(&[(0, 0), (12, 0), (12, 12), (0, 12)], &[&[(5, 4), (8, 5), (6, 8)]])
        .expect("fixture region is valid")
        .into_region()
}

/// Convex pentagon with a triangular hole (n = 8, h = 1).
pub fn pentagon_with_triangle_hole() -> Region {
    GeneralizedPolygon::from_ints(&[(0, 0), (10, 0), (13, 8), (5, 13), (-3, 8)], &[&[(4, 4), (7, 5), (5, 7)]])
        .expect("fixture region is valid")
        .into_region()
}

/// The bridge from outer vertex `v` to the closest visible hole vertex.
pub fn nearest_bridge(region: &Region, v: usize) -> Diagonal {
    let p = region.point(v);
    (0..region.n())
        .filter(|&w| region.cycle_of(w) == 1 && visibility::is_diagonal(region, v, w).unwrap_or(false))
        .min_by_key(|&w| {
            let q = region.point(w);
            let dx = &q.x - &p.x;
            let dy = &q.y - &p.y;
            &dx * &dx + &dy * &dy
        })
        .map(|w| Diagonal::new(v, w))
        .expect("some hole vertex is visible")
}

/// Polygons with exactly one triangulation (visibility graph of 2n - 3 edges), n = 5..=9.
pub fn spiral(n: usize) -> Polygon {
    let coords: &[(i64, i64)] = match n {
        5 => &SPIRAL_5,
        6 => &SPIRAL_6,
        7 => &SPIRAL_7,
        8 => &SPIRAL_8,
        9 => &SPIRAL_9,
        _ => panic!("no unique-triangulation fixture for n = {n}"),
    };
    poly(coords)
}

const SPIRAL_5: [(i64, i64); 5] = [(13, 7), (12, 17), (11, 33), (11, 34), (5, 43)];
const SPIRAL_6: [(i64, i64); 6] = [(-4, -41), (45, 53), (-9, -86), (-6, -71), (-2, 42), (54, 78)];
const SPIRAL_7: [(i64, i64); 7] = [(1, 17), (41, 33), (39, 22), (28, 27), (26, 0), (0, -5), (17, 13)];
const SPIRAL_8: [(i64, i64); 8] = [(36, 25), (45, 39), (29, 10), (44, -7), (-21, -32), (34, 22), (16, 45), (31, 27)];
const SPIRAL_9: [(i64, i64); 9] =
    [(28, 26), (29, 27), (22, 15), (34, 22), (30, 17), (24, 7), (8, 18), (7, 9), (-2, 17)];

/// Octagon with reflex vertices 2 and 5. Its complex has five maximal faces: four
/// squares (three diagonals each) and one cube `{2,5} {5,8}`.
///
/// Found by hill climbing towards "four squares and two K6 faces". No octagon with two
/// reflex vertices has two K6 maximal faces alongside a square, so this is the closest shape.
pub fn twin_reflex_octagon() -> Polygon {
    poly(&TWIN_REFLEX_OCTAGON)
}

const TWIN_REFLEX_OCTAGON: [(i64, i64); 8] =
    [(23, 6), (-5, 32), (-8, 49), (-50, 18), (1, -21), (-4, -23), (-12, -76), (5, -48)];

fn general_position(points: &[Point]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return false;
            }
            for k in j + 1..n {
                if crate::geom::orient(&points[i], &points[j], &points[k]) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Random simple polygon on integer points of `[0, grid)^2`: random points in general
/// position, random order, then 2-opt moves until no two edges cross.
pub fn random_simple_polygon<R: Rng + ?Sized>(n: usize, grid: i64, rng: &mut R) -> Polygon {
    loop {
        let points: Vec<Point> =
            (0..n).map(|_| Point::from_ints(rng.gen_range(0..grid), rng.gen_range(0..grid))).collect();
        if !general_position(&points) {
            continue;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        untangle(&points, &mut order);
        if let Ok(p) = Polygon::new(order.iter().map(|&i| points[i].clone()).collect()) {
            return p;
        }
    }
}

fn untangle(points: &[Point], order: &mut [usize]) {
    let n = order.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (&points[order[i]], &points[order[i + 1]]);
                let (c, d) = (&points[order[j]], &points[order[(j + 1) % n]]);
                if crate::geom::segments_cross_properly(a, b, c, d) {
                    order[i + 1..=j].reverse();
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Random nonconvex simple polygon (rejection sampling on [`random_simple_polygon`]).
pub fn random_nonconvex_polygon<R: Rng + ?Sized>(n: usize, grid: i64, rng: &mut R) -> Polygon {
    assert!(n >= 4);
    loop {
        let p = random_simple_polygon(n, grid, rng);
        if !crate::reflex_vertices(&p).is_empty() {
            return p;
        }
    }
}

/// Random star polygon: integer points at random radii around the origin, sorted by angle.
pub fn random_star_polygon<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Polygon {
    loop {
        let mut pts: Vec<(f64, Point)> = Vec::with_capacity(n);
        for _ in 0..n {
            let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius: f64 = rng.gen_range(15.0..60.0);
            let (x, y) = ((radius * angle.cos()).round() as i64, (radius * angle.sin()).round() as i64);
            pts.push(((y as f64).atan2(x as f64), Point::from_ints(x, y)));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let points: Vec<Point> = pts.into_iter().map(|(_, p)| p).collect();
        if !general_position(&points) {
            continue;
        }
        let Ok(p) = Polygon::new(points) else { continue };
        if !kernel(&p).is_empty() {
            return p;
        }
    }
}

/// Random region with `outer` outer vertices and a triangular hole around the origin.
pub fn random_one_hole_region<R: Rng + ?Sized>(outer: usize, rng: &mut R) -> Region {
    loop {
        let star = random_star_polygon(outer, rng);
        let jitter = |rng: &mut R| rng.gen_range(-1..=1);
        let hole = vec![
            Point::from_ints(-4 + jitter(rng), -3 + jitter(rng)),
            Point::from_ints(4 + jitter(rng), -2 + jitter(rng)),
            Point::from_ints(jitter(rng), 4 + jitter(rng)),
        ];
        if let Ok(r) = GeneralizedPolygon::new(star.vertices().to_vec(), vec![hole]) {
            return r.into_region();
        }
    }
}
