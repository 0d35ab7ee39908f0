//! Library results against independent brute-force computations.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use polyassoc_core::complex::{build_complex, enumerate_triangulations, flip_graph, theta_complex};
use polyassoc_core::fixtures;
use polyassoc_core::realization::{hull_edge_certificate, realize, secondary_polytope_summary};
use polyassoc_core::visibility::visibility_graph;
use polyassoc_core::{Point, Polygon, DEFAULT_CAP};

type Q = BigRational;

fn cross(a: &Point, b: &Point, c: &Point) -> Q {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let s = |v: Q| v.signum();
    let (d1, d2) = (s(cross(a, b, c)), s(cross(a, b, d)));
    let (d3, d4) = (s(cross(c, d, a)), s(cross(c, d, b)));
    d1 * d2 <= Q::zero() && d3 * d4 <= Q::zero()
}

// crossing number with a rightward ray, half-open on y
fn inside(poly: &[Point], q: &Point) -> bool {
    let n = poly.len();
    let mut odd = false;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        if (a.y > q.y) != (b.y > q.y) {
            let x = &a.x + (&q.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
            if x > q.x {
                odd = !odd;
            }
        }
    }
    odd
}

fn brute_visibility(poly: &[Point]) -> BTreeSet<(usize, usize)> {
    let n = poly.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                out.insert((i, j));
                continue;
            }
            let blocked = (0..n).any(|k| {
                let l = (k + 1) % n;
                ![i, j].contains(&k) && ![i, j].contains(&l) && segments_meet(&poly[i], &poly[j], &poly[k], &poly[l])
            });
            let two = Q::from_integer(2.into());
            let mid = Point::new((&poly[i].x + &poly[j].x) / &two, (&poly[i].y + &poly[j].y) / &two);
            if !blocked && inside(poly, &mid) {
                out.insert((i, j));
            }
        }
    }
    out
}

// interval dynamic program over triangles (i, k, j) whose sides are all visible
fn triangulation_count(poly: &[Point]) -> u128 {
    let n = poly.len();
    let vis = brute_visibility(poly);
    let ok = |a: usize, b: usize| vis.contains(&(a.min(b), a.max(b)));
    let mut c = vec![vec![0u128; n]; n];
    for i in 0..n - 1 {
        c[i][i + 1] = 1;
    }
    for len in 2..n {
        for i in 0..n - len {
            let j = i + len;
            if !ok(i, j) {
                continue;
            }
            c[i][j] = (i + 1..j).filter(|&k| ok(i, k) && ok(k, j)).map(|k| c[i][k] * c[k][j]).sum();
        }
    }
    c[0][n - 1]
}

fn sample_polygons() -> Vec<Polygon> {
    let mut rng = StdRng::seed_from_u64(5);
    let mut out =
        vec![fixtures::hex_h(), fixtures::reflex_pentagon(), fixtures::comb(), fixtures::twin_reflex_octagon()];
    out.extend((5..=9).map(fixtures::spiral));
    for n in 4..=9 {
        for _ in 0..6 {
            out.push(fixtures::random_simple_polygon(n, 50, &mut rng));
        }
    }
    out
}

#[test]
fn visibility_matches_brute_force() {
    for p in sample_polygons() {
        let got: BTreeSet<(usize, usize)> = visibility_graph(&p).edges().iter().copied().collect();
        assert_eq!(got, brute_visibility(p.points()), "{:?}", p.points());
    }
}

#[test]
fn triangulation_counts_match_interval_dp() {
    for p in sample_polygons() {
        let t = enumerate_triangulations(&p, DEFAULT_CAP).unwrap();
        assert_eq!(t.len() as u128, triangulation_count(p.points()));
        let distinct: BTreeSet<Vec<[usize; 2]>> = t.iter().map(|d| d.iter().map(|x| x.labels()).collect()).collect();
        assert_eq!(distinct.len(), t.len());
        assert!(t.iter().all(|d| d.len() == p.n() - 3));
    }
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let within = |x: usize| a.0 < x && x < a.1;
    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 && within(b.0) != within(b.1)
}

// noncrossing subsets of the convex diagonals, by plain subset enumeration
fn convex_noncrossing_counts(n: usize) -> Vec<usize> {
    let diags: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 2..n).map(move |j| (i, j))).filter(|&(i, j)| !(i == 0 && j == n - 1)).collect();
    let mut counts = vec![0; n - 2];
    for mask in 0u32..1 << diags.len() {
        let chosen: Vec<(usize, usize)> = (0..diags.len()).filter(|b| mask >> b & 1 == 1).map(|b| diags[b]).collect();
        if chosen.len() > n - 3 {
            continue;
        }
        if chosen.iter().enumerate().all(|(x, &a)| chosen[x + 1..].iter().all(|&b| !interleave(a, b))) {
            counts[chosen.len()] += 1;
        }
    }
    counts
}

#[test]
fn convex_theta_counts_match_subset_enumeration() {
    for n in 4..=7 {
        let theta = theta_complex(&fixtures::convex_polygon(n), DEFAULT_CAP).unwrap();
        assert_eq!(theta.counts(), convex_noncrossing_counts(n));
        let k = build_complex(&fixtures::convex_polygon(n), DEFAULT_CAP).unwrap();
        let mut f = k.f_vector();
        f.reverse();
        assert_eq!(f, convex_noncrossing_counts(n));
    }
}

#[test]
fn convex_theta_is_a_sphere() {
    for n in 4..=8 {
        let h = theta_complex(&fixtures::convex_polygon(n), DEFAULT_CAP).unwrap().reduced_homology();
        for g in &h {
            let want = usize::from(g.degree == n as isize - 4);
            assert_eq!((g.rank, g.torsion.is_empty()), (want, true), "n = {n}, degree {}", g.degree);
        }
    }
}

fn to_rational(points: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<Q>> {
    points.iter().map(|p| p.iter().map(|c| Q::from_integer(c.clone())).collect()).collect()
}

fn flip_pairs(p: &Polygon, order: &[Vec<[usize; 2]>]) -> BTreeSet<(usize, usize)> {
    let g = flip_graph(p, DEFAULT_CAP).unwrap();
    let pos = |t: Vec<[usize; 2]>| order.iter().position(|o| *o == t).unwrap();
    g.arcs()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (
                pos(g.triangulation(a).iter().map(|d| d.labels()).collect()),
                pos(g.triangulation(b).iter().map(|d| d.labels()).collect()),
            );
            (x.min(y), x.max(y))
        })
        .collect()
}

fn hull_edges(points: &[Vec<Q>]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if let Some(c) = hull_edge_certificate(points, i, j) {
                let dot = |q: &Vec<Q>| c.iter().zip(q).map(|(a, b)| a * b).sum::<Q>();
                let top = dot(&points[i]);
                assert_eq!(dot(&points[j]), top);
                assert!(points.iter().enumerate().all(|(k, q)| k == i || k == j || dot(q) < top));
                out.insert((i, j));
            }
        }
    }
    out
}

#[test]
fn realization_edges_are_flips() {
    for n in 4..=6 {
        let p = fixtures::convex_polygon(n);
        let r = realize(&p, None, DEFAULT_CAP).unwrap();
        let order: Vec<Vec<[usize; 2]>> =
            r.points.iter().map(|x| x.triangulation.iter().map(|d| d.labels()).collect()).collect();
        let coords: Vec<Vec<num_bigint::BigInt>> = r.points.iter().map(|x| x.coords.clone()).collect();
        assert_eq!(hull_edges(&to_rational(&coords)), flip_pairs(&p, &order), "n = {n}");
    }
}

#[test]
fn secondary_edges_are_flips() {
    for p in [fixtures::convex_polygon(5), fixtures::convex_polygon(6), fixtures::hex_h(), fixtures::reflex_pentagon()]
    {
        let s = secondary_polytope_summary(&p, None, DEFAULT_CAP).unwrap();
        let order: Vec<Vec<[usize; 2]>> =
            s.vectors.iter().map(|v| v.triangulation.iter().map(|d| d.labels()).collect()).collect();
        let phis: Vec<Vec<Q>> = s.vectors.iter().map(|v| v.phi.clone()).collect();
        let edges = hull_edges(&phis);
        let flips = flip_pairs(&p, &order);
        // K_P is only part of the hull boundary when P is not convex
        assert!(flips.is_subset(&edges));
        if polyassoc_core::reflex_vertices(&p).is_empty() {
            assert_eq!(edges, flips);
        }
    }
}

#[test]
fn area_oracle_by_shoelace() {
    for p in sample_polygons() {
        let pts = p.points();
        let n = pts.len();
        let twice: Q = (0..n).map(|i| &pts[i].x * &pts[(i + 1) % n].y - &pts[(i + 1) % n].x * &pts[i].y).sum();
        // labels keep the input order, which may be clockwise
        let area = twice.abs() / Q::from_integer(2.into());
        assert_eq!(p.area(), area);
    }
    assert_eq!(fixtures::unit_square().area(), Q::one());
}
