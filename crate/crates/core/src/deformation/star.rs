use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::events::{pick_witness, DeformationEvent, EventKind, EventTime};
use super::V_ISOTOPY_NOTE;
use crate::error::{Error, Result};
use crate::geom::{cross, kernel, KernelRegion, Point, Polygon, Region};
use crate::io::point_to_json;
use crate::num::{format_rational, midpoint, sqrt_floor, Rational};
use crate::visibility::visibility_graph;

/// Irrational event parameters are isolated to intervals of this width.
pub const ISOLATION_BITS: u32 = 60;
const UNIT_BITS: u32 = 40;
const MAX_UNIT_BITS: u32 = 400;

/// How each vertex travels along its ray from the center `x` to its time-1 position
/// `q_i = x + s_i (p_i - x)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StarPath {
    /// The reciprocal distance `1 / |p_i(t) - x|` is affine in `t`. Whether a vertex lies
    /// beyond the chord of two others, seen from `x`, is then an affine condition in `t`
    /// that holds at both ends, so no visibility is ever lost.
    #[default]
    Reciprocal,
    /// Constant radial speed, `p_i(t) = (1 - t) p_i + t q_i`. A vertex can pass through
    /// the chord of its neighbours and come back, losing an edge on the way.
    Linear,
}

impl StarPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            StarPath::Reciprocal => "reciprocal",
            StarPath::Linear => "linear",
        }
    }
}

#[derive(Clone, Debug)]
struct Motion {
    points: Vec<Point>,
    center: Point,
    scale: Vec<Rational>,
    path: StarPath,
}

impl Motion {
    /// Factor applied to `p_i - x` at time `t`.
    fn factor(&self, i: usize, t: &Rational) -> Rational {
        let s = &self.scale[i];
        match self.path {
            StarPath::Linear => Rational::one() - t + t * s,
            StarPath::Reciprocal => (Rational::one() - t + t / s).recip(),
        }
    }

    fn at(&self, t: &Rational) -> Vec<Point> {
        (0..self.points.len())
            .map(|i| {
                let (p, f) = (&self.points[i], self.factor(i, t));
                Point::new(&self.center.x + (&p.x - &self.center.x) * &f, &self.center.y + (&p.y - &self.center.y) * &f)
            })
            .collect()
    }

    /// A polynomial `[c0, c1, c2]` with the sign of `orient(p_i(t), p_j(t), p_k(t))` on `[0, 1]`.
    fn orientation(&self, [i, j, k]: [usize; 3]) -> [Rational; 3] {
        let c = |p: &Point, q: &Point| &p.x * &q.y - &p.y * &q.x;
        match self.path {
            StarPath::Linear => {
                let a = self.at(&Rational::zero());
                let b = self.at(&Rational::one());
                // positions are affine: p(t) = a + t (b - a)
                let d = |v: usize| Point::new(&b[v].x - &a[v].x, &b[v].y - &a[v].y);
                let (u0, v0) = (
                    Point::new(&a[j].x - &a[i].x, &a[j].y - &a[i].y),
                    Point::new(&a[k].x - &a[i].x, &a[k].y - &a[i].y),
                );
                let (di, dj, dk) = (d(i), d(j), d(k));
                let (u1, v1) = (Point::new(&dj.x - &di.x, &dj.y - &di.y), Point::new(&dk.x - &di.x, &dk.y - &di.y));
                [c(&u0, &v0), c(&u0, &v1) + c(&u1, &v0), c(&u1, &v1)]
            }
            StarPath::Reciprocal => {
                // p(t) = x + v / L(t) with L(t) = 1 + t (1/s - 1); multiplying the
                // orientation by L_i L_j L_k > 0 leaves an affine polynomial
                let v = |m: usize| Point::new(&self.points[m].x - &self.center.x, &self.points[m].y - &self.center.y);
                let (vi, vj, vk) = (v(i), v(j), v(k));
                let slope = |m: usize| self.scale[m].recip() - Rational::one();
                let (cij, cjk, cki) = (c(&vi, &vj), c(&vj, &vk), c(&vk, &vi));
                let c1 = &cij * slope(k) + &cjk * slope(i) + &cki * slope(j);
                [cij + cjk + cki, c1, Rational::zero()]
            }
        }
    }
}

fn eval(q: &[Rational; 3], t: &Rational) -> Rational {
    &q[0] + t * (&q[1] + t * &q[2])
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Roots of a polynomial of degree at most two inside `(0, 1)`: exact when rational,
/// otherwise an isolating interval of width at most `2^-ISOLATION_BITS`.
fn roots_in_unit(q: &[Rational; 3]) -> Vec<EventTime> {
    let zero = Rational::zero();
    let one = Rational::one();
    let inside = |t: &Rational| *t > zero && *t < one;
    if q[2].is_zero() {
        if q[1].is_zero() {
            return vec![];
        }
        let t = -&q[0] / &q[1];
        return if inside(&t) { vec![EventTime::Exact(t)] } else { vec![] };
    }
    let disc = &q[1] * &q[1] - Rational::from_integer(4.into()) * &q[0] * &q[2];
    if disc.is_negative() {
        return vec![];
    }
    let two_a = Rational::from_integer(2.into()) * &q[2];
    if let Some(r) = rational_sqrt(&disc) {
        let mut out: Vec<Rational> = vec![(-&q[1] - &r) / &two_a, (-&q[1] + &r) / &two_a];
        out.sort();
        out.dedup();
        return out.into_iter().filter(inside).map(EventTime::Exact).collect();
    }
    // irrational: split at the critical point, each monotone piece holds at most one root
    let mut cuts = vec![zero.clone()];
    let tc = -&q[1] / &two_a;
    if inside(&tc) {
        cuts.push(tc);
    }
    cuts.push(one);
    let width = Rational::new(BigInt::one(), BigInt::one() << ISOLATION_BITS as usize);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0].clone(), w[1].clone());
        let (slo, shi) = (eval(q, &lo).signum(), eval(q, &hi).signum());
        if slo.is_zero() || shi.is_zero() || slo == shi {
            continue;
        }
        while &hi - &lo > width {
            let mid = midpoint(&lo, &hi);
            if eval(q, &mid).signum() == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(EventTime::Interval(lo, hi));
    }
    out
}

#[derive(Clone, Debug)]
pub struct StarReport {
    pub path: StarPath,
    pub center: Point,
    pub epsilon: Rational,
    pub warning: Option<String>,
    pub final_polygon: Polygon,
    pub final_convex: bool,
    /// `orient(x, p_i(t), p_(i+1)(t)) > 0` for all `t` and `i`.
    pub order_preserved: bool,
    pub events: Vec<DeformationEvent>,
    /// Event-free sample times with the visibility rank there.
    pub samples: Vec<(Rational, usize)>,
    pub losses: usize,
    /// Each sampled edge set contains the previous one.
    pub monotone: bool,
}

impl StarReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "path": self.path.as_str(),
            "center": point_to_json(&self.center),
            "epsilon": format_rational(&self.epsilon),
            "warning": self.warning,
            "finalPolygon": crate::io::region_to_json(&self.final_polygon),
            "finalConvex": self.final_convex,
            "orderPreserved": self.order_preserved,
            "events": self.events.iter().map(DeformationEvent::to_json).collect::<Vec<_>>(),
            "samples": self.samples.iter().map(|(t, r)| json!({ "t": format_rational(t), "rank": r })).collect::<Vec<_>>(),
            "losses": self.losses,
            "monotone": self.monotone,
            "note": V_ISOTOPY_NOTE,
        })
    }
}

fn star_polygon(region: &Region) -> Result<Polygon> {
    region.require_general_position()?;
    Polygon::from_region(region.clone())
}

fn dist2_to_line(a: &Point, b: &Point, x: &Point) -> Rational {
    let c = cross(a, b, x);
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    &c * &c / (&dx * &dx + &dy * &dy)
}

/// Chooses the center, epsilon and per-vertex scales, then checks the time-1 polygon is
/// strictly convex, refining the unit-vector approximation if it is not.
fn plan(poly: &Polygon, center: Option<Point>, path: StarPath) -> Result<(Motion, Rational, Option<String>)> {
    let k = kernel(poly);
    if k.is_empty() {
        return Err(Error::NotStar);
    }
    let x = match center {
        Some(x) if k.contains(&x) => x,
        Some(_) => return Err(Error::NotStar),
        None => k.witness().unwrap(),
    };
    let mut warning = None;
    let inradius2 = match &k {
        KernelRegion::Polygon(vs) => {
            (0..vs.len()).map(|i| dist2_to_line(&vs[i], &vs[(i + 1) % vs.len()], &x)).min().unwrap()
        }
        _ => Rational::zero(),
    };
    let radius2 = if inradius2.is_zero() {
        warning = Some(
            "kernel is degenerate or the center lies on its boundary; using the nearest vertex distance".to_string(),
        );
        poly.points().iter().map(|p| (&p.x - &x.x) * (&p.x - &x.x) + (&p.y - &x.y) * (&p.y - &x.y)).min().unwrap()
    } else {
        inradius2
    };
    let mut bits = 20;
    let mut r = sqrt_floor(&radius2, bits);
    while r.is_zero() {
        bits += 20;
        r = sqrt_floor(&radius2, bits);
    }
    let epsilon = r / Rational::from_integer(2.into());
    let mut unit_bits = UNIT_BITS;
    loop {
        let scale: Vec<Rational> = poly
            .points()
            .iter()
            .map(|p| {
                let len2 = (&p.x - &x.x) * (&p.x - &x.x) + (&p.y - &x.y) * (&p.y - &x.y);
                &epsilon / sqrt_floor(&len2, unit_bits)
            })
            .collect();
        let motion = Motion { points: poly.points().to_vec(), center: x.clone(), scale, path };
        let end = motion.at(&Rational::one());
        let n = end.len();
        if (0..n).all(|i| crate::geom::orient(&end[i], &end[(i + 1) % n], &end[(i + 2) % n]) > 0) {
            return Ok((motion, epsilon, warning));
        }
        unit_bits += 40;
        if unit_bits > MAX_UNIT_BITS {
            return Err(Error::CertificateNotFound { doublings: unit_bits / 40 });
        }
    }
}

/// The polygon at time `t` of the deformation towards a convex polygon around a kernel point.
pub fn star_deformation(region: &Region, t: &Rational, center: Option<Point>) -> Result<Polygon> {
    star_deformation_along(region, t, center, StarPath::default())
}

pub fn star_deformation_along(region: &Region, t: &Rational, center: Option<Point>, path: StarPath) -> Result<Polygon> {
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::TimeOutOfRange);
    }
    let poly = star_polygon(region)?;
    let (motion, _, _) = plan(&poly, center, path)?;
    Polygon::new(motion.at(t))
}

fn edge_set(points: Vec<Point>) -> Result<BTreeSet<(usize, usize)>> {
    let p = Polygon::new(points)?;
    Ok(visibility_graph(&p).edges().iter().copied().collect())
}

/// Isolates every parameter where some vertex triple becomes collinear, samples the
/// visibility graph between consecutive parameters, and reports each change.
pub fn star_deformation_report(region: &Region, center: Option<Point>) -> Result<StarReport> {
    star_deformation_report_along(region, center, StarPath::default())
}

pub fn star_deformation_report_along(region: &Region, center: Option<Point>, path: StarPath) -> Result<StarReport> {
    let poly = star_polygon(region)?;
    let (motion, epsilon, warning) = plan(&poly, center, path)?;
    let n = poly.n();
    let x = motion.center.clone();

    let order_preserved = (0..n).all(|i| {
        let j = (i + 1) % n;
        // radial motion scales orient(x, p_i, p_j) by positive factors
        let base = cross(&x, poly.point(i), poly.point(j));
        base.is_positive() && motion.scale[i].is_positive() && motion.scale[j].is_positive()
    });

    let mut roots: Vec<(EventTime, [usize; 3])> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for t in roots_in_unit(&motion.orientation([i, j, k])) {
                    roots.push((t, [i, j, k]));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.lo().cmp(b.0.lo()).then(a.0.hi().cmp(b.0.hi())));
    // clusters of overlapping parameters
    let mut clusters: Vec<(Rational, Rational, Vec<[usize; 3]>)> = Vec::new();
    for (t, w) in roots {
        match clusters.last_mut() {
            Some((_, hi, ws)) if t.lo() <= hi => {
                if t.hi() > hi {
                    *hi = t.hi().clone();
                }
                ws.push(w);
            }
            _ => clusters.push((t.lo().clone(), t.hi().clone(), vec![w])),
        }
    }
    let mut times = vec![Rational::zero()];
    for w in clusters.windows(2) {
        times.push(midpoint(&w[0].1, &w[1].0));
    }
    times.push(Rational::one());
    if clusters.is_empty() {
        times.truncate(1);
        times.push(Rational::one());
    }
    let sets: Vec<BTreeSet<(usize, usize)>> =
        times.par_iter().map(|t| edge_set(motion.at(t))).collect::<Result<Vec<_>>>()?;

    let mut events = Vec::new();
    for (c, (lo, hi, zeros)) in clusters.iter().enumerate() {
        let (before, after) = (&sets[c], &sets[c + 1]);
        let gained: Vec<_> = after.difference(before).copied().collect();
        let lost: Vec<_> = before.difference(after).copied().collect();
        let kind = match (gained.len(), lost.len()) {
            (0, 0) => continue,
            (1, 0) => EventKind::VisibilityGain,
            (0, 1) => EventKind::VisibilityLoss,
            _ => EventKind::GeneralPositionTouch,
        };
        let edge = gained.first().or(lost.first()).copied().unwrap();
        let t = if lo == hi { EventTime::Exact(lo.clone()) } else { EventTime::Interval(lo.clone(), hi.clone()) };
        events.push(DeformationEvent { t, kind, edge, gained, lost, witness: pick_witness(zeros, edge) });
    }
    let losses = events.iter().filter(|e| !e.lost.is_empty()).count();
    let monotone = sets.windows(2).all(|w| w[1].is_superset(&w[0]));
    let samples = times.into_iter().zip(sets.iter().map(|s| s.len())).collect();
    let final_polygon = Polygon::new(motion.at(&Rational::one()))?;
    let final_convex = crate::reflex_vertices(&final_polygon).is_empty();
    Ok(StarReport {
        path,
        center: x,
        epsilon,
        warning,
        final_polygon,
        final_convex,
        order_preserved,
        events,
        samples,
        losses,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, ratio};

    #[test]
    fn quadratic_roots() {
        // (t - 1/2)(t - 1/3) = t^2 - 5/6 t + 1/6
        let q = [ratio(1, 6), ratio(-5, 6), int(1)];
        assert_eq!(roots_in_unit(&q), vec![EventTime::Exact(ratio(1, 3)), EventTime::Exact(ratio(1, 2))]);
        // t^2 - 1/2 has the irrational root 1/sqrt(2)
        let q = [ratio(-1, 2), int(0), int(1)];
        let r = roots_in_unit(&q);
        assert_eq!(r.len(), 1);
        let EventTime::Interval(lo, hi) = &r[0] else { panic!() };
        assert!(lo * lo < ratio(1, 2) && hi * hi > ratio(1, 2));
        assert!(hi - lo <= Rational::new(BigInt::one(), BigInt::one() << 60));
        assert!(roots_in_unit(&[int(1), int(0), int(1)]).is_empty());
    }

    #[test]
    fn hex_h_grows_to_convex() {
        let h = fixtures::hex_h();
        let r = star_deformation_report(&h, Some(Point::from_ints(2, 2))).unwrap();
        assert!(r.final_convex && r.monotone && r.order_preserved);
        assert_eq!(r.losses, 0);
        assert_eq!((r.samples.first().unwrap().1, r.samples.last().unwrap().1), (13, 15));
        // the shape is symmetric about x, so both gains happen at the same instant
        let gained: usize = r.events.iter().map(|e| e.gained.len()).sum();
        assert_eq!(gained, 2);
    }

    #[test]
    fn linear_path_can_lose_an_edge() {
        let p =
            Polygon::from_ints(&[(-56, -20), (-18, -18), (41, -29), (51, -12), (34, -7), (16, -2), (48, 17), (10, 29)])
                .unwrap();
        let linear = star_deformation_report_along(&p, None, StarPath::Linear).unwrap();
        assert!(!linear.monotone);
        let loss = linear.events.iter().find(|e| e.kind == EventKind::VisibilityLoss).unwrap();
        assert_eq!((loss.edge, loss.witness), ((3, 5), [3, 4, 5]));
        let reciprocal = star_deformation_report(&p, None).unwrap();
        assert!(reciprocal.monotone && reciprocal.final_convex);
        assert_eq!(reciprocal.losses, 0);
        assert!(reciprocal.events.iter().all(|e| matches!(e.t, EventTime::Exact(_))));
        assert_eq!(reciprocal.final_polygon, linear.final_polygon);
    }

    #[test]
    fn paths_share_endpoints() {
        let h = fixtures::hex_h();
        for t in [int(0), int(1)] {
            assert_eq!(
                star_deformation_along(&h, &t, None, StarPath::Linear).unwrap(),
                star_deformation_along(&h, &t, None, StarPath::Reciprocal).unwrap()
            );
        }
        // halfway in time is not halfway in distance
        let mid = star_deformation_along(&h, &ratio(1, 2), None, StarPath::Reciprocal).unwrap();
        let lin = star_deformation_along(&h, &ratio(1, 2), None, StarPath::Linear).unwrap();
        assert_ne!(mid, lin);
    }

    #[test]
    fn convex_stays_complete() {
        let p = fixtures::convex_polygon(7);
        let r = star_deformation_report(&p, None).unwrap();
        assert!(r.events.is_empty());
        assert!(r.samples.iter().all(|s| s.1 == 21));
    }

    #[test]
    fn comb_is_not_star() {
        assert_eq!(star_deformation_report(&fixtures::comb(), None).unwrap_err(), Error::NotStar);
        assert_eq!(star_deformation(&fixtures::hex_h(), &int(2), None).unwrap_err(), Error::TimeOutOfRange);
    }

    #[test]
    fn endpoints() {
        let h = fixtures::hex_h();
        let p0 = star_deformation(&h, &int(0), None).unwrap();
        assert_eq!(p0.points(), h.points());
        let p1 = star_deformation(&h, &int(1), None).unwrap();
        assert!(crate::reflex_vertices(&p1).is_empty());
    }
}
