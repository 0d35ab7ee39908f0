use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::V_ISOTOPY_NOTE;
use crate::error::{Error, Result};
use crate::geom::{cross, Point, Polygon, Region, ValidateOptions};
use crate::io::point_to_json;
use crate::num::{format_rational, midpoint, Rational};
use crate::visibility::visibility_graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    VisibilityGain,
    VisibilityLoss,
    SimplicityViolation,
    /// Several visibility edges change at one parameter.
    GeneralPositionTouch,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::VisibilityGain => "gain",
            EventKind::VisibilityLoss => "loss",
            EventKind::SimplicityViolation => "simplicity",
            EventKind::GeneralPositionTouch => "touch",
        }
    }
}

/// An exact rational parameter, or an isolating interval `(lo, hi)` around an irrational one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventTime {
    Exact(Rational),
    Interval(Rational, Rational),
}

impl EventTime {
    pub fn lo(&self) -> &Rational {
        match self {
            EventTime::Exact(t) => t,
            EventTime::Interval(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            EventTime::Exact(t) => t,
            EventTime::Interval(_, hi) => hi,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            EventTime::Exact(t) => json!(format_rational(t)),
            EventTime::Interval(lo, hi) => json!({ "lo": format_rational(lo), "hi": format_rational(hi) }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationEvent {
    pub t: EventTime,
    pub kind: EventKind,
    /// The changed edge (the first one for a touch; the hit boundary edge for a simplicity violation).
    pub edge: (usize, usize),
    pub gained: Vec<(usize, usize)>,
    pub lost: Vec<(usize, usize)>,
    /// A vertex triple that is collinear at `t`.
    pub witness: [usize; 3],
}

impl DeformationEvent {
    pub fn to_json(&self) -> serde_json::Value {
        let pair = |(a, b): (usize, usize)| [a + 1, b + 1];
        json!({
            "t": self.t.to_json(),
            "kind": self.kind.as_str(),
            "edge": pair(self.edge),
            "witness": self.witness.map(|v| v + 1),
            "gained": self.gained.iter().map(|&e| pair(e)).collect::<Vec<_>>(),
            "lost": self.lost.iter().map(|&e| pair(e)).collect::<Vec<_>>(),
        })
    }
}

/// Straight-line motion of one vertex, all others fixed.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub start: Polygon,
    pub vertex: usize,
    pub target: Point,
    pub events: Vec<DeformationEvent>,
    /// Parameter of the first simplicity violation, where the motion stops.
    pub truncated_at: Option<Rational>,
    /// Polygon at the end of the motion; `None` when truncated or when the target is
    /// collinear with two other vertices.
    pub end: Option<Polygon>,
    pub rank_start: usize,
    pub rank_end: usize,
}

impl Trajectory {
    pub fn position(&self, t: &Rational) -> Point {
        self.start.point(self.vertex).lerp(&self.target, t)
    }

    pub fn polygon_at(&self, t: &Rational) -> Result<Polygon> {
        polygon_with(&self.start, self.vertex, self.position(t))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "vertex": self.vertex + 1,
            "from": point_to_json(self.start.point(self.vertex)),
            "to": point_to_json(&self.target),
            "events": self.events.iter().map(DeformationEvent::to_json).collect::<Vec<_>>(),
            "rankStart": self.rank_start,
            "rankEnd": self.rank_end,
        });
        if let Some(t) = &self.truncated_at {
            v["truncatedAt"] = json!(format_rational(t));
        }
        v
    }
}

fn polygon_with(base: &Region, vertex: usize, p: Point) -> Result<Polygon> {
    let mut pts = base.points().to_vec();
    pts[vertex] = p;
    Polygon::new(pts)
}

fn edge_set(region: &Region) -> BTreeSet<(usize, usize)> {
    visibility_graph(region).edges().iter().copied().collect()
}

fn classify(gained: &[(usize, usize)], lost: &[(usize, usize)]) -> Option<(EventKind, (usize, usize))> {
    match (gained, lost) {
        ([], []) => None,
        ([e], []) => Some((EventKind::VisibilityGain, *e)),
        ([], [e]) => Some((EventKind::VisibilityLoss, *e)),
        _ => Some((EventKind::GeneralPositionTouch, gained.first().or(lost.first()).copied().unwrap())),
    }
}

/// The moving vertex touches a boundary edge at `t`.
fn simplicity_violation(start: &Polygon, vertex: usize, t: &Rational, zeros: &[[usize; 3]]) -> DeformationEvent {
    let others = |w: &[usize; 3]| -> Vec<usize> { w.iter().copied().filter(|&v| v != vertex).collect() };
    let w = zeros
        .iter()
        .find(|w| {
            let o = others(w);
            start.is_boundary_edge(o[0], o[1])
        })
        .or(zeros.first())
        .copied()
        .expect("a violation has a collinear triple");
    let o = others(&w);
    DeformationEvent {
        t: EventTime::Exact(t.clone()),
        kind: EventKind::SimplicityViolation,
        edge: (o[0], o[1]),
        gained: vec![],
        lost: vec![],
        witness: w,
    }
}

/// The zero triple that explains `edge`: it contains both endpoints when one does.
pub(crate) fn pick_witness(zeros: &[[usize; 3]], edge: (usize, usize)) -> [usize; 3] {
    zeros
        .iter()
        .find(|t| t.contains(&edge.0) && t.contains(&edge.1))
        .or(zeros.first())
        .copied()
        .expect("an event has a collinear triple")
}

/// Moves vertex `vertex` (0-based) along the segment to `target`.
///
/// Every orientation involving the moving vertex is affine in `t`, so each event
/// parameter is an exact rational. The visibility graph is compared at the midpoints
/// between consecutive parameters; parameters where nothing changes are not events.
pub fn move_vertex(polygon: &Region, vertex: usize, target: Point) -> Result<Trajectory> {
    polygon.require_general_position()?;
    let start = Polygon::from_region(polygon.clone())?;
    let n = start.n();
    if vertex >= n {
        return Err(Error::InvalidLabel { label: vertex + 1, n });
    }
    let from = start.point(vertex).clone();
    if from == target {
        return Err(Error::TargetEqualsVertex(vertex + 1));
    }
    // roots of orient(p_j, p_k, p(t)) = c0 + c1 t
    let mut roots: Vec<(Rational, [usize; 3])> = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            if j == vertex || k == vertex {
                continue;
            }
            let c0 = cross(start.point(j), start.point(k), &from);
            let c1 = cross(start.point(j), start.point(k), &target) - &c0;
            if c1.is_zero() {
                continue;
            }
            let t = -&c0 / &c1;
            if t.is_positive() && t <= Rational::one() {
                let mut w = [j, k, vertex];
                w.sort_unstable();
                roots.push((t, w));
            }
        }
    }
    roots.sort();
    let mut params: Vec<(Rational, Vec<[usize; 3]>)> = Vec::new();
    for (t, w) in roots {
        match params.last_mut() {
            Some((last, ws)) if *last == t => ws.push(w),
            _ => params.push((t, vec![w])),
        }
    }

    let rank_start = visibility_graph(&start).edge_count();
    let mut events = Vec::new();
    let mut before = edge_set(&start);
    let mut truncated_at = None;
    let mut end = None;
    for (i, (t, zeros)) in params.iter().enumerate() {
        let after_t = match params.get(i + 1) {
            Some((next, _)) => midpoint(t, next),
            None if *t < Rational::one() => midpoint(t, &Rational::one()),
            // the endpoint itself is degenerate: nothing after it to compare
            None => {
                let mut pts = start.points().to_vec();
                pts[vertex] = target.clone();
                if Polygon::with_options(pts, ValidateOptions { allow_degenerate: true }).is_err() {
                    events.push(simplicity_violation(&start, vertex, t, zeros));
                    truncated_at = Some(t.clone());
                }
                break;
            }
        };
        let after = match polygon_with(&start, vertex, from.lerp(&target, &after_t)) {
            Ok(p) => p,
            Err(_) => {
                events.push(simplicity_violation(&start, vertex, t, zeros));
                truncated_at = Some(t.clone());
                break;
            }
        };
        let now = edge_set(&after);
        let gained: Vec<_> = now.difference(&before).copied().collect();
        let lost: Vec<_> = before.difference(&now).copied().collect();
        if let Some((kind, edge)) = classify(&gained, &lost) {
            events.push(DeformationEvent {
                t: EventTime::Exact(t.clone()),
                kind,
                edge,
                gained,
                lost,
                witness: pick_witness(zeros, edge),
            });
        }
        before = now;
    }
    if truncated_at.is_none() {
        end = polygon_with(&start, vertex, target.clone()).ok();
    }
    let rank_end = before.len();
    Ok(Trajectory { start, vertex, target, events, truncated_at, end, rank_start, rank_end })
}

/// Applies the moves one after another, each starting from the previous end polygon.
pub fn run_chain(polygon: &Region, moves: &[(usize, Point)]) -> Result<Vec<Trajectory>> {
    let mut current = polygon.clone();
    let mut out = Vec::with_capacity(moves.len());
    for (index, (v, target)) in moves.iter().enumerate() {
        let tr = move_vertex(&current, *v, target.clone())?;
        if let Some(t) = &tr.truncated_at {
            return Err(Error::BrokenChain { index: index + 1, t: format_rational(t) });
        }
        match &tr.end {
            Some(p) => current = p.region().clone(),
            // a degenerate end is only a problem if another move has to start from it
            None if index + 1 < moves.len() => return Err(Error::BrokenChain { index: index + 1, t: "1".into() }),
            None => {}
        }
        out.push(tr);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub monotone: bool,
    /// `Some(true)` for all gains, `Some(false)` for all losses, `None` when there are no events or both.
    pub increasing: Option<bool>,
    pub event_count: usize,
    pub single_edge_events: bool,
    pub rank_start: usize,
    pub rank_end: usize,
    /// `(move, event)` indices of the first event that breaks monotonicity.
    pub first_violation: Option<(usize, usize)>,
    pub trajectories: Vec<Trajectory>,
}

impl ChainReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "moves": self.trajectories.iter().map(Trajectory::to_json).collect::<Vec<_>>(),
            "monotone": self.monotone,
            "rankStart": self.rank_start,
            "rankEnd": self.rank_end,
            "note": V_ISOTOPY_NOTE,
        });
        if let Some((m, e)) = self.first_violation {
            v["firstViolation"] = json!({ "move": m + 1, "event": e + 1 });
        }
        v
    }
}

/// Monotone means every event is a gain (or every event is a loss), each event changes
/// exactly one edge, and the rank changes by the number of events.
pub fn is_monotone_chain(trajectories: &[Trajectory]) -> Result<ChainReport> {
    for (index, tr) in trajectories.iter().enumerate() {
        if let Some(t) = &tr.truncated_at {
            return Err(Error::BrokenChain { index: index + 1, t: format_rational(t) });
        }
    }
    let flat: Vec<(usize, usize, EventKind)> = trajectories
        .iter()
        .enumerate()
        .flat_map(|(m, tr)| tr.events.iter().enumerate().map(move |(e, ev)| (m, e, ev.kind)))
        .collect();
    let gains = flat.iter().filter(|x| x.2 == EventKind::VisibilityGain).count();
    let losses = flat.iter().filter(|x| x.2 == EventKind::VisibilityLoss).count();
    let single_edge_events = gains + losses == flat.len();
    let rank_start = trajectories.first().map_or(0, |t| t.rank_start);
    let rank_end = trajectories.last().map_or(rank_start, |t| t.rank_end);
    let increasing = match (gains, losses) {
        (0, 0) => None,
        (_, 0) => Some(true),
        (0, _) => Some(false),
        _ => None,
    };
    let delta = rank_end as i64 - rank_start as i64;
    let rank_consistent = match increasing {
        Some(true) => delta == flat.len() as i64,
        Some(false) => -delta == flat.len() as i64,
        None => flat.is_empty() && delta == 0,
    };
    let monotone = single_edge_events && rank_consistent && (flat.is_empty() || increasing.is_some());
    let first_violation = if monotone {
        None
    } else if gains > 0 {
        flat.iter().find(|x| x.2 != EventKind::VisibilityGain).map(|x| (x.0, x.1))
    } else {
        flat.iter().find(|x| x.2 != EventKind::VisibilityLoss).map(|x| (x.0, x.1))
    };
    Ok(ChainReport {
        monotone,
        increasing,
        event_count: flat.len(),
        single_edge_events,
        rank_start,
        rank_end,
        first_violation,
        trajectories: trajectories.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, ratio};

    #[test]
    fn hex_h_gain() {
        let h = fixtures::hex_h();
        let tr = move_vertex(&h, 1, Point::from_ints(2, -1)).unwrap();
        assert_eq!(tr.events.len(), 1);
        let e = &tr.events[0];
        assert_eq!((e.kind, e.edge, e.t.clone()), (EventKind::VisibilityGain, (0, 2), EventTime::Exact(ratio(1, 2))));
        assert_eq!(e.witness, [0, 1, 2]);
        assert_eq!((tr.rank_start, tr.rank_end), (13, 14));
    }

    #[test]
    fn convex_small_motion_is_quiet() {
        let p = fixtures::convex_polygon(6);
        let q = p.point(0);
        let target = Point::new(&q.x + int(3), &q.y + int(2));
        assert!(move_vertex(&p, 0, target).unwrap().events.is_empty());
    }

    #[test]
    fn crossing_an_edge_truncates() {
        let sq = Polygon::from_ints(&[(0, 0), (10, 0), (10, 10), (0, 10)]).unwrap();
        // vertex 1 pushed through the opposite edge {3, 4}
        let tr = move_vertex(&sq, 0, Point::from_ints(3, 17)).unwrap();
        let last = tr.events.last().unwrap();
        assert_eq!(last.kind, EventKind::SimplicityViolation);
        assert!(tr.truncated_at.is_some() && tr.end.is_none());
        assert_eq!(is_monotone_chain(&[tr]).unwrap_err().kind(), "BrokenChain");
    }

    #[test]
    fn square_vertex_across_diagonal_line() {
        let sq = fixtures::unit_square();
        let tr = move_vertex(&sq, 0, Point::new(ratio(4, 5), ratio(4, 5))).unwrap();
        assert_eq!(tr.events.len(), 1);
        let e = &tr.events[0];
        // exactly one edge changes, so it is a loss rather than a touch
        assert_eq!((e.kind, e.edge, e.t.clone()), (EventKind::VisibilityLoss, (1, 3), EventTime::Exact(ratio(5, 8))));
        assert_eq!(e.witness, [0, 1, 3]);
    }

    #[test]
    fn landing_on_an_edge_truncates_at_one() {
        let sq = fixtures::unit_square();
        let tr = move_vertex(&sq, 0, Point::new(ratio(1, 2), int(1))).unwrap();
        let last = tr.events.last().unwrap();
        assert_eq!((last.kind, last.edge), (EventKind::SimplicityViolation, (2, 3)));
        assert_eq!(tr.truncated_at, Some(int(1)));
        assert!(tr.end.is_none());
    }

    #[test]
    fn target_equals_vertex() {
        let h = fixtures::hex_h();
        assert_eq!(move_vertex(&h, 1, Point::from_ints(2, 1)).unwrap_err(), Error::TargetEqualsVertex(2));
    }

    #[test]
    fn wiggle_is_not_monotone() {
        let h = fixtures::hex_h();
        let chain = run_chain(&h, &[(1, Point::from_ints(2, -1)), (1, Point::from_ints(2, 1))]).unwrap();
        let r = is_monotone_chain(&chain).unwrap();
        assert!(!r.monotone);
        assert_eq!(r.first_violation, Some((1, 0)));
        assert_eq!(chain[1].events[0].kind, EventKind::VisibilityLoss);
    }
}
