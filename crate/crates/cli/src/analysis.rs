//! Request-level composition of the core modules, shared by the CLI and the service.

use std::time::Instant;

use serde_json::{json, Map, Value};
use thiserror::Error;

use polyassoc_core::complex::{build_complex, enumerate_triangulations, flip_graph, theta_complex, ComplexKP};
use polyassoc_core::deformation::{
    is_monotone_chain, move_vertex, rank, star_deformation_along, star_deformation_report_along, StarPath, Trajectory,
    V_ISOTOPY_NOTE,
};
use polyassoc_core::io::{parse_region, point_to_json, region_to_json};
use polyassoc_core::num::{format_rational, parse_rational, rational_from_json};
use polyassoc_core::realization::{realize, secondary_polytope_summary};
use polyassoc_core::visibility::visibility_graph;
use polyassoc_core::{geom::ValidateOptions, Point, Region, DEFAULT_CAP};

pub const CAP_ENV: &str = "POLYASSOC_CAP";

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] polyassoc_core::Error),
    #[error("unknown product {0:?}")]
    UnknownProduct(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl AppError {
    pub fn kind(&self) -> &'static str {
        match self {
            AppError::Core(e) => e.kind(),
            AppError::UnknownProduct(_) => "UnknownProduct",
            AppError::Usage(_) => "UsageError",
            AppError::Io(_) => "IoError",
        }
    }

    /// 2 for invalid input, 3 for an exceeded cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(polyassoc_core::Error::RegionTooLarge { .. }) => 3,
            AppError::Core(e) if e.is_validation() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    Visibility,
    Complex,
    FlipGraph,
    Realize,
    Secondary,
    Theta,
    Rank,
}

impl Product {
    pub const ALL: [Product; 7] = [
        Product::Visibility,
        Product::Complex,
        Product::FlipGraph,
        Product::Realize,
        Product::Secondary,
        Product::Theta,
        Product::Rank,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Product::Visibility => "visibility",
            Product::Complex => "complex",
            Product::FlipGraph => "flipgraph",
            Product::Realize => "realize",
            Product::Secondary => "secondary",
            Product::Theta => "theta",
            Product::Rank => "rank",
        }
    }

    pub fn parse(name: &str) -> Result<Product> {
        Product::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| AppError::UnknownProduct(name.to_string()))
    }
}

/// Comma-separated product names; duplicates are dropped.
pub fn parse_products(list: &str) -> Result<Vec<Product>> {
    let mut out: Vec<Product> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let p = Product::parse(name)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(AppError::Usage("no products requested".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Options {
    pub cap: usize,
    /// Root edge as 1-based labels.
    pub root: Option<(usize, usize)>,
    /// Single-threaded and without timing metadata, so output is byte-for-byte reproducible.
    pub deterministic: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, root: None, deterministic: false }
    }
}

/// An explicit cap wins, then `POLYASSOC_CAP`, then the library default.
pub fn resolve_cap(explicit: Option<usize>) -> Result<usize> {
    if let Some(c) = explicit {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => {
            v.trim().parse().map_err(|_| AppError::Usage(format!("{CAP_ENV} must be a positive integer, got {v:?}")))
        }
        Err(_) => Ok(DEFAULT_CAP),
    }
}

pub fn parse_root(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(AppError::Usage(format!("root must be two labels I,J, got {text:?}"))),
        },
        _ => Err(AppError::Usage(format!("root must be two labels I,J, got {text:?}"))),
    }
}

pub fn parse_point(text: &str) -> Result<Point> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok(Point::new(parse_rational(x)?, parse_rational(y)?)),
        _ => Err(AppError::Usage(format!("point must be X,Y, got {text:?}"))),
    }
}

/// `L:X,Y`: move vertex label L to (X, Y).
pub fn parse_move(text: &str) -> Result<(usize, Point)> {
    let (label, point) =
        text.split_once(':').ok_or_else(|| AppError::Usage(format!("move must be L:X,Y, got {text:?}")))?;
    let label = label.trim().parse().map_err(|_| AppError::Usage(format!("bad vertex label in {text:?}")))?;
    Ok((label, parse_point(point)?))
}

pub fn parse_star_path(name: &str) -> Result<StarPath> {
    match name {
        "reciprocal" => Ok(StarPath::Reciprocal),
        "linear" => Ok(StarPath::Linear),
        other => Err(AppError::Usage(format!("path must be reciprocal or linear, got {other:?}"))),
    }
}

pub fn read_region(text: &str) -> Result<Region> {
    let v: Value = serde_json::from_str(text).map_err(|e| polyassoc_core::Error::Parse(e.to_string()))?;
    Ok(parse_region(&v, ValidateOptions::default())?)
}

pub fn json_point(v: &Value) -> Result<Point> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| polyassoc_core::Error::Parse(format!("expected [x, y], got {v}")))?;
    Ok(Point::new(rational_from_json(&pair[0])?, rational_from_json(&pair[1])?))
}

fn root_edge(region: &Region, root: Option<(usize, usize)>) -> Result<Option<(usize, usize)>> {
    root.map(|(a, b)| Ok((region.check_label(a)?, region.check_label(b)?))).transpose()
}

/// Runs `f` on a single-threaded pool in deterministic mode.
pub fn with_threads<T: Send>(deterministic: bool, f: impl FnOnce() -> T + Send) -> T {
    if !deterministic {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Hasse diagram of the face poset; arrows point from a face to the faces on its boundary.
pub fn complex_dot(k: &ComplexKP) -> String {
    let mut out = String::from("digraph K {\n");
    for f in 0..k.faces().len() {
        let label: Vec<String> = k.diagonals_of(f).iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("  {} [label=\"{}\"];\n", f + 1, label.join(" ")));
    }
    for &(a, b) in k.covers() {
        out.push_str(&format!("  {} -> {};\n", a + 1, b + 1));
    }
    out.push_str("}\n");
    out
}

fn product_payload(region: &Region, product: Product, opts: &Options, out: &mut Map<String, Value>) -> Result<()> {
    let root = root_edge(region, opts.root)?;
    match product {
        Product::Visibility => {
            out.insert("visibility".into(), visibility_graph(region).to_json());
        }
        Product::Complex => {
            let k = build_complex(region, opts.cap)?;
            out.insert("complex".into(), k.to_json());
            out.insert("fVector".into(), json!(k.f_vector()));
        }
        Product::FlipGraph => {
            out.insert("flipgraph".into(), flip_graph(region, opts.cap)?.to_json());
        }
        Product::Realize => {
            out.insert("realize".into(), realize(region, root, opts.cap)?.to_json());
        }
        Product::Secondary => {
            out.insert("secondary".into(), secondary_polytope_summary(region, root, opts.cap)?.to_json());
        }
        Product::Theta => {
            out.insert("theta".into(), theta_complex(region, opts.cap)?.homology_json());
        }
        Product::Rank => {
            let r = rank(region);
            out.insert("rank".into(), json!(r.rank));
            out.insert("rankBounds".into(), json!({ "min": r.min, "max": r.max, "height": r.height }));
        }
    }
    Ok(())
}

/// One JSON object with the polygon echo, one entry per product, and (unless
/// deterministic) wall-clock milliseconds per product under `timing`.
pub fn analyze(region: &Region, products: &[Product], opts: &Options) -> Result<Value> {
    with_threads(opts.deterministic, || {
        let mut out = Map::new();
        out.insert("polygon".into(), region_to_json(region));
        let mut timing = Map::new();
        for &p in products {
            let start = Instant::now();
            product_payload(region, p, opts, &mut out)?;
            timing.insert(p.name().into(), json!(start.elapsed().as_secs_f64() * 1000.0));
        }
        if !opts.deterministic {
            out.insert("timing".into(), Value::Object(timing));
        }
        Ok(Value::Object(out))
    })
}

pub fn triangulations_json(region: &Region, cap: usize) -> Result<Value> {
    let all = enumerate_triangulations(region, cap)?;
    let lists: Vec<Vec<[usize; 2]>> = all.iter().map(|t| t.iter().map(|d| d.labels()).collect()).collect();
    Ok(json!({ "count": lists.len(), "triangulations": lists }))
}

/// Event log of consecutive single-vertex moves (labels are 1-based). A move that hits a
/// simplicity violation ends the log there instead of failing.
pub fn move_log(region: &Region, moves: &[(usize, Point)]) -> Result<Value> {
    if moves.is_empty() {
        return Err(AppError::Usage("at least one move is required".into()));
    }
    let mut current = region.clone();
    let mut done: Vec<Trajectory> = Vec::new();
    for (i, (label, target)) in moves.iter().enumerate() {
        let v = current.check_label(*label)?;
        let tr = move_vertex(&current, v, target.clone())?;
        if let Some(t) = tr.truncated_at.clone() {
            let rank_start = done.first().map_or(tr.rank_start, |d| d.rank_start);
            let rank_end = tr.rank_end;
            done.push(tr);
            return Ok(json!({
                "moves": done.iter().map(Trajectory::to_json).collect::<Vec<_>>(),
                "monotone": false,
                "rankStart": rank_start,
                "rankEnd": rank_end,
                "truncated": { "move": i + 1, "t": format_rational(&t) },
                "note": V_ISOTOPY_NOTE,
            }));
        }
        let next = match &tr.end {
            Some(p) => Some(p.region().clone()),
            None if i + 1 < moves.len() => {
                return Err(polyassoc_core::Error::BrokenChain { index: i + 1, t: "1".into() }.into());
            }
            None => None,
        };
        done.push(tr);
        if let Some(r) = next {
            current = r;
        }
    }
    Ok(is_monotone_chain(&done)?.to_json())
}

/// Star deformation report plus the polygon at each sampled time.
pub fn star_log(region: &Region, center: Option<Point>, path: StarPath) -> Result<Value> {
    let report = star_deformation_report_along(region, center.clone(), path)?;
    let frames = report
        .samples
        .iter()
        .map(|(t, r)| {
            let p = star_deformation_along(region, t, Some(report.center.clone()), path)?;
            Ok(json!({ "t": format_rational(t), "rank": r, "polygon": region_to_json(&p) }))
        })
        .collect::<Result<Vec<Value>>>()?;
    let mut v = report.to_json();
    v["frames"] = Value::Array(frames);
    if let Some(c) = &center {
        v["requestedCenter"] = point_to_json(c);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyassoc_core::fixtures;

    #[test]
    fn product_names() {
        assert_eq!(parse_products("rank, visibility,rank").unwrap(), vec![Product::Rank, Product::Visibility]);
        assert_eq!(parse_products("rank,bogus").unwrap_err().kind(), "UnknownProduct");
        assert!(parse_products(" , ").is_err());
        for p in Product::ALL {
            assert_eq!(Product::parse(p.name()).unwrap(), p);
        }
    }

    #[test]
    fn flag_values() {
        assert_eq!(parse_root("4,5").unwrap(), (4, 5));
        assert!(parse_root("4").is_err());
        let (v, p) = parse_move("2:2,-1").unwrap();
        assert_eq!((v, p), (2, Point::from_ints(2, -1)));
        assert_eq!(
            parse_point("1/2, 3").unwrap(),
            Point::new(polyassoc_core::num::ratio(1, 2), polyassoc_core::num::int(3))
        );
        assert!(parse_move("2,2,-1").is_err());
        assert!(parse_star_path("spiral").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(AppError::from(polyassoc_core::Error::RegionTooLarge { cap: 1, reached: 2 }).exit_code(), 3);
        assert_eq!(AppError::from(polyassoc_core::Error::NotStar).exit_code(), 2);
        assert_eq!(AppError::from(polyassoc_core::Error::CertificateNotFound { doublings: 64 }).exit_code(), 1);
        assert_eq!(AppError::Usage("x".into()).exit_code(), 1);
    }

    #[test]
    fn analyze_is_deterministic() {
        let hex = fixtures::convex_polygon(6);
        let opts = Options { deterministic: true, ..Options::default() };
        let a = analyze(&hex, &Product::ALL, &opts).unwrap();
        assert_eq!(a["rank"], 15);
        assert!(a.get("timing").is_none());
        let echo = read_region(&a["polygon"].to_string()).unwrap();
        assert_eq!(analyze(&echo, &Product::ALL, &opts).unwrap().to_string(), a.to_string());
    }

    #[test]
    fn root_labels_are_checked() {
        let opts = Options { root: Some((4, 9)), ..Options::default() };
        let err = analyze(&fixtures::convex_polygon(5), &[Product::Realize], &opts).unwrap_err();
        assert_eq!(err.kind(), "InvalidLabel");
    }

    #[test]
    fn move_logs() {
        let h = fixtures::hex_h();
        let log = move_log(&h, &[(2, Point::from_ints(2, -1)), (5, Point::from_ints(2, 5))]).unwrap();
        assert_eq!(log["monotone"], true);
        assert_eq!((log["rankStart"].clone(), log["rankEnd"].clone()), (json!(13), json!(15)));
        // crossing the opposite edge stops the log with a simplicity event
        let sq = fixtures::unit_square();
        let log = move_log(&sq, &[(1, Point::from_ints(4, 3))]).unwrap();
        assert_eq!(log["monotone"], false);
        assert_eq!(log["truncated"]["move"], 1);
        assert!(move_log(&sq, &[]).is_err());
    }

    #[test]
    fn star_frames() {
        let v = star_log(&fixtures::hex_h(), Some(Point::from_ints(2, 2)), StarPath::Reciprocal).unwrap();
        let frames = v["frames"].as_array().unwrap();
        assert_eq!(frames.first().unwrap()["rank"], 13);
        assert_eq!(frames.last().unwrap()["rank"], 15);
        assert_eq!(v["losses"], 0);
    }
}
