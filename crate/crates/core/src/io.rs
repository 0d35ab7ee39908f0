//! Polygon JSON: `{"vertices": [[x, y], ...], "holes": [[[x, y], ...], ...]}`.
//!
//! Coordinates are JSON integers or strings holding exact decimals or fractions.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{GeneralizedPolygon, Point, Polygon, Region, ValidateOptions};
use crate::num::{rational_from_json, rational_to_json};

fn parse_point(v: &Value) -> Result<Point> {
    let pair =
        v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse(format!("expected [x, y], got {v}")))?;
    Ok(Point::new(rational_from_json(&pair[0])?, rational_from_json(&pair[1])?))
}

fn parse_cycle(v: &Value) -> Result<Vec<Point>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array of points".into()))?.iter().map(parse_point).collect()
}

/// Reads the raw cycles (outer first) without validating them.
pub fn parse_cycles(v: &Value) -> Result<Vec<Vec<Point>>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("polygon must be a JSON object".into()))?;
    let outer = obj.get("vertices").ok_or_else(|| Error::Parse("missing \"vertices\"".into()))?;
    let mut cycles = vec![parse_cycle(outer)?];
    match obj.get("holes") {
        None | Some(Value::Null) => {}
        Some(Value::Array(holes)) => {
            for h in holes {
                cycles.push(parse_cycle(h)?);
            }
        }
        Some(other) => return Err(Error::Parse(format!("\"holes\" must be an array, got {other}"))),
    }
    Ok(cycles)
}

pub fn parse_region(v: &Value, options: ValidateOptions) -> Result<Region> {
    let mut cycles = parse_cycles(v)?;
    let outer = cycles.remove(0);
    Ok(GeneralizedPolygon::with_options(outer, cycles, options)?.into_region())
}

/// A polygon without holes; holes in the input give `HolesNotSupported`.
pub fn parse_polygon(v: &Value) -> Result<Polygon> {
    let cycles = parse_cycles(v)?;
    if cycles.len() > 1 {
        return Err(Error::HolesNotSupported);
    }
    Polygon::new(cycles.into_iter().next().unwrap())
}

pub fn region_from_str(text: &str, options: ValidateOptions) -> Result<Region> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parse_region(&v, options)
}

pub fn point_to_json(p: &Point) -> Value {
    json!([rational_to_json(&p.x), rational_to_json(&p.y)])
}

/// Echo of the input: cycles in label order, `holes` omitted when there are none.
pub fn region_to_json(region: &Region) -> Value {
    let cycles = region.cycles_in_label_order();
    let conv = |c: &Vec<Point>| Value::Array(c.iter().map(point_to_json).collect());
    let mut obj = serde_json::Map::new();
    obj.insert("vertices".into(), conv(&cycles[0]));
    if cycles.len() > 1 {
        obj.insert("holes".into(), Value::Array(cycles[1..].iter().map(conv).collect()));
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;

    #[test]
    fn round_trip_with_fractions() {
        let text = r#"{"vertices": [[0, 0], ["7/2", 0], ["3.5", "1/3"], [0, 2]]}"#;
        let r = region_from_str(text, ValidateOptions::default()).unwrap();
        assert_eq!(r.point(2).y, ratio(1, 3));
        let echo = region_to_json(&r);
        assert_eq!(echo, serde_json::json!({"vertices": [[0, 0], ["7/2", 0], ["7/2", "1/3"], [0, 2]]}));
        let again = parse_region(&echo, ValidateOptions::default()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn holes_are_read() {
        let text = r#"{"vertices": [[0,0],[12,0],[12,12],[0,12]], "holes": [[[5,4],[8,5],[6,8]]]}"#;
        let r = region_from_str(text, ValidateOptions::default()).unwrap();
        assert_eq!(r.hole_count(), 1);
        assert!(region_to_json(&r).get("holes").is_some());
        let v: Value = serde_json::from_str(text).unwrap();
        assert_eq!(parse_polygon(&v).unwrap_err(), Error::HolesNotSupported);
    }

    #[test]
    fn malformed_input() {
        let err = region_from_str(r#"{"vertices": [[0, 0], [1]]}"#, ValidateOptions::default()).unwrap_err();
        assert_eq!(err.kind(), "ParseError");
        let err = region_from_str(r#"{"points": []}"#, ValidateOptions::default()).unwrap_err();
        assert_eq!(err.kind(), "ParseError");
    }
}
