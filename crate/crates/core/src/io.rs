//! JSON input/output for domains, metrics, and cube families: exact rational
//! coordinates (as `"p/q"` strings or plain JSON numbers), schema errors that
//! carry a JSON-pointer path, and atomic file writes.

use crate::admissible::CubeFamily;
use crate::error::{Error, Result};
use crate::geometry::{DomainMetrics, RatBox, RectilinearDomain};
use crate::rational::{parse_rational, rat_from_f64, Rat};
use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::path::Path;

fn schema(ptr: &str, msg: impl Into<String>) -> Error {
    Error::schema(ptr, msg.into())
}

/// One coordinate: a JSON number (taken at its exact binary value) or a
/// string `"p/q"` / `"3.25"` parsed as an exact rational.
fn value_to_rat(v: &Value, ptr: &str) -> Result<Rat> {
    match v {
        Value::Number(num) => {
            let f = num
                .as_f64()
                .ok_or_else(|| schema(ptr, "number out of range"))?;
            rat_from_f64(f).map_err(|e| schema(ptr, e.to_string()))
        }
        Value::String(s) => parse_rational(s).map_err(|e| schema(ptr, e.to_string())),
        _ => Err(schema(ptr, "expected a number or a rational string \"p/q\"")),
    }
}

fn field<'v>(v: &'v Value, name: &str, ptr: &str) -> Result<&'v Value> {
    v.get(name)
        .ok_or_else(|| schema(ptr, format!("missing field {name:?}")))
}

fn as_array<'v>(v: &'v Value, ptr: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(ptr, "expected an array"))
}

fn as_u64(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| schema(ptr, "expected a nonnegative integer"))
}

fn as_f64(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| schema(ptr, "expected a number"))
}

fn rat_vec(v: &Value, ptr: &str, n: Option<usize>) -> Result<Vec<Rat>> {
    let arr = as_array(v, ptr)?;
    if let Some(n) = n {
        if arr.len() != n {
            return Err(schema(ptr, format!("expected {n} coordinates, got {}", arr.len())));
        }
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| value_to_rat(x, &format!("{ptr}/{i}")))
        .collect()
}

fn parse_box(v: &Value, ptr: &str, n: usize) -> Result<RatBox> {
    let origin = rat_vec(field(v, "origin", ptr)?, &format!("{ptr}/origin"), Some(n))?;
    let sides = rat_vec(field(v, "sides", ptr)?, &format!("{ptr}/sides"), Some(n))?;
    RatBox::new(origin, sides).map_err(|e| schema(ptr, e.to_string()))
}

/// Parse a domain document: `{"n": 2, "boxes": [{"origin": [...], "sides":
/// [...]}, ...], "removed": [...]}` (the `removed` field is optional).
pub fn parse_domain_json(text: &str) -> Result<RectilinearDomain> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let n = as_u64(field(&v, "n", "")?, "/n")? as usize;
    if n == 0 || n > 16 {
        return Err(schema("/n", "dimension must lie in 1..=16"));
    }
    let boxes_v = as_array(field(&v, "boxes", "")?, "/boxes")?;
    if boxes_v.is_empty() {
        return Err(schema("/boxes", "at least one box is required"));
    }
    let mut boxes = Vec::with_capacity(boxes_v.len());
    for (i, b) in boxes_v.iter().enumerate() {
        boxes.push(parse_box(b, &format!("/boxes/{i}"), n)?);
    }
    let mut removed = Vec::new();
    if let Some(rv) = v.get("removed") {
        if !rv.is_null() {
            for (i, b) in as_array(rv, "/removed")?.iter().enumerate() {
                removed.push(parse_box(b, &format!("/removed/{i}"), n)?);
            }
        }
    }
    RectilinearDomain::new(boxes, removed)
}

fn rat_to_value(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Serialize a domain with exact `"p/q"` coordinates (round-trips losslessly
/// through [`parse_domain_json`]).
pub fn domain_to_json(d: &RectilinearDomain) -> Value {
    let box_json = |b: &RatBox| {
        serde_json::json!({
            "origin": b.origin().iter().map(rat_to_value).collect::<Vec<_>>(),
            "sides": b.sides().iter().map(rat_to_value).collect::<Vec<_>>(),
        })
    };
    serde_json::json!({
        "n": d.n(),
        "boxes": d.boxes().iter().map(box_json).collect::<Vec<_>>(),
        "removed": d.removed().iter().map(box_json).collect::<Vec<_>>(),
    })
}

/// Parse a metrics document with user-supplied geometric scalars:
/// `{"n", "volume", "surface", "diameter", "width", "r_in", "c_lip",
/// "mar_sides"?}`. The values are cross-validated and marked as assumed.
pub fn parse_metrics_json(text: &str) -> Result<DomainMetrics> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let n = as_u64(field(&v, "n", "")?, "/n")? as usize;
    let get = |name: &str| -> Result<f64> {
        as_f64(field(&v, name, "")?, &format!("/{name}"))
    };
    let mar_sides = match v.get("mar_sides") {
        Some(ms) if !ms.is_null() => Some(
            as_array(ms, "/mar_sides")?
                .iter()
                .enumerate()
                .map(|(i, x)| as_f64(x, &format!("/mar_sides/{i}")))
                .collect::<Result<Vec<f64>>>()?,
        ),
        _ => None,
    };
    DomainMetrics::from_values(
        n,
        get("volume")?,
        get("surface")?,
        get("diameter")?,
        get("width")?,
        get("r_in")?,
        get("c_lip")?,
        mar_sides,
    )
}

/// Parse a cube-family document (`{"n", "cubes": [{"side", "count",
/// "origins"?}], "tail_bound"}`) and validate it.
pub fn parse_family_json(text: &str) -> Result<CubeFamily> {
    let fam: CubeFamily = serde_json::from_str(text)
        .map_err(|e| schema("", format!("invalid cube-family JSON: {e}")))?;
    fam.validate()?;
    Ok(fam)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn read_domain(path: impl AsRef<Path>) -> Result<RectilinearDomain> {
    parse_domain_json(&read_text(path.as_ref())?)
}

pub fn read_metrics(path: impl AsRef<Path>) -> Result<DomainMetrics> {
    parse_metrics_json(&read_text(path.as_ref())?)
}

pub fn read_family(path: impl AsRef<Path>) -> Result<CubeFamily> {
    parse_family_json(&read_text(path.as_ref())?)
}

/// Write a JSON document atomically: serialize to a sibling temporary file,
/// then rename over the destination so readers never observe a torn file.
pub fn write_json_atomic(path: impl AsRef<Path>, value: &impl Serialize) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invalid(format!("serialization failed: {e}")))?;
    let tmp_name = format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id()
    );
    let tmp = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(d) => d.join(&tmp_name),
        None => std::path::PathBuf::from(&tmp_name),
    };
    fs::write(&tmp, text.as_bytes())
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::invalid(format!("cannot move into place {}: {e}", path.display()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn domain_parses_numbers_and_rational_strings() {
        let text = r#"{
            "n": 2,
            "boxes": [
                {"origin": [0, "0"], "sides": ["1/3", 0.5]},
                {"origin": ["2", 0], "sides": [1, 1]}
            ]
        }"#;
        let d = parse_domain_json(text).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.boxes().len(), 2);
        assert_eq!(d.boxes()[0].sides()[0], rat(1, 3));
        // 0.5 is an exact dyadic.
        assert_eq!(d.boxes()[0].sides()[1], rat(1, 2));
    }

    #[test]
    fn schema_errors_carry_json_pointers() {
        let bad = r#"{"n": 2, "boxes": [{"origin": [0, 0], "sides": ["1/3", "x"]}]}"#;
        match parse_domain_json(bad) {
            Err(Error::Schema { pointer, .. }) => {
                assert_eq!(pointer, "/boxes/0/sides/1");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
        let missing = r#"{"n": 2, "boxes": [{"origin": [0, 0]}]}"#;
        match parse_domain_json(missing) {
            Err(Error::Schema { pointer, message }) => {
                assert_eq!(pointer, "/boxes/0");
                assert!(message.contains("sides"));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
        let bad_dim = r#"{"n": 2, "boxes": [{"origin": [0], "sides": [1]}]}"#;
        match parse_domain_json(bad_dim) {
            Err(Error::Schema { pointer, .. }) => {
                assert_eq!(pointer, "/boxes/0/origin");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn domain_round_trips_exactly() {
        let text = r#"{
            "n": 3,
            "boxes": [{"origin": ["1/7", "2/3", 0], "sides": ["22/7", "1/9", 2]}],
            "removed": []
        }"#;
        let d = parse_domain_json(text).unwrap();
        let v = domain_to_json(&d);
        let d2 = parse_domain_json(&v.to_string()).unwrap();
        assert_eq!(d.boxes()[0].origin(), d2.boxes()[0].origin());
        assert_eq!(d.boxes()[0].sides(), d2.boxes()[0].sides());
    }

    #[test]
    fn metrics_parse_and_validate() {
        let text = r#"{
            "n": 2, "volume": 3.14159, "surface": 6.28318,
            "diameter": 2.0, "width": 2.0, "r_in": 1.0, "c_lip": 1.5,
            "mar_sides": [2.0, 2.0]
        }"#;
        let m = parse_metrics_json(text).unwrap();
        assert_eq!(m.n, 2);
        assert!(m.has_mar());
        assert!(!m.assumed.is_empty());
        let bad = r#"{
            "n": 2, "volume": 1.0, "surface": 4.0,
            "diameter": 1.0, "width": 2.0, "r_in": 0.5, "c_lip": 1.0
        }"#;
        assert!(parse_metrics_json(bad).is_err());
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = std::env::temp_dir().join(format!("wc-io-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("domain.json");
        let d = RectilinearDomain::from_box_sides(&[1.0, 0.5]).unwrap();
        write_json_atomic(&path, &domain_to_json(&d)).unwrap();
        let d2 = read_domain(&path).unwrap();
        assert_eq!(d2.boxes()[0].sides(), d.boxes()[0].sides());
        // Overwrite works and leaves no temp files behind.
        write_json_atomic(&path, &domain_to_json(&d2)).unwrap();
        let leftovers: Vec<_> = fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
            .collect();
        assert!(leftovers.is_empty());
        fs::remove_dir_all(&dir).ok();
    }
}
