//! Coordinate text parsing and report serialization.
//!
//! Points are written "a:b:c" with prime-subfield entries as integers and
//! extension elements as powers of w. Reports serialize to a versioned
//! JSON document or to CSV with one x-column per intersection size up to
//! q+1, so files for different orders are self-describing.

use crate::bits::Mask;
use crate::gf::FieldError;
use crate::plane::Plane;
use crate::search::{ClassificationRecord, ClassificationReport, SizeStatus};
use serde::Serialize;
use serde_json::json;

#[derive(Debug)]
pub enum ParseError {
    Field(FieldError),
    BadTriple(String),
    ZeroTriple(String),
    Empty,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Field(e) => write!(f, "{}", e),
            ParseError::BadTriple(s) => write!(f, "malformed coordinate triple '{}'", s),
            ParseError::ZeroTriple(s) => write!(f, "zero triple '{}' is not a projective point", s),
            ParseError::Empty => write!(f, "no points given"),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<FieldError> for ParseError {
    fn from(e: FieldError) -> Self {
        ParseError::Field(e)
    }
}

/// Parse one "a:b:c" triple into a normalized point id.
pub fn parse_point(plane: &Plane, text: &str) -> Result<u16, ParseError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(ParseError::BadTriple(text.to_string()));
    }
    let mut v = [0u8; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = plane.field.parse_elem(p)?;
    }
    plane.point_from_coords(v).ok_or_else(|| ParseError::ZeroTriple(text.to_string()))
}

/// Parse a comma- or whitespace-separated list of triples into a
/// normalized, deduplicated point set.
pub fn parse_pointset(plane: &Plane, text: &str) -> Result<Mask, ParseError> {
    let mut mask = Mask::EMPTY;
    let mut any = false;
    for tok in text.split(|c: char| c == ',' || c == ';' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        mask.set(parse_point(plane, tok)?);
        any = true;
    }
    if !any {
        return Err(ParseError::Empty);
    }
    Ok(mask)
}

pub fn format_pointset(plane: &Plane, mask: &Mask) -> Vec<String> {
    mask.iter().map(|p| plane.format_point(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportFormat {
    Json,
    Csv,
}

fn record_json(plane: &Plane, r: &ClassificationRecord) -> serde_json::Value {
    json!({
        "size": r.size,
        "points": format_pointset(plane, &r.points),
        "x": r.distribution.x,
        "stab_pgl": r.stab.order_pgl,
        "stab_pgammal": r.stab.order_pgammal,
        "name": r.stab.name,
    })
}

/// Deterministic JSON document for a classification report.
pub fn report_json(plane: &Plane, report: &ClassificationReport) -> serde_json::Value {
    let sizes: Vec<serde_json::Value> = report
        .sizes
        .iter()
        .map(|(s, summary)| {
            json!({
                "size": s,
                "count": summary.count,
                "status": match &summary.status {
                    SizeStatus::Searched => "searched".to_string(),
                    SizeStatus::Infeasible(reason) => format!("infeasible: {}", reason),
                },
            })
        })
        .collect();
    json!({
        "schema": 1,
        "q": report.q,
        "t": report.t,
        "group": report.group.label(),
        "sizes": sizes,
        "records": report.records.iter().map(|r| record_json(plane, r)).collect::<Vec<_>>(),
        "stats": serde_json::to_value(&report.stats).unwrap(),
    })
}

/// CSV rows: size, x_0..x_{q+1}, stab orders, recognized name.
pub fn report_csv(plane: &Plane, report: &ClassificationReport) -> String {
    let q = plane.q as usize;
    let mut out = String::from("size");
    for i in 0..=q + 1 {
        out.push_str(&format!(",x{}", i));
    }
    out.push_str(",stab_pgl,stab_pgammal,name\n");
    for r in &report.records {
        out.push_str(&r.size.to_string());
        for i in 0..=q + 1 {
            out.push_str(&format!(",{}", r.distribution.x.get(i).copied().unwrap_or(0)));
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            r.stab.order_pgl,
            r.stab.order_pgammal,
            r.stab.name.as_deref().unwrap_or("")
        ));
    }
    out
}

/// JSON dump of the incidence structure.
pub fn plane_json(plane: &Plane, what: Option<&str>) -> serde_json::Value {
    let points: Vec<serde_json::Value> = (0..plane.n as u16)
        .map(|p| json!({"id": p, "coords": plane.format_point(p)}))
        .collect();
    let lines: Vec<serde_json::Value> = (0..plane.n as u16)
        .map(|l| {
            let c = plane.line_coeffs(l);
            json!({
                "id": l,
                "coeffs": format!("{}:{}:{}",
                    plane.field.format_elem(c[0]),
                    plane.field.format_elem(c[1]),
                    plane.field.format_elem(c[2])),
                "points": plane.points_on(l),
            })
        })
        .collect();
    let mut doc = json!({
        "schema": 1,
        "q": plane.q,
        "n": plane.n,
        "field": {"p": plane.field.p, "h": plane.field.h, "modulus": plane.field.modulus},
    });
    match what {
        Some("points") => doc["points"] = json!(points),
        Some("lines") => doc["lines"] = json!(lines),
        _ => {
            doc["points"] = json!(points);
            doc["lines"] = json!(lines);
        }
    }
    doc
}
