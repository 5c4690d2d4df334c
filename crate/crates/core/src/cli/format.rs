//! Polygon files: a JSON document or bare two-column decimal text.
//!
//! Both writers print coordinates in shortest round-trip form, so
//! `parse(serialize(p))` reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point2, Polygon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, field {field}: {message}")]
    Syntax {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("invalid polygon document at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// The JSON polygon document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonFile {
    pub fn from_vertices(vertices: &[Point2], label: Option<&str>) -> Self {
        Self {
            n: vertices.len(),
            label: label.map(str::to_owned),
            source: None,
            vertices: vertices.iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    /// Check the schema and convert to a polygon (convexity is not checked).
    pub fn into_polygon(self) -> Result<Polygon, FormatError> {
        if self.n != self.vertices.len() {
            return Err(FormatError::Schema(format!(
                "n = {} but {} vertices are listed",
                self.n,
                self.vertices.len()
            )));
        }
        let vertices = self.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
        checked(vertices)
    }
}

fn checked(vertices: Vec<Point2>) -> Result<Polygon, FormatError> {
    if vertices.len() < 3 {
        return Err(FormatError::Schema(format!(
            "a polygon needs at least 3 vertices, found {}",
            vertices.len()
        )));
    }
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(FormatError::Schema(format!("vertex {i} has a non-finite coordinate")));
    }
    Ok(Polygon::new(vertices))
}

/// Parse either format; a document whose first non-blank character is `{` is JSON.
pub fn parse(text: &str) -> Result<Polygon, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_columns(text)
    }
}

pub fn parse_json(text: &str) -> Result<Polygon, FormatError> {
    let file: PolygonFile = serde_json::from_str(text).map_err(|e| FormatError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_polygon()
}

/// One vertex per line as two decimals separated by whitespace; `#` starts a
/// comment line. LaTeX table rows (`x & y \\`) are accepted too.
pub fn parse_columns(text: &str) -> Result<Polygon, FormatError> {
    let mut vertices = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line = line.trim_end_matches("\\\\").replace('&', " ");
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(FormatError::Syntax {
                line: line_no,
                field: fields.len().min(2) + 1,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let mut xy = [0.0; 2];
        for (k, field) in fields.iter().enumerate() {
            xy[k] = field.parse().map_err(|_| FormatError::Syntax {
                line: line_no,
                field: k + 1,
                message: format!("`{field}` is not a decimal number"),
            })?;
        }
        vertices.push(Point2::new(xy[0], xy[1]));
    }
    checked(vertices)
}

pub fn read(path: &Path) -> Result<Polygon, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text)
}

/// Pretty-printed JSON document, one vertex per line.
pub fn to_json(vertices: &[Point2], label: Option<&str>) -> String {
    let file = PolygonFile::from_vertices(vertices, label);
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"n\": {},", file.n);
    if let Some(label) = &file.label {
        let _ = writeln!(out, "  \"label\": {},", serde_json::to_string(label).expect("string"));
    }
    out.push_str("  \"vertices\": [\n");
    for (i, [x, y]) in file.vertices.iter().enumerate() {
        let sep = if i + 1 < file.vertices.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}, {}]{sep}", json_number(*x), json_number(*y));
    }
    out.push_str("  ]\n}\n");
    out
}

fn json_number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite coordinates")
}

/// Two-column text with an optional comment header.
pub fn to_columns(vertices: &[Point2], comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for p in vertices {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

/// Serialize in the format implied by a file name: `.json` for the document,
/// anything else for two-column text.
pub fn serialize_for_path(path: &Path, vertices: &[Point2], label: Option<&str>) -> String {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        to_json(vertices, label)
    } else {
        to_columns(vertices, label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_with_comments_and_latex() {
        let p = parse("# header\n0.5 0.\n\n 1 & 0 \\\\\n0 1\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.vertices[0], Point2::new(0.5, 0.0));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse("0 0\n1 x\n0 1\n"),
            Err(FormatError::Syntax {
                line: 2,
                field: 2,
                message: "`x` is not a decimal number".into()
            })
        );
        assert!(matches!(parse("0 0 0\n"), Err(FormatError::Syntax { line: 1, .. })));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse("0 0\n1 0\n"), Err(FormatError::Schema(_))));
        let doc = r#"{"n": 4, "vertices": [[0, 0], [1, 0], [0, 1]]}"#;
        assert!(matches!(parse(doc), Err(FormatError::Schema(_))));
        assert!(matches!(parse("{\"n\": 3,"), Err(FormatError::Json { .. })));
    }

    #[test]
    fn json_round_trip() {
        let v = vec![
            Point2::new(0.1, 0.0),
            Point2::new(1.0 / 3.0, -2e-17),
            Point2::new(-0.6180339887498949, 1e300),
        ];
        let back = parse(&to_json(&v, Some("a \"label\""))).unwrap();
        assert_eq!(back.vertices, v);
        let back = parse(&to_columns(&v, Some("two\nlines"))).unwrap();
        assert_eq!(back.vertices, v);
    }
}
