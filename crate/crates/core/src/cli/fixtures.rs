//! Polygons shipped with the crate.

use crate::geometry::Polygon;

use super::format::{parse, FormatError};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub file_name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

/// The record 32-gon exactly as published: one `x & y \\` row per vertex.
pub const TABLE2_SOURCE: &str = include_str!("../../fixtures/table2.tex");

/// Same coordinates as [`TABLE2_SOURCE`], as two-column text.
pub const TRIACONTADIGON_COLUMNS: &str = include_str!("../../fixtures/triacontadigon.txt");

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "triacontadigon",
        file_name: "triacontadigon.json",
        description: "longest-perimeter small 32-gon found so far (published coordinates)",
        text: include_str!("../../fixtures/triacontadigon.json"),
    },
    Fixture {
        name: "regular_pentagon",
        file_name: "regular_pentagon.json",
        description: "regular small pentagon, optimal for n = 5",
        text: include_str!("../../fixtures/regular_pentagon.json"),
    },
    Fixture {
        name: "regular_triangle",
        file_name: "regular_triangle.json",
        description: "equilateral triangle of side 1",
        text: include_str!("../../fixtures/regular_triangle.json"),
    },
];

/// Look a fixture up by name, with or without a `.json` or `.txt` extension.
pub fn find(name: &str) -> Option<&'static Fixture> {
    let stem = name
        .strip_suffix(".json")
        .or_else(|| name.strip_suffix(".txt"))
        .unwrap_or(name);
    FIXTURES.iter().find(|f| f.name == stem)
}

pub fn load(name: &str) -> Option<Result<Polygon, FormatError>> {
    find(name).map(|f| parse(f.text))
}
