//! Instance and tree file formats.
//!
//! Instances are stored as JSON (a `points` array whose order defines the
//! point ids) or CSV (`x,y,color` header, one row per point). Trees are
//! stored as JSON with the point set, the edge list, and the total length.
//! All writers emit deterministic bytes: pretty JSON with a trailing
//! newline, and floats via Rust's shortest round-trip formatting.

use std::collections::BTreeSet;
use std::path::Path;

use bichroma::geom::ColoredPoint;
use bichroma::minbst::ColoredTree;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstancePoint {
    pub x: f64,
    pub y: f64,
    pub color: u32,
}

/// Provenance attached by generators; absent for hand-written files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct InstanceMetadata {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
}

/// An instance on disk: points in id order (the id of a point is its index).
/// Metadata survives JSON round trips but is not part of the CSV format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub points: Vec<InstancePoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<InstanceMetadata>,
}

impl InstanceFile {
    pub fn from_points(points: &[ColoredPoint]) -> Self {
        let mut ordered: Vec<&ColoredPoint> = points.iter().collect();
        ordered.sort_by_key(|p| p.id);
        InstanceFile {
            points: ordered
                .iter()
                .map(|p| InstancePoint {
                    x: p.x,
                    y: p.y,
                    color: p.color,
                })
                .collect(),
            metadata: None,
        }
    }

    /// Converts to library points, validating coordinates and colors.
    ///
    /// Colors must form a contiguous range starting at zero so that color
    /// counts and palette indices line up across tools.
    pub fn into_points(&self) -> CliResult<Vec<ColoredPoint>> {
        if self.points.is_empty() {
            return Err(CliError::Input("instance has no points".into()));
        }
        let mut colors = BTreeSet::new();
        for (i, p) in self.points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(CliError::Input(format!(
                    "point {i} has non-finite coordinates ({}, {})",
                    p.x, p.y
                )));
            }
            colors.insert(p.color);
        }
        let max_color = *colors.iter().next_back().expect("nonempty");
        if colors.len() as u64 != u64::from(max_color) + 1 {
            return Err(CliError::Input(format!(
                "colors must form a contiguous range 0..={max_color}, got {colors:?}"
            )));
        }
        Ok(self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| ColoredPoint {
                x: p.x,
                y: p.y,
                color: p.color,
                id: i,
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,color\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.x, p.y, p.color));
        }
        out
    }

    pub fn from_csv(text: &str) -> CliResult<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let expected = ["x", "y", "color"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(CliError::Input(format!(
                "csv header must be x,y,color, got {}",
                got.join(",")
            )));
        }
        let mut points = Vec::new();
        for record in reader.deserialize() {
            let p: InstancePoint = record?;
            points.push(p);
        }
        Ok(InstanceFile {
            points,
            metadata: None,
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let body = match Format::of(path) {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        };
        std::fs::write(path, body)?;
        Ok(())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        match Format::of(path) {
            Format::Json => Self::from_json(&text),
            Format::Csv => Self::from_csv(&text),
        }
    }
}

/// File format selected by extension; anything that is not `.csv` is JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn of(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// A spanning tree on disk: the instance points, the edges as id pairs,
/// and the total Euclidean length.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TreeFile {
    pub points: Vec<InstancePoint>,
    pub edges: Vec<(usize, usize)>,
    pub total_length: f64,
}

impl TreeFile {
    pub fn from_tree(tree: &ColoredTree) -> Self {
        TreeFile {
            points: InstanceFile::from_points(tree.points()).points,
            edges: tree.edges().to_vec(),
            total_length: tree.total_length(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tree serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the validated tree, re-deriving ids from point order.
    pub fn into_tree(&self) -> CliResult<ColoredTree> {
        let instance = InstanceFile {
            points: self.points.clone(),
            metadata: None,
        };
        let points = instance.into_points()?;
        Ok(ColoredTree::new(points, self.edges.clone())?)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
