//! Deterministic SVG rendering of instances and trees.
//!
//! Output bytes depend only on the input geometry: fixed canvas, fixed
//! palette, coordinates printed with three decimals, and every element
//! emitted in a stable order (edges, then crossing marks, then points by
//! id). Reruns therefore produce identical files, which the golden-fixture
//! test relies on.

use std::path::Path;

use bichroma::crossing::crossing_pairs;
use bichroma::geom::ColoredPoint;
use bichroma::minbst::ColoredTree;

use crate::error::{CliError, CliResult};

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;
const MARKER: f64 = 5.0;

/// Okabe–Ito color-blind safe palette. Color 0 renders in vermillion
/// ("red"), color 1 in blue; further colors cycle through the rest.
const PALETTE: [&str; 8] = [
    "#d55e00", "#0072b2", "#009e73", "#e69f00", "#56b4e9", "#cc79a7", "#f0e442", "#000000",
];

fn fill_for(color: u32) -> &'static str {
    PALETTE[color as usize % PALETTE.len()]
}

struct Canvas {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Canvas {
    fn fit(points: &[ColoredPoint]) -> Canvas {
        let min_x = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let max_x = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        let min_y = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        let max_y = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
        let extent = (max_x - min_x).max(max_y - min_y).max(1e-9);
        Canvas {
            min_x,
            min_y,
            scale: (CANVAS - 2.0 * MARGIN) / extent,
        }
    }

    /// Maps a data point to pixels; the y axis is flipped so larger y
    /// renders higher, matching the usual mathematical orientation.
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.min_x) * self.scale,
            CANVAS - MARGIN - (y - self.min_y) * self.scale,
        )
    }
}

/// Renders an instance and, when given, a tree over it. `mark_crossings`
/// adds an × at every proper crossing of tree edges.
pub fn render_svg(
    points: &[ColoredPoint],
    tree: Option<&ColoredTree>,
    mark_crossings: bool,
) -> CliResult<String> {
    if points.is_empty() {
        return Err(CliError::Input("cannot render an empty instance".into()));
    }
    let canvas = Canvas::fit(points);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" \
         viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    out.push_str(&format!(
        "  <rect width=\"{c}\" height=\"{c}\" fill=\"#ffffff\"/>\n",
        c = CANVAS
    ));

    if let Some(tree) = tree {
        for i in 0..tree.edges().len() {
            let (a, b) = tree.edge_endpoints(i);
            let (x1, y1) = canvas.px(a.x, a.y);
            let (x2, y2) = canvas.px(b.x, b.y);
            out.push_str(&format!(
                "  <line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" \
                 stroke=\"#555555\" stroke-width=\"1.5\"/>\n"
            ));
        }
        if mark_crossings {
            for (i, j) in crossing_pairs(tree)? {
                if let Some((cx, cy)) = intersection_point(tree, i, j) {
                    let (px, py) = canvas.px(cx, cy);
                    let r = MARKER;
                    out.push_str(&format!(
                        "  <path d=\"M {x1:.3} {y1:.3} L {x2:.3} {y2:.3} M {x3:.3} {y3:.3} \
                         L {x4:.3} {y4:.3}\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n",
                        x1 = px - r,
                        y1 = py - r,
                        x2 = px + r,
                        y2 = py + r,
                        x3 = px - r,
                        y3 = py + r,
                        x4 = px + r,
                        y4 = py - r,
                    ));
                }
            }
        }
    }

    let mut ordered: Vec<&ColoredPoint> = points.iter().collect();
    ordered.sort_by_key(|p| p.id);
    for p in ordered {
        let (x, y) = canvas.px(p.x, p.y);
        let fill = fill_for(p.color);
        match p.color {
            0 => out.push_str(&format!(
                "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{MARKER}\" fill=\"{fill}\"/>\n"
            )),
            1 => out.push_str(&format!(
                "  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{w}\" height=\"{w}\" fill=\"{fill}\"/>\n",
                x - MARKER,
                y - MARKER,
                w = 2.0 * MARKER
            )),
            _ => out.push_str(&format!(
                "  <polygon points=\"{x:.3},{:.3} {:.3},{y:.3} {x:.3},{:.3} {:.3},{y:.3}\" \
                 fill=\"{fill}\"/>\n",
                y - 1.4 * MARKER,
                x + 1.4 * MARKER,
                y + 1.4 * MARKER,
                x - 1.4 * MARKER,
            )),
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Intersection point of two crossing tree edges. The edges properly cross,
/// so the denominator is nonzero; plain f64 arithmetic is fine for a
/// cosmetic mark.
fn intersection_point(tree: &ColoredTree, i: usize, j: usize) -> Option<(f64, f64)> {
    let (a, b) = tree.edge_endpoints(i);
    let (c, d) = tree.edge_endpoints(j);
    let (r_x, r_y) = (b.x - a.x, b.y - a.y);
    let (s_x, s_y) = (d.x - c.x, d.y - c.y);
    let denom = r_x * s_y - r_y * s_x;
    if denom == 0.0 {
        return None;
    }
    let t = ((c.x - a.x) * s_y - (c.y - a.y) * s_x) / denom;
    Some((a.x + t * r_x, a.y + t * r_y))
}

pub fn write_svg(
    points: &[ColoredPoint],
    tree: Option<&ColoredTree>,
    mark_crossings: bool,
    path: &Path,
) -> CliResult<()> {
    let body = render_svg(points, tree, mark_crossings)?;
    std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
