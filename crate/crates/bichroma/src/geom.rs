//! Primitive types and exact planar predicates.
//!
//! All orientation decisions are made with adaptive-precision arithmetic
//! (Shewchuk's predicates via the `robust` crate), so the combinatorial
//! structure computed downstream — crossings, hulls, visibility — is exact
//! for `f64` inputs. Distances are ordinary floating point; they only enter
//! through comparisons, where ties are broken by point id.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Color class of a point. Classes are small integers starting at 0; the
/// classical bichromatic setting uses 0 (red) and 1 (blue).
pub type ColorId = u32;

/// A point in the plane carrying a color class and a stable identifier.
///
/// Identifiers must be unique within a point set. Every algorithm in this
/// crate breaks ties through them, so results depend only on the set of
/// points, never on slice order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColoredPoint {
    pub x: f64,
    pub y: f64,
    pub color: ColorId,
    pub id: usize,
}

impl ColoredPoint {
    pub fn new(x: f64, y: f64, color: ColorId, id: usize) -> Self {
        ColoredPoint { x, y, color, id }
    }

    #[inline]
    pub fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    #[inline]
    pub fn dist_sq(&self, other: &ColoredPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &ColoredPoint) -> f64 {
        self.dist_sq(other).sqrt()
    }
}

/// A closed straight-line segment between two distinct points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: ColoredPoint,
    pub b: ColoredPoint,
}

impl Segment {
    pub fn new(a: ColoredPoint, b: ColoredPoint) -> Self {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(&self.b)
    }
}

/// Sign of the cross product `(q - p) x (r - p)`, computed exactly.
///
/// `+1` means `p, q, r` make a counterclockwise turn, `-1` clockwise,
/// `0` collinear.
#[inline]
pub fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> i8 {
    let det = orient2d(
        Coord { x: p.0, y: p.1 },
        Coord { x: q.0, y: q.1 },
        Coord { x: r.0, y: r.1 },
    );
    if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    }
}

/// Do two segments cross properly, i.e. intersect in exactly one point that
/// is interior to both?
///
/// Sharing an endpoint, touching at an endpoint, or meeting in a T are *not*
/// proper crossings. Collinear segments overlapping in more than one point
/// have no meaningful answer and yield [`Error::DegenerateOverlap`].
pub fn proper_crossing(s: &Segment, t: &Segment) -> Result<bool> {
    crossing_raw(s.a.xy(), s.b.xy(), t.a.xy(), t.b.xy())
}

/// Coordinate-level version of [`proper_crossing`]; used internally to avoid
/// building `Segment` values in hot loops.
pub(crate) fn crossing_raw(
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
    d: (f64, f64),
) -> Result<bool> {
    if a == b || c == d {
        // A degenerate segment has no interior.
        return Ok(false);
    }
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if d1 == 0 && d2 == 0 {
        // All four points collinear: either disjoint, touching in one point,
        // or degenerately overlapping.
        return if collinear_overlap(a, b, c, d) {
            Err(Error::DegenerateOverlap)
        } else {
            Ok(false)
        };
    }
    Ok(d1 * d2 < 0 && d3 * d4 < 0)
}

/// For four collinear points, does segment `ab` overlap segment `cd` in more
/// than a single point?
fn collinear_overlap(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    // Project onto the dominant axis of ab; collinearity makes the order of
    // projections consistent with the order along the line.
    let horizontal = (b.0 - a.0).abs() >= (b.1 - a.1).abs();
    let key = |p: (f64, f64)| if horizontal { p.0 } else { p.1 };
    let (lo1, hi1) = minmax(key(a), key(b));
    let (lo2, hi2) = minmax(key(c), key(d));
    lo1.max(lo2) < hi1.min(hi2)
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Is `w` strictly inside triangle `t0 t1 t2`? Degenerate triangles contain
/// nothing.
pub(crate) fn strictly_inside_triangle(
    t0: (f64, f64),
    t1: (f64, f64),
    t2: (f64, f64),
    w: (f64, f64),
) -> bool {
    let s = orient(t0, t1, t2);
    if s == 0 {
        return false;
    }
    orient(t0, t1, w) == s && orient(t1, t2, w) == s && orient(t2, t0, w) == s
}

/// Convex hull in counterclockwise order, starting at the lexicographically
/// smallest point. Collinear boundary points are dropped, so every returned
/// vertex is a corner. Duplicate coordinates are collapsed to the point with
/// the smallest id.
pub fn convex_hull(points: &[ColoredPoint]) -> Vec<ColoredPoint> {
    let mut pts: Vec<ColoredPoint> = points.to_vec();
    pts.sort_by(|p, q| {
        p.x.total_cmp(&q.x)
            .then(p.y.total_cmp(&q.y))
            .then(p.id.cmp(&q.id))
    });
    pts.dedup_by(|p, q| p.x == q.x && p.y == q.y);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    // Monotone chain: lower hull then upper hull, strict turns only. The
    // upper pass must not pop into the finished lower hull.
    let mut hull: Vec<ColoredPoint> = Vec::with_capacity(2 * n);
    for p in &pts {
        while hull.len() >= 2
            && orient(hull[hull.len() - 2].xy(), hull[hull.len() - 1].xy(), p.xy()) <= 0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2].xy(), hull[hull.len() - 1].xy(), p.xy()) <= 0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    // The upper pass ends back at the lexicographic minimum; drop the
    // duplicate. The lower-then-upper traversal leaves counterclockwise order.
    hull.pop();
    hull
}

/// An axis-parallel rectangle `[x_lo, x_hi] x [y_lo, y_hi]`.
///
/// Quadtree cells treat the rectangle as half-open when bucketing points, but
/// distance and containment queries below use the closed rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl AxisRect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        assert!(
            x_lo < x_hi && y_lo < y_hi,
            "degenerate rectangle [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]"
        );
        AxisRect { x_lo, x_hi, y_lo, y_hi }
    }

    pub fn side_x(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn side_y(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    /// Closed containment.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x_lo <= x && x <= self.x_hi && self.y_lo <= y && y <= self.y_hi
    }

    /// Smallest rectangle covering both operands.
    pub fn union(&self, other: &AxisRect) -> AxisRect {
        AxisRect {
            x_lo: self.x_lo.min(other.x_lo),
            x_hi: self.x_hi.max(other.x_hi),
            y_lo: self.y_lo.min(other.y_lo),
            y_hi: self.y_hi.max(other.y_hi),
        }
    }

    /// Do the two rectangles share a complete side? This is the adjacency
    /// pattern produced by quadtree subdivision (two cells of one square, or
    /// the two halves of a square made from its cells), and it is the only
    /// configuration in which merging parties is defined.
    pub fn shares_full_side(&self, other: &AxisRect) -> bool {
        let vertical = (self.x_hi == other.x_lo || other.x_hi == self.x_lo)
            && self.y_lo == other.y_lo
            && self.y_hi == other.y_hi;
        let horizontal = (self.y_hi == other.y_lo || other.y_hi == self.y_lo)
            && self.x_lo == other.x_lo
            && self.x_hi == other.x_hi;
        vertical || horizontal
    }

    /// Squared Euclidean distance from a point to the closed rectangle;
    /// zero when the point lies inside.
    pub fn distance_sq_to(&self, x: f64, y: f64) -> f64 {
        let dx = if x < self.x_lo {
            self.x_lo - x
        } else if x > self.x_hi {
            x - self.x_hi
        } else {
            0.0
        };
        let dy = if y < self.y_lo {
            self.y_lo - y
        } else if y > self.y_hi {
            y - self.y_hi
        } else {
            0.0
        };
        dx * dx + dy * dy
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        self.distance_sq_to(x, y).sqrt()
    }
}

/// Euclidean distance from `p` to the closed rectangle `rect`.
pub fn dist_point_rect(p: &ColoredPoint, rect: &AxisRect) -> f64 {
    rect.distance_to(p.x, p.y)
}

/// Canonical (low, high) form of an undirected edge on point ids.
#[inline]
pub(crate) fn norm_pair(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Point sets larger than this are spot-checked for collinear triples instead
/// of scanned exhaustively.
pub const GP_FULL_SCAN_LIMIT: usize = 2000;

/// Outcome of a general-position check that did not find a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    /// Whether every triple was examined. When false the input was only
    /// sampled and a violation may have been missed.
    pub exhaustive: bool,
    pub triples_checked: usize,
}

/// Check that a point set is in general position: ids unique, coordinates
/// finite and pairwise distinct, and no three points collinear.
///
/// The collinearity scan is exhaustive for `n <= full_scan_limit` and
/// randomized (but deterministic) above it; callers that depend on the
/// structure theorems should treat a non-exhaustive report as advisory.
pub fn validate_general_position(
    points: &[ColoredPoint],
    full_scan_limit: usize,
) -> Result<GeneralPositionReport> {
    let n = points.len();
    let mut ids: Vec<usize> = points.iter().map(|p| p.id).collect();
    ids.sort_unstable();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidTree(format!("duplicate point id {}", w[0])));
        }
    }
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::GeometryViolation(format!(
                "point {} has a non-finite coordinate",
                p.id
            )));
        }
    }
    // Coincident points: sort by coordinates, compare neighbours.
    let mut by_coord: Vec<&ColoredPoint> = points.iter().collect();
    by_coord.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    for w in by_coord.windows(2) {
        if w[0].x == w[1].x && w[0].y == w[1].y {
            return Err(Error::DuplicatePoint {
                a: w[0].id.min(w[1].id),
                b: w[0].id.max(w[1].id),
            });
        }
    }
    if n < 3 {
        return Ok(GeneralPositionReport { exhaustive: true, triples_checked: 0 });
    }
    if n <= full_scan_limit {
        let mut checked = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    checked += 1;
                    if orient(points[i].xy(), points[j].xy(), points[k].xy()) == 0 {
                        return Err(collinear_error(points, i, j, k));
                    }
                }
            }
        }
        Ok(GeneralPositionReport { exhaustive: true, triples_checked: checked })
    } else {
        // Deterministic spot check; the seed is fixed so repeated runs agree.
        const SAMPLES: usize = 200_000;
        let mut rng = ChaCha8Rng::seed_from_u64(0x67e6_a5c3_9d1b_0f42);
        for _ in 0..SAMPLES {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let k = rng.gen_range(0..n);
            if i == j || j == k || i == k {
                continue;
            }
            if orient(points[i].xy(), points[j].xy(), points[k].xy()) == 0 {
                return Err(collinear_error(points, i, j, k));
            }
        }
        Ok(GeneralPositionReport { exhaustive: false, triples_checked: SAMPLES })
    }
}

fn collinear_error(points: &[ColoredPoint], i: usize, j: usize, k: usize) -> Error {
    let mut ids = [points[i].id, points[j].id, points[k].id];
    ids.sort_unstable();
    Error::CollinearTriple { a: ids[0], b: ids[1], c: ids[2] }
}
