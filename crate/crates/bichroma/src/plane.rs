//! Crossing-free properly colored trees and the merge rules that build them.
//!
//! The quadtree approximation assembles a plane tree bottom-up from cell
//! "parties": a cell is either empty, monochromatic (bare points of one
//! color), or already carries a plane properly colored tree. Adjacent cells
//! are merged with three rules that never introduce a crossing:
//!
//! * two monochromatic parties of different colors become a cone star
//!   ([`cone_star_tree`]),
//! * two trees are bridged through a visible edge ([`visible_edge`]) seen
//!   from an extreme point of one side,
//! * bare points are attached to a tree one at a time, nearest first
//!   ([`attach_point`]).

use crate::geom::{
    crossing_raw, dist_point_rect, norm_pair, orient, strictly_inside_triangle, AxisRect,
    ColorId, ColoredPoint, convex_hull,
};
use crate::minbst::ColoredTree;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// What a merge party currently holds.
#[derive(Debug, Clone, PartialEq)]
pub enum PartyKind {
    /// No points.
    Empty,
    /// One or more points, all of the given color, no edges yet.
    Mono(ColorId),
    /// At least two points joined by a plane properly colored spanning tree.
    Tree(ColoredTree),
}

/// The state of one rectangular cell during the bottom-up construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeParty {
    kind: PartyKind,
    rect: AxisRect,
    points: Vec<ColoredPoint>,
}

impl MergeParty {
    pub fn empty(rect: AxisRect) -> Self {
        MergeParty { kind: PartyKind::Empty, rect, points: Vec::new() }
    }

    /// A party of bare same-colored points inside `rect`.
    pub fn mono(rect: AxisRect, points: Vec<ColoredPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::GeometryViolation(
                "monochromatic party needs at least one point".into(),
            ));
        }
        let color = points[0].color;
        if points.iter().any(|p| p.color != color) {
            return Err(Error::GeometryViolation(
                "monochromatic party contains mixed colors".into(),
            ));
        }
        let mut points = points;
        points.sort_by_key(|p| p.id);
        check_in_rect(&points, &rect)?;
        Ok(MergeParty { kind: PartyKind::Mono(color), rect, points })
    }

    /// A party already carrying a tree whose points all lie inside `rect`.
    pub fn tree(rect: AxisRect, tree: ColoredTree) -> Result<Self> {
        check_in_rect(tree.points(), &rect)?;
        let points = tree.points().to_vec();
        Ok(MergeParty { kind: PartyKind::Tree(tree), rect, points })
    }

    pub fn kind(&self) -> &PartyKind {
        &self.kind
    }

    pub fn rect(&self) -> &AxisRect {
        &self.rect
    }

    /// All points of the party, sorted by id.
    pub fn points(&self) -> &[ColoredPoint] {
        &self.points
    }

    pub fn edge_count(&self) -> usize {
        match &self.kind {
            PartyKind::Tree(t) => t.edges().len(),
            _ => 0,
        }
    }

    pub fn into_tree(self) -> Option<ColoredTree> {
        match self.kind {
            PartyKind::Tree(t) => Some(t),
            _ => None,
        }
    }
}

fn check_in_rect(points: &[ColoredPoint], rect: &AxisRect) -> Result<()> {
    for p in points {
        if !rect.contains(p.x, p.y) {
            return Err(Error::GeometryViolation(format!(
                "point {} lies outside its party rectangle",
                p.id
            )));
        }
    }
    Ok(())
}

/// Which merge rule fired when two parties were combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergeCase {
    /// No new edges: one side empty, or both monochromatic of one color.
    Trivial,
    /// Two monochromatic parties of different colors; a cone star is built
    /// over the union.
    BothMono,
    /// Two trees bridged by a single new edge.
    TreeTree,
    /// Bare points attached to a tree, nearest first.
    TreeMono,
}

/// Plane properly colored spanning tree on a set with at least two colors:
/// a "cone star".
///
/// The apex is the lexicographically smallest point (a hull vertex). It is
/// joined to every point of a different color; these spokes cut the apex's
/// field of view into cones. Every remaining point of the apex's color lies
/// in one cone and is joined to the spoke endpoint bounding its cone in
/// counterclockwise direction (clockwise for the last, open cone). Spokes
/// only meet at the apex and each other edge stays inside one cone, so the
/// result is plane.
pub fn cone_star_tree(points: &[ColoredPoint]) -> Result<ColoredTree> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if points.iter().all(|p| p.color == points[0].color) {
        return Err(Error::Monochromatic);
    }
    let apex = points
        .iter()
        .min_by(|p, q| {
            p.x.total_cmp(&q.x)
                .then(p.y.total_cmp(&q.y))
                .then(p.id.cmp(&q.id))
        })
        .unwrap();
    let mut others: Vec<&ColoredPoint> =
        points.iter().filter(|p| p.id != apex.id).collect();
    // All other points lie in the open half-plane to the right of the apex
    // (or straight above it), so exact orientation gives a total angular
    // order; under general position no two are collinear with the apex.
    others.sort_by(|u, v| match orient(apex.xy(), u.xy(), v.xy()) {
        1 => std::cmp::Ordering::Less,
        -1 => std::cmp::Ordering::Greater,
        _ => apex
            .dist_sq(u)
            .total_cmp(&apex.dist_sq(v))
            .then(u.id.cmp(&v.id)),
    });
    let spokes: Vec<&ColoredPoint> = others
        .iter()
        .copied()
        .filter(|p| p.color != apex.color)
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    for w in &spokes {
        edges.push(norm_pair(apex.id, w.id));
    }
    for r in others.iter().filter(|p| p.color == apex.color) {
        // First spoke strictly counterclockwise of r, else the last spoke.
        let j = spokes.partition_point(|w| orient(apex.xy(), r.xy(), w.xy()) <= 0);
        let target = spokes.get(j).copied().unwrap_or_else(|| {
            *spokes.last().expect("at least one spoke when two colors exist")
        });
        edges.push(norm_pair(r.id, target.id));
    }
    ColoredTree::new(points.to_vec(), edges)
}

/// The tree edge (with its preferred endpoint) chosen by [`visible_edge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisibleEdge {
    /// The visible edge, as a `(low id, high id)` pair.
    pub edge: (usize, usize),
    /// Endpoint of `edge` to which the query point attaches: it has a color
    /// different from the query's and, among such endpoints of this edge,
    /// is nearest to the query.
    pub attach: usize,
}

/// Find a tree edge fully visible from a point `q` strictly outside the
/// tree's convex hull.
///
/// Edge `ab` is visible from `q` when the closed triangle `qab` touches the
/// tree only in `a`, `b`, and the edge `ab` itself: no other tree vertex
/// lies strictly inside the triangle and no other tree edge crosses the
/// sides `qa`, `qb`. Joining `q` to either endpoint then keeps the drawing
/// plane. Such an edge always exists; among all visible edges the one whose
/// differently-colored attach endpoint is closest to `q` is returned (ties
/// by edge id pair).
pub fn visible_edge(q: &ColoredPoint, tree: &ColoredTree) -> Result<VisibleEdge> {
    if tree.edges().is_empty() {
        return Err(Error::GeometryViolation(
            "visibility needs a tree with at least one edge".into(),
        ));
    }
    if tree.point_by_id(q.id).is_some() {
        return Err(Error::GeometryViolation(format!(
            "query point {} is already a tree vertex",
            q.id
        )));
    }
    ensure_strictly_outside_hull(q, tree)?;

    // Candidate edges ordered by how close their attach endpoint is; the
    // first visible candidate is the global optimum. In well-shaped inputs
    // the nearest candidates are visible, so the quadratic visibility test
    // almost never runs more than a few times.
    let mut candidates: Vec<(f64, (usize, usize), usize)> = Vec::new();
    for &(u, v) in tree.edges() {
        let (pu, pv) = (
            tree.point_by_id(u).unwrap(),
            tree.point_by_id(v).unwrap(),
        );
        let mut best: Option<(f64, usize)> = None;
        for p in [pu, pv] {
            if p.color == q.color {
                continue;
            }
            let d = q.dist_sq(p);
            if best.map_or(true, |(bd, bid)| (d, p.id) < (bd, bid)) {
                best = Some((d, p.id));
            }
        }
        if let Some((d, attach)) = best {
            candidates.push((d, (u, v), attach));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for &(_, edge, attach) in &candidates {
        if edge_visible_from(q, edge, tree)? {
            return Ok(VisibleEdge { edge, attach });
        }
    }
    Err(Error::Internal(
        "no visible edge from a point outside the hull".into(),
    ))
}

fn ensure_strictly_outside_hull(q: &ColoredPoint, tree: &ColoredTree) -> Result<()> {
    let hull = convex_hull(tree.points());
    let outside = if hull.len() >= 3 {
        let m = hull.len();
        (0..m).any(|i| orient(hull[i].xy(), hull[(i + 1) % m].xy(), q.xy()) < 0)
    } else if hull.len() == 2 {
        // Degenerate hull: the tree is a single segment. Outside means not
        // on the closed segment.
        let (a, b) = (hull[0], hull[1]);
        orient(a.xy(), b.xy(), q.xy()) != 0
            || !between_on_line(a.xy(), b.xy(), q.xy())
    } else {
        true
    };
    if outside {
        Ok(())
    } else {
        Err(Error::InsideHull)
    }
}

/// For collinear a, b, q: does q lie on the closed segment ab?
fn between_on_line(a: (f64, f64), b: (f64, f64), q: (f64, f64)) -> bool {
    let horizontal = (b.0 - a.0).abs() >= (b.1 - a.1).abs();
    let key = |p: (f64, f64)| if horizontal { p.0 } else { p.1 };
    let (lo, hi) = if key(a) <= key(b) {
        (key(a), key(b))
    } else {
        (key(b), key(a))
    };
    lo <= key(q) && key(q) <= hi
}

fn edge_visible_from(
    q: &ColoredPoint,
    edge: (usize, usize),
    tree: &ColoredTree,
) -> Result<bool> {
    let (a, b) = (
        tree.point_by_id(edge.0).unwrap(),
        tree.point_by_id(edge.1).unwrap(),
    );
    if orient(q.xy(), a.xy(), b.xy()) == 0 {
        // q sees the edge edge-on; the triangle is degenerate.
        return Ok(false);
    }
    let x_lo = q.x.min(a.x).min(b.x);
    let x_hi = q.x.max(a.x).max(b.x);
    let y_lo = q.y.min(a.y).min(b.y);
    let y_hi = q.y.max(a.y).max(b.y);
    for w in tree.points() {
        if w.id == a.id || w.id == b.id {
            continue;
        }
        if w.x < x_lo || w.x > x_hi || w.y < y_lo || w.y > y_hi {
            continue;
        }
        if strictly_inside_triangle(q.xy(), a.xy(), b.xy(), w.xy()) {
            return Ok(false);
        }
    }
    for &(u, v) in tree.edges() {
        if (u, v) == edge {
            continue;
        }
        let (pu, pv) = (
            tree.point_by_id(u).unwrap(),
            tree.point_by_id(v).unwrap(),
        );
        if pu.x.max(pv.x) < x_lo
            || pu.x.min(pv.x) > x_hi
            || pu.y.max(pv.y) < y_lo
            || pu.y.min(pv.y) > y_hi
        {
            continue;
        }
        if crossing_raw(q.xy(), a.xy(), pu.xy(), pv.xy())?
            || crossing_raw(q.xy(), b.xy(), pu.xy(), pv.xy())?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Attach an outside point to a plane tree through its visible edge,
/// returning the enlarged tree. The attachment endpoint has a different
/// color by construction, and visibility keeps the drawing plane.
pub fn attach_point(q: &ColoredPoint, tree: &ColoredTree) -> Result<ColoredTree> {
    let ve = visible_edge(q, tree)?;
    let mut points = tree.points().to_vec();
    points.push(*q);
    let mut edges = tree.edges().to_vec();
    edges.push(norm_pair(q.id, ve.attach));
    ColoredTree::new(points, edges)
}

/// Merge two parties occupying rectangles that share a full side.
pub fn merge_parties(a: MergeParty, b: MergeParty) -> Result<MergeParty> {
    Ok(merge_parties_tagged(a, b)?.0)
}

/// As [`merge_parties`], also reporting which rule fired.
pub fn merge_parties_tagged(a: MergeParty, b: MergeParty) -> Result<(MergeParty, MergeCase)> {
    if !a.rect.shares_full_side(&b.rect) {
        return Err(Error::GeometryViolation(
            "merged parties must occupy rectangles sharing a full side".into(),
        ));
    }
    let (rect_a, rect_b) = (a.rect, b.rect);
    let rect = rect_a.union(&rect_b);
    match (a.kind, b.kind) {
        (PartyKind::Empty, kind) => Ok((
            MergeParty { kind, rect, points: b.points },
            MergeCase::Trivial,
        )),
        (kind, PartyKind::Empty) => Ok((
            MergeParty { kind, rect, points: a.points },
            MergeCase::Trivial,
        )),
        (PartyKind::Mono(ca), PartyKind::Mono(cb)) => {
            let points = merge_by_id(a.points, b.points);
            if ca == cb {
                Ok((
                    MergeParty { kind: PartyKind::Mono(ca), rect, points },
                    MergeCase::Trivial,
                ))
            } else {
                let tree = cone_star_tree(&points)?;
                Ok((
                    MergeParty { kind: PartyKind::Tree(tree), rect, points },
                    MergeCase::BothMono,
                ))
            }
        }
        (PartyKind::Tree(ta), PartyKind::Tree(tb)) => {
            let tree = bridge_trees(ta, &rect_a, tb, &rect_b)?;
            let points = tree.points().to_vec();
            Ok((
                MergeParty { kind: PartyKind::Tree(tree), rect, points },
                MergeCase::TreeTree,
            ))
        }
        (PartyKind::Tree(t), PartyKind::Mono(_)) => {
            let tree = attach_all(t, &rect_a, b.points)?;
            let points = tree.points().to_vec();
            Ok((
                MergeParty { kind: PartyKind::Tree(tree), rect, points },
                MergeCase::TreeMono,
            ))
        }
        (PartyKind::Mono(_), PartyKind::Tree(t)) => {
            let tree = attach_all(t, &rect_b, a.points)?;
            let points = tree.points().to_vec();
            Ok((
                MergeParty { kind: PartyKind::Tree(tree), rect, points },
                MergeCase::TreeMono,
            ))
        }
    }
}

/// Attach bare points to a tree in order of increasing distance to the
/// tree party's rectangle (ties by id). Attaching nearest-first keeps every
/// later point strictly outside the growing hull: everything attached so far
/// lies within a smaller sublevel set of the (convex) distance function to
/// the rectangle.
fn attach_all(
    tree: ColoredTree,
    tree_rect: &AxisRect,
    mono: Vec<ColoredPoint>,
) -> Result<ColoredTree> {
    let mut mono = mono;
    mono.sort_by(|p, q| {
        dist_point_rect(p, tree_rect)
            .total_cmp(&dist_point_rect(q, tree_rect))
            .then(p.id.cmp(&q.id))
    });
    let mut tree = tree;
    for p in &mono {
        tree = attach_point(p, &tree)?;
    }
    Ok(tree)
}

/// Bridge two plane trees in adjacent rectangles with one new edge.
///
/// The bridging point `q` is the point of either tree closest to the other
/// tree's rectangle (ties by id); `q` lies strictly outside the other hull,
/// so a visible edge exists there. The new edge leaves `q`'s own rectangle
/// through the shared wall and cannot reach back across `q`, so it misses
/// `q`'s own tree; this is re-checked and reported as an internal error if
/// geometry ever disagrees.
fn bridge_trees(
    ta: ColoredTree,
    rect_a: &AxisRect,
    tb: ColoredTree,
    rect_b: &AxisRect,
) -> Result<ColoredTree> {
    let cand_a = ta
        .points()
        .iter()
        .map(|p| (dist_point_rect(p, rect_b), p.id, true))
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let cand_b = tb
        .points()
        .iter()
        .map(|p| (dist_point_rect(p, rect_a), p.id, false))
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let (_, _, q_in_a) = [cand_a, cand_b]
        .into_iter()
        .flatten()
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .expect("both trees are nonempty");
    let (own, host) = if q_in_a { (ta, tb) } else { (tb, ta) };
    let (own_rect, host_rect) = if q_in_a { (rect_a, rect_b) } else { (rect_b, rect_a) };
    let q = *own
        .points()
        .iter()
        .min_by(|p, r| {
            dist_point_rect(p, host_rect)
                .total_cmp(&dist_point_rect(r, host_rect))
                .then(p.id.cmp(&r.id))
        })
        .expect("own tree is nonempty");
    debug_assert!(own_rect.contains(q.x, q.y));

    let ve = visible_edge(&q, &host)?;
    let attach = *host.point_by_id(ve.attach).unwrap();
    for &(u, v) in own.edges() {
        let (pu, pv) = (
            own.point_by_id(u).unwrap(),
            own.point_by_id(v).unwrap(),
        );
        if crossing_raw(q.xy(), attach.xy(), pu.xy(), pv.xy())? {
            return Err(Error::Internal(
                "bridge edge crosses the tree it leaves".into(),
            ));
        }
    }
    let mut points = own.points().to_vec();
    points.extend_from_slice(host.points());
    let mut edges = own.edges().to_vec();
    edges.extend_from_slice(host.edges());
    edges.push(norm_pair(q.id, attach.id));
    ColoredTree::new(points, edges)
}

fn merge_by_id(mut a: Vec<ColoredPoint>, b: Vec<ColoredPoint>) -> Vec<ColoredPoint> {
    a.extend(b);
    a.sort_by_key(|p| p.id);
    a
}
