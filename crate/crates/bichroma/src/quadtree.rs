//! Randomly shifted quadtrees and the `O(log n)` plane approximation.
//!
//! Points are first scaled into the unit frame `[1, 2]^2`. A shift
//! `(s_x, s_y)` in `[0, 1)^2` places a square `Q = [s_x, s_x + 2] x
//! [s_y, s_y + 2]` over the frame; subdividing `Q` while a cell contains two
//! colors (down to cells of side `1/N`, where `N` is the smallest power of
//! two at least the number of points) yields the shifted quadtree. Merging
//! cell parties bottom-up with the rules in [`crate::plane`] produces a
//! plane properly colored spanning tree.
//!
//! The length of that tree is controlled, shift by shift, by how often the
//! minimum tree's edges meet the shifted grid lines: [`opt_prime`] computes
//! the level-weighted meeting profile, and for each shift
//!
//! ```text
//! plane tree length <= sqrt(2) * minimum length + 4 * sqrt(2) * profile total
//! ```
//!
//! in frame coordinates. Averaged over the `N^2` distinct discrete shifts
//! `(i/N, j/N)` the profile total is `O(log n)` times the minimum length,
//! which is why trying all discrete shifts ([`derandomized_tree`]) gives a
//! deterministic `O(log n)` approximation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{AxisRect, ColorId, ColoredPoint};
use crate::minbst::{min_colored_spanning_tree, ColoredTree};
use crate::plane::{cone_star_tree, merge_parties_tagged, MergeCase, MergeParty};
use crate::{Error, Result};

/// Default cap on `n` for the exact expectation over all discrete shifts,
/// which costs `Theta(N^2 * n log N)`.
pub const DEFAULT_ENUM_LIMIT: usize = 256;

/// How a shift was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftKind {
    /// Drawn uniformly from `[0, 1)^2` by a seeded generator.
    ContinuousRandom { seed: u64 },
    /// The grid shift `(i/denom, j/denom)`.
    Discrete { i: u32, j: u32, denom: u32 },
}

/// A quadtree shift `(x, y)` in `[0, 1)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    pub x: f64,
    pub y: f64,
    pub kind: ShiftKind,
}

impl Shift {
    /// Reproducible pseudorandom shift.
    pub fn random(seed: u64) -> Shift {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: f64 = rng.gen();
        let y: f64 = rng.gen();
        Shift { x, y, kind: ShiftKind::ContinuousRandom { seed } }
    }

    /// The discrete shift `(i/denom, j/denom)`; requires `i, j < denom` and
    /// `denom` a power of two, so the coordinates are exact.
    pub fn discrete(i: u32, j: u32, denom: u32) -> Result<Shift> {
        if denom == 0 || !denom.is_power_of_two() {
            return Err(Error::GeometryViolation(format!(
                "shift denominator {denom} is not a power of two"
            )));
        }
        if i >= denom || j >= denom {
            return Err(Error::GeometryViolation(format!(
                "discrete shift ({i}, {j}) out of range for denominator {denom}"
            )));
        }
        Ok(Shift {
            x: f64::from(i) / f64::from(denom),
            y: f64::from(j) / f64::from(denom),
            kind: ShiftKind::Discrete { i, j, denom },
        })
    }
}

/// The similarity mapping original coordinates into the frame `[1, 2]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizeTransform {
    pub min_x: f64,
    pub min_y: f64,
    /// Side of the original bounding square: the larger bounding-box extent.
    pub side: f64,
}

impl NormalizeTransform {
    pub fn forward(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min_x) / self.side + 1.0, (y - self.min_y) / self.side + 1.0)
    }

    /// Lengths in frame coordinates are original lengths divided by this.
    pub fn side(&self) -> f64 {
        self.side
    }
}

/// Scale a point set into `[1, 2]^2`, preserving colors and ids.
///
/// The larger bounding-box extent maps onto length exactly 1, so every frame
/// coordinate lies in the closed square (division keeps the maximum at
/// exactly 2.0). Fails with [`Error::DegenerateExtent`] when all points
/// coincide.
pub fn normalize(
    points: &[ColoredPoint],
) -> Result<(Vec<ColoredPoint>, NormalizeTransform)> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::GeometryViolation(format!(
                "point {} has a non-finite coordinate",
                p.id
            )));
        }
    }
    let min_x = points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let max_x = points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let min_y = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let max_y = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let side = (max_x - min_x).max(max_y - min_y);
    if side <= 0.0 {
        return Err(Error::DegenerateExtent);
    }
    let t = NormalizeTransform { min_x, min_y, side };
    let normed = points
        .iter()
        .map(|p| {
            let (x, y) = t.forward(p.x, p.y);
            ColoredPoint::new(x, y, p.color, p.id)
        })
        .collect();
    Ok((normed, t))
}

/// Smallest power of two at least `n`: the grid resolution `N`.
pub fn quadtree_denominator(n: usize) -> u32 {
    (n.max(1).next_power_of_two()) as u32
}

/// Depth of the subdivision: cells at the deepest level have side
/// `1 / quadtree_denominator(n)`.
pub fn quadtree_levels(n: usize) -> i32 {
    quadtree_denominator(n).trailing_zeros() as i32
}

/// Color content of a quadtree cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeClass {
    Empty,
    Mono(ColorId),
    Mixed,
}

/// One cell of a shifted quadtree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadNode {
    pub rect: AxisRect,
    /// Subdivision level: the root square `Q` has level -1 and side 2;
    /// level-`i` cells have side `2^-i`.
    pub level: i32,
    /// Ids of the points bucketed into this cell.
    pub point_ids: Vec<usize>,
    pub class: NodeClass,
    /// Indices of the `[SW, SE, NW, NE]` children, if subdivided.
    pub children: Option<[usize; 4]>,
}

/// A quadtree over the frame, shifted by `shift`.
///
/// Cells are subdivided while they contain two colors and their level is
/// below the maximum; empty and monochromatic cells are leaves. Bucketing
/// compares against cell midlines only, so points on the root boundary
/// (frame coordinates of exactly 2.0 under a zero shift) are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftedQuadtree {
    nodes: Vec<QuadNode>,
    root: usize,
    shift: Shift,
    denom: u32,
    max_level: i32,
}

impl ShiftedQuadtree {
    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn root(&self) -> &QuadNode {
        &self.nodes[self.root]
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    /// The grid resolution `N`.
    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// The deepest allowed level, `log2 N`.
    pub fn max_level(&self) -> i32 {
        self.max_level
    }
}

/// Build the shifted quadtree for points already in `[1, 2]^2`.
pub fn build_quadtree(points: &[ColoredPoint], shift: &Shift) -> Result<ShiftedQuadtree> {
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    for p in points {
        if !(1.0..=2.0).contains(&p.x) || !(1.0..=2.0).contains(&p.y) {
            return Err(Error::GeometryViolation(format!(
                "point {} lies outside the frame [1,2]^2; normalize first",
                p.id
            )));
        }
    }
    if !(0.0..1.0).contains(&shift.x) || !(0.0..1.0).contains(&shift.y) {
        return Err(Error::GeometryViolation(format!(
            "shift ({}, {}) outside [0,1)^2",
            shift.x, shift.y
        )));
    }
    let denom = quadtree_denominator(points.len());
    let max_level = quadtree_levels(points.len());
    let mut nodes: Vec<QuadNode> = Vec::new();
    let root_rect = AxisRect::new(shift.x, shift.x + 2.0, shift.y, shift.y + 2.0);
    let all: Vec<usize> = (0..points.len()).collect();
    let root = subdivide(&mut nodes, points, all, root_rect, -1, max_level);
    Ok(ShiftedQuadtree { nodes, root, shift: *shift, denom, max_level })
}

fn classify(points: &[ColoredPoint], members: &[usize]) -> NodeClass {
    let mut color: Option<ColorId> = None;
    for &i in members {
        match color {
            None => color = Some(points[i].color),
            Some(c) if c != points[i].color => return NodeClass::Mixed,
            _ => {}
        }
    }
    match color {
        None => NodeClass::Empty,
        Some(c) => NodeClass::Mono(c),
    }
}

fn subdivide(
    nodes: &mut Vec<QuadNode>,
    points: &[ColoredPoint],
    members: Vec<usize>,
    rect: AxisRect,
    level: i32,
    max_level: i32,
) -> usize {
    let class = classify(points, &members);
    let children = if class == NodeClass::Mixed && level < max_level {
        let mid_x = (rect.x_lo + rect.x_hi) / 2.0;
        let mid_y = (rect.y_lo + rect.y_hi) / 2.0;
        let mut buckets: [Vec<usize>; 4] = Default::default();
        for &i in &members {
            let east = points[i].x >= mid_x;
            let north = points[i].y >= mid_y;
            buckets[usize::from(east) + 2 * usize::from(north)].push(i);
        }
        let rects = [
            AxisRect::new(rect.x_lo, mid_x, rect.y_lo, mid_y),
            AxisRect::new(mid_x, rect.x_hi, rect.y_lo, mid_y),
            AxisRect::new(rect.x_lo, mid_x, mid_y, rect.y_hi),
            AxisRect::new(mid_x, rect.x_hi, mid_y, rect.y_hi),
        ];
        let mut ids = [0usize; 4];
        for (k, (bucket, child_rect)) in
            buckets.into_iter().zip(rects.into_iter()).enumerate()
        {
            ids[k] = subdivide(nodes, points, bucket, child_rect, level + 1, max_level);
        }
        Some(ids)
    } else {
        None
    };
    let point_ids = members.iter().map(|&i| points[i].id).collect();
    nodes.push(QuadNode { rect, level, point_ids, class, children });
    nodes.len() - 1
}

/// One merge step in the bottom-up assembly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    /// Level of the cells being combined (children of a level `level - 1`
    /// square, or the two halves built from them).
    pub level: i32,
    pub case: MergeCase,
    pub new_edges: usize,
    /// The rectangles whose parties were merged.
    pub rect_a: AxisRect,
    pub rect_b: AxisRect,
}

/// Everything produced by one approximation run.
#[derive(Debug, Clone)]
pub struct ApproxDetail {
    /// The plane tree in original coordinates.
    pub tree: ColoredTree,
    /// The same tree over the frame coordinates.
    pub normalized_tree: ColoredTree,
    pub transform: NormalizeTransform,
    pub quadtree: ShiftedQuadtree,
    /// Non-trivial merge steps, deepest first.
    pub merge_log: Vec<MergeEvent>,
}

/// Plane properly colored spanning tree from one shifted quadtree.
///
/// Requires at least two points, two colors, and a non-degenerate extent.
pub fn approx_tree(points: &[ColoredPoint], shift: &Shift) -> Result<ColoredTree> {
    Ok(approx_tree_detailed(points, shift)?.tree)
}

/// As [`approx_tree`], returning the quadtree, the frame-coordinate tree and
/// the merge log as well.
pub fn approx_tree_detailed(points: &[ColoredPoint], shift: &Shift) -> Result<ApproxDetail> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    if points.iter().all(|p| p.color == points[0].color) {
        return Err(Error::Monochromatic);
    }
    let (normed, transform) = normalize(points)?;
    let quadtree = build_quadtree(&normed, shift)?;
    let mut log = Vec::new();
    let normalized_tree = assemble(&quadtree, &normed, &mut log)?;
    let tree = ColoredTree::new(points.to_vec(), normalized_tree.edges().to_vec())?;
    Ok(ApproxDetail { tree, normalized_tree, transform, quadtree, merge_log: log })
}

/// Run the merge rules over the whole quadtree, returning the root tree in
/// frame coordinates.
fn assemble(
    qt: &ShiftedQuadtree,
    normed: &[ColoredPoint],
    log: &mut Vec<MergeEvent>,
) -> Result<ColoredTree> {
    let by_id: std::collections::HashMap<usize, ColoredPoint> =
        normed.iter().map(|p| (p.id, *p)).collect();
    let party = solve(qt, qt.root, &by_id, log)?;
    party.into_tree().ok_or_else(|| {
        Error::Internal("root of a two-color instance did not produce a tree".into())
    })
}

fn solve(
    qt: &ShiftedQuadtree,
    node_idx: usize,
    by_id: &std::collections::HashMap<usize, ColoredPoint>,
    log: &mut Vec<MergeEvent>,
) -> Result<MergeParty> {
    let node = &qt.nodes()[node_idx];
    match node.children {
        None => {
            let pts: Vec<ColoredPoint> =
                node.point_ids.iter().map(|id| by_id[id]).collect();
            match node.class {
                NodeClass::Empty => Ok(MergeParty::empty(node.rect)),
                NodeClass::Mono(_) => MergeParty::mono(node.rect, pts),
                NodeClass::Mixed => {
                    // Only the deepest cells stay mixed; a cone star links them.
                    let tree = cone_star_tree(&pts)?;
                    MergeParty::tree(node.rect, tree)
                }
            }
        }
        Some([sw, se, nw, ne]) => {
            let child_level = node.level + 1;
            let sw = solve(qt, sw, by_id, log)?;
            let se = solve(qt, se, by_id, log)?;
            let nw = solve(qt, nw, by_id, log)?;
            let ne = solve(qt, ne, by_id, log)?;
            let south = merge_logged(sw, se, child_level, log)?;
            let north = merge_logged(nw, ne, child_level, log)?;
            merge_logged(south, north, child_level, log)
        }
    }
}

fn merge_logged(
    a: MergeParty,
    b: MergeParty,
    level: i32,
    log: &mut Vec<MergeEvent>,
) -> Result<MergeParty> {
    let before = a.edge_count() + b.edge_count();
    let (rect_a, rect_b) = (*a.rect(), *b.rect());
    let (merged, case) = merge_parties_tagged(a, b)?;
    if case != MergeCase::Trivial {
        log.push(MergeEvent {
            level,
            case,
            new_edges: merged.edge_count() - before,
            rect_a,
            rect_b,
        });
    }
    Ok(merged)
}

/// The level-weighted grid-meeting profile of a tree against a shifted grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptPrimeProfile {
    /// `per_level[i]` is `(number of edges meeting a level-i grid line) / 2^i`
    /// for `i = 0 ..= max_level`.
    pub per_level: Vec<f64>,
    /// Sum of the per-level terms.
    pub total: f64,
}

/// Compute the grid-meeting profile of `reference` (a tree in frame
/// coordinates) for the shift and depth of `qt`.
///
/// A level-`i` grid line is `x = s_x + k / 2^i` or `y = s_y + k / 2^i` for
/// `0 <= k <= 2^(i+1)`; an edge "meets" a line when its closed axis span
/// contains the line. An edge inside one level-`i` cell meets no level-`i`
/// line, so the profile bounds, level by level, how often the construction
/// can be forced to spend extra length.
pub fn opt_prime(reference: &ColoredTree, qt: &ShiftedQuadtree) -> OptPrimeProfile {
    let spans = edge_spans(reference);
    profile_for_shift(&spans, qt.shift().x, qt.shift().y, qt.max_level())
}

/// Axis-aligned spans `(x_lo, x_hi, y_lo, y_hi)` of each tree edge.
fn edge_spans(tree: &ColoredTree) -> Vec<(f64, f64, f64, f64)> {
    (0..tree.edges().len())
        .map(|i| {
            let (p, q) = tree.edge_endpoints(i);
            (
                p.x.min(q.x),
                p.x.max(q.x),
                p.y.min(q.y),
                p.y.max(q.y),
            )
        })
        .collect()
}

fn profile_for_shift(
    spans: &[(f64, f64, f64, f64)],
    sx: f64,
    sy: f64,
    max_level: i32,
) -> OptPrimeProfile {
    let mut per_level = Vec::with_capacity((max_level + 1) as usize);
    let mut total = 0.0;
    for level in 0..=max_level {
        let cell = 2.0f64.powi(-level);
        let mut hits = 0usize;
        for &(x_lo, x_hi, y_lo, y_hi) in spans {
            if meets_level_line(x_lo, x_hi, sx, level)
                || meets_level_line(y_lo, y_hi, sy, level)
            {
                hits += 1;
            }
        }
        let weighted = hits as f64 * cell;
        per_level.push(weighted);
        total += weighted;
    }
    OptPrimeProfile { per_level, total }
}

/// Does the closed interval `[lo, hi]` contain a grid value `s + k / 2^level`
/// with `0 <= k <= 2^(level+1)`?
fn meets_level_line(lo: f64, hi: f64, s: f64, level: i32) -> bool {
    let cell = 2.0f64.powi(-level);
    let k_max = 2i64 << level;
    let approx = ((lo - s) / cell).floor() as i64;
    for k in (approx - 1)..=(approx + 2) {
        if k < 0 || k > k_max {
            continue;
        }
        let g = s + k as f64 * cell;
        if lo <= g && g <= hi {
            return true;
        }
    }
    false
}

/// Try every distinct discrete shift `(i/N, j/N)` and return the shortest
/// plane tree together with the winning shift. Ties go to the smaller
/// `(i, j)`. Single-threaded; see [`derandomized_tree_with_threads`].
pub fn derandomized_tree(points: &[ColoredPoint]) -> Result<(ColoredTree, Shift)> {
    derandomized_tree_with_threads(points, 1)
}

/// As [`derandomized_tree`], splitting shift rows over up to `threads`
/// worker threads. The result is identical for every thread count.
pub fn derandomized_tree_with_threads(
    points: &[ColoredPoint],
    threads: usize,
) -> Result<(ColoredTree, Shift)> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    if points.iter().all(|p| p.color == points[0].color) {
        return Err(Error::Monochromatic);
    }
    let (normed, _) = normalize(points)?;
    let by_id: std::collections::HashMap<usize, ColoredPoint> =
        points.iter().map(|p| (p.id, *p)).collect();
    let denom = quadtree_denominator(points.len());
    let threads = threads.clamp(1, 64).min(denom as usize);

    // Best = (original-coordinate length, i, j, edges); compared
    // lexicographically so the outcome is independent of evaluation order.
    type Best = (f64, u32, u32, Vec<(usize, usize)>);
    let run_row = |i: u32| -> Result<Option<Best>> {
        let mut best: Option<Best> = None;
        for j in 0..denom {
            let shift = Shift::discrete(i, j, denom)?;
            let qt = build_quadtree(&normed, &shift)?;
            let mut log = Vec::new();
            let tree = assemble(&qt, &normed, &mut log)?;
            let length: f64 = tree
                .edges()
                .iter()
                .map(|&(u, v)| by_id[&u].dist(&by_id[&v]))
                .sum();
            if best
                .as_ref()
                .map_or(true, |(bl, bi, bj, _)| (length, i, j) < (*bl, *bi, *bj))
            {
                best = Some((length, i, j, tree.edges().to_vec()));
            }
        }
        Ok(best)
    };

    let row_results: Vec<Result<Option<Best>>> = if threads <= 1 {
        (0..denom).map(run_row).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let run_row = &run_row;
                    scope.spawn(move || {
                        ((t as u32)..denom)
                            .step_by(threads)
                            .map(|i| (i, run_row(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            let mut collected: Vec<(u32, Result<Option<Best>>)> = handles
                .into_iter()
                .flat_map(|h| h.join().expect("derandomization worker panicked"))
                .collect();
            collected.sort_by_key(|(i, _)| *i);
            collected.into_iter().map(|(_, r)| r).collect()
        })
    };

    let mut best: Option<Best> = None;
    for row in row_results {
        if let Some(b) = row? {
            if best
                .as_ref()
                .map_or(true, |cur| (b.0, b.1, b.2) < (cur.0, cur.1, cur.2))
            {
                best = Some(b);
            }
        }
    }
    let (_, i, j, edges) =
        best.ok_or_else(|| Error::Internal("no shift produced a tree".into()))?;
    let tree = ColoredTree::new(points.to_vec(), edges)?;
    Ok((tree, Shift::discrete(i, j, denom)?))
}

/// Exact average of the grid-meeting profile total of the minimum tree over
/// all `N^2` discrete shifts, in frame coordinates.
///
/// Costs `Theta(N^2 * n log N)`; inputs above the default cap are rejected,
/// use [`expected_opt_prime_discrete_with_limit`] to raise it deliberately.
pub fn expected_opt_prime_discrete(points: &[ColoredPoint]) -> Result<f64> {
    expected_opt_prime_discrete_with_limit(points, DEFAULT_ENUM_LIMIT)
}

/// As [`expected_opt_prime_discrete`] with an explicit size cap.
pub fn expected_opt_prime_discrete_with_limit(
    points: &[ColoredPoint],
    limit: usize,
) -> Result<f64> {
    if points.len() > limit {
        return Err(Error::TooLarge { limit, requested: points.len() });
    }
    let (normed, _) = normalize(points)?;
    let reference = min_colored_spanning_tree(&normed)?;
    expected_opt_prime_for_reference(&reference, quadtree_denominator(points.len()))
}

/// Exact average of the grid-meeting profile total of an explicit reference
/// tree (already in frame coordinates) over all `denom^2` discrete shifts.
pub fn expected_opt_prime_for_reference(
    reference: &ColoredTree,
    denom: u32,
) -> Result<f64> {
    if denom == 0 || !denom.is_power_of_two() {
        return Err(Error::GeometryViolation(format!(
            "shift denominator {denom} is not a power of two"
        )));
    }
    let max_level = denom.trailing_zeros() as i32;
    let spans = edge_spans(reference);
    let mut sum = 0.0;
    for i in 0..denom {
        for j in 0..denom {
            let shift = Shift::discrete(i, j, denom)?;
            sum += profile_for_shift(&spans, shift.x, shift.y, max_level).total;
        }
    }
    Ok(sum / f64::from(denom).powi(2))
}
