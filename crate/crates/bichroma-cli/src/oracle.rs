//! Brute-force oracles for desk-scale validation.
//!
//! Both oracles enumerate spanning trees over the properly colored edges
//! of small instances. [`enumerate_min_colored_tree`] recovers the global
//! minimum with crossings allowed; [`brute_force_min_plane_tree`] restricts
//! the search to pairwise noncrossing edge sets and is the ground truth the
//! approximation is compared against.

use bichroma::geom::{proper_crossing, validate_general_position, ColoredPoint, Segment, GP_FULL_SCAN_LIMIT};
use bichroma::minbst::ColoredTree;

use crate::error::{CliError, CliResult};

/// Largest instance either oracle accepts; chosen so exhaustive search
/// with pruning finishes in seconds.
pub const ORACLE_LIMIT: usize = 9;

struct Candidate {
    a: usize,
    b: usize,
    len: f64,
    seg: Segment,
}

fn colored_candidates(points: &[ColoredPoint]) -> CliResult<Vec<Candidate>> {
    if points.len() < 2 {
        return Err(CliError::Input(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if points.len() > ORACLE_LIMIT {
        return Err(CliError::Budget(format!(
            "oracle supports at most {ORACLE_LIMIT} points, got {}",
            points.len()
        )));
    }
    let first = points[0].color;
    if points.iter().all(|p| p.color == first) {
        return Err(CliError::Infeasible(
            "all points share one color; no properly colored edge exists".into(),
        ));
    }
    validate_general_position(points, GP_FULL_SCAN_LIMIT).map_err(CliError::from)?;

    let mut by_id: Vec<&ColoredPoint> = points.iter().collect();
    by_id.sort_by_key(|p| p.id);
    let mut edges = Vec::new();
    for i in 0..by_id.len() {
        for j in i + 1..by_id.len() {
            let (p, q) = (by_id[i], by_id[j]);
            if p.color == q.color {
                continue;
            }
            edges.push(Candidate {
                a: p.id,
                b: q.id,
                len: p.dist(q),
                seg: Segment::new(*p, *q),
            });
        }
    }
    // Short edges first so the first complete tree is already close to
    // optimal and the length prune bites early.
    edges.sort_by(|x, y| x.len.total_cmp(&y.len).then_with(|| (x.a, x.b).cmp(&(y.a, y.b))));
    Ok(edges)
}

struct Search<'a> {
    points: &'a [ColoredPoint],
    edges: &'a [Candidate],
    require_plane: bool,
    best_len: f64,
    best: Option<Vec<(usize, usize)>>,
}

impl Search<'_> {
    /// Depth-first take/skip recursion over the length-sorted candidates.
    /// `parent` is a union-find over point ids, cloned per branch (n ≤ 9).
    fn run(
        &mut self,
        next: usize,
        chosen: Vec<usize>,
        parent: Vec<usize>,
        components: usize,
        len: f64,
    ) {
        if components == 1 {
            if len < self.best_len {
                self.best_len = len;
                self.best = Some(
                    chosen
                        .iter()
                        .map(|&i| (self.edges[i].a, self.edges[i].b))
                        .collect(),
                );
            }
            return;
        }
        // Not enough candidates left to connect the remaining components.
        if self.edges.len() - next < components - 1 {
            return;
        }
        if len >= self.best_len {
            return;
        }
        let e = &self.edges[next];
        let (ra, rb) = (find(&parent, e.a), find(&parent, e.b));
        let creates_cycle = ra == rb;
        let crosses = self.require_plane
            && chosen.iter().any(|&i| {
                // General position was validated up front, so the crossing
                // predicate cannot hit a degenerate overlap here.
                proper_crossing(&self.edges[i].seg, &e.seg).expect("general position")
            });
        if !creates_cycle && !crosses {
            let mut parent2 = parent.clone();
            parent2[ra] = rb;
            let mut chosen2 = chosen.clone();
            chosen2.push(next);
            self.run(next + 1, chosen2, parent2, components - 1, len + e.len);
        }
        self.run(next + 1, chosen, parent, components, len);
    }
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn exhaustive_min_tree(points: &[ColoredPoint], require_plane: bool) -> CliResult<ColoredTree> {
    let edges = colored_candidates(points)?;
    let parent: Vec<usize> = (0..points.len()).collect();
    let mut search = Search {
        points,
        edges: &edges,
        require_plane,
        best_len: f64::INFINITY,
        best: None,
    };
    search.run(0, Vec::new(), parent, points.len(), 0.0);
    let best = search.best.ok_or_else(|| {
        CliError::Internal("exhaustive search found no spanning tree on a colorful instance".into())
    })?;
    Ok(ColoredTree::new(search.points.to_vec(), best)?)
}

/// Global minimum properly colored spanning tree by exhaustive enumeration,
/// crossings permitted. Independent of the incremental algorithm, so the two
/// can check each other.
pub fn enumerate_min_colored_tree(points: &[ColoredPoint]) -> CliResult<ColoredTree> {
    exhaustive_min_tree(points, false)
}

/// Global minimum plane properly colored spanning tree: the shortest
/// spanning tree whose edges are properly colored and pairwise noncrossing.
pub fn brute_force_min_plane_tree(points: &[ColoredPoint]) -> CliResult<ColoredTree> {
    exhaustive_min_tree(points, true)
}
