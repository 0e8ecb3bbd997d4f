//! Crossing structure of colored trees.
//!
//! A minimum properly colored spanning tree may cross itself, but not
//! arbitrarily: no three of its edges cross pairwise (the drawing is
//! *quasi-plane*, equivalently the crossing graph is triangle-free), the
//! closest bichromatic pair forms an edge that nothing crosses, the total
//! number of crossings is below `n^2/4 - n + 1`, no single edge is crossed
//! more than `n - 3` times, and the tree path connecting two crossing edges
//! runs between endpoints of different colors. [`verify_minbst_properties`]
//! checks all of this on a concrete tree and reports the measurements.

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

use crate::geom::crossing_raw;
use crate::minbst::{closest_bichromatic_pairs, ColoredTree};
use crate::{Error, Result};

/// How the closest differently colored pair relates to the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosestPairCheck {
    /// Some closest bichromatic pair appears as a tree edge.
    pub appears_as_edge: bool,
    /// Every closest pair that is a tree edge is crossed by nothing.
    pub edge_crossing_free: bool,
}

/// Crossing measurements and structural checks for one tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub n: usize,
    pub edge_count: usize,
    /// Properly crossing edge pairs as `(i, j)` indices into the canonical
    /// edge order, `i < j`.
    pub crossing_pairs: Vec<(usize, usize)>,
    pub crossing_count: usize,
    /// Largest number of crossings on any single edge.
    pub per_edge_max: usize,
    /// Adjacency lists of the crossing graph (vertices = edges, indices as
    /// in the canonical edge order).
    pub crossing_graph: Vec<Vec<usize>>,
    /// No crossings at all.
    pub plane: bool,
    /// No three edges cross pairwise; the crossing graph is triangle-free.
    pub quasi_plane: bool,
    pub closest_pair: ClosestPairCheck,
    /// `crossing_count <= floor(n^2/4) - n + 1`.
    pub total_crossings_within_bound: bool,
    /// `per_edge_max <= n - 3`.
    pub per_edge_within_bound: bool,
    /// For every crossing pair, the tree path between the two edges starts
    /// and ends at points of different colors.
    pub crossing_paths_bichromatic: bool,
    /// Length of a shortest odd cycle in the crossing graph, if any. A
    /// triangle-free crossing graph can still contain odd cycles of length
    /// five or more, so this refines `quasi_plane`.
    pub odd_girth: Option<usize>,
}

/// All properly crossing pairs of tree edges, as index pairs into the
/// canonical edge order.
pub fn crossing_pairs(tree: &ColoredTree) -> Result<Vec<(usize, usize)>> {
    let m = tree.edges().len();
    let ends: Vec<((f64, f64), (f64, f64))> = (0..m)
        .map(|i| {
            let (p, q) = tree.edge_endpoints(i);
            (p.xy(), q.xy())
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if crossing_raw(ends[i].0, ends[i].1, ends[j].0, ends[j].1)? {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

/// Does the tree have a crossing-free drawing as given (no two edges cross)?
pub fn is_plane(tree: &ColoredTree) -> Result<bool> {
    Ok(crossing_pairs(tree)?.is_empty())
}

/// Do no three edges cross pairwise?
pub fn is_quasi_plane(tree: &ColoredTree) -> Result<bool> {
    let pairs = crossing_pairs(tree)?;
    let adj = adjacency_from_pairs(tree.edges().len(), &pairs);
    Ok(!has_triangle(&adj, &pairs))
}

fn adjacency_from_pairs(m: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m];
    for &(i, j) in pairs {
        adj[i].push(j);
        adj[j].push(i);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

fn has_triangle(adj: &[Vec<usize>], pairs: &[(usize, usize)]) -> bool {
    pairs.iter().any(|&(i, j)| {
        // Sorted-list intersection of the two neighbourhoods.
        let (a, b) = (&adj[i], &adj[j]);
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    })
}

/// Upper bound on the number of crossings of a minimum properly colored
/// spanning tree on `n` points: `floor(n^2/4) - n + 1` (zero for `n < 4`).
pub fn max_crossing_bound(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    (n * n / 4 + 1).saturating_sub(n)
}

/// The unique tree path connecting two distinct edges, as a vertex id list.
///
/// The path starts at an endpoint of `e1` and ends at an endpoint of `e2`
/// and contains exactly one endpoint of each; when the edges share a vertex
/// the path is that single vertex. Edges are given as id pairs in either
/// order.
pub fn path_between_edges(
    tree: &ColoredTree,
    e1: (usize, usize),
    e2: (usize, usize),
) -> Result<Vec<usize>> {
    let canon = |(u, v): (usize, usize)| if u <= v { (u, v) } else { (v, u) };
    let (e1, e2) = (canon(e1), canon(e2));
    for e in [e1, e2] {
        if tree.edges().binary_search(&e).is_err() {
            return Err(Error::EdgeNotInTree { edge: e });
        }
    }
    if e1 == e2 {
        return Err(Error::GeometryViolation(
            "the two edges must be distinct".into(),
        ));
    }
    let adj = tree.adjacency();
    for start in [e1.0, e1.1] {
        for goal in [e2.0, e2.1] {
            let path = tree_path(&adj, start, goal)?;
            let from_e1 = path.iter().filter(|&&v| v == e1.0 || v == e1.1).count();
            let from_e2 = path.iter().filter(|&&v| v == e2.0 || v == e2.1).count();
            if from_e1 == 1 && from_e2 == 1 {
                return Ok(path);
            }
        }
    }
    Err(Error::Internal(
        "no endpoint-to-endpoint path avoided the other endpoints".into(),
    ))
}

/// Breadth-first path between two vertices of a tree given by adjacency.
fn tree_path(
    adj: &HashMap<usize, Vec<usize>>,
    start: usize,
    goal: usize,
) -> Result<Vec<usize>> {
    if start == goal {
        return Ok(vec![start]);
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, start);
    while let Some(v) = queue.pop_front() {
        if v == goal {
            break;
        }
        for &w in adj.get(&v).into_iter().flatten() {
            parent.entry(w).or_insert_with(|| {
                queue.push_back(w);
                v
            });
        }
    }
    if !parent.contains_key(&goal) {
        return Err(Error::Internal("tree is not connected".into()));
    }
    let mut path = vec![goal];
    let mut v = goal;
    while v != start {
        v = parent[&v];
        path.push(v);
    }
    path.reverse();
    Ok(path)
}

/// Shortest odd cycle length of a graph in adjacency-list form, or `None`
/// when the graph is bipartite. Breadth-first search from every vertex: an
/// edge joining two vertices at equal distance `d` from the root closes an
/// odd walk of length `2d + 1`, and the minimum over all roots is attained
/// with the root on a shortest odd cycle.
fn odd_girth(adj: &[Vec<usize>]) -> Option<usize> {
    let n = adj.len();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    for root in 0..n {
        if adj[root].is_empty() {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                } else if dist[w] == dist[v] {
                    let cycle = 2 * dist[v] + 1;
                    if best.map_or(true, |b| cycle < b) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

/// Measure the crossing structure of `tree` and check every structural
/// property expected of a minimum properly colored spanning tree over
/// `points`.
///
/// `points` must be exactly the vertex set of `tree` (the redundancy guards
/// against checking a tree on the wrong instance). The checks are
/// meaningful for minimum trees; running them on other trees measures the
/// same quantities but the boolean verdicts may legitimately be false.
pub fn verify_minbst_properties(
    points: &[crate::geom::ColoredPoint],
    tree: &ColoredTree,
) -> Result<CrossingReport> {
    let n = points.len();
    {
        let mut ids: Vec<usize> = points.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        let tree_ids: Vec<usize> = tree.points().iter().map(|p| p.id).collect();
        if ids != tree_ids {
            return Err(Error::GeometryViolation(
                "tree vertex set differs from the point set".into(),
            ));
        }
    }
    let m = tree.edges().len();
    let pairs = crossing_pairs(tree)?;
    let adj = adjacency_from_pairs(m, &pairs);
    let per_edge_max = adj.iter().map(Vec::len).max().unwrap_or(0);
    let plane = pairs.is_empty();
    let quasi_plane = !has_triangle(&adj, &pairs);

    let minima = closest_bichromatic_pairs(points)?;
    let edge_of = |p: usize, q: usize| {
        let e = if p <= q { (p, q) } else { (q, p) };
        tree.edges().binary_search(&e).ok()
    };
    let mut appears_as_edge = false;
    let mut edge_crossing_free = true;
    for (p, q) in &minima {
        if let Some(idx) = edge_of(p.id, q.id) {
            appears_as_edge = true;
            if !adj[idx].is_empty() {
                edge_crossing_free = false;
            }
        }
    }

    let mut crossing_paths_bichromatic = true;
    for &(i, j) in &pairs {
        let path = path_between_edges(tree, tree.edges()[i], tree.edges()[j])?;
        let first = tree.point_by_id(*path.first().unwrap()).unwrap();
        let last = tree.point_by_id(*path.last().unwrap()).unwrap();
        if first.color == last.color {
            crossing_paths_bichromatic = false;
        }
    }

    Ok(CrossingReport {
        n,
        edge_count: m,
        crossing_count: pairs.len(),
        per_edge_max,
        plane,
        quasi_plane,
        closest_pair: ClosestPairCheck { appears_as_edge, edge_crossing_free },
        total_crossings_within_bound: pairs.len() <= max_crossing_bound(n),
        per_edge_within_bound: per_edge_max <= n.saturating_sub(3),
        crossing_paths_bichromatic,
        odd_girth: odd_girth(&adj),
        crossing_graph: adj,
        crossing_pairs: pairs,
    })
}
