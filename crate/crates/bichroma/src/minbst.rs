//! Minimum properly colored spanning trees.
//!
//! Among all spanning trees of a colored point set that use only properly
//! colored edges (endpoints of different colors), `min_colored_spanning_tree`
//! returns one of minimum total Euclidean length. With two colors these are
//! the minimum spanning trees of the complete bipartite red/blue graph; with
//! more colors, of the complete multipartite graph.

use crate::geom::{norm_pair, ColoredPoint};
use crate::{Error, Result};

/// A spanning tree over a colored point set in which every edge joins two
/// points of different colors.
///
/// Construction validates the full invariant: unique ids, finite
/// coordinates, exactly `n - 1` distinct edges on known endpoints, no
/// monochromatic edge, and connectivity. Points are kept sorted by id and
/// edges in canonical `(low, high)` sorted order, so two equal trees compare
/// equal structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredTree {
    points: Vec<ColoredPoint>,
    edges: Vec<(usize, usize)>,
    total_length: f64,
}

impl ColoredTree {
    pub fn new(points: Vec<ColoredPoint>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidTree("no points".into()));
        }
        let mut points = points;
        points.sort_by_key(|p| p.id);
        for w in points.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidTree(format!("duplicate point id {}", w[0].id)));
            }
        }
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidTree(format!(
                    "point {} has a non-finite coordinate",
                    p.id
                )));
            }
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} points need {} edges, got {}",
                n,
                n - 1,
                edges.len()
            )));
        }
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| norm_pair(u, v))
            .collect();
        edges.sort_unstable();
        let index_of = |id: usize| points.binary_search_by_key(&id, |p| p.id);
        let mut dsu = Dsu::new(n);
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            let (iu, iv) = match (index_of(u), index_of(v)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidTree(format!(
                        "edge ({u}, {v}) references an unknown point"
                    )))
                }
            };
            if points[iu].color == points[iv].color {
                return Err(Error::InvalidTree(format!(
                    "edge ({u}, {v}) joins two points of color {}",
                    points[iu].color
                )));
            }
            if !dsu.union(iu, iv) {
                return Err(Error::InvalidTree(format!("edge ({u}, {v}) closes a cycle")));
            }
        }
        // n - 1 edges without a cycle span all n points.
        let total_length = length_of(&points, &edges);
        Ok(ColoredTree { points, edges, total_length })
    }

    /// The points, sorted by id.
    pub fn points(&self) -> &[ColoredPoint] {
        &self.points
    }

    /// The edges as `(low id, high id)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total Euclidean length, fixed at construction.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn point_by_id(&self, id: usize) -> Option<&ColoredPoint> {
        self.points
            .binary_search_by_key(&id, |p| p.id)
            .ok()
            .map(|i| &self.points[i])
    }

    /// Endpoints of the `i`-th edge (panics on out-of-range indices).
    pub fn edge_endpoints(&self, i: usize) -> (&ColoredPoint, &ColoredPoint) {
        let (u, v) = self.edges[i];
        (
            self.point_by_id(u).expect("edge endpoint validated at construction"),
            self.point_by_id(v).expect("edge endpoint validated at construction"),
        )
    }

    /// Adjacency lists in point-id space.
    pub fn adjacency(&self) -> std::collections::HashMap<usize, Vec<usize>> {
        let mut adj: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::with_capacity(self.points.len());
        for p in &self.points {
            adj.insert(p.id, Vec::new());
        }
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        adj
    }
}

/// Total Euclidean length of a tree, recomputed from scratch. Agrees with
/// [`ColoredTree::total_length`] up to the usual summation rounding.
pub fn tree_length(tree: &ColoredTree) -> f64 {
    length_of(&tree.points, &tree.edges)
}

fn length_of(points: &[ColoredPoint], edges: &[(usize, usize)]) -> f64 {
    let at = |id: usize| &points[points.binary_search_by_key(&id, |p| p.id).unwrap()];
    edges.iter().map(|&(u, v)| at(u).dist(at(v))).sum()
}

/// Outcome of [`min_colored_spanning_tree_detailed`].
#[derive(Debug, Clone)]
pub struct MinbstOutcome {
    pub tree: ColoredTree,
    /// Number of growth steps at which at least two candidate edges of
    /// exactly equal squared length competed. Zero means the minimum tree
    /// was unique at every step (the generic case); a positive count means
    /// the id-based tie-breaks participated in the result.
    pub tie_steps: usize,
}

/// Minimum-length properly colored spanning tree.
///
/// Runs Prim's algorithm over the complete multipartite graph in `O(n^2)`
/// time. Ties are broken by the candidate edge's `(low id, high id)` pair
/// and the growth starts at the point with the smallest id, so the result is
/// a pure function of the point set.
pub fn min_colored_spanning_tree(points: &[ColoredPoint]) -> Result<ColoredTree> {
    Ok(min_colored_spanning_tree_detailed(points)?.tree)
}

/// As [`min_colored_spanning_tree`], also reporting how often equal-length
/// candidates were separated by id alone.
pub fn min_colored_spanning_tree_detailed(points: &[ColoredPoint]) -> Result<MinbstOutcome> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if points.iter().all(|p| p.color == points[0].color) {
        return Err(Error::Monochromatic);
    }

    const NO_EDGE: (usize, usize) = (usize::MAX, usize::MAX);
    let start = (0..n).min_by_key(|&i| points[i].id).unwrap();
    let mut in_tree = vec![false; n];
    let mut key_sq = vec![f64::INFINITY; n];
    let mut key_edge = vec![NO_EDGE; n];
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut tie_steps = 0usize;

    let mut current = start;
    in_tree[current] = true;
    for _ in 0..n - 1 {
        let u = &points[current];
        for (j, p) in points.iter().enumerate() {
            if in_tree[j] || p.color == u.color {
                continue;
            }
            let cand_sq = u.dist_sq(p);
            let cand_edge = norm_pair(u.id, p.id);
            if cand_sq < key_sq[j] || (cand_sq == key_sq[j] && cand_edge < key_edge[j]) {
                key_sq[j] = cand_sq;
                key_edge[j] = cand_edge;
            }
        }
        let mut best: Option<usize> = None;
        let mut tied = false;
        for j in 0..n {
            if in_tree[j] || key_edge[j] == NO_EDGE {
                continue;
            }
            match best {
                None => best = Some(j),
                Some(b) => {
                    if key_sq[j] == key_sq[b] {
                        tied = true;
                    }
                    if key_sq[j] < key_sq[b]
                        || (key_sq[j] == key_sq[b] && key_edge[j] < key_edge[b])
                    {
                        best = Some(j);
                    }
                }
            }
        }
        let next = best.ok_or_else(|| {
            Error::Internal("no reachable point while growing the spanning tree".into())
        })?;
        if tied {
            tie_steps += 1;
        }
        edges.push(key_edge[next]);
        in_tree[next] = true;
        current = next;
    }

    let tree = ColoredTree::new(points.to_vec(), edges)?;
    Ok(MinbstOutcome { tree, tie_steps })
}

/// The closest pair of differently colored points, returned in id order.
/// Distance ties are resolved by the `(low id, high id)` pair.
pub fn closest_pair_bichromatic(
    points: &[ColoredPoint],
) -> Result<(ColoredPoint, ColoredPoint)> {
    let pairs = closest_bichromatic_pairs(points)?;
    Ok(pairs[0])
}

/// All differently colored pairs realizing the minimum distance, sorted by
/// id pair. (Generically there is exactly one.)
pub fn closest_bichromatic_pairs(
    points: &[ColoredPoint],
) -> Result<Vec<(ColoredPoint, ColoredPoint)>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let mut best_sq = f64::INFINITY;
    let mut best: Vec<(ColoredPoint, ColoredPoint)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (p, q) = (&points[i], &points[j]);
            if p.color == q.color {
                continue;
            }
            let d = p.dist_sq(q);
            if d < best_sq {
                best_sq = d;
                best.clear();
            }
            if d == best_sq {
                let pair = if p.id <= q.id { (*p, *q) } else { (*q, *p) };
                best.push(pair);
            }
        }
    }
    if best.is_empty() {
        return Err(Error::Monochromatic);
    }
    best.sort_by_key(|(p, q)| (p.id, q.id));
    Ok(best)
}

#[derive(Debug)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both are already in one component.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ColorId;

    fn pt(x: f64, y: f64, color: ColorId, id: usize) -> ColoredPoint {
        ColoredPoint::new(x, y, color, id)
    }

    /// Exhaustive reference: enumerate all properly colored spanning trees
    /// and return the minimum length. Only usable for tiny n.
    fn enumerate_min_length(points: &[ColoredPoint]) -> Option<f64> {
        let n = points.len();
        let mut cand: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i].color != points[j].color {
                    cand.push((i, j));
                }
            }
        }
        let mut best: Option<f64> = None;
        let need = n - 1;
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        fn rec(
            cand: &[(usize, usize)],
            from: usize,
            need: usize,
            chosen: &mut Vec<(usize, usize)>,
            points: &[ColoredPoint],
            best: &mut Option<f64>,
        ) {
            if need == 0 {
                let mut dsu: Vec<usize> = (0..points.len()).collect();
                fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
                    while dsu[x] != x {
                        let up = dsu[dsu[x]];
                        dsu[x] = up;
                        x = up;
                    }
                    x
                }
                let mut comps = points.len();
                for &(i, j) in chosen.iter() {
                    let (a, b) = (find(&mut dsu, i), find(&mut dsu, j));
                    if a == b {
                        return;
                    }
                    dsu[a] = b;
                    comps -= 1;
                }
                if comps == 1 {
                    let len: f64 = chosen
                        .iter()
                        .map(|&(i, j)| points[i].dist(&points[j]))
                        .sum();
                    if best.map_or(true, |b| len < b) {
                        *best = Some(len);
                    }
                }
                return;
            }
            if cand.len() - from < need {
                return;
            }
            for i in from..cand.len() {
                chosen.push(cand[i]);
                rec(cand, i + 1, need - 1, chosen, points, best);
                chosen.pop();
            }
        }
        rec(&cand, 0, need, &mut chosen, points, &mut best);
        best
    }

    #[test]
    fn two_points_single_edge() {
        let pts = vec![pt(0.0, 0.0, 0, 0), pt(3.0, 4.0, 1, 1)];
        let tree = min_colored_spanning_tree(&pts).unwrap();
        assert_eq!(tree.edges(), &[(0, 1)]);
        assert!((tree.total_length() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn bipartite_four_point_row() {
        // Red at x = 0 and 6, blue at x = 2 and 4: the only edges are
        // red-blue, and the cheapest spanning tree has length 12 (2+2+8 or
        // the symmetric variant; both are optimal).
        let pts = vec![
            pt(0.0, 0.0, 0, 0),
            pt(6.0, 0.5, 0, 1),
            pt(2.0, 0.1, 1, 2),
            pt(4.0, 0.4, 1, 3),
        ];
        let tree = min_colored_spanning_tree(&pts).unwrap();
        let oracle = enumerate_min_length(&pts).unwrap();
        assert!((tree.total_length() - oracle).abs() < 1e-9);
        for &(u, v) in tree.edges() {
            let (p, q) = (
                tree.point_by_id(u).unwrap(),
                tree.point_by_id(v).unwrap(),
            );
            assert_ne!(p.color, q.color, "edge ({u}, {v}) must be properly colored");
        }
    }

    #[test]
    fn seven_points_match_enumeration() {
        let pts = vec![
            pt(0.31, 0.11, 0, 0),
            pt(0.87, 0.64, 0, 1),
            pt(0.22, 0.83, 0, 2),
            pt(0.55, 0.29, 1, 3),
            pt(0.68, 0.91, 1, 4),
            pt(0.09, 0.47, 1, 5),
            pt(0.93, 0.18, 1, 6),
        ];
        let tree = min_colored_spanning_tree(&pts).unwrap();
        let oracle = enumerate_min_length(&pts).unwrap();
        assert!(
            (tree.total_length() - oracle).abs() < 1e-9,
            "prim = {}, enumeration = {}",
            tree.total_length(),
            oracle
        );
    }

    #[test]
    fn three_colors_match_enumeration() {
        let pts = vec![
            pt(0.10, 0.20, 0, 0),
            pt(0.90, 0.30, 1, 1),
            pt(0.40, 0.85, 2, 2),
            pt(0.65, 0.15, 0, 3),
            pt(0.25, 0.55, 1, 4),
            pt(0.80, 0.75, 2, 5),
        ];
        let tree = min_colored_spanning_tree(&pts).unwrap();
        let oracle = enumerate_min_length(&pts).unwrap();
        assert!((tree.total_length() - oracle).abs() < 1e-9);
    }

    #[test]
    fn monochromatic_input_is_rejected() {
        let pts = vec![pt(0.0, 0.0, 0, 0), pt(1.0, 0.0, 0, 1), pt(0.0, 1.0, 0, 2)];
        assert_eq!(min_colored_spanning_tree(&pts), Err(Error::Monochromatic));
    }

    #[test]
    fn single_point_is_rejected() {
        let pts = vec![pt(0.0, 0.0, 0, 0)];
        assert_eq!(
            min_colored_spanning_tree(&pts),
            Err(Error::TooFewPoints { needed: 2, got: 1 })
        );
    }

    #[test]
    fn result_is_independent_of_input_order() {
        let pts = vec![
            pt(0.31, 0.11, 0, 0),
            pt(0.87, 0.64, 0, 1),
            pt(0.22, 0.83, 0, 2),
            pt(0.55, 0.29, 1, 3),
            pt(0.68, 0.91, 1, 4),
            pt(0.09, 0.47, 1, 5),
        ];
        let t1 = min_colored_spanning_tree(&pts).unwrap();
        let mut rev = pts.clone();
        rev.reverse();
        let t2 = min_colored_spanning_tree(&rev).unwrap();
        assert_eq!(t1.edges(), t2.edges());
    }

    #[test]
    fn closest_pair_basic() {
        let pts = vec![
            pt(0.0, 0.0, 0, 0),
            pt(5.0, 5.0, 0, 1),
            pt(0.5, 0.0, 1, 2),
            pt(5.0, 4.0, 1, 3),
        ];
        let (p, q) = closest_pair_bichromatic(&pts).unwrap();
        assert_eq!((p.id, q.id), (0, 2));
    }

    #[test]
    fn closest_pair_ignores_same_color() {
        // The globally closest pair is monochromatic; the bichromatic pair
        // must skip it.
        let pts = vec![
            pt(0.0, 0.0, 0, 0),
            pt(0.01, 0.0, 0, 1),
            pt(1.0, 0.0, 1, 2),
        ];
        let (p, q) = closest_pair_bichromatic(&pts).unwrap();
        assert_eq!((p.id, q.id), (1, 2));
    }

    #[test]
    fn closest_pair_monochromatic_is_rejected() {
        let pts = vec![pt(0.0, 0.0, 0, 0), pt(1.0, 0.0, 0, 1)];
        assert_eq!(closest_pair_bichromatic(&pts), Err(Error::Monochromatic));
    }

    #[test]
    fn tree_length_agrees_with_stored_total() {
        let pts = vec![
            pt(0.0, 0.0, 0, 0),
            pt(6.0, 0.5, 0, 1),
            pt(2.0, 0.1, 1, 2),
            pt(4.0, 0.4, 1, 3),
        ];
        let tree = min_colored_spanning_tree(&pts).unwrap();
        let rel = (tree_length(&tree) - tree.total_length()).abs()
            / tree.total_length().max(1.0);
        assert!(rel < 1e-12);
    }

    #[test]
    fn singleton_tree_has_zero_length() {
        let tree = ColoredTree::new(vec![pt(0.3, 0.4, 0, 0)], vec![]).unwrap();
        assert_eq!(tree.total_length(), 0.0);
        assert_eq!(tree_length(&tree), 0.0);
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let pts = || vec![pt(0.0, 0.0, 0, 0), pt(1.0, 0.0, 1, 1), pt(2.0, 0.3, 0, 2)];
        // Wrong edge count.
        assert!(matches!(
            ColoredTree::new(pts(), vec![(0, 1)]),
            Err(Error::InvalidTree(_))
        ));
        // Cycle (and wrong count caught first if lengths differ, so use 2 edges
        // with a repeat).
        assert!(matches!(
            ColoredTree::new(pts(), vec![(0, 1), (1, 0)]),
            Err(Error::InvalidTree(_))
        ));
        // Monochromatic edge.
        assert!(matches!(
            ColoredTree::new(pts(), vec![(0, 1), (0, 2)]),
            Err(Error::InvalidTree(_))
        ));
        // Unknown endpoint.
        assert!(matches!(
            ColoredTree::new(pts(), vec![(0, 1), (1, 9)]),
            Err(Error::InvalidTree(_))
        ));
        // Valid path red-blue-red.
        assert!(ColoredTree::new(pts(), vec![(0, 1), (1, 2)]).is_ok());
    }
}
