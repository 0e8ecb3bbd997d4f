//! Cross-module invariants of the approximation pipeline, checked on seeded
//! random instances:
//!
//! * every approximate tree is plane, spanning, properly colored, and at
//!   least as long as the minimum tree;
//! * the per-shift length bound holds: in frame coordinates the plane tree
//!   is at most `sqrt(2) * L* + 4 * sqrt(2) * opt_prime(...).total` where
//!   `L*` is the minimum tree length;
//! * every non-trivial merge is covered by the charging argument — the
//!   number of new edges is at most twice the number of minimum-tree edges
//!   meeting the boundaries of the merged rectangles (and at least one such
//!   edge exists when two trees are bridged);
//! * the derandomized tree is no longer than the average over all discrete
//!   shifts.

use bichroma::geom::{
    orient, validate_general_position, AxisRect, ColoredPoint, GP_FULL_SCAN_LIMIT,
};
use bichroma::minbst::min_colored_spanning_tree;
use bichroma::plane::MergeCase;
use bichroma::quadtree::{
    approx_tree, approx_tree_detailed, derandomized_tree, normalize,
    quadtree_denominator, opt_prime, Shift,
};
use bichroma::crossing::is_plane;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Uniform random points in the unit square, colors round-robin, retried
/// until the set is in general position.
fn random_instance(n: usize, seed: u64, colors: u32) -> Vec<ColoredPoint> {
    for attempt in 0..64u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let pts: Vec<ColoredPoint> = (0..n)
            .map(|i| {
                ColoredPoint::new(rng.gen::<f64>(), rng.gen::<f64>(), (i as u32) % colors, i)
            })
            .collect();
        if validate_general_position(&pts, GP_FULL_SCAN_LIMIT).is_ok() {
            return pts;
        }
    }
    panic!("could not draw a general-position instance for n={n}, seed={seed}");
}

/// Closed segment/segment intersection (shared points and touching count).
fn segments_touch(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let on_seg = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1)
    };
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
        && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))
    {
        return true;
    }
    (d1 == 0 && on_seg(c, d, a))
        || (d2 == 0 && on_seg(c, d, b))
        || (d3 == 0 && on_seg(a, b, c))
        || (d4 == 0 && on_seg(a, b, d))
}

/// Does the closed segment `pq` touch the boundary of `rect`?
fn touches_rect_boundary(p: (f64, f64), q: (f64, f64), rect: &AxisRect) -> bool {
    let corners = [
        (rect.x_lo, rect.y_lo),
        (rect.x_hi, rect.y_lo),
        (rect.x_hi, rect.y_hi),
        (rect.x_lo, rect.y_hi),
    ];
    (0..4).any(|i| segments_touch(p, q, corners[i], corners[(i + 1) % 4]))
}

#[test]
fn approx_output_is_always_plane_spanning_properly_colored() {
    for (n, seed, colors) in [
        (4usize, 11u64, 2u32),
        (9, 12, 2),
        (16, 13, 2),
        (23, 14, 3),
        (32, 15, 2),
        (41, 16, 4),
        (64, 17, 2),
    ] {
        let pts = random_instance(n, seed, colors);
        let exact = min_colored_spanning_tree(&pts).unwrap();
        for s in 0..4u64 {
            let shift = Shift::random(seed.wrapping_mul(100) + s);
            let tree = approx_tree(&pts, &shift).unwrap();
            assert_eq!(tree.len(), n);
            assert!(is_plane(&tree).unwrap(), "n={n} seed={seed} shift {s}");
            for &(u, v) in tree.edges() {
                let (p, q) = (
                    tree.point_by_id(u).unwrap(),
                    tree.point_by_id(v).unwrap(),
                );
                assert_ne!(p.color, q.color);
            }
            assert!(
                tree.total_length() >= exact.total_length() - 1e-9,
                "approximation beat the minimum on n={n} seed={seed}"
            );
        }
    }
}

#[test]
fn per_shift_length_bound_holds() {
    for (n, seed) in [(4usize, 21u64), (8, 22), (15, 23), (24, 24), (40, 25), (64, 26)] {
        let pts = random_instance(n, seed, 2);
        let (normed, _) = normalize(&pts).unwrap();
        let reference = min_colored_spanning_tree(&normed).unwrap();
        let lstar = reference.total_length();
        let mut shifts = vec![];
        for s in 0..3u64 {
            shifts.push(Shift::random(seed.wrapping_mul(31) + s));
        }
        let denom = quadtree_denominator(n);
        shifts.push(Shift::discrete(0, 0, denom).unwrap());
        shifts.push(Shift::discrete(denom / 2, denom - 1, denom).unwrap());
        for shift in shifts {
            let detail = approx_tree_detailed(&pts, &shift).unwrap();
            let profile = opt_prime(&reference, &detail.quadtree);
            let bound = SQRT2 * lstar + 4.0 * SQRT2 * profile.total;
            let got = detail.normalized_tree.total_length();
            assert!(
                got <= bound + 1e-9,
                "n={n} seed={seed} shift=({}, {}): length {got} > bound {bound}",
                shift.x,
                shift.y
            );
        }
    }
}

#[test]
fn merge_charging_is_covered_by_reference_boundary_crossings() {
    for (n, seed) in [(6usize, 41u64), (12, 42), (20, 43), (33, 44), (48, 45)] {
        let pts = random_instance(n, seed, 2);
        let (normed, _) = normalize(&pts).unwrap();
        let reference = min_colored_spanning_tree(&normed).unwrap();
        let ref_segs: Vec<((f64, f64), (f64, f64))> = (0..reference.edges().len())
            .map(|i| {
                let (p, q) = reference.edge_endpoints(i);
                (p.xy(), q.xy())
            })
            .collect();
        for s in 0..3u64 {
            let shift = Shift::random(seed.wrapping_mul(77) + s);
            let detail = approx_tree_detailed(&pts, &shift).unwrap();
            for event in &detail.merge_log {
                let crossings = ref_segs
                    .iter()
                    .filter(|(p, q)| {
                        touches_rect_boundary(*p, *q, &event.rect_a)
                            || touches_rect_boundary(*p, *q, &event.rect_b)
                    })
                    .count();
                match event.case {
                    MergeCase::BothMono | MergeCase::TreeMono => {
                        assert!(
                            event.new_edges <= 2 * crossings,
                            "n={n} seed={seed} shift {s}: {} new edges but only \
                             {crossings} reference edges on the merged boundaries",
                            event.new_edges
                        );
                    }
                    MergeCase::TreeTree => {
                        assert!(
                            crossings >= 1,
                            "n={n} seed={seed} shift {s}: bridged two trees without \
                             any reference edge on the merged boundaries"
                        );
                        assert_eq!(event.new_edges, 1);
                    }
                    MergeCase::Trivial => unreachable!("trivial merges are not logged"),
                }
            }
        }
    }
}

#[test]
fn derandomized_is_no_longer_than_the_discrete_average() {
    for (n, seed) in [(5usize, 61u64), (8, 62), (13, 63), (16, 64)] {
        let pts = random_instance(n, seed, 2);
        let (tree, shift) = derandomized_tree(&pts).unwrap();
        let denom = quadtree_denominator(n);
        let mut sum = 0.0;
        let mut count = 0usize;
        for i in 0..denom {
            for j in 0..denom {
                let t = approx_tree(&pts, &Shift::discrete(i, j, denom).unwrap()).unwrap();
                sum += t.total_length();
                count += 1;
            }
        }
        let mean = sum / count as f64;
        assert!(
            tree.total_length() <= mean + 1e-9,
            "n={n} seed={seed}: derandomized {} > mean {mean}",
            tree.total_length()
        );
        // The winning shift is one of the enumerated ones.
        assert!(matches!(
            shift.kind,
            bichroma::quadtree::ShiftKind::Discrete { .. }
        ));
    }
}

#[test]
fn minimum_tree_cut_property_on_random_instances() {
    // For every tree edge (u, v): removing it splits the tree in two; among
    // all properly colored edges reconnecting the sides, (u, v) is shortest
    // (up to the id tie-break). This certifies minimality without
    // enumerating all trees.
    for (n, seed) in [(8usize, 81u64), (12, 82), (17, 83)] {
        let pts = random_instance(n, seed, 2);
        let tree = min_colored_spanning_tree(&pts).unwrap();
        let adj = tree.adjacency();
        for &(u, v) in tree.edges() {
            // Vertices on u's side after removing (u, v).
            let mut side = std::collections::HashSet::new();
            let mut stack = vec![u];
            side.insert(u);
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if (x, y) == (u, v) || (x, y) == (v, u) {
                        continue;
                    }
                    if side.insert(y) {
                        stack.push(y);
                    }
                }
            }
            let len_uv = tree
                .point_by_id(u)
                .unwrap()
                .dist(tree.point_by_id(v).unwrap());
            for p in &pts {
                for q in &pts {
                    if !side.contains(&p.id) || side.contains(&q.id) || p.color == q.color
                    {
                        continue;
                    }
                    assert!(
                        p.dist(q) >= len_uv - 1e-12,
                        "edge ({u}, {v}) is not a lightest cut edge: ({}, {}) is shorter",
                        p.id,
                        q.id
                    );
                }
            }
        }
    }
}
