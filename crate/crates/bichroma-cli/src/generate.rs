//! Instance generators: seeded uniform point sets and two deterministic
//! extremal gadgets whose minimum colored spanning trees realize the
//! crossing-count bounds exactly.

use bichroma::geom::{validate_general_position, ColoredPoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::io::{InstanceFile, InstanceMetadata};

/// Half-distance between the two bottom gadget points.
pub const GADGET_DELTA: f64 = 0.01;
/// Radius of the disks holding the top gadget clusters.
pub const GADGET_RADIUS: f64 = 0.02;
/// Above this size the uniform generator's collinearity scan samples
/// triples instead of enumerating all of them; exhaustive checking is
/// cubic and would dominate generation for thousands of points.
const GEN_FULL_SCAN_LIMIT: usize = 256;
/// Golden-angle increment used to spread cluster points; consecutive
/// multiples never repeat a direction, which keeps triples off common lines.
const GOLDEN_ANGLE: f64 = 2.399963229728653;

/// `n` points i.i.d. uniform in the unit square. Colors are dealt
/// round-robin and then shuffled, so every color class is as balanced as
/// possible while the assignment still varies with the seed. If the sample
/// has three collinear points (or a duplicate) the whole set is resampled
/// with an incremented sub-seed.
pub fn gen_uniform(n: usize, seed: u64, colors: u32) -> CliResult<InstanceFile> {
    if n < 2 {
        return Err(CliError::BadSize { min: 2, got: n });
    }
    if colors < 2 {
        return Err(CliError::Input(format!(
            "need at least 2 colors, got {colors}"
        )));
    }
    if (colors as usize) > n {
        return Err(CliError::Input(format!(
            "{colors} colors cannot all appear among {n} points"
        )));
    }
    for sub_seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(sub_seed));
        let mut palette: Vec<u32> = (0..n).map(|i| i as u32 % colors).collect();
        palette.shuffle(&mut rng);
        let points: Vec<ColoredPoint> = palette
            .iter()
            .enumerate()
            .map(|(id, &color)| ColoredPoint {
                x: rng.gen::<f64>(),
                y: rng.gen::<f64>(),
                color,
                id,
            })
            .collect();
        if validate_general_position(&points, GEN_FULL_SCAN_LIMIT).is_ok() {
            let mut file = InstanceFile::from_points(&points);
            file.metadata = Some(InstanceMetadata {
                name: Some(format!("uniform-n{n}-s{seed}")),
                seed: Some(seed),
                generator: Some("uniform".into()),
            });
            return Ok(file);
        }
    }
    Err(CliError::Internal(format!(
        "could not sample {n} points in general position from seed {seed}"
    )))
}

/// Places `size` points inside the disk of radius [`GADGET_RADIUS`] around
/// `(cx, cy)` on a golden-angle spiral. Deterministic, and no three points
/// of the gadget end up collinear (checked by the tightness tests).
fn cluster(cx: f64, cy: f64, size: usize, color: u32, first_id: usize) -> Vec<ColoredPoint> {
    (0..size)
        .map(|k| {
            let angle = (k as f64 + 1.0) * GOLDEN_ANGLE;
            let r = GADGET_RADIUS * (k as f64 + 1.0) / (size as f64 + 1.0);
            ColoredPoint {
                x: cx + r * angle.cos(),
                y: cy + r * angle.sin(),
                color,
                id: first_id + k,
            }
        })
        .collect()
}

/// Shared skeleton of both gadgets: a red point at `(δ, 0)`, a blue point
/// at `(−δ, 0)`, a blue cluster near `(−1, 1)` and a red cluster near
/// `(1, 1)`. Every blue top point's cheapest colored edge runs to the red
/// bottom point and vice versa, so the minimum colored spanning tree is the
/// two fans plus the short bottom edge, and each fan edge crosses every
/// edge of the opposite fan exactly once.
fn fan_gadget(blue_top: usize, red_top: usize, name: &str) -> InstanceFile {
    let mut points = vec![
        ColoredPoint {
            x: GADGET_DELTA,
            y: 0.0,
            color: 0,
            id: 0,
        },
        ColoredPoint {
            x: -GADGET_DELTA,
            y: 0.0,
            color: 1,
            id: 1,
        },
    ];
    points.extend(cluster(-1.0, 1.0, blue_top, 1, 2));
    points.extend(cluster(1.0, 1.0, red_top, 0, 2 + blue_top));
    let mut file = InstanceFile::from_points(&points);
    file.metadata = Some(InstanceMetadata {
        name: Some(format!("{name}-n{}", points.len())),
        seed: None,
        generator: Some(name.into()),
    });
    file
}

/// Gadget whose MinBST attains the total-crossing bound
/// ⌊n²/4⌋ − n + 1 = (⌊n/2⌋−1)(⌈n/2⌉−1) exactly: the top clusters hold
/// ⌊n/2⌋−1 blue and ⌈n/2⌉−1 red points.
pub fn gen_max_crossing_gadget(n: usize) -> CliResult<InstanceFile> {
    if n < 4 {
        return Err(CliError::BadSize { min: 4, got: n });
    }
    Ok(fan_gadget(n / 2 - 1, n.div_ceil(2) - 1, "max-crossing"))
}

/// Gadget whose MinBST has a single edge crossed by exactly n−3 others:
/// the blue cluster shrinks to one point whose fan edge crosses the entire
/// opposite fan of n−3 edges.
pub fn gen_per_edge_gadget(n: usize) -> CliResult<InstanceFile> {
    if n < 4 {
        return Err(CliError::BadSize { min: 4, got: n });
    }
    Ok(fan_gadget(1, n - 3, "per-edge"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bichroma::crossing::{crossing_pairs, max_crossing_bound};
    use bichroma::geom::GP_FULL_SCAN_LIMIT;
    use bichroma::minbst::min_colored_spanning_tree;

    #[test]
    fn uniform_is_deterministic() {
        let a = gen_uniform(5, 7, 2).unwrap();
        let b = gen_uniform(5, 7, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn uniform_two_points_get_both_colors() {
        for seed in 0..20 {
            let file = gen_uniform(2, seed, 2).unwrap();
            let mut colors: Vec<u32> = file.points.iter().map(|p| p.color).collect();
            colors.sort_unstable();
            assert_eq!(colors, vec![0, 1]);
        }
    }

    #[test]
    fn uniform_colors_are_balanced_round_robin() {
        let file = gen_uniform(10, 3, 3).unwrap();
        let mut counts = [0usize; 3];
        for p in &file.points {
            counts[p.color as usize] += 1;
        }
        // 10 points over 3 colors: class sizes 4, 3, 3 in some order.
        let mut sorted = counts;
        sorted.sort_unstable();
        assert_eq!(sorted, [3, 3, 4]);
    }

    #[test]
    fn uniform_large_sample_is_general_position() {
        let file = gen_uniform(64, 1, 2).unwrap();
        let points = file.into_points().unwrap();
        validate_general_position(&points, GP_FULL_SCAN_LIMIT).unwrap();
        assert!(points
            .iter()
            .all(|p| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));
    }

    #[test]
    fn uniform_rejects_bad_parameters() {
        assert!(matches!(
            gen_uniform(1, 0, 2),
            Err(CliError::BadSize { min: 2, got: 1 })
        ));
        assert!(gen_uniform(5, 0, 1).is_err());
        assert!(gen_uniform(2, 0, 3).is_err());
    }

    #[test]
    fn gadgets_reject_small_n() {
        assert!(matches!(
            gen_max_crossing_gadget(3),
            Err(CliError::BadSize { min: 4, got: 3 })
        ));
        assert!(matches!(
            gen_per_edge_gadget(3),
            Err(CliError::BadSize { .. })
        ));
    }

    #[test]
    fn gadgets_are_general_position() {
        for n in 4..=24 {
            for file in [
                gen_max_crossing_gadget(n).unwrap(),
                gen_per_edge_gadget(n).unwrap(),
            ] {
                let points = file.into_points().unwrap();
                assert_eq!(points.len(), n);
                validate_general_position(&points, GP_FULL_SCAN_LIMIT).unwrap();
            }
        }
    }

    #[test]
    fn max_crossing_gadget_is_tight() {
        for n in 4..=20 {
            let points = gen_max_crossing_gadget(n).unwrap().into_points().unwrap();
            let tree = min_colored_spanning_tree(&points).unwrap();
            let crossings = crossing_pairs(&tree).unwrap();
            assert_eq!(
                crossings.len(),
                max_crossing_bound(n),
                "gadget n={n} should meet the total-crossing bound"
            );
        }
    }

    #[test]
    fn per_edge_gadget_is_tight() {
        for n in 4..=20 {
            let points = gen_per_edge_gadget(n).unwrap().into_points().unwrap();
            let tree = min_colored_spanning_tree(&points).unwrap();
            let crossings = crossing_pairs(&tree).unwrap();
            let mut per_edge = vec![0usize; tree.edges().len()];
            for &(a, b) in &crossings {
                per_edge[a] += 1;
                per_edge[b] += 1;
            }
            assert_eq!(
                per_edge.iter().copied().max().unwrap_or(0),
                n - 3,
                "gadget n={n} should have an edge with n-3 crossings"
            );
        }
    }

    #[test]
    fn gadget_minbst_is_two_fans_plus_bottom_edge() {
        let points = gen_max_crossing_gadget(10).unwrap().into_points().unwrap();
        let tree = min_colored_spanning_tree(&points).unwrap();
        assert!(tree.edges().contains(&(0, 1)), "bottom edge must be chosen");
        for p in tree.points() {
            if p.id < 2 {
                continue;
            }
            let partner = if p.color == 1 { 0 } else { 1 };
            assert!(
                tree.edges().contains(&(partner, p.id)),
                "top point {} should fan to bottom point {partner}",
                p.id
            );
        }
    }
}
