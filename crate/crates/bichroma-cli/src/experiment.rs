//! Experiment driver: runs the full pipeline (generate, MinBST, crossing
//! statistics, approximation under a shift policy, optional oracle
//! cross-check) over a grid of generators, sizes, and seeds, and writes
//! deterministic record tables.
//!
//! Instances execute concurrently when a thread budget allows, but results
//! are collected and written in instance order, so output bytes never
//! depend on scheduling. Wall-clock times are kept off the serialized
//! records for the same reason; the command layer reports them on stderr.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use bichroma::crossing::verify_minbst_properties;
use bichroma::minbst::min_colored_spanning_tree;
use bichroma::quadtree::{approx_tree, derandomized_tree, quadtree_denominator, Shift, ShiftKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::generate::{gen_max_crossing_gadget, gen_per_edge_gadget, gen_uniform};
use crate::io::InstanceFile;
use crate::oracle::{brute_force_min_plane_tree, ORACLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Uniform,
    MaxCrossing,
    PerEdge,
}

impl GeneratorKind {
    fn name(self) -> &'static str {
        match self {
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::MaxCrossing => "max-crossing",
            GeneratorKind::PerEdge => "per-edge",
        }
    }

    /// Gadgets are deterministic, so seeds only multiply uniform instances.
    fn uses_seeds(self) -> bool {
        self == GeneratorKind::Uniform
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

/// Which shifts to run the approximation under.
///
/// `AllDiscrete` enumerates every grid shift via the derandomized search
/// and reports only the winner; the other policies record one outcome per
/// listed shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftPolicy {
    AllDiscrete,
    Random { count: u64 },
    Grid { pairs: Vec<(u32, u32)> },
}

fn default_colors() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generators: Vec<GeneratorKind>,
    pub sizes: Vec<usize>,
    pub seeds: SeedRange,
    pub shifts: ShiftPolicy,
    #[serde(default = "default_colors")]
    pub colors: u32,
    #[serde(default)]
    pub oracle_check: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> CliResult<()> {
        if self.generators.is_empty() {
            return Err(CliError::Input("config lists no generators".into()));
        }
        if self.sizes.is_empty() {
            return Err(CliError::Input("config lists no sizes".into()));
        }
        if self.generators.iter().any(|g| g.uses_seeds()) && self.seeds.count == 0 {
            return Err(CliError::Input("seed count must be positive".into()));
        }
        match &self.shifts {
            ShiftPolicy::Random { count } if *count == 0 => {
                Err(CliError::Input("random shift count must be positive".into()))
            }
            ShiftPolicy::Grid { pairs } if pairs.is_empty() => {
                Err(CliError::Input("grid shift list must be nonempty".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftOutcome {
    pub shift: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance: String,
    pub generator: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub minbst_length: f64,
    pub crossing_count: usize,
    pub per_edge_max: usize,
    pub quasi_plane: bool,
    /// One entry per explicitly listed shift; empty under `AllDiscrete`,
    /// where the winner alone is meaningful.
    pub shift_outcomes: Vec<ShiftOutcome>,
    pub best_shift: String,
    pub best_approx_length: f64,
    /// Populated only when every discrete shift was enumerated.
    pub derandomized_length: Option<f64>,
    /// Best plane approximation length over MinBST length; always ≥ 1 up
    /// to rounding because the plane tree is a feasible colored tree.
    pub ratio: f64,
    /// Exact plane optimum for small instances when the oracle check is on.
    pub plane_optimum: Option<f64>,
    /// Wall-clock time; excluded from files to keep outputs byte-stable.
    #[serde(skip)]
    pub wall_ms: u128,
}

pub fn shift_label(shift: &Shift) -> String {
    match shift.kind {
        ShiftKind::ContinuousRandom { seed } => format!("random:{seed}"),
        ShiftKind::Discrete { i, j, .. } => format!("grid:{i},{j}"),
    }
}

/// The shifts to evaluate for one instance under a policy. Random shifts
/// derive their seeds from the instance seed so different instances do not
/// share shift streams.
fn shifts_for(policy: &ShiftPolicy, n: usize, instance_seed: u64) -> CliResult<Vec<Shift>> {
    match policy {
        ShiftPolicy::AllDiscrete => Ok(Vec::new()),
        ShiftPolicy::Random { count } => Ok((0..*count)
            .map(|k| Shift::random(instance_seed.wrapping_mul(1000).wrapping_add(k)))
            .collect()),
        ShiftPolicy::Grid { pairs } => {
            let denom = quadtree_denominator(n);
            pairs
                .iter()
                .map(|&(i, j)| Shift::discrete(i % denom, j % denom, denom).map_err(CliError::from))
                .collect()
        }
    }
}

struct Job {
    index: usize,
    generator: GeneratorKind,
    n: usize,
    seed: Option<u64>,
}

fn enumerate_jobs(config: &ExperimentConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &generator in &config.generators {
        for &n in &config.sizes {
            if generator.uses_seeds() {
                for k in 0..config.seeds.count {
                    jobs.push(Job {
                        index: jobs.len(),
                        generator,
                        n,
                        seed: Some(config.seeds.start + k),
                    });
                }
            } else {
                jobs.push(Job {
                    index: jobs.len(),
                    generator,
                    n,
                    seed: None,
                });
            }
        }
    }
    jobs
}

fn run_job(config: &ExperimentConfig, job: &Job) -> CliResult<ExperimentRecord> {
    let started = Instant::now();
    let file: InstanceFile = match job.generator {
        GeneratorKind::Uniform => gen_uniform(job.n, job.seed.unwrap_or(0), config.colors)?,
        GeneratorKind::MaxCrossing => gen_max_crossing_gadget(job.n)?,
        GeneratorKind::PerEdge => gen_per_edge_gadget(job.n)?,
    };
    let instance = file
        .metadata
        .as_ref()
        .and_then(|m| m.name.clone())
        .unwrap_or_else(|| format!("{}-n{}", job.generator.name(), job.n));
    let points = file.into_points()?;

    let minbst = min_colored_spanning_tree(&points)?;
    let report = verify_minbst_properties(&points, &minbst)?;

    let mut shift_outcomes = Vec::new();
    let mut best: Option<(f64, String)> = None;
    let mut derandomized_length = None;
    match &config.shifts {
        ShiftPolicy::AllDiscrete => {
            let (tree, shift) = derandomized_tree(&points)?;
            let length = tree.total_length();
            derandomized_length = Some(length);
            best = Some((length, shift_label(&shift)));
        }
        policy => {
            for shift in shifts_for(policy, job.n, job.seed.unwrap_or(0))? {
                let tree = approx_tree(&points, &shift)?;
                let length = tree.total_length();
                let label = shift_label(&shift);
                let better = match &best {
                    None => true,
                    Some((best_len, best_label)) => {
                        match length.total_cmp(best_len) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => label < *best_label,
                            std::cmp::Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    best = Some((length, label.clone()));
                }
                shift_outcomes.push(ShiftOutcome { shift: label, length });
            }
        }
    }
    let (best_approx_length, best_shift) =
        best.ok_or_else(|| CliError::Internal("no shift produced a tree".into()))?;

    let plane_optimum = if config.oracle_check && job.n <= ORACLE_LIMIT {
        Some(brute_force_min_plane_tree(&points)?.total_length())
    } else {
        None
    };

    Ok(ExperimentRecord {
        instance,
        generator: job.generator.name().to_string(),
        n: job.n,
        seed: job.seed,
        minbst_length: minbst.total_length(),
        crossing_count: report.crossing_count,
        per_edge_max: report.per_edge_max,
        quasi_plane: report.quasi_plane,
        shift_outcomes,
        best_shift,
        best_approx_length,
        derandomized_length,
        ratio: best_approx_length / minbst.total_length(),
        plane_optimum,
        wall_ms: started.elapsed().as_millis(),
    })
}

/// Runs every job in the config, spreading instances round-robin over up
/// to `threads` workers, and returns records in instance order.
pub fn run_experiment(
    config: &ExperimentConfig,
    threads: usize,
) -> CliResult<Vec<ExperimentRecord>> {
    config.validate()?;
    let jobs = enumerate_jobs(config);
    let workers = threads.max(1).min(jobs.len().max(1));

    let mut outcomes: Vec<(usize, CliResult<ExperimentRecord>)> = if workers <= 1 {
        jobs.iter().map(|j| (j.index, run_job(config, j))).collect()
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers {
                let slice: Vec<&Job> = jobs.iter().skip(w).step_by(workers).collect();
                let config_ref = &*config;
                handles.push(scope.spawn(move || {
                    slice
                        .into_iter()
                        .map(|j| (j.index, run_job(config_ref, j)))
                        .collect::<Vec<_>>()
                }));
            }
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("experiment worker panicked"))
                .collect()
        })
    };
    outcomes.sort_by_key(|(index, _)| *index);
    outcomes.into_iter().map(|(_, r)| r).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub generator: String,
    pub n: usize,
    pub count: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
}

pub fn aggregate(records: &[ExperimentRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.generator.clone(), r.n))
            .or_default()
            .push(r.ratio);
    }
    groups
        .into_iter()
        .map(|((generator, n), ratios)| AggregateRow {
            generator,
            n,
            count: ratios.len(),
            mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
            max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
        .collect()
}

fn opt_string<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(
        "instance,generator,n,seed,minbst_length,crossing_count,per_edge_max,quasi_plane,\
         shift_count,best_shift,best_approx_length,derandomized_length,ratio,plane_optimum\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.instance,
            r.generator,
            r.n,
            opt_string(&r.seed),
            r.minbst_length,
            r.crossing_count,
            r.per_edge_max,
            r.quasi_plane,
            r.shift_outcomes.len(),
            r.best_shift.replace(',', ";"),
            r.best_approx_length,
            opt_string(&r.derandomized_length),
            r.ratio,
            opt_string(&r.plane_optimum),
        ));
    }
    out
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from("generator,n,count,mean_ratio,max_ratio\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.generator, row.n, row.count, row.mean_ratio, row.max_ratio
        ));
    }
    out
}

/// Writes `records.json`, `records.csv`, and `aggregate.csv` under
/// `out_dir`, creating the directory if needed.
pub fn write_outputs(records: &[ExperimentRecord], out_dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut json = serde_json::to_string_pretty(records).expect("records serialize");
    json.push('\n');
    std::fs::write(out_dir.join("records.json"), json)?;
    std::fs::write(out_dir.join("records.csv"), records_csv(records))?;
    std::fs::write(out_dir.join("aggregate.csv"), aggregate_csv(&aggregate(records)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(shifts: ShiftPolicy) -> ExperimentConfig {
        ExperimentConfig {
            generators: vec![GeneratorKind::Uniform],
            sizes: vec![8, 16],
            seeds: SeedRange { start: 1, count: 10 },
            shifts,
            colors: 2,
            oracle_check: false,
        }
    }

    #[test]
    fn config_parses_from_json() {
        let text = r#"{
            "generators": ["uniform", "max-crossing"],
            "sizes": [8],
            "seeds": {"start": 1, "count": 2},
            "shifts": "all-discrete",
            "oracle_check": true
        }"#;
        let config = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(config.generators.len(), 2);
        assert_eq!(config.colors, 2);
        assert!(config.oracle_check);
        assert_eq!(config.shifts, ShiftPolicy::AllDiscrete);
    }

    #[test]
    fn config_rejects_unknown_fields_with_location() {
        let err = ExperimentConfig::from_json(
            r#"{
            "generators": ["uniform"],
            "sizes": [8],
            "seeds": {"start": 1, "count": 2},
            "shifts": "all-discrete",
            "bogus": 1
        }"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "diagnostic should cite a line: {msg}");
    }

    #[test]
    fn all_discrete_run_produces_expected_records() {
        let config = small_config(ShiftPolicy::AllDiscrete);
        let records = run_experiment(&config, 1).unwrap();
        assert_eq!(records.len(), 20);
        for r in &records {
            assert!(r.ratio >= 1.0 - 1e-9, "ratio {} below 1", r.ratio);
            assert!(r.derandomized_length.is_some());
            assert!(r.shift_outcomes.is_empty());
            assert!(r.best_shift.starts_with("grid:"));
        }
    }

    #[test]
    fn oracle_check_bounds_approx_from_below() {
        let config = ExperimentConfig {
            generators: vec![GeneratorKind::Uniform],
            sizes: vec![8],
            seeds: SeedRange { start: 1, count: 10 },
            shifts: ShiftPolicy::AllDiscrete,
            colors: 2,
            oracle_check: true,
        };
        let records = run_experiment(&config, 2).unwrap();
        for r in &records {
            let plane = r.plane_optimum.expect("n=8 is within oracle range");
            assert!(r.minbst_length <= plane + 1e-9);
            assert!(plane <= r.best_approx_length + 1e-9);
        }
    }

    #[test]
    fn reruns_and_thread_counts_are_byte_identical() {
        let config = small_config(ShiftPolicy::Random { count: 2 });
        let a = run_experiment(&config, 1).unwrap();
        let b = run_experiment(&config, 4).unwrap();
        assert_eq!(records_csv(&a), records_csv(&b));
        assert_eq!(aggregate_csv(&aggregate(&a)), aggregate_csv(&aggregate(&b)));
        for r in &a {
            assert_eq!(r.shift_outcomes.len(), 2);
        }
    }

    #[test]
    fn gadget_generators_ignore_seeds() {
        let config = ExperimentConfig {
            generators: vec![GeneratorKind::MaxCrossing, GeneratorKind::PerEdge],
            sizes: vec![6, 8],
            seeds: SeedRange { start: 1, count: 5 },
            shifts: ShiftPolicy::Grid { pairs: vec![(0, 0), (1, 1)] },
            colors: 2,
            oracle_check: false,
        };
        let records = run_experiment(&config, 1).unwrap();
        // One instance per generator and size, not per seed.
        assert_eq!(records.len(), 4);
        for r in &records {
            assert_eq!(r.shift_outcomes.len(), 2);
            assert!(r.crossing_count >= 1, "gadget MinBSTs always cross");
        }
    }
}
