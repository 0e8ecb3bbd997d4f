//! Command-line surface: argument types and one handler per subcommand.
//!
//! Handlers return [`CliError`] values; the binary maps them onto exit
//! codes (0 success, 2 input, 3 infeasible, 4 budget, 5 internal). All
//! file and stdout output is deterministic for fixed inputs, seeds, and
//! thread settings.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use bichroma::crossing::verify_minbst_properties;
use bichroma::geom::{validate_general_position, ColoredPoint, GP_FULL_SCAN_LIMIT};
use bichroma::minbst::{min_colored_spanning_tree, min_colored_spanning_tree_detailed};
use bichroma::quadtree::{
    approx_tree, derandomized_tree_with_threads, quadtree_denominator, Shift,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::experiment::{run_experiment, shift_label, write_outputs, ExperimentConfig};
use crate::generate::{gen_max_crossing_gadget, gen_per_edge_gadget, gen_uniform};
use crate::io::{InstanceFile, TreeFile};
use crate::oracle::{brute_force_min_plane_tree, enumerate_min_colored_tree};
use crate::svg::write_svg;

/// Environment variable capping worker threads; unset means one thread.
pub const THREADS_ENV: &str = "BICHROMA_THREADS";

pub fn thread_budget() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(CliError::Input(format!("{THREADS_ENV}: {e}"))),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Input(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bichroma",
    about = "Colored spanning trees: exact minima, crossing structure, and \
             plane approximations via shifted quadtrees",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Compute the minimum properly colored spanning tree.
    Minbst(MinbstArgs),
    /// Build a plane properly colored spanning tree with a shifted quadtree.
    Approx(ApproxArgs),
    /// Validate an instance or tree and report its crossing structure.
    Verify(VerifyArgs),
    /// Exhaustive small-instance oracles: exact MinBST and plane optimum.
    Oracle(OracleArgs),
    /// Run a configured batch of instances and write record tables.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Uniform,
    MaxCrossing,
    PerEdge,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Which generator to run.
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Number of points.
    #[arg(long)]
    pub n: usize,
    /// Seed for the uniform generator; gadgets are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of colors for the uniform generator.
    #[arg(long, default_value_t = 2)]
    pub colors: u32,
    /// Output path (.json or .csv); stdout JSON when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinbstArgs {
    /// Instance file (.json or .csv).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Write the tree as JSON here.
    #[arg(long)]
    pub out_tree: Option<PathBuf>,
    /// Render the tree (crossings marked) here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

/// Shift selection: `random:SEED`, `grid:I,J`, or `best` (enumerate all
/// discrete shifts and keep the shortest tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftArg {
    Random(u64),
    Grid(u32, u32),
    Best,
}

impl FromStr for ShiftArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "best" {
            return Ok(ShiftArg::Best);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(ShiftArg::Random)
                .map_err(|e| format!("bad shift seed {seed:?}: {e}"));
        }
        if let Some(pair) = s.strip_prefix("grid:") {
            let (i, j) = pair
                .split_once(',')
                .ok_or_else(|| format!("grid shift needs I,J, got {pair:?}"))?;
            let i = i.parse().map_err(|e| format!("bad grid index {i:?}: {e}"))?;
            let j = j.parse().map_err(|e| format!("bad grid index {j:?}: {e}"))?;
            return Ok(ShiftArg::Grid(i, j));
        }
        Err(format!(
            "shift must be random:SEED, grid:I,J, or best, got {s:?}"
        ))
    }
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Instance file (.json or .csv).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Shift policy: random:SEED, grid:I,J, or best.
    #[arg(long, default_value = "random:0")]
    pub shift: ShiftArg,
    /// Write the tree as JSON here.
    #[arg(long)]
    pub out_tree: Option<PathBuf>,
    /// Render the tree here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also compute the exact MinBST and report the length ratio.
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance file (.json or .csv).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Tree file to verify; the MinBST is computed when omitted.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Check general position and the crossing-structure properties.
    #[arg(long)]
    pub props: bool,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Instance file with at most 9 points.
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON experiment config.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for records.json, records.csv, and aggregate.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn load_points(path: &PathBuf) -> CliResult<Vec<ColoredPoint>> {
    InstanceFile::read(path)?.into_points()
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Minbst(args) => cmd_minbst(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_gen(args: GenArgs) -> CliResult<()> {
    let file = match args.kind {
        GenKind::Uniform => gen_uniform(args.n, args.seed, args.colors)?,
        GenKind::MaxCrossing => gen_max_crossing_gadget(args.n)?,
        GenKind::PerEdge => gen_per_edge_gadget(args.n)?,
    };
    match args.out {
        Some(path) => file.write(&path)?,
        None => print!("{}", file.to_json()),
    }
    Ok(())
}

fn cmd_minbst(args: MinbstArgs) -> CliResult<()> {
    let points = load_points(&args.input)?;
    let outcome = min_colored_spanning_tree_detailed(&points)?;
    if let Some(path) = &args.out_tree {
        TreeFile::from_tree(&outcome.tree).write(path)?;
    }
    if let Some(path) = &args.svg {
        write_svg(&points, Some(&outcome.tree), true, path)?;
    }
    print_json(&json!({
        "n": points.len(),
        "edges": outcome.tree.edges().len(),
        "total_length": outcome.tree.total_length(),
        "tie_steps": outcome.tie_steps,
    }));
    Ok(())
}

fn cmd_approx(args: ApproxArgs) -> CliResult<()> {
    let points = load_points(&args.input)?;
    let (tree, shift) = match args.shift {
        ShiftArg::Random(seed) => {
            let shift = Shift::random(seed);
            (approx_tree(&points, &shift)?, shift)
        }
        ShiftArg::Grid(i, j) => {
            let denom = quadtree_denominator(points.len());
            let shift = Shift::discrete(i, j, denom)?;
            (approx_tree(&points, &shift)?, shift)
        }
        ShiftArg::Best => derandomized_tree_with_threads(&points, thread_budget()?)?,
    };
    if let Some(path) = &args.out_tree {
        TreeFile::from_tree(&tree).write(path)?;
    }
    if let Some(path) = &args.svg {
        write_svg(&points, Some(&tree), false, path)?;
    }
    let mut report = json!({
        "n": points.len(),
        "shift": shift_label(&shift),
        "total_length": tree.total_length(),
    });
    if args.report {
        let minbst = min_colored_spanning_tree(&points)?;
        report["minbst_length"] = json!(minbst.total_length());
        report["ratio"] = json!(tree.total_length() / minbst.total_length());
    }
    print_json(&report);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult<()> {
    let points = load_points(&args.input)?;
    let (tree, tie_steps) = match &args.tree {
        Some(path) => {
            let tree = TreeFile::read(path)?.into_tree()?;
            if tree.points() != points.as_slice() {
                return Err(CliError::Input(
                    "tree file points do not match the instance".into(),
                ));
            }
            (tree, None)
        }
        None => {
            let outcome = min_colored_spanning_tree_detailed(&points)?;
            (outcome.tree, Some(outcome.tie_steps))
        }
    };

    if !args.props {
        let summary = json!({
            "n": points.len(),
            "edges": tree.edges().len(),
            "total_length": tree.total_length(),
            "tie_steps": tie_steps,
        });
        match args.report {
            ReportFormat::Json => print_json(&summary),
            ReportFormat::Text => {
                println!("points: {}", points.len());
                println!("edges: {}", tree.edges().len());
                println!("total length: {}", tree.total_length());
                if let Some(t) = tie_steps {
                    println!("tie steps: {t}");
                }
                println!("tree: valid");
            }
        }
        return Ok(());
    }

    let gp = validate_general_position(&points, GP_FULL_SCAN_LIMIT)?;
    let report = verify_minbst_properties(&points, &tree)?;
    match args.report {
        ReportFormat::Json => {
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["general_position_exhaustive"] = json!(gp.exhaustive);
            value["tie_steps"] = json!(tie_steps);
            print_json(&value);
        }
        ReportFormat::Text => {
            println!("points: {}", report.n);
            println!("edges: {}", report.edge_count);
            println!(
                "general position: ok ({})",
                if gp.exhaustive {
                    "all triples checked"
                } else {
                    "sampled"
                }
            );
            if let Some(t) = tie_steps {
                println!("tie steps: {t}");
            }
            println!("crossings: {}", report.crossing_count);
            println!("max crossings on one edge: {}", report.per_edge_max);
            println!("plane: {}", report.plane);
            println!("quasi-plane: {}", report.quasi_plane);
            println!(
                "closest pair is an edge: {}",
                report.closest_pair.appears_as_edge
            );
            println!(
                "closest-pair edge crossing-free: {}",
                report.closest_pair.edge_crossing_free
            );
            println!(
                "total crossings within bound: {}",
                report.total_crossings_within_bound
            );
            println!(
                "per-edge crossings within bound: {}",
                report.per_edge_within_bound
            );
            println!(
                "crossing paths bichromatic: {}",
                report.crossing_paths_bichromatic
            );
            match report.odd_girth {
                Some(g) => println!("crossing graph odd girth: {g}"),
                None => println!("crossing graph odd girth: none (no odd cycle)"),
            }
        }
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> CliResult<()> {
    let points = load_points(&args.input)?;
    let minbst = enumerate_min_colored_tree(&points)?;
    let plane = brute_force_min_plane_tree(&points)?;
    print_json(&json!({
        "n": points.len(),
        "minbst_length": minbst.total_length(),
        "plane_optimum_length": plane.total_length(),
        "ratio": plane.total_length() / minbst.total_length(),
    }));
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> CliResult<()> {
    let config = ExperimentConfig::read(&args.config)?;
    let threads = thread_budget()?;
    let started = Instant::now();
    let records = run_experiment(&config, threads)?;
    write_outputs(&records, &args.out_dir)?;
    let compute_ms: u128 = records.iter().map(|r| r.wall_ms).sum();
    eprintln!(
        "wrote {} records to {} in {} ms wall ({} ms of instance work, {} threads)",
        records.len(),
        args.out_dir.display(),
        started.elapsed().as_millis(),
        compute_ms,
        threads
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_argument_parses_all_forms() {
        assert_eq!("best".parse::<ShiftArg>().unwrap(), ShiftArg::Best);
        assert_eq!(
            "random:42".parse::<ShiftArg>().unwrap(),
            ShiftArg::Random(42)
        );
        assert_eq!("grid:3,5".parse::<ShiftArg>().unwrap(), ShiftArg::Grid(3, 5));
        assert!("grid:3".parse::<ShiftArg>().is_err());
        assert!("random:x".parse::<ShiftArg>().is_err());
        assert!("nearest".parse::<ShiftArg>().is_err());
    }

    #[test]
    fn cli_parses_subcommands() {
        let cli = Cli::try_parse_from([
            "bichroma",
            "gen",
            "--kind",
            "uniform",
            "--n",
            "8",
            "--seed",
            "3",
        ])
        .unwrap();
        match cli.command {
            Command::Gen(args) => {
                assert_eq!(args.kind, GenKind::Uniform);
                assert_eq!(args.n, 8);
                assert_eq!(args.seed, 3);
                assert_eq!(args.colors, 2);
            }
            _ => panic!("expected gen"),
        }

        let cli = Cli::try_parse_from([
            "bichroma",
            "approx",
            "--in",
            "points.json",
            "--shift",
            "grid:1,2",
        ])
        .unwrap();
        match cli.command {
            Command::Approx(args) => assert_eq!(args.shift, ShiftArg::Grid(1, 2)),
            _ => panic!("expected approx"),
        }
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert!(Cli::try_parse_from(["bichroma", "gen", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["bichroma"]).is_err());
    }
}
