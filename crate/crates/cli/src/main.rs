use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sperner_core::labeling::{
    count_full_cells, label_by_map, random_labeling, truncate_map, validate_sperner, Labeling,
};
use sperner_core::map::{builtin, parse_map, ParsedMap, SharedMap};
use sperner_core::solver::{epsilon_fixed_point, fixed_point, Modulus, ParamOverrides, SolveConfig};
use sperner_core::triangulation::{
    ExplicitTriangulation, KuhnTriangulation, ResourceCap, Subdivision, DEFAULT_CELL_CAP,
};

mod exit;
mod export;

use exit::{MapFileError, ValidationFailed};
use export::{LabelSource, TriangulationDump};

/// Approximate fixed points of self-maps of the infinite-dimensional simplex
/// via Sperner labellings.
#[derive(Parser, Debug)]
#[command(name = "sperner", version)]
struct Cli {
    /// Cap on cells enumerated or visited by one operation.
    #[arg(long, global = true, env = "SPERNER_CELL_CAP", default_value_t = DEFAULT_CELL_CAP)]
    max_cells: u64,

    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find an ε-fixed point and print its certificate.
    Solve {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        epsilon: f64,
    },
    /// Drive the residual below a tolerance by halving ε.
    Fixpoint {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        tol: f64,
    },
    /// Count full cells of a labelled triangulation; fails if the count is even.
    CountFull {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// Export vertices, cells and optionally labels.
    Triangulate {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// Check a label dump written by `triangulate`.
    VerifyLabel {
        /// Dump file.
        input: PathBuf,
    },
    /// Parse a map file and print its normalized form.
    ParseCheck {
        /// Map file.
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Builtin map name or path to a map file.
    #[arg(long)]
    map: String,
    /// Truncation dimension (at least the derived minimum).
    #[arg(long = "dim")]
    n: Option<usize>,
    #[arg(long)]
    max_refinements: Option<u32>,
    /// First grid resolution tried.
    #[arg(long)]
    initial_resolution: Option<u64>,
    /// Lipschitz constant of the map in the product metric.
    #[arg(long, conflicts_with = "holder")]
    lipschitz: Option<f64>,
    /// Hölder modulus `C,alpha`.
    #[arg(long, value_parser = parse_holder)]
    holder: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    resolution: u64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Kuhn)]
    scheme: SchemeArg,
    /// Barycentric subdivision rounds (barycentric scheme only).
    #[arg(long, default_value_t = 1)]
    depth: u32,
}

#[derive(Args, Debug)]
struct LabelArgs {
    /// Seed for a random carrier-respecting labelling.
    #[arg(long, conflicts_with = "map")]
    seed: Option<u64>,
    /// Label with the map-induced labelling instead.
    #[arg(long)]
    map: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Kuhn,
    Barycentric,
}

fn parse_holder(s: &str) -> Result<(f64, f64), String> {
    let (c, a) = s.split_once(',').ok_or("expected C,alpha")?;
    let c = c.trim().parse().map_err(|e| format!("bad constant: {e}"))?;
    let a = a.trim().parse().map_err(|e| format!("bad exponent: {e}"))?;
    Ok((c, a))
}

/// A builtin name, or a map file if a file with that name exists.
fn load_map(spec: &str) -> Result<SharedMap> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let parsed = parse_map(&text).map_err(|source| MapFileError {
            path: spec.to_string(),
            source,
        })?;
        let name = path
            .file_name()
            .map_or(spec.into(), |n| n.to_string_lossy().into_owned());
        return Ok(std::sync::Arc::new(ParsedMap::new(parsed, name)));
    }
    Ok(builtin(spec)?)
}

fn solve_config(args: &SolveArgs, cap: ResourceCap) -> SolveConfig {
    let modulus = match (args.lipschitz, args.holder) {
        (Some(constant), _) => Some(Modulus::Lipschitz { constant }),
        (None, Some((constant, exponent))) => Some(Modulus::Holder { constant, exponent }),
        (None, None) => None,
    };
    SolveConfig {
        overrides: ParamOverrides {
            n: args.n,
            max_refinements: args.max_refinements,
            modulus,
        },
        initial_resolution: args.initial_resolution,
        cap,
    }
}

fn build_grid(grid: &GridArgs, cap: &ResourceCap) -> Result<ExplicitTriangulation> {
    let kuhn = KuhnTriangulation::new(grid.dim, grid.resolution)?;
    let mut t = ExplicitTriangulation::from_kuhn(&kuhn, cap)?;
    if let SchemeArg::Barycentric = grid.scheme {
        for _ in 0..grid.depth {
            t = t.barycentric_subdivide(cap)?;
        }
    }
    Ok(t)
}

fn build_labels(
    t: &ExplicitTriangulation,
    args: &LabelArgs,
    cap: &ResourceCap,
) -> Result<Option<(Labeling<usize>, LabelSource)>> {
    if let Some(name) = &args.map {
        let f = load_map(name)?;
        let g = truncate_map(f.clone(), t.dim())?;
        let lab = label_by_map(t, &g, cap)?;
        return Ok(Some((lab, LabelSource::Map { map: f.describe() })));
    }
    if let Some(seed) = args.seed {
        return Ok(Some((random_labeling(t, seed, cap)?, LabelSource::Random { seed })));
    }
    Ok(None)
}

#[derive(Serialize)]
struct CountReport {
    schema_version: u32,
    dim: usize,
    scheme: String,
    resolution: u64,
    depth: u32,
    labelling: LabelSource,
    cells: usize,
    full_cells: u64,
    odd: bool,
}

#[derive(Serialize)]
struct ParseReport {
    schema_version: u32,
    file: String,
    valid: bool,
    components: usize,
    support_bound: Option<usize>,
    normalized: String,
}

fn emit(out: &Option<PathBuf>, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cap = ResourceCap {
        max_cells: cli.max_cells,
    };
    match &cli.command {
        Command::Solve { solve, epsilon } => {
            let f = load_map(&solve.map)?;
            let cert = epsilon_fixed_point(&f, *epsilon, &solve_config(solve, cap))?;
            emit(&cli.output, &cert)
        }
        Command::Fixpoint { solve, tol } => {
            let f = load_map(&solve.map)?;
            let cert = fixed_point(&f, *tol, &solve_config(solve, cap))?;
            emit(&cli.output, &cert)
        }
        Command::CountFull { grid, labels } => {
            let t = build_grid(grid, &cap)?;
            let args = LabelArgs {
                seed: labels.seed.or(labels.map.is_none().then_some(0)),
                map: labels.map.clone(),
            };
            let (lab, source) = build_labels(&t, &args, &cap)?.expect("seed defaults to 0");
            if let Some(v) = validate_sperner(&t, &lab, &cap)? {
                return Err(
                    ValidationFailed(format!("labelling violates the Sperner property at vertex {v:?}")).into(),
                );
            }
            let full = count_full_cells(&t, &lab, &cap)?;
            let dump = TriangulationDump::new(&t, None);
            let report = CountReport {
                schema_version: export::SCHEMA_VERSION,
                dim: t.dim(),
                scheme: dump.scheme,
                resolution: dump.resolution,
                depth: dump.depth,
                labelling: source,
                cells: t.cells().len(),
                full_cells: full,
                odd: full % 2 == 1,
            };
            emit(&cli.output, &report)?;
            if full % 2 == 0 {
                return Err(ValidationFailed(format!("full-cell count {full} is even")).into());
            }
            Ok(())
        }
        Command::Triangulate { grid, labels } => {
            let t = build_grid(grid, &cap)?;
            let lab = build_labels(&t, labels, &cap)?;
            let dump = TriangulationDump::new(&t, lab.as_ref().map(|(l, s)| (l, s.clone())));
            emit(&cli.output, &dump)
        }
        Command::VerifyLabel { input } => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let dump: TriangulationDump = serde_json::from_str(&text)
                .map_err(|e| ValidationFailed(format!("{}: malformed label dump: {e}", input.display())))?;
            let report =
                export::verify_dump(&dump).map_err(|e| ValidationFailed(format!("{}: {e}", input.display())))?;
            emit(&cli.output, &report)?;
            if !report.valid {
                return Err(ValidationFailed("labelling violates the Sperner property".into()).into());
            }
            Ok(())
        }
        Command::ParseCheck { input } => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let spec = parse_map(&text).map_err(|source| MapFileError {
                path: input.display().to_string(),
                source,
            })?;
            emit(
                &cli.output,
                &ParseReport {
                    schema_version: export::SCHEMA_VERSION,
                    file: input.display().to_string(),
                    valid: true,
                    components: spec.components().len(),
                    support_bound: spec.support_bound(),
                    normalized: spec.to_string(),
                },
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code_for(&err) as u8)
        }
    }
}
