use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antipodal_core::annuli::{cover_count, spans, thickened_cover_count, AnnulusPairConfig};
use antipodal_core::boundary::{
    build_graph, discretize_boundary, graph_stats, DEFAULT_NEAR_FACTOR,
};
use antipodal_core::generators::{circle_config, GeneratorKind, GeneratorSpec};
use antipodal_core::geometry::{convex_hull, ConvexPolygon};
use antipodal_core::harness::{
    geometric_grid, ratio_sweep_violations, standard_margin_specs, sweep_ratio, sweep_spectral_on,
    theorem_margin_report, write_csv, SweepRecord, MARGIN_FLOOR, RATIO_EPSILONS,
};
use antipodal_core::pointfile::{read_points, write_points};
use antipodal_core::spectral::bound_chain;
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "antipodal",
    version,
    about = "Antipodal pair and spectral bound experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated point set.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long)]
        n: usize,
        /// Required by arc-center.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Corners, spans and cover counts of two thin annuli.
    Annuli {
        #[arg(long)]
        d: f64,
        #[arg(long)]
        epsilon: f64,
        /// Also report the cover count of the thickened annuli.
        #[arg(long)]
        thickened: bool,
    },
    /// Antipodal graph statistics of a point set's boundary.
    GraphStats {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Near-set radius in units of epsilon.
        #[arg(long, default_value_t = DEFAULT_NEAR_FACTOR)]
        near_factor: f64,
    },
    /// Spectral bound chain of a point set's boundary graph.
    Spectral {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// Run an epsilon sweep and write its CSV.
    Sweep {
        #[arg(long)]
        kind: SweepKind,
        /// Points per configuration (ratio) or on the circle whose hull is
        /// discretized (spectral).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps_start: f64,
        /// Each epsilon is the previous one divided by this factor.
        #[arg(long)]
        eps_factor: f64,
        #[arg(long)]
        eps_count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator for ratio sweeps.
        #[arg(long, default_value = "circle")]
        config: GeneratorKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Smallest ratio margin over the standard configurations.
    Margin {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
        seeds: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Ratio,
    Spectral,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load_hull(path: &Path) -> Result<ConvexPolygon> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let points =
        read_points(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    Ok(convex_hull(&points)?)
}

fn print_csv<T: serde::Serialize>(row: T) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(io::stdout().lock());
    wtr.serialize(row)?;
    wtr.flush()?;
    Ok(())
}

fn gen(kind: GeneratorKind, n: usize, epsilon: Option<f64>, seed: u64, out: &Path) -> Result<()> {
    let mut spec = GeneratorSpec::new(kind, n).with_seed(seed);
    if let Some(e) = epsilon {
        spec = spec.with_epsilon(e);
    }
    write_points(create(out)?, &spec.generate()?)?;
    Ok(())
}

#[derive(serde::Serialize)]
struct AnnuliRow {
    d: f64,
    epsilon: f64,
    width: f64,
    height: f64,
    cover: usize,
    thickened_cover: Option<usize>,
}

fn annuli(d: f64, epsilon: f64, thickened: bool) -> Result<()> {
    let cfg = AnnulusPairConfig::new(d, epsilon)?;
    let s = spans(&cfg)?;
    let thickened_cover = if thickened {
        Some(thickened_cover_count(d, epsilon)?)
    } else {
        None
    };
    print_csv(AnnuliRow {
        d,
        epsilon,
        width: s.width,
        height: s.height,
        cover: cover_count(&cfg),
        thickened_cover,
    })
}

#[derive(serde::Serialize)]
struct StatsRow {
    k: usize,
    edges: usize,
    max_degree: usize,
    max_nbr_deg_sum: usize,
    #[serde(rename = "max_s_Ts_over_k")]
    max_s_ts_over_k: f64,
}

fn stats(points: &Path, epsilon: f64, near_factor: f64) -> Result<()> {
    let boxing = discretize_boundary(&load_hull(points)?, epsilon)?;
    let g = build_graph(&boxing);
    let s = graph_stats(&boxing, &g, near_factor);
    print_csv(StatsRow {
        k: s.k,
        edges: s.edges,
        max_degree: s.max_degree,
        max_nbr_deg_sum: s.max_nbr_deg_sum,
        max_s_ts_over_k: s.max_s_ts_over_k,
    })
}

#[derive(serde::Serialize)]
struct SpectralRow {
    epsilon: f64,
    k: usize,
    lambda1: f64,
    cw: f64,
    sqrtdeg: f64,
    trace: f64,
}

fn spectral(points: &Path, epsilon: f64) -> Result<()> {
    let boxing = discretize_boundary(&load_hull(points)?, epsilon)?;
    let r = bound_chain(&build_graph(&boxing))?;
    print_csv(SpectralRow {
        epsilon,
        k: boxing.k(),
        lambda1: r.lambda1,
        cw: r.cw_bound,
        sqrtdeg: r.sqrt_degree_bound,
        trace: r.trace_bound,
    })
}

fn write_records(out: &Path, records: &[SweepRecord]) -> Result<()> {
    write_csv(create(out)?, records)?;
    Ok(())
}

/// Runs the sweep and returns the invariant violations; rows are written
/// even when a row fails.
fn sweep(
    kind: SweepKind,
    n: usize,
    epsilons: &[f64],
    seed: u64,
    config: GeneratorKind,
    out: &Path,
) -> Result<Vec<String>> {
    let result = match kind {
        SweepKind::Ratio => sweep_ratio(&GeneratorSpec::new(config, n).with_seed(seed), epsilons),
        SweepKind::Spectral => {
            let hull = convex_hull(&circle_config(n)?)?;
            sweep_spectral_on(&hull, "circle-boundary", epsilons)
        }
    };
    match result {
        Ok(records) => {
            write_records(out, &records)?;
            Ok(match kind {
                SweepKind::Ratio => ratio_sweep_violations(config, &records),
                SweepKind::Spectral => Vec::new(),
            })
        }
        Err(failure) => {
            write_records(out, &failure.partial)?;
            Ok(vec![failure.error.to_string()])
        }
    }
}

fn margin(n: usize, seeds: &[u64], out: &Path) -> Result<Vec<String>> {
    let report = theorem_margin_report(&standard_margin_specs(n, seeds), &RATIO_EPSILONS)?;
    write_records(out, &report.records)?;
    let mut stdout = io::stdout().lock();
    for (label, m) in &report.per_spec {
        match m {
            Some(m) => writeln!(stdout, "{label}: {m:.6}")?,
            None => writeln!(stdout, "{label}: vacuous")?,
        }
    }
    writeln!(stdout, "minimum: {:.6}", report.min_margin)?;
    Ok(if report.min_margin >= MARGIN_FLOOR {
        Vec::new()
    } else {
        vec![format!(
            "minimum margin {} below floor {MARGIN_FLOOR}",
            report.min_margin
        )]
    })
}

fn run(cli: Cli) -> Result<Vec<String>> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            epsilon,
            seed,
            out,
        } => gen(kind, n, epsilon, seed, &out)?,
        Command::Annuli {
            d,
            epsilon,
            thickened,
        } => annuli(d, epsilon, thickened)?,
        Command::GraphStats {
            points,
            epsilon,
            near_factor,
        } => stats(&points, epsilon, near_factor)?,
        Command::Spectral { points, epsilon } => spectral(&points, epsilon)?,
        Command::Sweep {
            kind,
            n,
            eps_start,
            eps_factor,
            eps_count,
            seed,
            config,
            out,
        } => {
            if eps_count == 0 {
                bail!("--eps-count must be positive");
            }
            let epsilons = geometric_grid(eps_start, eps_factor, eps_count)?;
            return sweep(kind, n, &epsilons, seed, config, &out);
        }
        Command::Margin { n, seeds, out } => return margin(n, &seeds, &out),
    }
    Ok(Vec::new())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in violations {
                eprintln!("invariant violated: {v}");
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
