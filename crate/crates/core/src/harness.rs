//! ε sweeps, log–log exponent fits and CSV output.
//!
//! A sweep produces one [`SweepRecord`] per ε, ordered by decreasing ε.
//! Ratio sweeps count pairs on a generated configuration; spectral sweeps
//! discretize a fixed hull boundary and evaluate the bound chain.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{build_graph, discretize_boundary};
use crate::error::{Error, Result};
use crate::generators::{circle_config, GeneratorKind, GeneratorSpec};
use crate::geometry::{
    convex_hull, pair_counts, ratio_margin, validate_epsilon, ConvexPolygon, PointSet,
};
use crate::spectral::bound_chain;

/// Default grid for ratio sweeps.
pub const RATIO_EPSILONS: [f64; 5] = [0.08, 0.04, 0.02, 0.01, 0.005];

/// Default grid for spectral sweeps.
pub const SPECTRAL_EPSILONS: [f64; 5] = [
    1.0 / 64.0,
    1.0 / 128.0,
    1.0 / 256.0,
    1.0 / 512.0,
    1.0 / 1024.0,
];

/// Points on the circle whose hull is the boundary for spectral sweeps.
pub const SPECTRAL_HULL_POINTS: usize = 10_000;

/// Rows with `n * ε` below this are flagged as too sparse to track the
/// continuum counts.
pub const MIN_N_EPSILON: f64 = 10.0;

/// Floor on the smallest ratio margin over the standard configurations at
/// n = 2000. The first full run observed a minimum of 1.0953 (circle,
/// ε = 0.08); see `results/theorem_margin.csv`.
pub const MARGIN_FLOOR: f64 = 0.05;

/// Slack factor for the circle family's ratio monotonicity in ε.
pub const MONOTONE_SLACK: f64 = 1.1;

/// One CSV row. Columns that do not apply to the sweep kind stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub config: String,
    pub epsilon: f64,
    /// Number of points for ratio rows, number of boxes for spectral rows.
    pub size: usize,
    pub neighbors: Option<u64>,
    pub antipodes: Option<u64>,
    pub ratio: Option<f64>,
    pub lambda1: Option<f64>,
    pub cw: Option<f64>,
    pub sqrtdeg: Option<f64>,
    pub trace: Option<f64>,
    pub margin: Option<f64>,
    /// No antipodal pairs; excluded from fits.
    pub vacuous: bool,
    /// `n * ε < MIN_N_EPSILON`.
    pub low_density: bool,
}

impl SweepRecord {
    pub fn new(config: impl Into<String>, epsilon: f64, size: usize) -> Self {
        SweepRecord {
            config: config.into(),
            epsilon,
            size,
            neighbors: None,
            antipodes: None,
            ratio: None,
            lambda1: None,
            cw: None,
            sqrtdeg: None,
            trace: None,
            margin: None,
            vacuous: false,
            low_density: false,
        }
    }

    pub fn get(&self, field: Field) -> Option<f64> {
        match field {
            Field::Neighbors => self.neighbors.map(|v| v as f64),
            Field::Antipodes => self.antipodes.map(|v| v as f64),
            Field::Ratio => self.ratio,
            Field::Margin => self.margin,
            Field::Lambda1 => self.lambda1,
            Field::Cw => self.cw,
            Field::SqrtDeg => self.sqrtdeg,
            Field::Trace => self.trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Neighbors,
    Antipodes,
    Ratio,
    Margin,
    Lambda1,
    Cw,
    SqrtDeg,
    Trace,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Neighbors => "neighbors",
            Field::Antipodes => "antipodes",
            Field::Ratio => "ratio",
            Field::Margin => "margin",
            Field::Lambda1 => "lambda1",
            Field::Cw => "cw",
            Field::SqrtDeg => "sqrtdeg",
            Field::Trace => "trace",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Least-squares line through `(ln ε, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub residual: f64,
    pub points_used: usize,
}

/// A sweep that stopped on a row error, with the rows completed before it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub partial: Vec<SweepRecord>,
    pub error: Error,
}

impl fmt::Display for SweepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sweep aborted after {} rows: {}",
            self.partial.len(),
            self.error
        )
    }
}

impl std::error::Error for SweepFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<SweepFailure> for Error {
    fn from(failure: SweepFailure) -> Self {
        failure.error
    }
}

/// `count` values `start / factor^i`.
pub fn geometric_grid(start: f64, factor: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && factor > 1.0 && start.is_finite() && factor.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "start {start} must be positive and factor {factor} greater than 1"
        )));
    }
    Ok((0..count).map(|i| start / factor.powi(i as i32)).collect())
}

fn check_decreasing(epsilons: &[f64]) -> Result<()> {
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidGrid(
            "epsilons must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

fn collect_rows(
    rows: Vec<Result<SweepRecord>>,
) -> std::result::Result<Vec<SweepRecord>, SweepFailure> {
    let mut partial = Vec::with_capacity(rows.len());
    for row in rows {
        match row {
            Ok(record) => partial.push(record),
            Err(error) => return Err(SweepFailure { partial, error }),
        }
    }
    Ok(partial)
}

fn ratio_row(label: &str, ps: &PointSet, epsilon: f64) -> Result<SweepRecord> {
    let counts = pair_counts(ps, epsilon)?;
    let mut rec = SweepRecord::new(label, epsilon, ps.len());
    rec.neighbors = Some(counts.neighbors);
    rec.antipodes = Some(counts.antipodes);
    rec.vacuous = counts.is_vacuous();
    rec.low_density = (ps.len() as f64) * epsilon < MIN_N_EPSILON;
    if !rec.vacuous {
        rec.ratio = Some(counts.neighbors as f64 / counts.antipodes as f64);
        rec.margin = Some(ratio_margin(&counts)?);
    }
    Ok(rec)
}

/// Pair counts, ratio and margin of one configuration over an ε grid
/// (strictly decreasing, each in `(0, 0.1]`).
///
/// `arc-center` is rebuilt for every ε; other kinds are generated once.
pub fn sweep_ratio(
    spec: &GeneratorSpec,
    epsilons: &[f64],
) -> std::result::Result<Vec<SweepRecord>, SweepFailure> {
    let fail = |error| SweepFailure {
        partial: Vec::new(),
        error,
    };
    check_decreasing(epsilons).map_err(fail)?;
    if let Some(&bad) = epsilons.iter().find(|&&e| !(e > 0.0 && e <= 0.1)) {
        return Err(fail(Error::InvalidGrid(format!(
            "epsilon {bad} outside (0, 0.1]"
        ))));
    }
    let label = spec.label();
    let shared = if spec.kind.depends_on_epsilon() {
        None
    } else {
        Some(spec.generate().map_err(fail)?)
    };
    let rows = epsilons
        .par_iter()
        .map(|&eps| match &shared {
            Some(ps) => ratio_row(&label, ps, eps),
            None => ratio_row(&label, &spec.with_epsilon(eps).generate()?, eps),
        })
        .collect();
    collect_rows(rows)
}

fn spectral_row(label: &str, hull: &ConvexPolygon, epsilon: f64) -> Result<SweepRecord> {
    let boxing = discretize_boundary(hull, epsilon)?;
    let graph = build_graph(&boxing);
    let chain = bound_chain(&graph)?;
    let mut rec = SweepRecord::new(label, epsilon, boxing.k());
    rec.lambda1 = Some(chain.lambda1);
    rec.cw = Some(chain.cw_bound);
    rec.sqrtdeg = Some(chain.sqrt_degree_bound);
    rec.trace = Some(chain.trace_bound);
    Ok(rec)
}

/// Bound chain of the antipodal graph over a given hull, one row per ε.
pub fn sweep_spectral_on(
    hull: &ConvexPolygon,
    label: &str,
    epsilons: &[f64],
) -> std::result::Result<Vec<SweepRecord>, SweepFailure> {
    let fail = |error| SweepFailure {
        partial: Vec::new(),
        error,
    };
    check_decreasing(epsilons).map_err(fail)?;
    for &eps in epsilons {
        validate_epsilon(eps).map_err(fail)?;
    }
    // rows run one after another; each row is parallel inside
    collect_rows(
        epsilons
            .iter()
            .map(|&eps| spectral_row(label, hull, eps))
            .collect(),
    )
}

/// Hull of `circle_config(10_000)`, the boundary used by spectral sweeps.
pub fn spectral_circle_hull() -> Result<ConvexPolygon> {
    convex_hull(&circle_config(SPECTRAL_HULL_POINTS)?)
}

/// Spectral sweep over the diameter-1 circle boundary.
pub fn sweep_spectral(epsilons: &[f64]) -> std::result::Result<Vec<SweepRecord>, SweepFailure> {
    let hull = spectral_circle_hull().map_err(|error| SweepFailure {
        partial: Vec::new(),
        error,
    })?;
    sweep_spectral_on(&hull, "circle-boundary", epsilons)
}

/// Ordinary least squares of `ln(field)` against `ln(ε)` over the
/// non-vacuous rows that carry the field.
pub fn fit_exponent(records: &[SweepRecord], field: Field) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rec in records.iter().filter(|r| !r.vacuous) {
        let Some(value) = rec.get(field) else {
            continue;
        };
        if !(value > 0.0) {
            return Err(Error::NonPositiveValue {
                field: field.name(),
                value,
                epsilon: rec.epsilon,
            });
        }
        xs.push(rec.epsilon.ln());
        ys.push(value.ln());
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::TooFewFitPoints(n));
    }
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let alpha = sxy / sxx;
    let intercept = mean_y - alpha * mean_x;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + alpha * x)).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        alpha,
        intercept,
        residual,
        points_used: n,
    })
}

/// Adjacent rows (decreasing ε) where the ratio grows by more than `slack`.
pub fn ratio_monotonicity_violations(records: &[SweepRecord], slack: f64) -> Vec<(f64, f64)> {
    records
        .windows(2)
        .filter_map(|w| match (w[0].ratio, w[1].ratio) {
            (Some(big_eps), Some(small_eps)) if small_eps > big_eps * slack => {
                Some((w[0].epsilon, w[1].epsilon))
            }
            _ => None,
        })
        .collect()
}

/// Invariants a ratio sweep must satisfy: counts never exceed the number of
/// pairs, margins are positive when neighbors exist, and for the circle the
/// ratio is nondecreasing in ε up to [`MONOTONE_SLACK`].
pub fn ratio_sweep_violations(kind: GeneratorKind, records: &[SweepRecord]) -> Vec<String> {
    let mut out = Vec::new();
    for rec in records {
        let n = rec.size as u64;
        let (nb, ap) = (rec.neighbors.unwrap_or(0), rec.antipodes.unwrap_or(0));
        if nb + ap > n * n.saturating_sub(1) / 2 {
            out.push(format!(
                "eps {}: neighbors + antipodes exceeds pair count",
                rec.epsilon
            ));
        }
        if nb > 0 && rec.margin.is_some_and(|m| m <= 0.0) {
            out.push(format!("eps {}: nonpositive margin", rec.epsilon));
        }
    }
    if kind == GeneratorKind::Circle {
        for (a, b) in ratio_monotonicity_violations(records, MONOTONE_SLACK) {
            out.push(format!("ratio grows from eps {a} to eps {b}"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    /// Smallest margin per configuration label; `None` when all its rows
    /// were vacuous.
    pub per_spec: Vec<(String, Option<f64>)>,
    /// Smallest margin over every non-vacuous row.
    pub min_margin: f64,
    pub records: Vec<SweepRecord>,
}

/// Runs a ratio sweep per configuration and returns the smallest observed
/// margin, i.e. the largest constant consistent with every row.
pub fn theorem_margin_report(specs: &[GeneratorSpec], epsilons: &[f64]) -> Result<MarginReport> {
    if specs.is_empty() {
        return Err(Error::InvalidGenerator("no configurations given".into()));
    }
    let mut per_spec = Vec::with_capacity(specs.len());
    let mut records = Vec::new();
    for spec in specs {
        let rows = sweep_ratio(spec, epsilons)?;
        let min = rows.iter().filter_map(|r| r.margin).reduce(f64::min);
        per_spec.push((spec.label(), min));
        records.extend(rows);
    }
    let min_margin = per_spec
        .iter()
        .filter_map(|(_, m)| *m)
        .reduce(f64::min)
        .ok_or(Error::Vacuous)?;
    Ok(MarginReport {
        per_spec,
        min_margin,
        records,
    })
}

/// The configurations used for the margin floor: circle, arc-center, and three
/// seeds each of random-disk and reuleaux.
pub fn standard_margin_specs(n: usize, seeds: &[u64]) -> Vec<GeneratorSpec> {
    let mut specs = vec![
        GeneratorSpec::new(GeneratorKind::Circle, n),
        GeneratorSpec::new(GeneratorKind::ArcCenter, n),
    ];
    for kind in [GeneratorKind::RandomDisk, GeneratorKind::Reuleaux] {
        specs.extend(
            seeds
                .iter()
                .map(|&s| GeneratorSpec::new(kind, n).with_seed(s)),
        );
    }
    specs
}

pub fn write_csv<W: Write>(writer: W, records: &[SweepRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    if records.is_empty() {
        wtr.write_record(CSV_HEADER)?;
    }
    for rec in records {
        wtr.serialize(rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 13] = [
    "config",
    "epsilon",
    "size",
    "neighbors",
    "antipodes",
    "ratio",
    "lambda1",
    "cw",
    "sqrtdeg",
    "trace",
    "margin",
    "vacuous",
    "low_density",
];

pub fn to_csv_string(records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
