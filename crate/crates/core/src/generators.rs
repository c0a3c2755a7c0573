//! Deterministic point configurations.
//!
//! `circle` and `arc-center` are the two extremal families whose
//! neighbor/antipode ratio scales like `sqrt(ε)`. `random-disk` and
//! `reuleaux` are seeded stress sets.
//!
//! Randomized generators draw from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, and convert raw 64-bit words to floats themselves, so the
//! output depends only on `(n, seed)` and not on the platform or on `rand`'s
//! distribution code.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{validate_epsilon, Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Circle,
    ArcCenter,
    RandomDisk,
    Reuleaux,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Circle => "circle",
            GeneratorKind::ArcCenter => "arc-center",
            GeneratorKind::RandomDisk => "random-disk",
            GeneratorKind::Reuleaux => "reuleaux",
        }
    }

    /// Whether the configuration has to be rebuilt for every ε.
    pub fn depends_on_epsilon(self) -> bool {
        matches!(self, GeneratorKind::ArcCenter)
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, GeneratorKind::RandomDisk | GeneratorKind::Reuleaux)
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(GeneratorKind::Circle),
            "arc-center" | "arc_center" => Ok(GeneratorKind::ArcCenter),
            "random-disk" | "random_disk" => Ok(GeneratorKind::RandomDisk),
            "reuleaux" => Ok(GeneratorKind::Reuleaux),
            other => Err(Error::InvalidGenerator(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Only read by `arc-center`.
    pub epsilon: Option<f64>,
    /// Only read by randomized kinds.
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize) -> Self {
        GeneratorSpec {
            kind,
            n,
            epsilon: None,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Short label used in CSV output, e.g. `circle` or `reuleaux#3`.
    pub fn label(&self) -> String {
        if self.kind.is_randomized() {
            format!("{}#{}", self.kind, self.seed)
        } else {
            self.kind.to_string()
        }
    }

    pub fn generate(&self) -> Result<PointSet> {
        match self.kind {
            GeneratorKind::Circle => circle_config(self.n),
            GeneratorKind::ArcCenter => {
                let eps = self
                    .epsilon
                    .ok_or_else(|| Error::InvalidGenerator("arc-center needs an epsilon".into()))?;
                arc_center_config(self.n, eps)
            }
            GeneratorKind::RandomDisk => random_disk_config(self.n, self.seed),
            GeneratorKind::Reuleaux => reuleaux_boundary_config(self.n, self.seed),
        }
    }
}

fn require_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidGenerator(format!("n = {n} < 2")));
    }
    Ok(())
}

/// `n` points evenly spaced on the circle of diameter 1 centered at the origin.
pub fn circle_config(n: usize) -> Result<PointSet> {
    require_n(n)?;
    let points = (0..n)
        .map(|t| {
            let theta = TAU * t as f64 / n as f64;
            Point::new(0.5 * theta.cos(), 0.5 * theta.sin())
        })
        .collect();
    PointSet::normalized(points)
}

/// Number of center points in the arc-plus-center configuration.
pub fn arc_center_cluster_size(n: usize, epsilon: f64) -> usize {
    (epsilon.sqrt() * n as f64).floor() as usize
}

/// `m = floor(sqrt(ε) n)` points clustered at the origin and `n - m` points
/// evenly spaced (endpoints included) on the radius-1 arc of angular width
/// π/3 centered on the positive x-axis.
///
/// The cluster sits on a micro-grid of pitch ε/100 inside the cone
/// `|y| <= x`, which keeps every cluster point within distance 1 of the whole
/// arc and every cluster pair within ε.
pub fn arc_center_config(n: usize, epsilon: f64) -> Result<PointSet> {
    require_n(n)?;
    validate_epsilon(epsilon)?;
    let m = arc_center_cluster_size(n, epsilon);
    if m == 0 {
        return Err(Error::InvalidGenerator(format!(
            "floor(sqrt({epsilon}) * {n}) = 0 center points"
        )));
    }
    let arc = n - m;
    if arc < 2 {
        return Err(Error::InvalidGenerator(format!(
            "only {arc} arc points left after {m} center points"
        )));
    }

    let pitch = epsilon / 100.0;
    let mut points = Vec::with_capacity(n);
    'cluster: for a in 0i64.. {
        for b in -a..=a {
            if points.len() == m {
                break 'cluster;
            }
            points.push(Point::new(a as f64 * pitch, b as f64 * pitch));
        }
    }
    let step = FRAC_PI_3 / (arc - 1) as f64;
    points.extend((0..arc).map(|t| {
        let phi = -FRAC_PI_6 + step * t as f64;
        Point::new(phi.cos(), phi.sin())
    }));
    PointSet::normalized(points)
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    // 53 random mantissa bits, uniform on [0, 1)
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` i.i.d. uniform points in the closed disk of diameter 1.
pub fn random_disk_config(n: usize, seed: u64) -> Result<PointSet> {
    require_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let r = 0.5 * unit_f64(&mut rng).sqrt();
            let theta = TAU * unit_f64(&mut rng);
            Point::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    PointSet::normalized(points)
}

/// Corners of the width-1 Reuleaux triangle, centered at the origin.
pub fn reuleaux_vertices() -> [Point; 3] {
    let r = 1.0 / 3f64.sqrt();
    std::array::from_fn(|k| {
        let a = PI / 2.0 + TAU * k as f64 / 3.0;
        Point::new(r * a.cos(), r * a.sin())
    })
}

/// `n` points uniform by arc length on the boundary of the width-1
/// Reuleaux triangle (perimeter π, three arcs of radius 1).
pub fn reuleaux_boundary_config(n: usize, seed: u64) -> Result<PointSet> {
    require_n(n)?;
    let vertices = reuleaux_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let s = PI * unit_f64(&mut rng);
            let arc = ((s / FRAC_PI_3) as usize).min(2);
            let center = vertices[arc];
            // the arc opposite `center` faces the centroid
            let mid = (-center.y).atan2(-center.x);
            let phi = mid - FRAC_PI_6 + (s - arc as f64 * FRAC_PI_3);
            Point::new(center.x + phi.cos(), center.y + phi.sin())
        })
        .collect();
    PointSet::normalized(points)
}
