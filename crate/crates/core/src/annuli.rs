//! Intersections of two congruent thin annuli.
//!
//! Centers sit at `(-d/2, 0)` and `(d/2, 0)`. The intersection has two mirror
//! components, one above and one below the x-axis; everything here concerns
//! the upper one. The region is never built explicitly: it is described by
//! its four corner points and a membership predicate, and covering questions
//! go through rasterization on the origin-anchored grid of pitch ε/2.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{validate_epsilon, Point};

/// Radicands in `[-RADICAND_CLAMP, 0)` are treated as zero.
pub const RADICAND_CLAMP: f64 = 1e-14;

/// Sub-samples per cell side when rasterizing (8 x 8 per cell).
pub const SAMPLES_PER_CELL: usize = 8;

/// Calibrated constant in `cover_count * d <= COVER_CONSTANT`.
pub const COVER_CONSTANT: f64 = 10.0;

/// Calibrated constant in `thickened_cover_count * d <= THICKENED_COVER_CONSTANT`.
///
/// The thickened annuli are three times as thick as the original ones, so
/// their intersection is roughly nine times larger; observed values of
/// `count * d` lie in [47, 60] over the acceptance grid.
pub const THICKENED_COVER_CONSTANT: f64 = 64.0;

/// Two congruent annuli with inner radius `1 - ε` and outer radius 1 whose
/// centers are `d` apart, with `4ε <= d <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPairConfig {
    d: f64,
    epsilon: f64,
}

impl AnnulusPairConfig {
    pub fn new(d: f64, epsilon: f64) -> Result<Self> {
        validate_epsilon(epsilon)?;
        if !(d.is_finite() && 4.0 * epsilon <= d && d <= 1.0) {
            return Err(Error::AnnulusHypothesis {
                d,
                epsilon,
                requirement: "4 epsilon <= d <= 1",
            });
        }
        Ok(AnnulusPairConfig { d, epsilon })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The same annuli as a general [`AnnulusPair`].
    pub fn pair(&self) -> AnnulusPair {
        AnnulusPair {
            d: self.d,
            inner: 1.0 - self.epsilon,
            outer: 1.0,
        }
    }
}

/// Two congruent annuli with arbitrary radii, centers `d` apart on the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPair {
    pub d: f64,
    pub inner: f64,
    pub outer: f64,
}

/// Corners of the upper intersection component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionVertices {
    /// Outer circle meets outer circle, on the y-axis.
    pub axis_outer: Point,
    /// Inner circle meets inner circle, on the y-axis.
    pub axis_inner: Point,
    /// Outer circle of the left annulus meets the inner circle of the right one.
    pub side_pos: Point,
    /// Mirror image of `side_pos`.
    pub side_neg: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spans {
    /// Horizontal extent of the upper component.
    pub width: f64,
    /// Largest vertical thickness of the upper component.
    pub height: f64,
}

fn checked_sqrt(value: f64, what: &'static str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { what, value })
    }
}

/// Closed-form corners of the upper intersection component.
pub fn intersection_vertices(cfg: &AnnulusPairConfig) -> Result<IntersectionVertices> {
    let (d, e) = (cfg.d, cfg.epsilon);
    let (d2, e2) = (d * d, e * e);
    let axis_outer = checked_sqrt(4.0 - d2, "outer/outer intersection")? / 2.0;
    let axis_inner = checked_sqrt(4.0 - d2 + 4.0 * e2 - 8.0 * e, "inner/inner intersection")? / 2.0;
    let side_x = (2.0 * e - e2) / (2.0 * d);
    let side_radicand =
        -d2 * d2 + 2.0 * d2 * e2 - 4.0 * d2 * e + 4.0 * d2 - e2 * e2 + 4.0 * e2 * e - 4.0 * e2;
    let side_y = checked_sqrt(side_radicand, "outer/inner intersection")? / (2.0 * d);
    Ok(IntersectionVertices {
        axis_outer: Point::new(0.0, axis_outer),
        axis_inner: Point::new(0.0, axis_inner),
        side_pos: Point::new(side_x, side_y),
        side_neg: Point::new(-side_x, side_y),
    })
}

impl AnnulusPair {
    pub fn with_radii(d: f64, inner: f64, outer: f64) -> Result<Self> {
        if !(d > 0.0 && inner > 0.0 && inner < outer && d.is_finite() && outer.is_finite()) {
            return Err(Error::AnnulusHypothesis {
                d,
                epsilon: outer - inner,
                requirement: "d > 0 and 0 < inner < outer",
            });
        }
        Ok(AnnulusPair { d, inner, outer })
    }

    fn centers(&self) -> (Point, Point) {
        (
            Point::new(-self.d / 2.0, 0.0),
            Point::new(self.d / 2.0, 0.0),
        )
    }

    /// Corners of the upper component from the generic circle formulas.
    pub fn vertices(&self) -> Result<IntersectionVertices> {
        let h = self.d / 2.0;
        let (r, big) = (self.inner, self.outer);
        let axis_outer = checked_sqrt(big * big - h * h, "outer/outer intersection")?;
        let axis_inner = checked_sqrt(r * r - h * h, "inner/inner intersection")?;
        let side_x = (big * big - r * r) / (2.0 * self.d);
        let side_y = checked_sqrt(big * big - (side_x + h).powi(2), "outer/inner intersection")?;
        Ok(IntersectionVertices {
            axis_outer: Point::new(0.0, axis_outer),
            axis_inner: Point::new(0.0, axis_inner),
            side_pos: Point::new(side_x, side_y),
            side_neg: Point::new(-side_x, side_y),
        })
    }

    fn in_annulus(&self, center: Point, p: Point) -> bool {
        let r = p.dist(center);
        self.inner <= r && r <= self.outer
    }

    /// Membership in the upper intersection component.
    pub fn contains(&self, p: Point) -> bool {
        let (c0, c1) = self.centers();
        p.y > 0.0 && self.in_annulus(c0, p) && self.in_annulus(c1, p)
    }

    fn upper_arc(&self, radius: f64, cx: f64, x: f64) -> f64 {
        (radius * radius - (x - cx).powi(2)).max(0.0).sqrt()
    }

    /// Vertical slice `[lo, hi]` of the upper component at abscissa `x`;
    /// empty when `lo > hi`.
    pub fn slice(&self, x: f64) -> (f64, f64) {
        let h = self.d / 2.0;
        let hi = self
            .upper_arc(self.outer, -h, x)
            .min(self.upper_arc(self.outer, h, x));
        let lo = self
            .upper_arc(self.inner, -h, x)
            .max(self.upper_arc(self.inner, h, x));
        (lo, hi)
    }

    /// Half of the horizontal extent of the upper component.
    pub fn half_width(&self) -> f64 {
        (self.outer * self.outer - self.inner * self.inner) / (2.0 * self.d)
    }

    /// Largest vertical thickness, sampling the x-range with step at most `step`.
    pub fn max_height(&self, step: f64) -> f64 {
        let half = self.half_width();
        let intervals = ((2.0 * half / step).ceil() as usize).max(2);
        let mut best = {
            let (lo, hi) = self.slice(0.0);
            (hi - lo).max(0.0)
        };
        for i in 0..=intervals {
            let x = -half + 2.0 * half * i as f64 / intervals as f64;
            let (lo, hi) = self.slice(x);
            best = best.max(hi - lo);
        }
        best
    }

    /// Cells `(column, row)` of the grid with the given pitch, anchored at the
    /// origin, that contain at least one of `samples x samples` sub-sample
    /// points lying in the upper component. Sorted by column, then row.
    pub fn cover_cells(&self, pitch: f64, samples: usize) -> Vec<(i64, i64)> {
        let half = self.half_width();
        let (lo0, hi0) = self.slice(0.0);
        let (lo_edge, _) = self.slice(half);
        let y_min = lo0.min(lo_edge);
        let col_lo = (-half / pitch).floor() as i64 - 1;
        let col_hi = (half / pitch).ceil() as i64 + 1;
        let row_lo = (y_min / pitch).floor() as i64 - 1;
        let row_hi = (hi0 / pitch).ceil() as i64 + 1;
        let offsets: Vec<f64> = (0..samples)
            .map(|s| (s as f64 + 0.5) / samples as f64)
            .collect();

        (col_lo..col_hi)
            .into_par_iter()
            .flat_map_iter(|col| {
                let offsets = &offsets;
                (row_lo..row_hi)
                    .filter(move |&row| {
                        offsets.iter().any(|&ox| {
                            let x = (col as f64 + ox) * pitch;
                            offsets
                                .iter()
                                .any(|&oy| self.contains(Point::new(x, (row as f64 + oy) * pitch)))
                        })
                    })
                    .map(move |row| (col, row))
            })
            .collect()
    }
}

/// Horizontal span and maximal vertical thickness of the upper component.
///
/// The width is twice the abscissa of the side corner; the height is sampled
/// over the x-range with step at most ε/100.
pub fn spans(cfg: &AnnulusPairConfig) -> Result<Spans> {
    let v = intersection_vertices(cfg)?;
    let height = cfg.pair().max_height(cfg.epsilon / 100.0);
    Ok(Spans {
        width: 2.0 * v.side_pos.x,
        height,
    })
}

/// Number of ε/2 grid cells met by the upper component.
pub fn cover_count(cfg: &AnnulusPairConfig) -> usize {
    cfg.pair()
        .cover_cells(cfg.epsilon / 2.0, SAMPLES_PER_CELL)
        .len()
}

/// Annuli with radii `1 - 2ε` and `1 + ε`, containing every unit-ring of
/// thickness ε whose center lies in a side-ε/2 box around `(±d/2, 0)`.
pub fn thickened_pair(d: f64, epsilon: f64) -> Result<AnnulusPair> {
    validate_epsilon(epsilon)?;
    if !(d.is_finite() && 12.0 * epsilon <= d && d <= 1.0) {
        return Err(Error::AnnulusHypothesis {
            d,
            epsilon,
            requirement: "12 epsilon <= d <= 1",
        });
    }
    AnnulusPair::with_radii(d, 1.0 - 2.0 * epsilon, 1.0 + epsilon)
}

/// Cover count of the thickened intersection on the ε/2 grid.
pub fn thickened_cover_count(d: f64, epsilon: f64) -> Result<usize> {
    Ok(thickened_pair(d, epsilon)?
        .cover_cells(epsilon / 2.0, SAMPLES_PER_CELL)
        .len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainmentReport {
    pub samples: usize,
    pub violations: usize,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `samples` annuli (radii `1 - ε`, `1`) per side, each centered at a
/// uniform point of the side-ε/2 box around `(±d/2, 0)`, takes one uniform
/// point of each, and counts the points falling outside the thickened
/// annulus around the box center.
pub fn sample_union_containment(
    d: f64,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<ContainmentReport> {
    validate_epsilon(epsilon)?;
    let thick = AnnulusPair::with_radii(d, 1.0 - 2.0 * epsilon, 1.0 + epsilon)?;
    let (c0, c1) = thick.centers();
    let side = epsilon / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for box_center in [c0, c1] {
        for _ in 0..samples {
            let center = Point::new(
                box_center.x + side * (unit(&mut rng) - 0.5),
                box_center.y + side * (unit(&mut rng) - 0.5),
            );
            let angle = std::f64::consts::TAU * unit(&mut rng);
            let radius = 1.0 - epsilon * unit(&mut rng);
            let p = Point::new(
                center.x + radius * angle.cos(),
                center.y + radius * angle.sin(),
            );
            if !thick.in_annulus(box_center, p) {
                violations += 1;
            }
        }
    }
    Ok(ContainmentReport {
        samples: 2 * samples,
        violations,
    })
}
