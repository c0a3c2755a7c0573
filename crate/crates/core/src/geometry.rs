//! Planar primitives: points, pair counts at the two distance thresholds,
//! diameter and convex hull.

use std::cmp::Ordering;
use std::ops::Sub;

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for geometric equality checks on coordinates in [-1, 1].
pub const GEOMETRIC_TOLERANCE: f64 = 1e-12;

/// Slack allowed on the diameter of a set flagged as normalized.
pub const NORMALIZED_DIAMETER_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Sub for Point {
    type Output = Point;

    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Positive when `a, b, c` turn counterclockwise. Exact sign.
pub fn orientation(a: Point, b: Point, c: Point) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * ab.x, a.y + t * ab.y))
}

/// A finite list of planar points with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    normalized: bool,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(PointSet {
            points,
            normalized: false,
        })
    }

    /// Like [`PointSet::new`], additionally certifying `diameter <= 1 + 1e-9`.
    pub fn normalized(points: Vec<Point>) -> Result<Self> {
        let mut ps = Self::new(points)?;
        if ps.len() >= 2 {
            let diam = diameter(&ps)?;
            if diam > 1.0 + NORMALIZED_DIAMETER_SLACK {
                return Err(Error::InvalidGenerator(format!(
                    "diameter {diam} exceeds 1 for a normalized set"
                )));
            }
        }
        ps.normalized = true;
        Ok(ps)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::TooFewPoints {
                needed,
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// Number of ε-neighbor and ε-antipode pairs of a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCounts {
    /// Pairs `i < j` with `|x_i - x_j| <= epsilon`.
    pub neighbors: u64,
    /// Pairs `i < j` with `|x_i - x_j| >= 1 - epsilon`.
    pub antipodes: u64,
    pub epsilon: f64,
    pub n: usize,
}

impl PairCounts {
    pub fn total_pairs(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1) / 2
    }

    pub fn is_vacuous(&self) -> bool {
        self.antipodes == 0
    }
}

pub fn validate_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 && epsilon < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// Exact brute-force count of both pair classes. Thresholds are inclusive.
pub fn pair_counts(ps: &PointSet, epsilon: f64) -> Result<PairCounts> {
    validate_epsilon(epsilon)?;
    ps.require(2)?;
    let far = 1.0 - epsilon;
    let pts = ps.points();
    let (mut neighbors, mut antipodes) = (0u64, 0u64);
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let dist = p.dist(q);
            if dist <= epsilon {
                neighbors += 1;
            }
            if dist >= far {
                antipodes += 1;
            }
        }
    }
    Ok(PairCounts {
        neighbors,
        antipodes,
        epsilon,
        n: ps.len(),
    })
}

/// Empirical value of the constant `c` admitted by one configuration:
/// `neighbors * sqrt(ln(1/ε)) / (antipodes * sqrt(ε))`.
///
/// Returns [`Error::Vacuous`] when there are no antipodal pairs.
pub fn ratio_margin(counts: &PairCounts) -> Result<f64> {
    if counts.antipodes == 0 {
        return Err(Error::Vacuous);
    }
    let eps = counts.epsilon;
    Ok(counts.neighbors as f64 * (1.0 / eps).ln().sqrt() / (counts.antipodes as f64 * eps.sqrt()))
}

/// Convex polygon with counterclockwise, strictly convex vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    perimeter: f64,
}

impl ConvexPolygon {
    fn from_ccw(vertices: Vec<Point>) -> Self {
        let perimeter = edges(&vertices).map(|(a, b)| a.dist(b)).sum();
        ConvexPolygon {
            vertices,
            perimeter,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        edges(&self.vertices)
    }

    /// Minimum distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Inside-or-on test: every edge sees `p` with signed area >= -1e-12.
    pub fn contains(&self, p: Point) -> bool {
        self.edges()
            .all(|(a, b)| (b - a).cross(p - a) >= -GEOMETRIC_TOLERANCE)
    }

    /// Point at arc length `s` along the boundary, starting from vertex 0.
    pub fn point_at(&self, s: f64) -> Point {
        let mut remaining = s.rem_euclid(self.perimeter);
        for (a, b) in self.edges() {
            let len = a.dist(b);
            if remaining <= len {
                let t = if len > 0.0 { remaining / len } else { 0.0 };
                return Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            }
            remaining -= len;
        }
        self.vertices[0]
    }
}

/// One monotone chain; its last point is dropped since it opens the next chain.
fn half_hull(pts: impl Iterator<Item = Point>) -> Vec<Point> {
    let mut chain: Vec<Point> = Vec::new();
    for p in pts {
        while chain.len() >= 2
            && orientation(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0.0
        {
            chain.pop();
        }
        chain.push(p);
    }
    chain.pop();
    chain
}

fn edges(vertices: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| (vertices[i], vertices[(i + 1) % n]))
}

/// Andrew's monotone chain with exact orientation tests. Collinear
/// boundary points are pruned, so the output is strictly convex.
pub fn convex_hull(ps: &PointSet) -> Result<ConvexPolygon> {
    ps.require(3)?;
    let mut pts = ps.points().to_vec();
    pts.sort_by(Point::lex_cmp);
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::Collinear);
    }

    let mut hull = half_hull(pts.iter().copied());
    hull.extend(half_hull(pts.iter().rev().copied()));
    if hull.len() < 3 {
        return Err(Error::Collinear);
    }
    Ok(ConvexPolygon::from_ccw(hull))
}

/// Largest pairwise distance. Rotating calipers over the hull; collinear
/// sets fall back to the distance between their lexicographic extremes.
pub fn diameter(ps: &PointSet) -> Result<f64> {
    ps.require(2)?;
    let hull = match convex_hull(ps) {
        Ok(hull) => hull,
        Err(Error::Collinear) | Err(Error::TooFewPoints { .. }) => {
            let pts = ps.points();
            let lo = pts.iter().min_by(|a, b| a.lex_cmp(b)).unwrap();
            let hi = pts.iter().max_by(|a, b| a.lex_cmp(b)).unwrap();
            return Ok(lo.dist(*hi));
        }
        Err(e) => return Err(e),
    };
    Ok(hull_diameter(hull.vertices()))
}

fn hull_diameter(h: &[Point]) -> f64 {
    let m = h.len();
    let area = |a: Point, b: Point, c: Point| (b - a).cross(c - a).abs();
    let mut best: f64 = 0.0;
    let mut j = 1;
    for i in 0..m {
        let ni = (i + 1) % m;
        let mut steps = 0;
        while steps < m && area(h[i], h[ni], h[(j + 1) % m]) > area(h[i], h[ni], h[j]) {
            j = (j + 1) % m;
            steps += 1;
        }
        best = best.max(h[i].dist(h[j])).max(h[ni].dist(h[j]));
    }
    best
}

/// Points whose distance to the hull boundary is at most `epsilon`.
pub fn boundary_band(ps: &PointSet, hull: &ConvexPolygon, epsilon: f64) -> PointSet {
    let kept = ps
        .points()
        .iter()
        .copied()
        .filter(|&p| hull.boundary_distance(p) <= epsilon)
        .collect();
    PointSet {
        points: kept,
        normalized: ps.normalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn square_with_center() -> PointSet {
        set(&[(0.0, 0.0), (0.5, 0.0), (0.5, 0.5), (0.0, 0.5), (0.25, 0.25)])
    }

    #[test]
    fn two_points_at_unit_distance() {
        let c = pair_counts(&set(&[(0.0, 0.0), (1.0, 0.0)]), 0.1).unwrap();
        assert_eq!((c.neighbors, c.antipodes), (0, 1));
        assert_eq!(ratio_margin(&c).unwrap(), 0.0);
    }

    #[test]
    fn collinear_triple_counts() {
        let c = pair_counts(&set(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)]), 0.1).unwrap();
        assert_eq!((c.neighbors, c.antipodes), (0, 1));
    }

    #[test]
    fn pair_counts_rejects_bad_input() {
        let ps = set(&[(0.0, 0.0), (1.0, 0.0)]);
        for eps in [0.0, -0.1, 0.5, 0.7, f64::NAN] {
            assert!(matches!(
                pair_counts(&ps, eps),
                Err(Error::InvalidEpsilon(_))
            ));
        }
        assert!(matches!(
            pair_counts(&set(&[(0.0, 0.0)]), 0.1),
            Err(Error::TooFewPoints { .. })
        ));
        assert_eq!(
            PointSet::new(vec![Point::new(0.0, f64::INFINITY)]),
            Err(Error::NonFinite { index: 0 })
        );
    }

    #[test]
    fn ratio_margin_zero_numerator_and_vacuous() {
        let c = PairCounts {
            neighbors: 0,
            antipodes: 5,
            epsilon: 0.03,
            n: 10,
        };
        assert_eq!(ratio_margin(&c).unwrap(), 0.0);
        let vac = PairCounts { antipodes: 0, ..c };
        assert_eq!(ratio_margin(&vac), Err(Error::Vacuous));
    }

    #[test]
    fn equilateral_diameter() {
        let h = 0.7 * 3f64.sqrt() / 2.0;
        let d = diameter(&set(&[(0.0, 0.0), (0.7, 0.0), (0.35, h)])).unwrap();
        assert!((d - 0.7).abs() < 1e-12);
    }

    #[test]
    fn collinear_diameter_uses_extremes() {
        let d = diameter(&set(&[(0.2, 0.0), (0.0, 0.0), (0.9, 0.0), (0.5, 0.0)])).unwrap();
        assert!((d - 0.9).abs() < 1e-15);
    }

    #[test]
    fn square_hull_drops_center() {
        let hull = convex_hull(&square_with_center()).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert!(!hull.vertices().contains(&Point::new(0.25, 0.25)));
        assert!((hull.perimeter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hull_prunes_collinear_edge_points() {
        let hull = convex_hull(&set(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        assert_eq!(hull.vertices().len(), 3);
    }

    #[test]
    fn collinear_hull_is_an_error() {
        let ps = set(&[(0.0, 0.0), (0.25, 0.25), (0.5, 0.5), (1.0, 1.0)]);
        assert_eq!(convex_hull(&ps), Err(Error::Collinear));
    }

    #[test]
    fn hull_is_counterclockwise() {
        let hull = convex_hull(&square_with_center()).unwrap();
        let v = hull.vertices();
        for i in 0..v.len() {
            let (a, b, c) = (v[i], v[(i + 1) % v.len()], v[(i + 2) % v.len()]);
            assert!(orientation(a, b, c) > 0.0);
        }
    }

    #[test]
    fn band_excludes_square_center() {
        let ps = square_with_center();
        let hull = convex_hull(&ps).unwrap();
        let band = boundary_band(&ps, &hull, 0.1);
        assert_eq!(band.len(), 4);
        assert!((hull.boundary_distance(Point::new(0.25, 0.25)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn point_at_walks_the_boundary() {
        let hull = convex_hull(&square_with_center()).unwrap();
        for s in [0.0, 0.1, 0.5, 0.77, 1.3, 1.99] {
            assert!(hull.boundary_distance(hull.point_at(s)) < 1e-12);
        }
        let start = hull.vertices()[0];
        assert!(hull.point_at(2.0).dist(start) < 1e-12);
    }
}
