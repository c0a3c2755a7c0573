//! Operation examples checked against independent oracles.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use antipodal_core::generators::{
    arc_center_cluster_size, arc_center_config, circle_config, random_disk_config,
    reuleaux_boundary_config,
};
use antipodal_core::geometry::{
    boundary_band, convex_hull, diameter, orientation, pair_counts, ratio_margin, Point, PointSet,
};
use antipodal_core::harness::MARGIN_FLOOR;

fn brute_diameter(pts: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(p.dist(*q));
        }
    }
    best
}

/// Jarvis march: each hull vertex is the point all others lie left of.
fn gift_wrap(pts: &[Point]) -> BTreeSet<(u64, u64)> {
    let start = *pts
        .iter()
        .min_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)))
        .unwrap();
    let mut hull = BTreeSet::new();
    let mut current = start;
    loop {
        hull.insert((current.x.to_bits(), current.y.to_bits()));
        let mut next = if pts[0] == current { pts[1] } else { pts[0] };
        for &p in pts {
            if p == current {
                continue;
            }
            let o = orientation(current, next, p);
            // take the most clockwise candidate; on ties keep the farthest
            if o < 0.0 || (o == 0.0 && current.dist(p) > current.dist(next)) {
                next = p;
            }
        }
        current = next;
        if current == start {
            break;
        }
    }
    hull
}

fn key_set(pts: &[Point]) -> BTreeSet<(u64, u64)> {
    pts.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect()
}

/// Pair counts on the regular n-gon inscribed in the diameter-1 circle,
/// by enumerating index offsets: offset t has chord sin(πt/n).
fn circle_counts_by_offset(n: usize, eps: f64) -> (u64, u64) {
    let (mut nb, mut ap) = (0u64, 0u64);
    for t in 1..=n / 2 {
        let pairs = if 2 * t == n { n / 2 } else { n } as u64;
        let chord = (PI * t as f64 / n as f64).sin();
        if chord <= eps {
            nb += pairs;
        }
        if chord >= 1.0 - eps {
            ap += pairs;
        }
    }
    (nb, ap)
}

#[test]
fn circle_counts_match_offset_enumeration() {
    let (n, eps) = (2000, 0.01);
    let c = pair_counts(&circle_config(n).unwrap(), eps).unwrap();
    assert_eq!((c.neighbors, c.antipodes), circle_counts_by_offset(n, eps));
    assert_eq!((c.neighbors, c.antipodes), (12_000, 181_000));

    // continuum approximation: the antipode count tracks it closely, the
    // neighbor count sits one lattice step below it (6 instead of 6.37 per side)
    let n2 = (n * n) as f64;
    let antipodes_cf = (2.0 * eps).sqrt() * n2 / PI;
    assert!((c.antipodes as f64 / antipodes_cf - 1.0).abs() < 0.05);
    let neighbors_cf = eps * n2 / PI;
    assert!((c.neighbors as f64 / neighbors_cf - 1.0).abs() < 0.06);

    let margin = ratio_margin(&c).unwrap();
    let predicted = (100f64.ln() / 2.0).sqrt();
    assert!((predicted - 1.517).abs() < 1e-3);
    assert!((margin / predicted - 1.0).abs() < 0.10, "{margin}");
}

#[test]
fn circle_per_point_neighbors() {
    let (nb, _) = circle_counts_by_offset(2000, 0.01);
    let per_point = 2.0 * nb as f64 / 2000.0;
    assert_eq!(per_point, 12.0);
    assert!((per_point - 2.0 * 0.01 * 2000.0 / PI).abs() < 1.0);
}

#[test]
fn circle_diameter_is_one() {
    for n in [2, 4, 10, 100, 2000] {
        let d = diameter(&circle_config(n).unwrap()).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "n = {n}: {d}");
    }
}

#[test]
fn random_disk_diameter_matches_brute_force() {
    let ps = random_disk_config(500, 1).unwrap();
    let d = diameter(&ps).unwrap();
    assert!(d > 0.0 && d <= 1.0);
    let brute = brute_diameter(ps.points());
    assert!((d - brute).abs() <= 1e-12 * brute);
}

#[test]
fn generator_diameters_match_brute_force() {
    let sets = [
        circle_config(1999).unwrap(),
        arc_center_config(2000, 0.01).unwrap(),
        reuleaux_boundary_config(2000, 5).unwrap(),
        random_disk_config(2000, 9).unwrap(),
    ];
    for ps in &sets {
        let d = diameter(ps).unwrap();
        let brute = brute_diameter(ps.points());
        assert!((d - brute).abs() <= 1e-12 * brute);
        assert!(d <= 1.0 + 1e-9);
    }
}

#[test]
fn hull_matches_gift_wrapping() {
    let ps = random_disk_config(200, 7).unwrap();
    let hull = convex_hull(&ps).unwrap();
    assert_eq!(key_set(hull.vertices()), gift_wrap(ps.points()));
    for p in ps.points() {
        assert!(hull.contains(*p));
    }
}

#[test]
fn circle_points_are_in_convex_position() {
    let hull = convex_hull(&circle_config(100).unwrap()).unwrap();
    assert_eq!(hull.vertices().len(), 100);
}

#[test]
fn arc_center_band_keeps_everything() {
    let (n, eps) = (1000, 0.01);
    let ps = arc_center_config(n, eps).unwrap();
    let hull = convex_hull(&ps).unwrap();
    let band = boundary_band(&ps, &hull, eps);
    assert_eq!(band.len(), n);

    // point-in-hull oracle: the origin is not inside the hull of the others
    let origin = Point::new(0.0, 0.0);
    let others: Vec<Point> = ps
        .points()
        .iter()
        .copied()
        .filter(|&p| p != origin)
        .collect();
    let rest = convex_hull(&PointSet::new(others).unwrap()).unwrap();
    assert!(!rest.contains(origin));
    assert!(hull.vertices().contains(&origin));
}

#[test]
fn band_retains_hull_vertices() {
    let ps = random_disk_config(300, 2).unwrap();
    let hull = convex_hull(&ps).unwrap();
    let band = boundary_band(&ps, &hull, 1e-6);
    for v in hull.vertices() {
        assert!(band.points().contains(v));
    }
}

#[test]
fn arc_center_counts() {
    let (n, eps) = (2000, 0.01);
    let m = arc_center_cluster_size(n, eps) as u64;
    assert_eq!(m, 200);
    let c = pair_counts(&arc_center_config(n, eps).unwrap(), eps).unwrap();
    // every center-arc pair is antipodal; a few arc endpoint pairs add to it
    let center_arc = m * (n as u64 - m);
    assert!(c.antipodes >= center_arc);
    assert!((c.antipodes as f64) < 1.01 * center_arc as f64);
    let scale = eps.sqrt() * (n * n) as f64;
    assert!((c.antipodes as f64 / scale - 1.0).abs() < 0.15);
    // all cluster pairs are neighbors
    assert!(c.neighbors >= m * (m - 1) / 2);
    let margin = ratio_margin(&c).unwrap();
    assert!((0.5..=3.0).contains(&margin), "{margin}");
}

#[test]
fn random_disk_satisfies_margin_floor() {
    let c = pair_counts(&random_disk_config(1000, 42).unwrap(), 0.05).unwrap();
    match ratio_margin(&c) {
        Ok(m) => assert!(m >= MARGIN_FLOOR, "{m}"),
        Err(e) => assert_eq!(e, antipodal_core::Error::Vacuous),
    }
}

#[test]
fn reuleaux_margin_is_positive_and_finite() {
    let c = pair_counts(&reuleaux_boundary_config(1500, 3).unwrap(), 0.02).unwrap();
    let m = ratio_margin(&c).unwrap();
    assert!(m > 0.0 && m.is_finite());
}
