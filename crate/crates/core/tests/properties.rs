use antipodal_core::boundary::{neighborhood_degree_sum, tail_counts, AntipodalGraph};
use antipodal_core::geometry::{convex_hull, diameter, pair_counts, Point, PointSet};
use antipodal_core::harness::{fit_exponent, Field, SweepRecord};
use antipodal_core::spectral::{
    bound_chain, collatz_wielandt_bound, lambda1, sqrt_degree_vector, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use proptest::prelude::*;

fn points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 3..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

fn graph(max_k: usize) -> impl Strategy<Value = AntipodalGraph> {
    (2..max_k).prop_flat_map(|k| {
        prop::collection::vec(any::<bool>(), k * (k - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if bits[idx] {
                        edges.push((i, j));
                    }
                    idx += 1;
                }
            }
            AntipodalGraph::from_edges(k, &edges).unwrap()
        })
    })
}

fn brute_diameter(pts: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(p.dist(*q));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_counts_invariant_under_rigid_motion(
        pts in points(80),
        angle in 0.0f64..std::f64::consts::TAU,
        dx in -3.0f64..3.0,
        dy in -3.0f64..3.0,
        eps in 0.01f64..0.3,
    ) {
        let (s, c) = angle.sin_cos();
        let moved: Vec<Point> = pts
            .iter()
            .map(|p| Point::new(c * p.x - s * p.y + dx, s * p.x + c * p.y + dy))
            .collect();
        let a = pair_counts(&PointSet::new(pts).unwrap(), eps).unwrap();
        let b = pair_counts(&PointSet::new(moved).unwrap(), eps).unwrap();
        prop_assert_eq!((a.neighbors, a.antipodes), (b.neighbors, b.antipodes));
    }

    #[test]
    fn pair_counts_monotone_in_epsilon(pts in points(80), e1 in 0.01f64..0.49, e2 in 0.01f64..0.49) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let ps = PointSet::new(pts).unwrap();
        let a = pair_counts(&ps, lo).unwrap();
        let b = pair_counts(&ps, hi).unwrap();
        prop_assert!(a.neighbors <= b.neighbors && a.antipodes <= b.antipodes);
        prop_assert!(b.neighbors + b.antipodes <= b.total_pairs());
        if b.antipodes > 0 {
            prop_assert!(diameter(&ps).unwrap() >= 1.0 - hi);
        }
    }

    #[test]
    fn diameter_matches_brute_force(pts in points(200)) {
        let ps = PointSet::new(pts.clone()).unwrap();
        let fast = diameter(&ps).unwrap();
        let slow = brute_diameter(&pts);
        prop_assert!((fast - slow).abs() <= 1e-12 * slow);
    }

    #[test]
    fn hull_contains_every_point_and_ignores_order(pts in points(120), seed in any::<u64>()) {
        let ps = PointSet::new(pts.clone()).unwrap();
        let Ok(hull) = convex_hull(&ps) else { return Ok(()) };
        for p in &pts {
            prop_assert!(hull.contains(*p));
        }
        let mut shuffled = pts;
        // deterministic Fisher-Yates from the seed
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let other = convex_hull(&PointSet::new(shuffled).unwrap()).unwrap();
        prop_assert_eq!(hull.vertices(), other.vertices());
    }

    #[test]
    fn bound_chain_is_ordered(g in graph(30)) {
        prop_assume!(g.edge_count() > 0);
        let report = bound_chain(&g).unwrap();
        prop_assert!(report.is_ordered());
    }

    #[test]
    fn collatz_wielandt_scale_invariant(g in graph(25), exp in -20i32..20, alpha in 0.001f64..1000.0) {
        prop_assume!(g.edge_count() > 0);
        let x = sqrt_degree_vector(&g);
        let base = collatz_wielandt_bound(&g, &x).unwrap();
        let pow2 = 2f64.powi(exp);
        let scaled: Vec<f64> = x.iter().map(|v| v * pow2).collect();
        prop_assert_eq!(collatz_wielandt_bound(&g, &scaled).unwrap(), base);
        let scaled: Vec<f64> = x.iter().map(|v| v * alpha).collect();
        prop_assert!((collatz_wielandt_bound(&g, &scaled).unwrap() - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn lambda1_invariant_under_relabeling(g in graph(25), rot in 1usize..24) {
        prop_assume!(g.edge_count() > 0);
        let k = g.k();
        let perm = |i: usize| (i * 7 + rot) % k;
        // a bijection only when gcd(7, k) = 1
        prop_assume!(k % 7 != 0);
        let edges: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| g.neighbors(i).into_iter().map(move |j| (i, j)))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| (perm(i), perm(j)))
            .collect();
        let h = AntipodalGraph::from_edges(k, &edges).unwrap();
        let a = lambda1(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let b = lambda1(&h, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!((a - b).abs() <= 1e-6 * a.max(1.0));
    }

    #[test]
    fn double_counting_and_split_bound(g in graph(30), near_size in 0usize..10) {
        for i in (0..g.k()).filter(|&i| g.degree(i) > 0) {
            let lhs = neighborhood_degree_sum(&g, i).unwrap();
            let all: usize = (0..g.k()).map(|j| g.common_neighbors(i, j).unwrap()).sum();
            prop_assert_eq!(lhs, all);

            let near: Vec<usize> = (0..g.k()).filter(|&j| j == i || j % 10 < near_size).collect();
            let tails = tail_counts(&g, i, &near).unwrap();
            prop_assert_eq!(tails.layer_sum(), tails.far_common_sum);
            prop_assert!(lhs <= near.len() * g.degree(i) + tails.far_common_sum);
        }
    }

    #[test]
    fn fit_recovers_random_power_laws(alpha in -2.0f64..2.0, log_c in -5.0f64..5.0) {
        let records: Vec<SweepRecord> = [0.08, 0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&e| {
                let mut r = SweepRecord::new("synthetic", e, 0);
                r.lambda1 = Some(log_c.exp() * e.powf(alpha));
                r
            })
            .collect();
        let fit = fit_exponent(&records, Field::Lambda1).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-12);
        prop_assert!((fit.intercept - log_c).abs() < 1e-11);
    }
}
