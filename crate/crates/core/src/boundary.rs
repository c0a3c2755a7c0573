//! Discretization of the hull boundary into boxes of side ε/2 and the
//! antipodal graph on those boxes.
//!
//! Two boxes are adjacent when some pair of their points is at distance at
//! least `1 - ε`. For a fixed reference vertex `i` the module also provides
//! the near set `W` (boxes within `100ε` of box `i`) and, for the far boxes,
//! the tail counts `T_s = #{j not in W : |N(i) ∩ N(j)| >= s}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{validate_epsilon, ConvexPolygon, Point};

/// Graphs with at most this many vertices use bitset rows.
pub const DENSE_LIMIT: usize = 4096;

/// Default radius of the near set, in units of ε.
pub const DEFAULT_NEAR_FACTOR: f64 = 100.0;

/// Axis-aligned closed square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryBox {
    pub center: Point,
    pub side: f64,
}

impl BoundaryBox {
    pub fn new(center: Point, side: f64) -> Self {
        debug_assert!(side > 0.0);
        BoundaryBox { center, side }
    }

    pub fn corners(&self) -> [Point; 4] {
        let h = self.side / 2.0;
        let Point { x, y } = self.center;
        [
            Point::new(x - h, y - h),
            Point::new(x + h, y - h),
            Point::new(x + h, y + h),
            Point::new(x - h, y + h),
        ]
    }

    /// Largest distance between a point of `self` and a point of `other`.
    /// For axis-aligned squares it is attained at a corner pair.
    pub fn max_distance(&self, other: &BoundaryBox) -> f64 {
        let reach = (self.side + other.side) / 2.0;
        let dx = (self.center.x - other.center.x).abs() + reach;
        let dy = (self.center.y - other.center.y).abs() + reach;
        dx.hypot(dy)
    }

    /// Smallest distance between the two squares, from the per-axis gaps.
    pub fn min_distance(&self, other: &BoundaryBox) -> f64 {
        let reach = (self.side + other.side) / 2.0;
        let gx = ((self.center.x - other.center.x).abs() - reach).max(0.0);
        let gy = ((self.center.y - other.center.y).abs() - reach).max(0.0);
        gx.hypot(gy)
    }
}

/// Boxes centered at arc-length samples `0, ε/2, ε, ...` of the hull boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBoxing {
    boxes: Vec<BoundaryBox>,
    arc_positions: Vec<f64>,
    epsilon: f64,
    perimeter: f64,
}

impl BoundaryBoxing {
    pub fn boxes(&self) -> &[BoundaryBox] {
        &self.boxes
    }

    /// Arc-length coordinate of each box center, from hull vertex 0.
    pub fn arc_positions(&self) -> &[f64] {
        &self.arc_positions
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn k(&self) -> usize {
        self.boxes.len()
    }
}

/// Marches the hull boundary by arc length in steps of ε/2 and places a box
/// of side ε/2 at each sample; `k = ceil(perimeter / (ε/2))`, so the last gap
/// may be shorter than ε/2.
pub fn discretize_boundary(hull: &ConvexPolygon, epsilon: f64) -> Result<BoundaryBoxing> {
    validate_epsilon(epsilon)?;
    let perimeter = hull.perimeter();
    if epsilon >= perimeter / 3.0 {
        return Err(Error::TooFewBoxes { epsilon, perimeter });
    }
    let step = epsilon / 2.0;
    let k = (perimeter / step).ceil() as usize;

    let mut boxes = Vec::with_capacity(k);
    let mut arc_positions = Vec::with_capacity(k);
    let mut edges = hull.edges();
    let (mut a, mut b) = edges.next().expect("hull has edges");
    let mut edge_start = 0.0;
    let mut edge_len = a.dist(b);
    for t in 0..k {
        let s = t as f64 * step;
        while s > edge_start + edge_len {
            match edges.next() {
                Some((na, nb)) => {
                    edge_start += edge_len;
                    a = na;
                    b = nb;
                    edge_len = a.dist(b);
                }
                None => break,
            }
        }
        let f = ((s - edge_start) / edge_len).clamp(0.0, 1.0);
        let center = Point::new(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y));
        boxes.push(BoundaryBox::new(center, step));
        arc_positions.push(s);
    }
    Ok(BoundaryBoxing {
        boxes,
        arc_positions,
        epsilon,
        perimeter,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Storage {
    /// One bitset row per vertex.
    Dense,
    /// Sorted neighbor lists.
    Sparse,
}

impl Storage {
    pub fn for_size(k: usize) -> Self {
        if k <= DENSE_LIMIT {
            Storage::Dense
        } else {
            Storage::Sparse
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Adjacency {
    Dense { words: usize, bits: Vec<u64> },
    Sparse(Vec<Vec<u32>>),
}

/// Simple undirected graph: symmetric 0/1 adjacency with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AntipodalGraph {
    k: usize,
    adjacency: Adjacency,
    degrees: Vec<usize>,
    edge_count: usize,
}

impl AntipodalGraph {
    /// Builds from sorted, symmetric, loop-free neighbor lists.
    fn from_rows(rows: Vec<Vec<u32>>, storage: Storage) -> Self {
        let k = rows.len();
        let degrees: Vec<usize> = rows.iter().map(Vec::len).collect();
        let edge_count = degrees.iter().sum::<usize>() / 2;
        let adjacency = match storage {
            Storage::Sparse => Adjacency::Sparse(rows),
            Storage::Dense => {
                let words = k.div_ceil(64);
                let mut bits = vec![0u64; words * k];
                for (i, row) in rows.iter().enumerate() {
                    for &j in row {
                        bits[i * words + j as usize / 64] |= 1u64 << (j % 64);
                    }
                }
                Adjacency::Dense { words, bits }
            }
        };
        AntipodalGraph {
            k,
            adjacency,
            degrees,
            edge_count,
        }
    }

    /// Graph on `k` vertices from an edge list. Loops and duplicate edges are
    /// dropped.
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); k];
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(Error::VertexOutOfRange(a.max(b)));
            }
            if a != b {
                rows[a].push(b as u32);
                rows[b].push(a as u32);
            }
        }
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_rows(rows, Storage::for_size(k)))
    }

    pub fn complete(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| (0..k as u32).filter(|&j| j as usize != i).collect())
            .collect();
        Self::from_rows(rows, Storage::for_size(k))
    }

    pub fn cycle(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_edges(k, &edges).expect("indices in range")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|j| (0, j)).collect();
        Self::from_edges(leaves + 1, &edges).expect("indices in range")
    }

    pub fn with_storage(&self, storage: Storage) -> Self {
        let rows = (0..self.k)
            .map(|i| self.neighbors(i).into_iter().map(|j| j as u32).collect())
            .collect();
        Self::from_rows(rows, storage)
    }

    pub fn storage(&self) -> Storage {
        match self.adjacency {
            Adjacency::Dense { .. } => Storage::Dense,
            Adjacency::Sparse(_) => Storage::Sparse,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.k {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(i))
        }
    }

    /// Sorted neighbor list of `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        match &self.adjacency {
            Adjacency::Sparse(rows) => rows[i].iter().map(|&j| j as usize).collect(),
            Adjacency::Dense { words, bits } => {
                let row = &bits[i * words..(i + 1) * words];
                let mut out = Vec::with_capacity(self.degrees[i]);
                for (w, &word) in row.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        out.push(w * 64 + word.trailing_zeros() as usize);
                        word &= word - 1;
                    }
                }
                out
            }
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        match &self.adjacency {
            Adjacency::Sparse(rows) => rows[i].binary_search(&(j as u32)).is_ok(),
            Adjacency::Dense { words, bits } => bits[i * words + j / 64] >> (j % 64) & 1 == 1,
        }
    }

    /// `|N(i) ∩ N(j)|`; for `i == j` this is the degree of `i`.
    pub fn common_neighbors(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.common_unchecked(i, j))
    }

    fn common_unchecked(&self, i: usize, j: usize) -> usize {
        match &self.adjacency {
            Adjacency::Dense { words, bits } => {
                let a = &bits[i * words..(i + 1) * words];
                let b = &bits[j * words..(j + 1) * words];
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x & y).count_ones() as usize)
                    .sum()
            }
            Adjacency::Sparse(rows) => {
                let (a, b) = (&rows[i], &rows[j]);
                let (mut p, mut q, mut count) = (0, 0, 0);
                while p < a.len() && q < b.len() {
                    match a[p].cmp(&b[q]) {
                        std::cmp::Ordering::Less => p += 1,
                        std::cmp::Ordering::Greater => q += 1,
                        std::cmp::Ordering::Equal => {
                            count += 1;
                            p += 1;
                            q += 1;
                        }
                    }
                }
                count
            }
        }
    }
}

/// Antipodal graph of a boxing: `i ~ j` iff `i != j` and the boxes have a
/// point pair at distance `>= 1 - ε`. Storage is chosen by size.
pub fn build_graph(boxing: &BoundaryBoxing) -> AntipodalGraph {
    build_graph_with(boxing, Storage::for_size(boxing.k()))
}

pub fn build_graph_with(boxing: &BoundaryBoxing, storage: Storage) -> AntipodalGraph {
    let far = 1.0 - boxing.epsilon;
    let boxes = boxing.boxes();
    let rows: Vec<Vec<u32>> = (0..boxes.len())
        .into_par_iter()
        .map(|i| {
            let bi = &boxes[i];
            (0..boxes.len())
                .filter(|&j| j != i && bi.max_distance(&boxes[j]) >= far)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    AntipodalGraph::from_rows(rows, storage)
}

/// Vertices `w` whose box is within distance `factor * ε` of box `i`
/// (inclusive). Always contains `i`.
pub fn near_set(boxing: &BoundaryBoxing, i: usize, factor: f64) -> Result<Vec<usize>> {
    let boxes = boxing.boxes();
    let bi = boxes.get(i).ok_or(Error::VertexOutOfRange(i))?;
    let radius = factor * boxing.epsilon;
    Ok((0..boxes.len())
        .filter(|&w| bi.min_distance(&boxes[w]) <= radius)
        .collect())
}

/// Tail counts of common-neighbor multiplicities for far vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCounts {
    /// `counts[s - 1] = T_s` for `s = 1..=k`.
    pub counts: Vec<usize>,
    /// `Σ_{j not in W} |N(i) ∩ N(j)|`, summed directly.
    pub far_common_sum: usize,
}

impl TailCounts {
    /// `T_s`, zero outside `1..=k`.
    pub fn t(&self, s: usize) -> usize {
        s.checked_sub(1)
            .and_then(|idx| self.counts.get(idx))
            .copied()
            .unwrap_or(0)
    }

    /// `Σ_s T_s`, which equals `far_common_sum` by the layer-cake identity.
    pub fn layer_sum(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `max_s s * T_s`.
    pub fn max_weighted(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(idx, &t)| (idx + 1) * t)
            .max()
            .unwrap_or(0)
    }
}

/// `T_s` for `s = 1..=k` over the vertices outside `near`.
pub fn tail_counts(g: &AntipodalGraph, i: usize, near: &[usize]) -> Result<TailCounts> {
    g.check(i)?;
    let k = g.k();
    let mut is_near = vec![false; k];
    for &w in near {
        g.check(w)?;
        is_near[w] = true;
    }
    // histogram of multiplicities, then suffix sums
    let mut hist = vec![0usize; k + 1];
    let mut far_common_sum = 0;
    for j in (0..k).filter(|&j| !is_near[j]) {
        let c = g.common_unchecked(i, j);
        hist[c] += 1;
        far_common_sum += c;
    }
    let mut counts = vec![0usize; k];
    let mut running = 0;
    for s in (1..=k).rev() {
        running += hist[s];
        counts[s - 1] = running;
    }
    Ok(TailCounts {
        counts,
        far_common_sum,
    })
}

/// `Σ_{j ∈ N(i)} d_j`.
pub fn neighborhood_degree_sum(g: &AntipodalGraph, i: usize) -> Result<usize> {
    g.check(i)?;
    if g.degree(i) == 0 {
        return Err(Error::IsolatedVertex(i));
    }
    Ok(g.neighbors(i).into_iter().map(|j| g.degree(j)).sum())
}

/// Largest `Σ_{j ∈ N(i)} d_j` over non-isolated vertices; 0 for an empty graph.
pub fn max_neighborhood_degree_sum(g: &AntipodalGraph) -> usize {
    (0..g.k())
        .into_par_iter()
        .filter(|&i| g.degree(i) > 0)
        .map(|i| g.neighbors(i).into_iter().map(|j| g.degree(j)).sum())
        .max()
        .unwrap_or(0)
}

/// Boundary arc length covered by the boxes adjacent to `i`: the complement
/// of the largest cyclic gap between their centers, plus one box length.
pub fn neighbor_arc_span(boxing: &BoundaryBoxing, g: &AntipodalGraph, i: usize) -> f64 {
    let pos = boxing.arc_positions();
    let mut arcs: Vec<f64> = g.neighbors(i).into_iter().map(|j| pos[j]).collect();
    if arcs.is_empty() {
        return 0.0;
    }
    arcs.sort_by(f64::total_cmp);
    let perimeter = boxing.perimeter();
    let wrap = arcs[0] + perimeter - arcs[arcs.len() - 1];
    let largest_gap = arcs.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    perimeter - largest_gap + boxing.epsilon() / 2.0
}

/// Summary row for `graph-stats`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub k: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub max_nbr_deg_sum: usize,
    /// `max_{i,s} s T_s / k` with the near set of radius `near_factor * ε`.
    pub max_s_ts_over_k: f64,
}

/// `max_{i,s} s T_s` over all reference vertices.
pub fn max_weighted_tail(boxing: &BoundaryBoxing, g: &AntipodalGraph, near_factor: f64) -> usize {
    (0..g.k())
        .into_par_iter()
        .map(|i| {
            let near = near_set(boxing, i, near_factor).expect("vertex in range");
            tail_counts(g, i, &near)
                .expect("vertex in range")
                .max_weighted()
        })
        .max()
        .unwrap_or(0)
}

pub fn graph_stats(boxing: &BoundaryBoxing, g: &AntipodalGraph, near_factor: f64) -> GraphStats {
    GraphStats {
        k: g.k(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        max_nbr_deg_sum: max_neighborhood_degree_sum(g),
        max_s_ts_over_k: max_weighted_tail(boxing, g, near_factor) as f64 / g.k() as f64,
    }
}
