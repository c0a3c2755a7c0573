//! Top eigenvalue of the antipodal graph and the chain of upper bounds
//!
//! `λ₁ <= max_i (M x)_i / x_i` (Collatz–Wielandt, `x = sqrt(d)`)
//! `   <= max_i sqrt(Σ_{j ∈ N(i)} d_j)` (Cauchy–Schwarz)
//! `   <= sqrt(2 |E|)` (trace of `MᵀM`).
//!
//! Isolated vertices are dropped inside every operation here; the graph
//! itself keeps them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::AntipodalGraph;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Relative slack allowed between consecutive links of the bound chain.
pub const CHAIN_SLACK: f64 = 1e-9;

/// Compressed adjacency of the non-isolated part of a graph.
struct Restricted {
    /// restricted index -> original vertex
    vertices: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Restricted {
    fn new(g: &AntipodalGraph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut index = vec![u32::MAX; g.k()];
        let vertices: Vec<usize> = (0..g.k()).filter(|&i| g.degree(i) > 0).collect();
        for (r, &v) in vertices.iter().enumerate() {
            index[v] = r as u32;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for &v in &vertices {
            targets.extend(g.neighbors(v).into_iter().map(|j| index[j]));
            offsets.push(targets.len());
        }
        Ok(Restricted {
            vertices,
            offsets,
            targets,
        })
    }

    fn len(&self) -> usize {
        self.vertices.len()
    }

    fn row(&self, r: usize) -> &[u32] {
        &self.targets[self.offsets[r]..self.offsets[r + 1]]
    }

    /// `out = M v`, rows in parallel, each row summed in index order.
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().enumerate().for_each(|(r, o)| {
            *o = self.row(r).iter().map(|&c| v[c as usize]).sum();
        });
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Converged power iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronIterate {
    pub lambda: f64,
    /// Unit-norm iterate over all `k` vertices; isolated vertices carry 0.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration on `M + I` from the all-ones vector.
///
/// The shift keeps a bipartite component (eigenvalues `±λ₁`) from stalling
/// the iteration. Stops once successive Rayleigh quotients differ by less
/// than `tol * λ` and the residual `|Mv - λv|` is at most `10 tol λ |v|`.
pub fn power_iteration(g: &AntipodalGraph, tol: f64, max_iter: usize) -> Result<PerronIterate> {
    let m = Restricted::new(g)?;
    let n = m.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut mv = vec![0.0; n];
    let mut previous = f64::NAN;
    let mut lambda = 0.0;
    for iteration in 1..=max_iter {
        m.apply(&v, &mut mv);
        lambda = dot(&v, &mv);
        let residual = v
            .iter()
            .zip(&mv)
            .map(|(x, y)| (y - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if (lambda - previous).abs() < tol * lambda && residual <= 10.0 * tol * lambda {
            let mut vector = vec![0.0; g.k()];
            for (r, &orig) in m.vertices.iter().enumerate() {
                vector[orig] = v[r];
            }
            return Ok(PerronIterate {
                lambda,
                vector,
                iterations: iteration,
            });
        }
        previous = lambda;
        for (x, y) in v.iter_mut().zip(&mv) {
            *x += y;
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_estimate: lambda,
    })
}

/// Largest eigenvalue of the adjacency matrix.
pub fn lambda1(g: &AntipodalGraph, tol: f64, max_iter: usize) -> Result<f64> {
    power_iteration(g, tol, max_iter).map(|it| it.lambda)
}

/// `max_i (M x)_i / x_i` over non-isolated vertices. `x` must have one entry
/// per vertex, strictly positive wherever the degree is nonzero.
pub fn collatz_wielandt_bound(g: &AntipodalGraph, x: &[f64]) -> Result<f64> {
    if x.len() != g.k() {
        return Err(Error::CertificateLength {
            expected: g.k(),
            got: x.len(),
        });
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let active = |i: &usize| g.degree(*i) > 0;
    if let Some(index) = (0..g.k())
        .filter(active)
        .find(|&i| !(x[i] > 0.0 && x[i].is_finite()))
    {
        return Err(Error::NonPositiveCertificate {
            index,
            value: x[index],
        });
    }
    Ok((0..g.k())
        .into_par_iter()
        .filter(active)
        .map(|i| g.neighbors(i).into_iter().map(|j| x[j]).sum::<f64>() / x[i])
        .reduce(|| f64::NEG_INFINITY, f64::max))
}

/// The certificate `x_i = sqrt(d_i)`.
pub fn sqrt_degree_vector(g: &AntipodalGraph) -> Vec<f64> {
    g.degrees().iter().map(|&d| (d as f64).sqrt()).collect()
}

/// `max_i sqrt(Σ_{j ∈ N(i)} d_j)`.
pub fn sqrt_degree_bound(g: &AntipodalGraph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((crate::boundary::max_neighborhood_degree_sum(g) as f64).sqrt())
}

/// `sqrt(2 |E|) = sqrt(tr(MᵀM))`.
pub fn trace_bound(g: &AntipodalGraph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((2.0 * g.edge_count() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundChainReport {
    pub lambda1: f64,
    pub cw_bound: f64,
    pub sqrt_degree_bound: f64,
    pub trace_bound: f64,
    /// Number of non-isolated vertices.
    pub k_effective: usize,
}

impl BoundChainReport {
    fn links(&self) -> [(&'static str, f64, f64); 3] {
        [
            ("lambda1 <= cw", self.lambda1, self.cw_bound),
            ("cw <= sqrtdeg", self.cw_bound, self.sqrt_degree_bound),
            ("sqrtdeg <= trace", self.sqrt_degree_bound, self.trace_bound),
        ]
    }

    /// Whether each link holds up to [`CHAIN_SLACK`] relative slack.
    pub fn is_ordered(&self) -> bool {
        self.links()
            .iter()
            .all(|&(_, lo, hi)| lo <= hi * (1.0 + CHAIN_SLACK))
    }
}

/// All four quantities, with the ordering checked.
pub fn bound_chain(g: &AntipodalGraph) -> Result<BoundChainReport> {
    let report = BoundChainReport {
        lambda1: lambda1(g, DEFAULT_TOL, DEFAULT_MAX_ITER)?,
        cw_bound: collatz_wielandt_bound(g, &sqrt_degree_vector(g))?,
        sqrt_degree_bound: sqrt_degree_bound(g)?,
        trace_bound: trace_bound(g)?,
        k_effective: g.degrees().iter().filter(|&&d| d > 0).count(),
    };
    if let Some((name, lo, hi)) = report
        .links()
        .into_iter()
        .find(|&(_, lo, hi)| lo > hi * (1.0 + CHAIN_SLACK))
    {
        return Err(Error::ChainOrder(format!("{name} fails: {lo} > {hi}")));
    }
    Ok(report)
}
