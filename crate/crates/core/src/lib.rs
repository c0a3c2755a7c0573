//! Counting ε-neighbors and ε-antipodes of planar point sets of diameter at
//! most one, and the spectral machinery behind the neighbor/antipode ratio.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, pair counts at both thresholds, diameter, convex hull.
//! - [`generators`]: the circle and arc-plus-center extremal configurations and
//!   randomized stress sets.
//! - [`annuli`]: intersection geometry of two thin congruent annuli.
//! - [`boundary`]: boxes along the hull boundary and the antipodal box graph.
//! - [`spectral`]: power iteration and the chain of upper bounds on the top
//!   eigenvalue of the box graph.
//! - [`harness`]: ε sweeps, log–log exponent fits and CSV output.

pub mod annuli;
pub mod boundary;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod harness;
pub mod pointfile;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{Point, PointSet};
