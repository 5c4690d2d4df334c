//! Small convex polygons: unit-diameter n-gons with long perimeter.
//!
//! - [`geometry`]: points, convex polygons, perimeter, diameter, canonical pose.
//! - [`diamgraph`]: the diameter graph and its odd-cycle-plus-pendants topology.
//! - [`constructions`]: the perimeter bound, regular polygons, published records
//!   and angle configurations.
//! - [`optimizer`]: perimeter maximization per topology and topology search.
//! - [`certify`]: error-bounded perimeter and diameter.
//! - [`cli`]: file formats, fixtures, SVG output and the command-line driver.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod constructions;
pub mod diamgraph;
pub mod geometry;
pub mod optimizer;
pub mod sum;

pub use constructions::{realize, regular_small, star_init, upper_bound, AngleConfig};
pub use diamgraph::{extract, topology_of, DiameterGraph, Topology};
pub use geometry::{diameter, perimeter, ConvexPolygon, Point2};
pub use optimizer::{search, solve, SolveOptions, SolveResult};
