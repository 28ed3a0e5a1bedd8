//! Sampling and verification toolkit for the local structure of sparse random
//! graphs: labelled graphs and multigraphs, the complex-part / core / kernel
//! decomposition, exact samplers for trees, rooted forests, G(n,m), graphs
//! without complex components, random complex parts and cores, and small-scale
//! uniform planar graphs, together with the analytic and Monte Carlo limit
//! laws (Galton-Watson balls, Borel progeny, Skeleton trees with k rays) they
//! are checked against.
//!
//! The `experiment` module drives reproducible verification suites from a JSON
//! config; the `locallim` binary exposes them on the command line.

pub mod decompose;
pub mod enumerate;
pub mod experiment;
pub mod graph;
pub mod limits;
pub mod localstats;
pub mod rng;
pub mod samplers;

pub use graph::{Graph, MultiGraph, RootedBall, Vertex};
pub use rng::RngState;
