//! Monte Carlo toolkit for one- and two-sided Dyson percolation and the FK
//! random-cluster model: exact samplers, cluster analysis, block
//! renormalization, stochastic-domination checks and critical-point
//! estimators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dominance;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod models;
pub mod renorm;
pub mod rng;
pub mod union_find;

pub use error::{Error, Result};
pub use graph::{ClusterPartition, Graph, Interval};
pub use models::{EdgeProbFn, ModelParams};
pub use rng::Seed;
