//! Routing, modulation-level and spectrum assignment for elastic optical networks.
//!
//! The [`aco`] module holds the auxiliary-graph ant colony solver; [`baselines`] the
//! k-shortest-path/first-fit and routing-only colony references; [`sim`] drives dynamic
//! traffic through any of them and [`metrics`] evaluates the outcome.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aco;
pub mod auxgraph;
pub mod baselines;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod model;
pub mod sim;
pub mod solvers;

pub use error::{Error, Result};
