//! Reference solvers: k-shortest-path with first-fit, and colony routing with first-fit.

mod aco_routing;
mod first_fit;
mod ksp;

pub use aco_routing::aco_routing_only;
pub use first_fit::{first_fit, ksp_first_fit};
pub use ksp::k_shortest_paths;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct KspConfig {
    pub k_paths: usize,
}

impl Default for KspConfig {
    fn default() -> Self {
        KspConfig { k_paths: 3 }
    }
}
