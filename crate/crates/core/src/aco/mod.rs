//! Auxiliary-graph ant colony: pheromone seeding, adaptive colony size, exploration and
//! exploitation walks, fitness, reinforcement, early termination and final selection.

mod ant;
mod fitness;
mod fragment;
mod oracle;
mod pheromone;
mod solver;

pub use ant::{next_hop_weights, roulette, traverse, Ant, AntStatus, Role};
pub use fitness::Fitness;
pub use fragment::{fragment_change, path_fragment_change};
pub use oracle::{count_fragments, fragment_delta_by_count, oracle_solve, OracleSolution, MAX_ORACLE_NODES};
pub use pheromone::{init_pheromones, PheromoneStore, PheromoneView};
pub(crate) use solver::stream_seed;
pub use solver::{
    ant_count, solve, solve_traced, split_ants, update_pheromones, BlockReason, SolveOutcome, SolveResult,
    SolverConfig, TraceRecord,
};
