//! Solver selection shared by the engine and the CLI.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aco::{self, oracle_solve, BlockReason, SolveOutcome, SolveResult, SolverConfig};
use crate::baselines::{aco_routing_only, ksp_first_fit, KspConfig};
use crate::error::{Error, Result};
use crate::model::{Allocation, ModulationTable, NetworkState, Request};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "a3g")]
    A3g,
    #[serde(rename = "ksp")]
    Ksp,
    #[serde(rename = "aco-r")]
    AcoRouting,
    #[serde(rename = "oracle")]
    Oracle,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [SolverKind::A3g, SolverKind::Ksp, SolverKind::AcoRouting, SolverKind::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::A3g => "a3g",
            SolverKind::Ksp => "ksp",
            SolverKind::AcoRouting => "aco-r",
            SolverKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown solver `{s}` (expected a3g, ksp, aco-r or oracle)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solver {
    pub kind: SolverKind,
    pub aco: SolverConfig,
    pub ksp: KspConfig,
}

impl Solver {
    pub fn new(kind: SolverKind) -> Self {
        Solver { kind, aco: SolverConfig::default(), ksp: KspConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.aco.validate()?;
        if self.ksp.k_paths == 0 {
            return Err(Error::Config("k_paths must be at least 1".into()));
        }
        Ok(())
    }

    /// Solves one request; `seed` replaces the configured colony seed.
    pub fn solve(
        &self,
        state: &NetworkState,
        request: &Request,
        modulation: &ModulationTable,
        seed: u64,
    ) -> Result<SolveOutcome> {
        let config = self.aco.with_seed(seed);
        Ok(match self.kind {
            SolverKind::A3g => aco::solve(state, request, modulation, &config),
            SolverKind::Ksp => ksp_first_fit(state, request, self.ksp.k_paths, modulation),
            SolverKind::AcoRouting => aco_routing_only(state, request, modulation, &config),
            SolverKind::Oracle => match oracle_solve(state, request, modulation)? {
                Some(best) => SolveOutcome {
                    result: SolveResult::Allocated(Allocation {
                        request: request.id,
                        path: best.path,
                        level: best.level,
                        start: best.start,
                        slots: best.slots,
                    }),
                    iterations: 0,
                    best_fitness: Some(best.fitness),
                    ants: 0,
                },
                None => SolveOutcome::blocked(BlockReason::NoFeasibleSolution),
            },
        })
    }
}
