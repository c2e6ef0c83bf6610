use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use eon_core::aco::SolverConfig;
use eon_core::baselines::KspConfig;
use eon_core::sim::{SimulationOptions, TrafficConfig};
use eon_core::solvers::{Solver, SolverKind};
use eon_core::Error;
use serde::{Deserialize, Serialize};

/// Requests per run when holding is finite and no other stop rule is given.
pub const DEFAULT_REQUESTS: usize = 5000;
/// Admitted-load target for infinite-hold runs without another stop rule.
pub const DEFAULT_LOAD_TARGET_GBPS: f64 = 20_000.0;

/// One sweep: every solver on every (arrival rate, seed) pair.
///
/// ```toml
/// topology = "nsfnet"
/// solvers = ["a3g", "ksp", "aco-r"]
/// seeds = [0, 1, 2]
/// lambdas = [0.5, 1.0]
/// out = "results"
///
/// [traffic]
/// mean_hold_time = 2.0
/// requests = 4000
///
/// [aco]
/// z = 2.0
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub topology: String,
    #[serde(default)]
    pub slots: Option<usize>,
    pub solvers: Vec<SolverKind>,
    pub seeds: Vec<u64>,
    /// Network-wide arrival rates; `traffic.arrival_rate` is used when empty.
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub traffic: TrafficConfig,
    #[serde(default)]
    pub simulation: SimulationOptions,
    #[serde(default)]
    pub aco: SolverConfig,
    #[serde(default)]
    pub ksp: KspConfig,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentSpec {
    pub fn new(topology: impl Into<String>) -> Self {
        ExperimentSpec {
            topology: topology.into(),
            slots: None,
            solvers: vec![SolverKind::A3g, SolverKind::Ksp, SolverKind::AcoRouting],
            seeds: (0..15).collect(),
            lambdas: Vec::new(),
            traffic: TrafficConfig::default(),
            simulation: SimulationOptions::default(),
            aco: SolverConfig::default(),
            ksp: KspConfig::default(),
            out: default_out(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in experiment spec {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.into()).into());
        if self.solvers.is_empty() {
            return fail("at least one solver is required");
        }
        if self.seeds.is_empty() {
            return fail("seed list is empty");
        }
        if self.lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return fail("arrival rates must be positive");
        }
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.len() != self.seeds.len() {
            return fail("duplicate seeds");
        }
        for kind in &self.solvers {
            self.solver(*kind).validate()?;
        }
        self.traffic.validate()?;
        Ok(())
    }

    pub fn solver(&self, kind: SolverKind) -> Solver {
        Solver { kind, aco: self.aco.clone(), ksp: self.ksp.clone() }
    }

    pub fn arrival_rates(&self) -> Vec<f64> {
        if self.lambdas.is_empty() {
            vec![self.traffic.arrival_rate]
        } else {
            self.lambdas.clone()
        }
    }

    /// Traffic and options for one run, with a stop rule filled in when none was given.
    pub fn run_config(&self, lambda: f64, seed: u64) -> (TrafficConfig, SimulationOptions) {
        let mut traffic = TrafficConfig { arrival_rate: lambda, seed, ..self.traffic.clone() };
        let mut options = self.simulation.clone();
        if traffic.requests.is_none() && traffic.horizon.is_none() && options.load_target_gbps.is_none() {
            if traffic.infinite_hold() {
                options.load_target_gbps = Some(DEFAULT_LOAD_TARGET_GBPS);
            } else {
                traffic.requests = Some(DEFAULT_REQUESTS);
            }
        }
        (traffic, options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_toml() {
        let spec = ExperimentSpec::from_toml(
            "topology = \"nsfnet\"\nsolvers = [\"a3g\", \"aco-r\"]\nseeds = [1, 2]\n[traffic]\nmean_hold_time = inf\n",
        )
        .unwrap();
        assert_eq!(spec.solvers, vec![SolverKind::A3g, SolverKind::AcoRouting]);
        assert!(spec.traffic.infinite_hold());
        assert_eq!(spec.out, PathBuf::from("results"));
        spec.validate().unwrap();
        let (_, opts) = spec.run_config(1.0, 1);
        assert_eq!(opts.load_target_gbps, Some(DEFAULT_LOAD_TARGET_GBPS));
    }

    #[test]
    fn rejects_empty_lists_and_unknown_keys() {
        let mut spec = ExperimentSpec::new("nsfnet");
        spec.seeds.clear();
        assert!(spec.validate().is_err());
        let mut spec = ExperimentSpec::new("nsfnet");
        spec.solvers.clear();
        assert!(spec.validate().is_err());
        assert!(ExperimentSpec::from_toml("topology = \"x\"\nsolvers = []\nseeds = [1]\nbogus = 1\n").is_err());
    }

    #[test]
    fn finite_hold_defaults_to_request_count() {
        let mut spec = ExperimentSpec::new("nsfnet");
        spec.traffic.mean_hold_time = 2.0;
        let (traffic, opts) = spec.run_config(0.5, 3);
        assert_eq!((traffic.requests, traffic.seed, traffic.arrival_rate), (Some(DEFAULT_REQUESTS), 3, 0.5));
        assert_eq!(opts.load_target_gbps, None);
    }
}
