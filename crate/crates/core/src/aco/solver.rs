use std::cmp::Ordering;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ant::{traverse, Ant, Role};
use super::fitness::Fitness;
use super::pheromone::{init_pheromones, PheromoneStore};
use crate::auxgraph::{build_auxiliary_graph, AuxiliaryGraph};
use crate::error::{Error, Result};
use crate::model::{Allocation, ModulationTable, NetworkState, Request};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Ants per effective source degree.
    pub z: f64,
    pub max_iterations: usize,
    /// Evaporation factor applied to reinforced pheromone after every iteration.
    pub evaporation: f64,
    /// Fraction of an iteration's ants that must share the best fitness to stop early.
    pub quorum: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { z: 2.0, max_iterations: 5, evaporation: 0.5, quorum: 0.40, seed: 0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0) {
            return Err(Error::Config("z must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.evaporation > 0.0 && self.evaporation < 1.0) {
            return Err(Error::Config("evaporation must lie in (0, 1)".into()));
        }
        if !(self.quorum > 0.0 && self.quorum <= 1.0) {
            return Err(Error::Config("quorum must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SolverConfig { seed, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockReason {
    /// No free window on any link at the source.
    NoAuxiliaryLinks,
    /// Every ant ended blocked.
    NoFeasibleSolution,
    /// No candidate route within reach.
    NoRoute,
    /// Routes exist but none has a common free window.
    NoSpectrum,
}

impl fmt::Display for BlockReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockReason::NoAuxiliaryLinks => "no auxiliary links",
            BlockReason::NoFeasibleSolution => "no feasible solution",
            BlockReason::NoRoute => "no route within reach",
            BlockReason::NoSpectrum => "no common free window",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveResult {
    Allocated(Allocation),
    Blocked(BlockReason),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub result: SolveResult,
    pub iterations: usize,
    pub best_fitness: Option<Fitness>,
    pub ants: usize,
}

impl SolveOutcome {
    pub fn blocked(reason: BlockReason) -> Self {
        SolveOutcome { result: SolveResult::Blocked(reason), iterations: 0, best_fitness: None, ants: 0 }
    }

    pub fn allocation(&self) -> Option<&Allocation> {
        match &self.result {
            SolveResult::Allocated(a) => Some(a),
            SolveResult::Blocked(_) => None,
        }
    }
}

/// One ant's walk, for `explain` output.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub ant: Ant,
}

/// `ceil(z · effective_degree)`; zero exactly when there are no aux links.
pub fn ant_count(aux: &AuxiliaryGraph, z: f64) -> usize {
    (z * aux.effective_degree() as f64).ceil() as usize
}

/// `(explorers, exploiters)` in iteration `iteration` (1-based): `ceil(A / iteration)` explore.
pub fn split_ants(ants: usize, iteration: usize) -> (usize, usize) {
    assert!(iteration >= 1);
    let explore = ants.div_ceil(iteration);
    (explore, ants - explore)
}

/// Reinforces the tour edges and aux link of each reached ant by `1 / fitness`, then scales
/// every reinforced value by `1 - sigma`.
pub fn update_pheromones(store: &mut PheromoneStore, aux: &AuxiliaryGraph, ants: &[Ant], sigma: f64) {
    let topology = aux.topology();
    for ant in ants.iter().filter(|a| a.reached()) {
        let amount = 1.0 / ant.fitness.expect("reached ants have fitness").value();
        for w in ant.tour.windows(2) {
            store.deposit_edge(topology.link_between(w[0], w[1]).expect("tour follows links"), amount);
        }
        store.deposit_aux(ant.aux.expect("reached ants chose an aux link"), amount);
    }
    store.evaporate(sigma);
}

/// Independent RNG stream per (request seed, iteration, ant label).
pub(crate) fn stream_seed(seed: u64, iteration: u64, label: u64) -> u64 {
    let mut x = seed;
    for v in [iteration, label] {
        x = splitmix(x ^ splitmix(v.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    x
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Selection order among finished candidates: fitness, lowest start slot, shorter distance,
/// lexicographically smaller route, then lower level.
pub(crate) fn candidate_order(
    a: (Fitness, usize, f64, &[usize], u8),
    b: (Fitness, usize, f64, &[usize], u8),
) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.total_cmp(&b.2))
        .then_with(|| a.3.cmp(b.3))
        .then(a.4.cmp(&b.4))
}

fn ant_key(a: &Ant) -> (Fitness, usize, f64, &[usize], u8) {
    (a.fitness.expect("candidate is reached"), a.start, a.distance_km, &a.tour, a.level)
}

/// Jointly picks route, modulation level and slot window for `request` with the
/// auxiliary-graph ant colony. The state is not modified.
pub fn solve(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
    config: &SolverConfig,
) -> SolveOutcome {
    run(state, request, modulation, config, None)
}

/// [`solve`] plus every ant's walk.
pub fn solve_traced(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
    config: &SolverConfig,
) -> (SolveOutcome, Vec<TraceRecord>) {
    let mut trace = Vec::new();
    let outcome = run(state, request, modulation, config, Some(&mut trace));
    (outcome, trace)
}

fn run(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
    config: &SolverConfig,
    mut trace: Option<&mut Vec<TraceRecord>>,
) -> SolveOutcome {
    let aux = build_auxiliary_graph(state, request, modulation);
    if aux.is_empty() {
        return SolveOutcome::blocked(BlockReason::NoAuxiliaryLinks);
    }
    let ants = ant_count(&aux, config.z);
    let mut store = init_pheromones(&aux);
    let mut best: Option<Ant> = None;
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        let (explore, _) = split_ants(ants, iteration);
        let colony: Vec<Ant> = (1..=ants)
            .map(|label| {
                let role = if label <= explore { Role::Explore } else { Role::Exploit };
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, iteration as u64, label as u64));
                traverse(Ant::new(label, role, request.source), &aux, state.grid(), modulation, &store, &mut rng)
            })
            .collect();

        for ant in colony.iter().filter(|a| a.reached()) {
            let better = match &best {
                None => true,
                Some(b) => candidate_order(ant_key(ant), ant_key(b)) == Ordering::Less,
            };
            if better {
                best = Some(ant.clone());
            }
        }
        update_pheromones(&mut store, &aux, &colony, config.evaporation);
        if let Some(t) = trace.as_deref_mut() {
            t.extend(colony.iter().map(|a| TraceRecord { iteration, ant: a.clone() }));
        }

        if iteration >= 2 {
            if let Some(b) = &best {
                let target = b.fitness;
                let agreeing = colony.iter().filter(|a| a.fitness == target).count();
                if agreeing as f64 >= config.quorum * ants as f64 {
                    break;
                }
            }
        }
    }

    match best {
        None => SolveOutcome {
            result: SolveResult::Blocked(BlockReason::NoFeasibleSolution),
            iterations,
            best_fitness: None,
            ants,
        },
        Some(ant) => SolveOutcome {
            result: SolveResult::Allocated(Allocation {
                request: request.id,
                path: ant.tour,
                level: ant.level,
                start: ant.start,
                slots: ant.slots,
            }),
            iterations,
            best_fitness: ant.fitness,
            ants,
        },
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::aco::oracle_solve;
    use crate::model::{LinkId, Topology};

    fn state_with(links: &[(&str, &str, f64)], slots: usize) -> NetworkState {
        NetworkState::new(Arc::new(Topology::from_labeled_links(links).unwrap()), slots)
    }

    #[test]
    fn splits() {
        assert_eq!(split_ants(6, 1), (6, 0));
        assert_eq!(split_ants(6, 2), (3, 3));
        assert_eq!(split_ants(7, 3), (3, 4));
        assert_eq!(split_ants(0, 4), (0, 0));
    }

    #[test]
    fn colony_size() {
        let s = state_with(&[("1", "2", 1.0), ("1", "3", 1.0), ("1", "4", 1.0), ("2", "3", 1.0)], 4);
        let r = Request::permanent(0, 0, 1, 10.0).unwrap();
        let aux = build_auxiliary_graph(&s, &r, &ModulationTable::default());
        assert_eq!(aux.effective_degree(), 3);
        assert_eq!(ant_count(&aux, 2.0), 6);
        assert_eq!(ant_count(&aux, 0.5), 2);

        let mut full = s.clone();
        for l in 0..3 {
            full.occupy_background(LinkId(l), 1, 4).unwrap();
        }
        let aux = build_auxiliary_graph(&full, &r, &ModulationTable::default());
        assert_eq!(ant_count(&aux, 2.0), 0);
    }

    #[test]
    fn deposit_then_evaporate() {
        let s = state_with(&[("1", "2", 2.0), ("2", "3", 1.0)], 2);
        let r = Request::permanent(0, 0, 1, 40.0).unwrap();
        let aux = build_auxiliary_graph(&s, &r, &ModulationTable::default());
        let mut store = init_pheromones(&aux);
        // edge 1-2 starts at 1/2
        let mut ant = Ant::new(1, Role::Explore, 0);
        ant.tour.push(1);
        ant.aux = Some(0);
        ant.status = super::super::AntStatus::Reached;
        ant.fitness = Some(Fitness::new(0, 1, 4));
        let before_aux = store.aux(0, super::super::PheromoneView::Updated);
        update_pheromones(&mut store, &aux, &[ant], 0.5);
        let updated = super::super::PheromoneView::Updated;
        assert_eq!(store.edge(LinkId(0), updated), 0.375);
        assert_eq!(store.aux(0, updated), (before_aux + 0.25) * 0.5);
        assert_eq!(store.edge(LinkId(1), updated), 0.5);
        assert_eq!(store.edge(LinkId(0), super::super::PheromoneView::Initial), 0.5);

        let mut store2 = init_pheromones(&aux);
        update_pheromones(&mut store2, &aux, &[], 0.5);
        assert_eq!(store2.edge(LinkId(1), updated), 0.5);
    }

    #[test]
    fn saturated_source_blocks_before_iterating() {
        let mut s = state_with(&[("1", "2", 100.0), ("2", "3", 100.0)], 4);
        s.occupy_background(LinkId(0), 1, 4).unwrap();
        let r = Request::permanent(0, 0, 2, 10.0).unwrap();
        let out = solve(&s, &r, &ModulationTable::default(), &SolverConfig::default());
        assert_eq!(out.result, SolveResult::Blocked(BlockReason::NoAuxiliaryLinks));
        assert_eq!((out.iterations, out.ants), (0, 0));
    }

    #[test]
    fn unique_feasible_triple_is_found() {
        let mut s = state_with(
            &[("1", "2", 400.0), ("2", "4", 400.0), ("1", "3", 2000.0), ("3", "4", 2000.0)],
            4,
        );
        for (l, free) in [(0, 2), (1, 2)] {
            for k in (1..=4).filter(|&k| k != free) {
                s.occupy_background(LinkId(l), k, 1).unwrap();
            }
        }
        // 30 Gbps: 3/2/1/1 slots; only 8QAM fits the single free slot within reach
        let r = Request::permanent(9, 0, 3, 30.0).unwrap();
        let m = ModulationTable::default();
        let oracle = oracle_solve(&s, &r, &m).unwrap().unwrap();
        assert_eq!((oracle.path.clone(), oracle.level, oracle.start), (vec![0, 1, 3], 3, 2));
        // the winning aux link carries ~6% of the initial aux pheromone, so use a larger colony
        let cfg = SolverConfig { z: 10.0, ..SolverConfig::default() };
        for seed in 0..5 {
            let out = solve(&s, &r, &m, &cfg.with_seed(seed));
            let a = out.allocation().expect("allocated");
            assert_eq!((a.path.clone(), a.level, a.start, a.slots), (vec![0, 1, 3], 3, 2, 1));
            assert_eq!(out.best_fitness, Some(oracle.fitness));
        }
    }

    #[test]
    fn equal_fitness_ties_go_to_lowest_slot() {
        let mut s = state_with(&[("1", "2", 100.0), ("2", "3", 100.0)], 9);
        for k in [1, 2, 4, 5, 6, 8, 9] {
            s.occupy_background(LinkId(0), k, 1).unwrap();
        }
        let r = Request::permanent(0, 0, 1, 10.0).unwrap();
        let m = ModulationTable::default();
        let oracle = oracle_solve(&s, &r, &m).unwrap().unwrap();
        assert_eq!(oracle.start, 3);
        // the k=7 window has the same fitness
        assert_eq!(oracle.fitness, Fitness::new(-1, 1, 1));
        let cfg = SolverConfig { z: 5.0, ..SolverConfig::default() };
        for seed in 0..10 {
            let out = solve(&s, &r, &m, &cfg.with_seed(seed));
            assert_eq!(out.allocation().unwrap().start, 3);
            assert_eq!(out.best_fitness, Some(oracle.fitness));
        }
    }

    #[test]
    fn same_seed_same_outcome() {
        let net = crate::fixtures::nsfnet();
        let s = net.empty_state();
        let r = Request::permanent(1, 0, 13, 275.0).unwrap();
        let cfg = SolverConfig::default().with_seed(42);
        let (a, ta) = solve_traced(&s, &r, &net.modulation, &cfg);
        let (b, tb) = solve_traced(&s, &r, &net.modulation, &cfg);
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert_eq!(solve(&s, &r, &net.modulation, &cfg), a);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for bad in [
            SolverConfig { z: 0.0, ..Default::default() },
            SolverConfig { evaporation: 1.0, ..Default::default() },
            SolverConfig { quorum: 0.0, ..Default::default() },
            SolverConfig { max_iterations: 0, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
