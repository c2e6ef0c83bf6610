use rand::Rng;

use super::fitness::Fitness;
use super::fragment::fragment_change;
use super::pheromone::{PheromoneStore, PheromoneView};
use crate::auxgraph::AuxiliaryGraph;
use crate::model::{LinkId, ModulationTable, NodeId, SpectrumGrid, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AntStatus {
    Reached,
    /// The source has no aux link to start from.
    BlockedNoAux,
    /// Every neighbor of the current node was already visited.
    BlockedNoNode,
    /// The chosen next link lacks the slot window fixed at the source.
    BlockedContinuity,
    /// Accumulated length reached the chosen level's optical reach.
    BlockedReach,
}

impl AntStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            AntStatus::Reached => "reached",
            AntStatus::BlockedNoAux => "blocked-no-aux",
            AntStatus::BlockedNoNode => "blocked-no-node",
            AntStatus::BlockedContinuity => "blocked-continuity",
            AntStatus::BlockedReach => "blocked-reach",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Explore,
    Exploit,
}

impl Role {
    pub fn view(self) -> PheromoneView {
        match self {
            Role::Explore => PheromoneView::Initial,
            Role::Exploit => PheromoneView::Updated,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Explore => "explore",
            Role::Exploit => "exploit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ant {
    pub label: usize,
    pub role: Role,
    pub tour: Vec<NodeId>,
    pub distance_km: f64,
    /// Index of the chosen aux link in the auxiliary graph.
    pub aux: Option<usize>,
    pub level: u8,
    pub start: usize,
    pub slots: usize,
    pub delta_f: i64,
    pub status: AntStatus,
    pub fitness: Option<Fitness>,
}

impl Ant {
    pub fn new(label: usize, role: Role, source: NodeId) -> Self {
        Ant {
            label,
            role,
            tour: vec![source],
            distance_km: 0.0,
            aux: None,
            level: 0,
            start: 0,
            slots: 0,
            delta_f: 0,
            status: AntStatus::BlockedNoAux,
            fitness: None,
        }
    }

    pub fn hops(&self) -> usize {
        self.tour.len() - 1
    }

    pub fn reached(&self) -> bool {
        self.status == AntStatus::Reached
    }
}

/// Spins a roulette wheel over non-negative `weights`. `None` when every weight is zero.
pub fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(i);
        if target < acc {
            return last;
        }
    }
    last
}

/// Next-hop weights from `current`, one entry per neighbor in adjacency order. Visited
/// neighbors weigh zero.
pub fn next_hop_weights(
    topology: &Topology,
    current: NodeId,
    visited: &[bool],
    store: &PheromoneStore,
    view: PheromoneView,
) -> Vec<(NodeId, LinkId, f64)> {
    topology
        .neighbors(current)
        .iter()
        .map(|&(n, l)| (n, l, if visited[n] { 0.0 } else { store.edge(l, view) }))
        .collect()
}

/// Walks one ant from the source under the slot-continuity, contiguity, loop-free and reach
/// constraints. The first hop picks an aux link (which fixes level and slot window); later hops
/// pick among unvisited neighbors by edge pheromone and then check the window on that link.
pub fn traverse<R: Rng + ?Sized>(
    mut ant: Ant,
    aux: &AuxiliaryGraph,
    grid: &SpectrumGrid,
    modulation: &ModulationTable,
    store: &PheromoneStore,
    rng: &mut R,
) -> Ant {
    let topology = aux.topology();
    let view = ant.role.view();
    let source = aux.source();
    debug_assert_eq!(ant.tour, vec![source]);

    let Some(idx) = roulette(store.aux_table(view), rng) else {
        ant.status = AntStatus::BlockedNoAux;
        return ant;
    };
    let first = aux.links()[idx];
    ant.aux = Some(idx);
    ant.level = first.level;
    ant.start = first.start;
    ant.slots = first.slots;
    let reach = modulation.reach(first.level).expect("aux link level is in the table");

    let mut visited = vec![false; topology.node_count()];
    visited[source] = true;
    let mut next = first.neighbor;
    let mut link = first.link;
    loop {
        let change = fragment_change(grid, link, ant.start, ant.slots);
        let dis = ant.distance_km + topology.link(link).distance_km;
        if !(dis < reach) {
            ant.status = AntStatus::BlockedReach;
            return ant;
        }
        ant.distance_km = dis;
        ant.delta_f += i64::from(change);
        ant.tour.push(next);
        visited[next] = true;
        if next == aux.destination() {
            ant.status = AntStatus::Reached;
            ant.fitness = Some(Fitness::new(ant.delta_f, ant.hops(), ant.slots));
            return ant;
        }
        let current = next;

        let candidates = next_hop_weights(topology, current, &visited, store, view);
        let weights: Vec<f64> = candidates.iter().map(|c| c.2).collect();
        let Some(pick) = roulette(&weights, rng) else {
            ant.status = AntStatus::BlockedNoNode;
            return ant;
        };
        (next, link) = (candidates[pick].0, candidates[pick].1);
        if !grid.window_free(link, ant.start, ant.slots) {
            ant.status = AntStatus::BlockedContinuity;
            return ant;
        }
    }
}
