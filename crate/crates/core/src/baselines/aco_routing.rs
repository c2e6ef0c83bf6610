use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aco::{roulette, split_ants, stream_seed, BlockReason, SolveOutcome, SolverConfig};
use crate::model::{ModulationTable, NetworkState, NodeId, Request, Topology};

use super::first_fit::{allocated, assign_on_route};

#[derive(Clone, Debug, PartialEq)]
struct RouteAnt {
    tour: Vec<NodeId>,
    length: f64,
    reached: bool,
}

fn walk(
    topology: &Topology,
    source: NodeId,
    destination: NodeId,
    max_reach: f64,
    pheromone: &[f64],
    rng: &mut ChaCha8Rng,
) -> RouteAnt {
    let mut visited = vec![false; topology.node_count()];
    let mut ant = RouteAnt { tour: vec![source], length: 0.0, reached: false };
    visited[source] = true;
    let mut current = source;
    loop {
        let nbrs = topology.neighbors(current);
        let weights: Vec<f64> = nbrs.iter().map(|&(n, l)| if visited[n] { 0.0 } else { pheromone[l.0] }).collect();
        let Some(pick) = roulette(&weights, rng) else {
            return ant;
        };
        let (next, link) = nbrs[pick];
        let length = ant.length + topology.link(link).distance_km;
        if length > max_reach {
            return ant;
        }
        ant.length = length;
        ant.tour.push(next);
        visited[next] = true;
        if next == destination {
            ant.reached = true;
            return ant;
        }
        current = next;
    }
}

/// Colony search for a route on the plain topology (pheromone `1/distance`, fitness = route
/// length), followed by reach-based level choice and first-fit on the best route found.
pub fn aco_routing_only(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
    config: &SolverConfig,
) -> SolveOutcome {
    let topology = state.topology();
    let ants = (config.z * topology.degree(request.source) as f64).ceil() as usize;
    let initial: Vec<f64> = topology.links().iter().map(|l| 1.0 / l.distance_km).collect();
    let mut updated = initial.clone();
    let mut best: Option<RouteAnt> = None;
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        let (explore, _) = split_ants(ants, iteration);
        let colony: Vec<RouteAnt> = (1..=ants)
            .map(|label| {
                let table = if label <= explore { &initial } else { &updated };
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, iteration as u64, label as u64));
                walk(topology, request.source, request.destination, modulation.max_reach(), table, &mut rng)
            })
            .collect();
        for ant in colony.iter().filter(|a| a.reached) {
            let better = match &best {
                None => true,
                Some(b) => ant.length.total_cmp(&b.length).then_with(|| ant.tour.cmp(&b.tour)).is_lt(),
            };
            if better {
                best = Some(ant.clone());
            }
            for w in ant.tour.windows(2) {
                let l = topology.link_between(w[0], w[1]).expect("tour follows links");
                updated[l.0] += 1.0 / ant.length;
            }
        }
        updated.iter_mut().for_each(|t| *t *= 1.0 - config.evaporation);

        if iteration >= 2 {
            if let Some(b) = &best {
                let agreeing = colony.iter().filter(|a| a.reached && a.length == b.length).count();
                if agreeing as f64 >= config.quorum * ants as f64 {
                    break;
                }
            }
        }
    }

    let Some(route) = best else {
        return SolveOutcome { iterations, ants, ..SolveOutcome::blocked(BlockReason::NoRoute) };
    };
    match assign_on_route(state, request, modulation, &route.tour) {
        Some(alloc) => allocated(state, alloc, iterations, ants),
        None => SolveOutcome { iterations, ants, ..SolveOutcome::blocked(BlockReason::NoSpectrum) },
    }
}
