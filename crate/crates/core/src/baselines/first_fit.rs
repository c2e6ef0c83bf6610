use crate::aco::{path_fragment_change, BlockReason, Fitness, SolveOutcome, SolveResult};
use crate::model::{Allocation, LinkId, ModulationTable, NetworkState, NodeId, Request, SpectrumGrid};

use super::ksp::k_shortest_paths;

/// Lowest start slot whose `slots`-wide window is free on every link, 1-based.
pub fn first_fit(grid: &SpectrumGrid, links: &[LinkId], slots: usize) -> Option<usize> {
    let n = grid.slots();
    if slots == 0 || slots > n {
        return None;
    }
    let mut run = 0;
    for k in 1..=n {
        if links.iter().any(|&l| grid.is_occupied(l, k)) {
            run = 0;
        } else {
            run += 1;
            if run == slots {
                return Some(k + 1 - slots);
            }
        }
    }
    None
}

/// Levels whose reach covers `length_km`, highest index (fewest slots) first.
pub(crate) fn levels_by_preference(modulation: &ModulationTable, length_km: f64) -> Vec<u8> {
    modulation
        .levels()
        .iter()
        .rev()
        .filter(|l| l.reach_km >= length_km)
        .map(|l| l.index)
        .collect()
}

/// Tries the reach-feasible levels of one route in preference order with first-fit.
pub(crate) fn assign_on_route(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
    path: &[NodeId],
) -> Option<Allocation> {
    let topo = state.topology();
    let links = topo.path_links(path).ok()?;
    let length = topo.path_length(path).ok()?;
    for level in levels_by_preference(modulation, length) {
        let slots = modulation.required_slots(request.rate_gbps, level).ok()?;
        if let Some(start) = first_fit(state.grid(), &links, slots) {
            return Some(Allocation { request: request.id, path: path.to_vec(), level, start, slots });
        }
    }
    None
}

pub(crate) fn allocated(state: &NetworkState, alloc: Allocation, iterations: usize, ants: usize) -> SolveOutcome {
    let delta = path_fragment_change(state.grid(), state.topology(), &alloc.path, alloc.start, alloc.slots);
    let fitness = Fitness::new(delta, alloc.hops(), alloc.slots);
    SolveOutcome { result: SolveResult::Allocated(alloc), iterations, best_fitness: Some(fitness), ants }
}

/// k shortest routes by distance; on each route the highest reach-feasible level first, then
/// lower levels, each with the lowest-indexed common free window.
pub fn ksp_first_fit(
    state: &NetworkState,
    request: &Request,
    k_paths: usize,
    modulation: &ModulationTable,
) -> SolveOutcome {
    let paths = k_shortest_paths(state.topology(), request.source, request.destination, k_paths);
    let mut any_in_reach = false;
    for (path, length) in &paths {
        any_in_reach |= *length <= modulation.max_reach();
        if let Some(alloc) = assign_on_route(state, request, modulation, path) {
            return allocated(state, alloc, 1, 0);
        }
    }
    let reason = if any_in_reach { BlockReason::NoSpectrum } else { BlockReason::NoRoute };
    SolveOutcome { iterations: 1, ..SolveOutcome::blocked(reason) }
}
