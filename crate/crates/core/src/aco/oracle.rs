//! Exhaustive reference solver for small instances.
//!
//! Enumerates every simple path, level and free contiguous window, and scores fragment change
//! by counting free runs before and after a hypothetical allocation. It shares no code with
//! the ant colony beyond the model types.

use super::fitness::Fitness;
use super::solver::candidate_order;
use crate::error::{Error, Result};
use crate::model::{ModulationTable, NetworkState, NodeId, Request};

pub const MAX_ORACLE_NODES: usize = 16;
const MAX_ORACLE_PATHS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    pub path: Vec<NodeId>,
    pub level: u8,
    pub start: usize,
    pub slots: usize,
    pub distance_km: f64,
    pub delta_f: i64,
    pub fitness: Fitness,
}

/// Number of maximal free runs in a slot occupancy row.
pub fn count_fragments(occupied: &[bool]) -> usize {
    let mut count = 0;
    let mut in_run = false;
    for &o in occupied {
        if !o && !in_run {
            count += 1;
        }
        in_run = !o;
    }
    count
}

/// Fragment count after occupying `[start, start + slots - 1]` minus the count before.
pub fn fragment_delta_by_count(occupied: &[bool], start: usize, slots: usize) -> i64 {
    let mut after = occupied.to_vec();
    for s in &mut after[start - 1..start - 1 + slots] {
        *s = true;
    }
    count_fragments(&after) as i64 - count_fragments(occupied) as i64
}

/// Best `(path, level, window)` by fitness with the colony's tie-breaking, or `None` when no
/// feasible combination exists.
pub fn oracle_solve(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
) -> Result<Option<OracleSolution>> {
    let topo = state.topology();
    if topo.node_count() > MAX_ORACLE_NODES {
        return Err(Error::InstanceTooLarge(format!(
            "{} nodes (limit {MAX_ORACLE_NODES})",
            topo.node_count()
        )));
    }
    let max_reach = modulation.max_reach();
    let mut paths: Vec<(Vec<NodeId>, f64)> = Vec::new();
    let mut stack = vec![request.source];
    let mut on_path = vec![false; topo.node_count()];
    on_path[request.source] = true;
    enumerate(state, request.destination, max_reach, &mut stack, &mut on_path, 0.0, &mut paths)?;

    let n = state.slots();
    let mut best: Option<OracleSolution> = None;
    for (path, length) in paths {
        let links = topo.path_links(&path)?;
        for level in modulation.levels() {
            if !(length < level.reach_km) {
                continue;
            }
            let fs = modulation.required_slots(request.rate_gbps, level.index)?;
            if fs > n {
                continue;
            }
            for start in 1..=n - fs + 1 {
                let free = links
                    .iter()
                    .all(|&l| state.grid().link(l)[start - 1..start - 1 + fs].iter().all(|&o| !o));
                if !free {
                    continue;
                }
                let delta_f: i64 = links
                    .iter()
                    .map(|&l| fragment_delta_by_count(state.grid().link(l), start, fs))
                    .sum();
                let fitness = Fitness::new(delta_f, links.len(), fs);
                let better = match &best {
                    None => true,
                    Some(b) => candidate_order(
                        (fitness, start, length, &path, level.index),
                        (b.fitness, b.start, b.distance_km, &b.path, b.level),
                    )
                    .is_lt(),
                };
                if better {
                    best = Some(OracleSolution {
                        path: path.clone(),
                        level: level.index,
                        start,
                        slots: fs,
                        distance_km: length,
                        delta_f,
                        fitness,
                    });
                }
            }
        }
    }
    Ok(best)
}

fn enumerate(
    state: &NetworkState,
    destination: NodeId,
    max_reach: f64,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
    length: f64,
    out: &mut Vec<(Vec<NodeId>, f64)>,
) -> Result<()> {
    let current = *stack.last().unwrap();
    for &(next, link) in state.topology().neighbors(current) {
        if on_path[next] {
            continue;
        }
        let len = length + state.topology().link(link).distance_km;
        if !(len < max_reach) {
            continue;
        }
        stack.push(next);
        if next == destination {
            if out.len() >= MAX_ORACLE_PATHS {
                return Err(Error::InstanceTooLarge(format!("more than {MAX_ORACLE_PATHS} routes")));
            }
            out.push((stack.clone(), len));
        } else {
            on_path[next] = true;
            enumerate(state, destination, max_reach, stack, on_path, len, out)?;
            on_path[next] = false;
        }
        stack.pop();
    }
    Ok(())
}
