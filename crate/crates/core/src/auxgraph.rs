//! Per-request auxiliary graph.
//!
//! Every feasible first hop is materialised as an auxiliary link at the source: a
//! `(neighbor, level, start slot)` triple whose contiguous block is free on the source link.
//! Nothing is generated at other nodes because the slot window chosen at the source is
//! fixed end to end.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::model::{LinkId, ModulationTable, NetworkState, NodeId, Request, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuxLink {
    pub neighbor: NodeId,
    pub link: LinkId,
    pub level: u8,
    /// First slot, 1-based.
    pub start: usize,
    pub slots: usize,
}

#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    topology: Arc<Topology>,
    source: NodeId,
    destination: NodeId,
    rate_gbps: f64,
    grid_slots: usize,
    slots_per_level: Vec<usize>,
    links: Vec<AuxLink>,
}

/// Builds the auxiliary graph for `request` on a snapshot of `state`.
///
/// Aux links are ordered by neighbor, then level, then start slot.
pub fn build_auxiliary_graph(
    state: &NetworkState,
    request: &Request,
    modulation: &ModulationTable,
) -> AuxiliaryGraph {
    let topology = state.topology_arc().clone();
    let n = state.slots();
    let slots_per_level = modulation.slots_per_level(request.rate_gbps);
    let mut links = Vec::new();
    for &(neighbor, link) in topology.neighbors(request.source) {
        let run = state.grid().free_run_from(link);
        for (i, &fs) in slots_per_level.iter().enumerate() {
            if fs > n {
                continue;
            }
            let level = (i + 1) as u8;
            links.extend(
                (1..=n - fs + 1)
                    .filter(|&k| run[k] >= fs)
                    .map(|start| AuxLink { neighbor, link, level, start, slots: fs }),
            );
        }
    }
    AuxiliaryGraph {
        topology,
        source: request.source,
        destination: request.destination,
        rate_gbps: request.rate_gbps,
        grid_slots: n,
        slots_per_level,
        links,
    }
}

impl AuxiliaryGraph {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn rate_gbps(&self) -> f64 {
        self.rate_gbps
    }

    pub fn links(&self) -> &[AuxLink] {
        &self.links
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    /// Slots needed at `level` (1-based).
    pub fn slots_for(&self, level: u8) -> usize {
        self.slots_per_level[usize::from(level) - 1]
    }

    pub fn slots_per_level(&self) -> &[usize] {
        &self.slots_per_level
    }

    /// Number of distinct source neighbors reachable through at least one aux link.
    pub fn effective_degree(&self) -> usize {
        self.links.iter().map(|a| a.neighbor).collect::<BTreeSet<_>>().len()
    }

    /// Aux-link count the same request would see on an idle network.
    pub fn unoccupied_count(&self) -> usize {
        let per_link: usize = self
            .slots_per_level
            .iter()
            .map(|&fs| (self.grid_slots + 1).saturating_sub(fs))
            .sum();
        self.topology.degree(self.source) * per_link
    }

    /// Fraction of idle-network aux links removed by current occupancy.
    pub fn occupancy_reduction(&self) -> f64 {
        let all = self.unoccupied_count();
        if all == 0 {
            return 0.0;
        }
        1.0 - self.links.len() as f64 / all as f64
    }

    /// One `neighbor level start slots` record per aux link, using node labels.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for a in &self.links {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                self.topology.label(a.neighbor),
                a.level,
                a.start,
                a.slots
            );
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContiguityReduction {
    /// Σ C(N, FS) over levels: arbitrary slot subsets.
    pub without: f64,
    /// Σ (N − FS + 1) over levels: contiguous windows only.
    pub with: u64,
    pub reduction: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64).round()
}

/// Candidate-window counts per link with and without the contiguity requirement.
pub fn contiguity_reduction_stats(slots: usize, slots_per_level: &[usize]) -> ContiguityReduction {
    let without: f64 = slots_per_level.iter().map(|&fs| binomial(slots, fs)).sum();
    let with: u64 = slots_per_level
        .iter()
        .map(|&fs| (slots + 1).saturating_sub(fs) as u64)
        .sum();
    let reduction = if without > 0.0 { 1.0 - with as f64 / without } else { 0.0 };
    ContiguityReduction { without, with, reduction }
}

/// Fraction of links left without aux links when they are kept only at a source of
/// degree `source_degree` in a network with `links` links.
pub fn continuity_reduction_stats(links: usize, source_degree: usize) -> f64 {
    assert!(source_degree >= 1 && source_degree <= links);
    (links - source_degree) as f64 / links as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::apply_occupancy;

    #[test]
    fn free_link_yields_every_window() {
        let net = fixtures::six_node();
        let state = net.empty_state();
        // 20 Gbps: level 1 needs 2 slots, level 2 needs 1.
        let r = Request::permanent(0, 0, 5, 20.0).unwrap();
        let ag = build_auxiliary_graph(&state, &r, &net.modulation);
        assert_eq!(ag.slots_per_level(), &[2, 1]);
        let per_pair = |nb: NodeId, level: u8| {
            ag.links().iter().filter(|a| a.neighbor == nb && a.level == level).count()
        };
        assert_eq!(per_pair(1, 1), 5);
        assert_eq!(per_pair(1, 2), 6);
        assert_eq!(ag.len(), 2 * (5 + 6));
        assert_eq!(ag.len(), ag.unoccupied_count());
        assert_eq!(ag.effective_degree(), 2);
    }

    #[test]
    fn saturated_source_has_no_aux_links() {
        let net = fixtures::six_node();
        let mut state = net.empty_state();
        for &(_, l) in net.topology.neighbors(0) {
            state.occupy_background(l, 1, net.slots).unwrap();
        }
        let r = Request::permanent(0, 0, 5, 20.0).unwrap();
        let ag = build_auxiliary_graph(&state, &r, &net.modulation);
        assert!(ag.is_empty());
        assert_eq!(ag.effective_degree(), 0);
    }

    #[test]
    fn partial_occupancy_cuts_54_percent() {
        let net = fixtures::six_node();
        let mut state = net.empty_state();
        apply_occupancy(&mut state, &fixtures::six_node_partial_occupancy(&net)).unwrap();
        let r = Request::permanent(0, 0, 5, 20.0).unwrap();
        let ag = build_auxiliary_graph(&state, &r, &net.modulation);
        // Free slots {1,3,4,6} on each link: 4 singles and one pair per link.
        assert_eq!(ag.len(), 10);
        assert_eq!(ag.unoccupied_count(), 22);
        let red = ag.occupancy_reduction();
        assert!((0.54..0.55).contains(&red), "{red}");
    }

    #[test]
    fn contiguity_table() {
        let r = contiguity_reduction_stats(100, &[1, 2]);
        assert_eq!((r.without, r.with), (5050.0, 199));
        assert!((r.reduction - 0.9606).abs() < 1e-4);
        let r = contiguity_reduction_stats(320, &[1, 2]);
        assert_eq!((r.without, r.with), (51360.0, 639));
        assert!((r.reduction - 0.98756).abs() < 1e-4);
        let r = contiguity_reduction_stats(6, &[1, 2]);
        assert_eq!((r.without, r.with), (21.0, 11));
        assert!((r.reduction - 10.0 / 21.0).abs() < 1e-12);
    }

    #[test]
    fn continuity_table() {
        assert!((continuity_reduction_stats(21, 2) - 0.9047).abs() < 1e-4);
        assert!((continuity_reduction_stats(21, 4) - 17.0 / 21.0).abs() < 1e-12);
        assert_eq!(continuity_reduction_stats(5, 5), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(320, 2), 51040.0);
        assert_eq!(binomial(5, 7), 0.0);
        assert_eq!(binomial(10, 10), 1.0);
    }
}
