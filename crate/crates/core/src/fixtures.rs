//! Bundled networks.

use std::sync::Arc;

use rand::Rng;

use crate::model::{
    parse_network, parse_occupancy, LinkId, ModulationTable, NetworkDescription, NetworkState, OccupancyRecord,
    Request, Topology,
};

pub const NSFNET14: &str = include_str!("../fixtures/nsfnet14.topo");
pub const SIX_NODE: &str = include_str!("../fixtures/six_node.topo");
/// Four occupied slots on the two links at node 1 of [`SIX_NODE`].
pub const SIX_NODE_PARTIAL: &str = include_str!("../fixtures/six_node_partial.occ");

pub fn nsfnet() -> NetworkDescription {
    parse_network(NSFNET14).expect("bundled NSFNET fixture parses")
}

pub fn six_node() -> NetworkDescription {
    parse_network(SIX_NODE).expect("bundled six-node fixture parses")
}

pub fn six_node_partial_occupancy(net: &NetworkDescription) -> Vec<OccupancyRecord> {
    parse_occupancy(SIX_NODE_PARTIAL, &net.topology, net.slots).expect("bundled occupancy parses")
}

/// Shape of a randomly drawn small instance.
#[derive(Clone, Debug)]
pub struct RandomInstanceSpec {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub slots: usize,
    /// Probability of each non-tree node pair being linked.
    pub extra_link_probability: f64,
    pub distance_km: (f64, f64),
    /// Probability of each slot-link being occupied in the background.
    pub fill: f64,
    pub rate_gbps: (f64, f64),
}

impl Default for RandomInstanceSpec {
    fn default() -> Self {
        RandomInstanceSpec {
            min_nodes: 4,
            max_nodes: 8,
            slots: 16,
            extra_link_probability: 0.3,
            distance_km: (100.0, 1500.0),
            fill: 0.35,
            rate_gbps: (10.0, 100.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub net: NetworkDescription,
    pub state: NetworkState,
    pub request: Request,
}

/// Random connected topology, random background occupancy and a random request.
pub fn random_instance<R: Rng + ?Sized>(spec: &RandomInstanceSpec, rng: &mut R) -> RandomInstance {
    let n = rng.random_range(spec.min_nodes..=spec.max_nodes);
    let mut links = Vec::new();
    let distance = |rng: &mut R| rng.random_range(spec.distance_km.0..=spec.distance_km.1).round();
    for b in 1..n {
        let a = rng.random_range(0..b);
        links.push((a, b, distance(rng)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !links.iter().any(|&(x, y, _)| (x, y) == (a, b)) && rng.random_bool(spec.extra_link_probability) {
                links.push((a, b, distance(rng)));
            }
        }
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    let topology = Arc::new(Topology::new(labels, links).expect("generated topology is valid"));
    let mut state = NetworkState::new(Arc::clone(&topology), spec.slots);
    for l in 0..topology.link_count() {
        for slot in 1..=spec.slots {
            if rng.random_bool(spec.fill) {
                state.occupy_background(LinkId(l), slot, 1).expect("slot is in range");
            }
        }
    }
    let source = rng.random_range(0..n);
    let destination = (source + rng.random_range(1..n)) % n;
    let rate = rng.random_range(spec.rate_gbps.0..=spec.rate_gbps.1).round();
    let request = Request::permanent(0, source, destination, rate).expect("generated request is valid");
    let net = NetworkDescription { topology, slots: spec.slots, modulation: ModulationTable::default() };
    RandomInstance { net, state, request }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nsfnet_shape() {
        let net = nsfnet();
        let t = &net.topology;
        assert_eq!((t.node_count(), t.link_count(), net.slots), (14, 21, 320));
        let degrees: Vec<usize> = (0..14).map(|n| t.degree(n)).collect();
        assert_eq!(degrees.iter().max(), Some(&4));
        assert_eq!(degrees.iter().min(), Some(&2));
        let n = |l: &str| t.node_by_label(l).unwrap();
        assert_eq!(t.path_length(&[n("1"), n("2"), n("3")]).unwrap(), 825.0 + 450.0);
    }

    #[test]
    fn six_node_shape() {
        let net = six_node();
        assert_eq!((net.topology.node_count(), net.topology.link_count(), net.slots), (6, 8, 6));
        assert_eq!(net.topology.degree(0), 2);
        assert_eq!(six_node_partial_occupancy(&net).len(), 2);
    }

    #[test]
    fn random_instances_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let spec = RandomInstanceSpec::default();
        for _ in 0..50 {
            let inst = random_instance(&spec, &mut rng);
            let n = inst.net.topology.node_count();
            assert!((4..=8).contains(&n));
            assert_ne!(inst.request.source, inst.request.destination);
            inst.state.check_invariants().unwrap();
        }
    }
}
