use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::model::{NodeId, Topology};

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Dijkstra from `source` to `target` avoiding `blocked_nodes` and the directed hops in
/// `blocked_edges`. Ties resolve towards lower node indices.
fn shortest_path(
    topology: &Topology,
    source: NodeId,
    target: NodeId,
    blocked_nodes: &[bool],
    blocked_edges: &[(NodeId, NodeId)],
) -> Option<(Vec<NodeId>, f64)> {
    let n = topology.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev: Vec<Option<NodeId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((Dist(0.0), source)));
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == target {
            break;
        }
        for &(v, link) in topology.neighbors(u) {
            if blocked_nodes[v] || blocked_edges.contains(&(u, v)) {
                continue;
            }
            let nd = d + topology.link(link).distance_km;
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = Some(u);
                heap.push(Reverse((Dist(nd), v)));
            }
        }
    }
    if !dist[target].is_finite() {
        return None;
    }
    let mut path = vec![target];
    let mut cur = target;
    while let Some(p) = prev[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Some((path, dist[target]))
}

/// Up to `k` loopless paths from `source` to `target` in order of increasing length (Yen).
/// Equal-length paths are ordered lexicographically by node sequence.
pub fn k_shortest_paths(topology: &Topology, source: NodeId, target: NodeId, k: usize) -> Vec<(Vec<NodeId>, f64)> {
    let n = topology.node_count();
    let mut found: Vec<(Vec<NodeId>, f64)> = Vec::new();
    if k == 0 || source == target {
        return found;
    }
    let Some(first) = shortest_path(topology, source, target, &vec![false; n], &[]) else {
        return found;
    };
    found.push(first);
    let mut candidates: Vec<(Vec<NodeId>, f64)> = Vec::new();

    while found.len() < k {
        let last = found.last().unwrap().0.clone();
        for i in 0..last.len() - 1 {
            let spur = last[i];
            let root = &last[..=i];
            let root_len = topology.path_length(root).expect("root follows links");
            let mut blocked_edges = Vec::new();
            for (p, _) in &found {
                if p.len() > i + 1 && &p[..=i] == root {
                    blocked_edges.push((p[i], p[i + 1]));
                    blocked_edges.push((p[i + 1], p[i]));
                }
            }
            let mut blocked_nodes = vec![false; n];
            for &r in &root[..i] {
                blocked_nodes[r] = true;
            }
            if let Some((tail, tail_len)) = shortest_path(topology, spur, target, &blocked_nodes, &blocked_edges) {
                let mut path = root[..i].to_vec();
                path.extend(tail);
                let cand = (path, root_len + tail_len);
                if !candidates.iter().any(|c| c.0 == cand.0) && !found.iter().any(|f| f.0 == cand.0) {
                    candidates.push(cand);
                }
            }
        }
        let Some(best) = (0..candidates.len()).min_by(|&a, &b| {
            candidates[a].1.total_cmp(&candidates[b].1).then_with(|| candidates[a].0.cmp(&candidates[b].0))
        }) else {
            break;
        };
        found.push(candidates.swap_remove(best));
    }
    found
}
