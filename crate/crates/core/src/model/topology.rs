use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index, `0..node_count`. Human-facing labels live on the [`Topology`].
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkId(pub usize);

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub distance_km: f64,
}

impl Link {
    /// The endpoint opposite `node`, if `node` is an endpoint.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if node == self.a {
            Some(self.b)
        } else if node == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

/// Undirected, connected fiber topology. Each link carries one shared spectrum grid.
#[derive(Clone, Debug)]
pub struct Topology {
    labels: Vec<String>,
    links: Vec<Link>,
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
    link_matrix: Vec<Option<LinkId>>,
}

impl Topology {
    /// Builds a topology from node labels and `(a, b, distance_km)` triples over dense indices.
    pub fn new(labels: Vec<String>, links: Vec<(NodeId, NodeId, f64)>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::InvalidTopology("need at least two nodes".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidTopology(format!("duplicate node label {l}")));
            }
        }
        let mut link_matrix = vec![None; n * n];
        let mut adjacency = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(links.len());
        for (idx, (a, b, distance_km)) in links.into_iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidTopology(format!("link {idx} references unknown node")));
            }
            if a == b {
                return Err(Error::InvalidTopology(format!("self-loop at node {}", labels[a])));
            }
            if !(distance_km > 0.0) || !distance_km.is_finite() {
                return Err(Error::InvalidTopology(format!(
                    "link {}-{} has non-positive distance",
                    labels[a], labels[b]
                )));
            }
            if link_matrix[a * n + b].is_some() {
                return Err(Error::InvalidTopology(format!(
                    "duplicate link {}-{}",
                    labels[a], labels[b]
                )));
            }
            let id = LinkId(idx);
            link_matrix[a * n + b] = Some(id);
            link_matrix[b * n + a] = Some(id);
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
            out.push(Link { a, b, distance_km });
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let topo = Topology { labels, links: out, adjacency, link_matrix };
        if !topo.is_connected() {
            return Err(Error::InvalidTopology("graph is not connected".into()));
        }
        Ok(topo)
    }

    /// Builds a topology from labelled link records; nodes are ordered numerically when every
    /// label is an integer, lexicographically otherwise.
    pub fn from_labeled_links<S: AsRef<str>>(records: &[(S, S, f64)]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        for (a, b, _) in records {
            for l in [a.as_ref(), b.as_ref()] {
                if !labels.iter().any(|x| x == l) {
                    labels.push(l.to_string());
                }
            }
        }
        if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
            labels.sort_by_key(|l| l.parse::<i64>().unwrap());
        } else {
            labels.sort();
        }
        let index = |l: &str| labels.iter().position(|x| x == l).unwrap();
        let links = records
            .iter()
            .map(|(a, b, d)| (index(a.as_ref()), index(b.as_ref()), *d))
            .collect();
        Topology::new(labels, links)
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Neighbors of `node` with the connecting link, sorted by neighbor index.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        let n = self.node_count();
        if a >= n || b >= n {
            return None;
        }
        self.link_matrix[a * n + b]
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> Option<f64> {
        self.link_between(a, b).map(|id| self.links[id.0].distance_km)
    }

    /// Links traversed by consecutive node pairs of `path`.
    pub fn path_links(&self, path: &[NodeId]) -> Result<Vec<LinkId>> {
        path.windows(2)
            .map(|w| self.link_between(w[0], w[1]).ok_or(Error::MissingLink(w[0], w[1])))
            .collect()
    }

    /// Physical length of `path` in km.
    pub fn path_length(&self, path: &[NodeId]) -> Result<f64> {
        Ok(self
            .path_links(path)?
            .into_iter()
            .map(|id| self.links[id.0].distance_km)
            .sum())
    }

    pub fn format_path(&self, path: &[NodeId]) -> String {
        path.iter().map(|&n| self.labels[n].as_str()).collect::<Vec<_>>().join("-")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Topology {
        Topology::from_labeled_links(&[("1", "2", 1100.0), ("2", "3", 500.0), ("1", "3", 2000.0)])
            .unwrap()
    }

    #[test]
    fn single_link_length() {
        let t = triangle();
        assert_eq!(t.path_length(&[0, 1]).unwrap(), 1100.0);
    }

    #[test]
    fn path_length_is_sum_of_links() {
        let t = triangle();
        let path = [0, 1, 2, 0];
        let oracle: f64 = path
            .windows(2)
            .map(|w| t.links().iter().find(|l| l.other(w[0]) == Some(w[1])).unwrap().distance_km)
            .sum();
        assert_eq!(t.path_length(&path).unwrap(), oracle);
        assert_eq!(oracle, 3600.0);
    }

    #[test]
    fn missing_link_is_reported() {
        let t = Topology::from_labeled_links(&[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        assert_eq!(t.path_length(&[0, 2]), Err(Error::MissingLink(0, 2)));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Topology::from_labeled_links(&[("1", "1", 5.0), ("1", "2", 1.0)]).is_err());
        assert!(Topology::from_labeled_links(&[("1", "2", 0.0)]).is_err());
        assert!(Topology::from_labeled_links(&[("1", "2", 1.0), ("2", "1", 3.0)]).is_err());
        assert!(Topology::from_labeled_links(&[("1", "2", 1.0), ("3", "4", 3.0)]).is_err());
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let t = Topology::from_labeled_links(&[("10", "2", 1.0), ("2", "1", 1.0)]).unwrap();
        assert_eq!(t.labels(), &["1", "2", "10"]);
    }
}
