use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use eon_core::fixtures;
use eon_core::model::{apply_occupancy, parse_network, parse_occupancy, NetworkDescription, NetworkState, NodeId};
use eon_core::Error;

/// Bundled topologies addressable by name instead of a path.
pub const BUILTIN_TOPOLOGIES: [&str; 2] = ["nsfnet", "six-node"];

/// Loads `topology` (a file or a bundled name), optionally overriding the slot count.
pub fn load_network(topology: &str, slots: Option<usize>) -> Result<NetworkDescription> {
    let mut net = match topology {
        "nsfnet" if !Path::new(topology).exists() => fixtures::nsfnet(),
        "six-node" if !Path::new(topology).exists() => fixtures::six_node(),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading topology {path}"))?;
            parse_network(&text).with_context(|| format!("in topology {path}"))?
        }
    };
    if let Some(n) = slots {
        if n == 0 {
            return Err(Error::Config("slot count must be positive".into()).into());
        }
        net.slots = n;
    }
    Ok(net)
}

/// Empty state for `net` with the occupancy file applied, if any.
pub fn load_state(net: &NetworkDescription, occupancy: Option<&Path>) -> Result<NetworkState> {
    let mut state = net.empty_state();
    if let Some(path) = occupancy {
        let text = fs::read_to_string(path).with_context(|| format!("reading occupancy {}", path.display()))?;
        let records = parse_occupancy(&text, &net.topology, net.slots)
            .with_context(|| format!("in occupancy {}", path.display()))?;
        apply_occupancy(&mut state, &records)?;
    }
    Ok(state)
}

pub fn node(net: &NetworkDescription, label: &str) -> Result<NodeId> {
    net.topology
        .node_by_label(label)
        .ok_or_else(|| Error::Config(format!("unknown node `{label}`")).into())
}
