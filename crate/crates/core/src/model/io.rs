//! Text formats for topologies and injected occupancy.
//!
//! Topology file, one directive per line, `#` starts a comment:
//!
//! ```text
//! slots 320
//! level 1 BPSK 3600
//! level 2 QPSK 2400
//! link 1 2 825
//! ```
//!
//! `slots` defaults to 320 and the level table to BPSK/QPSK/8QAM/16QAM when omitted.
//!
//! Occupancy file, one link per line: both endpoint labels followed by a comma separated list
//! of 1-based slot ranges, e.g. `1 2 1-3,7,9-10`.

use std::sync::Arc;

use super::{LinkId, ModulationLevel, ModulationTable, NetworkState, Topology};
use crate::error::{Error, Result};

pub const DEFAULT_SLOTS: usize = 320;

#[derive(Clone, Debug)]
pub struct NetworkDescription {
    pub topology: Arc<Topology>,
    pub slots: usize,
    pub modulation: ModulationTable,
}

impl NetworkDescription {
    pub fn empty_state(&self) -> NetworkState {
        NetworkState::new(self.topology.clone(), self.slots)
    }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_network(text: &str) -> Result<NetworkDescription> {
    let mut slots = None;
    let mut levels = Vec::new();
    let mut links: Vec<(String, String, f64)> = Vec::new();
    let mut first_link_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["slots", n] => {
                let n: usize = number(n, line, "slot count")?;
                if n == 0 {
                    return Err(Error::parse(line, "slot count must be positive"));
                }
                slots = Some(n);
            }
            ["level", idx, name, reach] => levels.push(ModulationLevel {
                index: number(idx, line, "level index")?,
                name: name.to_string(),
                reach_km: number(reach, line, "reach")?,
            }),
            ["link", a, b, d] => {
                let d: f64 = number(d, line, "distance")?;
                if !(d > 0.0) {
                    return Err(Error::parse(line, "link distance must be positive"));
                }
                if first_link_line == 0 {
                    first_link_line = line;
                }
                links.push((a.to_string(), b.to_string(), d));
            }
            [kw, ..] => return Err(Error::parse(line, format!("unrecognized directive `{kw}`"))),
        }
    }
    if links.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "no links defined"));
    }
    let modulation = if levels.is_empty() {
        ModulationTable::default()
    } else {
        ModulationTable::new(levels)?
    };
    let topology = Topology::from_labeled_links(&links)
        .map_err(|e| Error::parse(first_link_line, e.to_string()))?;
    Ok(NetworkDescription {
        topology: Arc::new(topology),
        slots: slots.unwrap_or(DEFAULT_SLOTS),
        modulation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupancyRecord {
    pub link: LinkId,
    /// Inclusive 1-based slot ranges.
    pub ranges: Vec<(usize, usize)>,
}

pub fn parse_occupancy(text: &str, topology: &Topology, slots: usize) -> Result<Vec<OccupancyRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let mut toks = body.splitn(3, char::is_whitespace);
        let (a, b, spec) = match (toks.next(), toks.next(), toks.next()) {
            (Some(a), Some(b), Some(spec)) => (a, b, spec.trim()),
            _ => return Err(Error::parse(line, "expected `<node> <node> <ranges>`")),
        };
        let node = |l: &str| topology.node_by_label(l).ok_or_else(|| Error::parse(line, format!("unknown node `{l}`")));
        let (a, b) = (node(a)?, node(b)?);
        let link = topology
            .link_between(a, b)
            .ok_or_else(|| Error::parse(line, "no such link"))?;
        let mut ranges = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lo, hi) = match part.split_once('-') {
                Some((lo, hi)) => (number(lo.trim(), line, "slot")?, number(hi.trim(), line, "slot")?),
                None => {
                    let s = number(part, line, "slot")?;
                    (s, s)
                }
            };
            if lo == 0 || hi < lo || hi > slots {
                return Err(Error::parse(line, format!("slot range `{part}` outside 1..={slots}")));
            }
            ranges.push((lo, hi));
        }
        out.push(OccupancyRecord { link, ranges });
    }
    Ok(out)
}

/// Applies occupancy records as background occupancy. Overlapping ranges are merged.
pub fn apply_occupancy(state: &mut NetworkState, records: &[OccupancyRecord]) -> Result<()> {
    for r in records {
        for &(lo, hi) in &r.ranges {
            for s in lo..=hi {
                if !state.grid().is_occupied(r.link, s) {
                    state.occupy_background(r.link, s, 1)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "# demo\nslots 8\nlevel 1 A 1000\nlevel 2 B 500\n\nlink 1 2 100 # short\nlink 2 3 200\n";

    #[test]
    fn parses_header_and_links() {
        let net = parse_network(TEXT).unwrap();
        assert_eq!(net.slots, 8);
        assert_eq!(net.modulation.len(), 2);
        assert_eq!(net.topology.link_count(), 2);
        assert_eq!(net.topology.path_length(&[0, 1, 2]).unwrap(), 300.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_network("slots 4\nlink 1 2 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_network("slots 4\nlink 1 2 5\nfoo\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_network("link 1 2 5\nlink 3 4 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn occupancy_ranges() {
        let net = parse_network(TEXT).unwrap();
        let recs = parse_occupancy("2 1 1-3, 7\n# x\n3 2 8\n", &net.topology, net.slots).unwrap();
        assert_eq!(recs[0].ranges, vec![(1, 3), (7, 7)]);
        let mut s = net.empty_state();
        apply_occupancy(&mut s, &recs).unwrap();
        assert_eq!(s.grid().occupied_total(), 5);
        s.check_invariants().unwrap();
        let err = parse_occupancy("1 2 0-3\n", &net.topology, net.slots).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_occupancy("\n1 3 1\n", &net.topology, net.slots).is_err());
    }
}
