use super::{Allocation, ModulationTable, NetworkState, Request};
use crate::error::{Error, Result};

/// Checks an allocation proposed for `request` against the current (pre-allocation) state:
/// simple path from source to destination, existing links, slot count matching the level,
/// a free in-band window on every link, and physical length within the level's reach.
pub fn validate_allocation(
    state: &NetworkState,
    modulation: &ModulationTable,
    request: &Request,
    alloc: &Allocation,
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidAllocation(format!("request {}: {msg}", request.id)));
    if alloc.request != request.id {
        return bad(format!("allocation is tagged for request {}", alloc.request));
    }
    if alloc.path.first() != Some(&request.source) || alloc.path.last() != Some(&request.destination) {
        return bad("path does not join source and destination".into());
    }
    for (i, n) in alloc.path.iter().enumerate() {
        if alloc.path[..i].contains(n) {
            return bad(format!("path revisits node {}", state.topology().label(*n)));
        }
    }
    let topo = state.topology();
    let links = topo.path_links(&alloc.path)?;
    let reach = modulation.reach(alloc.level)?;
    let needed = modulation.required_slots(request.rate_gbps, alloc.level)?;
    if alloc.slots != needed {
        return bad(format!("level {} needs {needed} slots, got {}", alloc.level, alloc.slots));
    }
    for &l in &links {
        if !state.grid().window_free(l, alloc.start, alloc.slots) {
            return bad(format!(
                "window [{}, {}] not free on link {}",
                alloc.start,
                alloc.end(),
                topo.format_path(&[topo.link(l).a, topo.link(l).b])
            ));
        }
    }
    let length = topo.path_length(&alloc.path)?;
    if length > reach {
        return bad(format!("path length {length} km exceeds reach {reach} km"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::Topology;

    fn setup() -> (NetworkState, ModulationTable, Request) {
        let t = Topology::from_labeled_links(&[("1", "2", 500.0), ("2", "3", 500.0), ("1", "3", 4000.0)])
            .unwrap();
        let s = NetworkState::new(Arc::new(t), 10);
        let r = Request::permanent(1, 0, 2, 100.0).unwrap();
        (s, ModulationTable::default(), r)
    }

    #[test]
    fn accepts_sound_allocation() {
        let (s, m, r) = setup();
        let a = Allocation { request: 1, path: vec![0, 1, 2], level: 3, start: 1, slots: 4 };
        validate_allocation(&s, &m, &r, &a).unwrap();
    }

    #[test]
    fn rejects_each_violation() {
        let (mut s, m, r) = setup();
        let good = Allocation { request: 1, path: vec![0, 1, 2], level: 3, start: 1, slots: 4 };
        let cases = [
            Allocation { level: 4, slots: 3, ..good.clone() }, // 1000 km > 600 km
            Allocation { path: vec![0, 2], level: 1, slots: 10, ..good.clone() }, // 4000 km
            Allocation { slots: 3, ..good.clone() },
            Allocation { start: 8, ..good.clone() },
            Allocation { path: vec![0, 1, 0, 2], ..good.clone() },
            Allocation { path: vec![1, 2], ..good.clone() },
            Allocation { request: 2, ..good.clone() },
        ];
        for c in cases {
            assert!(validate_allocation(&s, &m, &r, &c).is_err(), "{c:?}");
        }
        s.occupy_background(crate::model::LinkId(1), 4, 1).unwrap();
        assert!(validate_allocation(&s, &m, &r, &good).is_err());
    }
}
