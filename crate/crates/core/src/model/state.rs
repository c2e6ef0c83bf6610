use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Allocation, LinkId, RequestId, SpectrumGrid, Topology};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Active {
    allocation: Allocation,
    links: Vec<LinkId>,
}

/// Topology plus live spectrum occupancy and the connections that own it.
///
/// Slots can also be held by background occupancy (injected fixtures) that belongs to no
/// connection.
#[derive(Clone, Debug)]
pub struct NetworkState {
    topology: Arc<Topology>,
    grid: SpectrumGrid,
    background: SpectrumGrid,
    active: BTreeMap<RequestId, Active>,
}

impl NetworkState {
    pub fn new(topology: Arc<Topology>, slots: usize) -> Self {
        let links = topology.link_count();
        NetworkState {
            topology,
            grid: SpectrumGrid::new(links, slots),
            background: SpectrumGrid::new(links, slots),
            active: BTreeMap::new(),
        }
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn topology_arc(&self) -> &Arc<Topology> {
        &self.topology
    }

    pub fn grid(&self) -> &SpectrumGrid {
        &self.grid
    }

    pub fn slots(&self) -> usize {
        self.grid.slots()
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn allocation(&self, id: RequestId) -> Option<&Allocation> {
        self.active.get(&id).map(|a| &a.allocation)
    }

    pub fn allocations(&self) -> impl Iterator<Item = &Allocation> {
        self.active.values().map(|a| &a.allocation)
    }

    /// Marks `[start, start + len - 1]` on `link` as held by no connection.
    pub fn occupy_background(&mut self, link: LinkId, start: usize, len: usize) -> Result<()> {
        self.check_window(link, start, len)?;
        self.grid.set_window(link, start, len, true);
        self.background.set_window(link, start, len, true);
        Ok(())
    }

    fn check_window(&self, link: LinkId, start: usize, len: usize) -> Result<()> {
        if link.0 >= self.grid.link_count() {
            return Err(Error::InvalidAllocation(format!("unknown link {link}")));
        }
        if start == 0 || len == 0 || start + len - 1 > self.grid.slots() {
            return Err(Error::InvalidAllocation(format!(
                "window [{start}, {}] outside 1..={}",
                start + len.max(1) - 1,
                self.grid.slots()
            )));
        }
        if let Some(slot) = (start..start + len).find(|&s| self.grid.is_occupied(link, s)) {
            return Err(Error::Overlap { link, slot });
        }
        Ok(())
    }

    /// Occupies the allocation's block on every path link and registers the connection.
    pub fn allocate(&mut self, allocation: Allocation) -> Result<()> {
        if self.active.contains_key(&allocation.request) {
            return Err(Error::DuplicateRequest(allocation.request));
        }
        let links = self.topology.path_links(&allocation.path)?;
        if links.is_empty() {
            return Err(Error::InvalidAllocation("path has no links".into()));
        }
        for &l in &links {
            self.check_window(l, allocation.start, allocation.slots)?;
        }
        for &l in &links {
            self.grid.set_window(l, allocation.start, allocation.slots, true);
        }
        self.active.insert(allocation.request, Active { allocation, links });
        Ok(())
    }

    /// Frees exactly the slots the connection held and forgets it.
    pub fn release(&mut self, id: RequestId) -> Result<Allocation> {
        let active = self.active.remove(&id).ok_or(Error::UnknownRequest(id))?;
        let a = &active.allocation;
        for &l in &active.links {
            self.grid.set_window(l, a.start, a.slots, false);
        }
        Ok(active.allocation)
    }

    /// Occupied slot-links held by connections (background excluded).
    pub fn allocated_slot_links(&self) -> usize {
        self.active.values().map(|a| a.links.len() * a.allocation.slots).sum()
    }

    /// Recomputes occupancy from background plus active connections and compares it with the
    /// live grid. Detects overlapping claims and stale bits.
    pub fn check_invariants(&self) -> Result<()> {
        let mut claims = vec![0u32; self.grid.link_count() * self.grid.slots()];
        let n = self.grid.slots();
        for link in 0..self.grid.link_count() {
            for (i, &b) in self.background.link(LinkId(link)).iter().enumerate() {
                claims[link * n + i] += u32::from(b);
            }
        }
        for a in self.active.values() {
            for l in &a.links {
                for s in a.allocation.start..=a.allocation.end() {
                    claims[l.0 * n + s - 1] += 1;
                }
            }
        }
        for link in 0..self.grid.link_count() {
            for s in 0..n {
                let c = claims[link * n + s];
                if c > 1 {
                    return Err(Error::Overlap { link: LinkId(link), slot: s + 1 });
                }
                if (c == 1) != self.grid.link(LinkId(link))[s] {
                    return Err(Error::InvalidAllocation(format!(
                        "grid bit for slot {} on link {} disagrees with connection table",
                        s + 1,
                        LinkId(link)
                    )));
                }
            }
        }
        let total = self.grid.occupied_total();
        let expected = self.allocated_slot_links() + self.background.occupied_total();
        if total != expected {
            return Err(Error::InvalidAllocation(format!(
                "{total} occupied slot-links but connections account for {expected}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> NetworkState {
        let t = Topology::from_labeled_links(&[("1", "2", 100.0), ("2", "3", 100.0), ("3", "4", 100.0)])
            .unwrap();
        NetworkState::new(Arc::new(t), 8)
    }

    fn alloc(id: RequestId, path: Vec<usize>, start: usize, slots: usize) -> Allocation {
        Allocation { request: id, path, level: 1, start, slots }
    }

    #[test]
    fn allocate_marks_every_path_link() {
        let mut s = line();
        s.allocate(alloc(1, vec![0, 1, 2], 1, 3)).unwrap();
        for l in [LinkId(0), LinkId(1)] {
            assert_eq!(&s.grid().link(l)[..4], &[true, true, true, false]);
        }
        assert_eq!(s.grid().occupied_on(LinkId(2)), 0);
        s.check_invariants().unwrap();
    }

    #[test]
    fn overlap_is_rejected_without_side_effects() {
        let mut s = line();
        s.allocate(alloc(1, vec![1, 2], 3, 2)).unwrap();
        let before = s.grid().clone();
        let err = s.allocate(alloc(2, vec![0, 1, 2], 4, 2)).unwrap_err();
        assert_eq!(err, Error::Overlap { link: LinkId(1), slot: 4 });
        assert_eq!(s.grid(), &before);
    }

    #[test]
    fn disjoint_allocations_share_a_link() {
        let mut s = line();
        s.allocate(alloc(1, vec![0, 1], 1, 3)).unwrap();
        s.allocate(alloc(2, vec![0, 1], 5, 3)).unwrap();
        let brute = s.grid().link(LinkId(0)).iter().filter(|&&b| b).count();
        assert_eq!(brute, 6);
        assert_eq!(s.allocated_slot_links(), 6);
    }

    #[test]
    fn release_restores_grid() {
        let mut s = line();
        let empty = s.grid().clone();
        s.allocate(alloc(7, vec![0, 1, 2, 3], 2, 4)).unwrap();
        s.release(7).unwrap();
        assert_eq!(s.grid(), &empty);
        assert_eq!(s.release(7), Err(Error::UnknownRequest(7)));
        assert_eq!(line().release(3), Err(Error::UnknownRequest(3)));
    }

    #[test]
    fn release_keeps_other_connections() {
        let mut s = line();
        s.allocate(alloc(1, vec![0, 1, 2], 1, 2)).unwrap();
        s.allocate(alloc(2, vec![1, 2, 3], 3, 2)).unwrap();
        let mut only_b = line();
        only_b.allocate(alloc(2, vec![1, 2, 3], 3, 2)).unwrap();
        s.release(1).unwrap();
        assert_eq!(s.grid(), only_b.grid());
        s.check_invariants().unwrap();
    }

    #[test]
    fn background_counts_in_conservation() {
        let mut s = line();
        s.occupy_background(LinkId(2), 1, 8).unwrap();
        s.allocate(alloc(1, vec![0, 1], 1, 1)).unwrap();
        s.check_invariants().unwrap();
        assert!(s.allocate(alloc(2, vec![2, 3], 4, 1)).is_err());
    }
}
