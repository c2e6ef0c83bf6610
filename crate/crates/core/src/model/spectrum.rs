use super::LinkId;

/// Per-link slot occupancy. All slot indices in this API are 1-based (`1..=slots`).
///
/// Index `0` and `slots + 1` are outside the band and read as occupied, which is the
/// convention fragment accounting relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumGrid {
    slots: usize,
    links: usize,
    occupied: Vec<bool>,
}

impl SpectrumGrid {
    pub fn new(links: usize, slots: usize) -> Self {
        assert!(slots > 0, "a link needs at least one slot");
        SpectrumGrid { slots, links, occupied: vec![false; links * slots] }
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn link_count(&self) -> usize {
        self.links
    }

    /// Occupancy of one link, 0-based slice of length `slots`.
    pub fn link(&self, link: LinkId) -> &[bool] {
        &self.occupied[link.0 * self.slots..(link.0 + 1) * self.slots]
    }

    fn link_mut(&mut self, link: LinkId) -> &mut [bool] {
        let n = self.slots;
        &mut self.occupied[link.0 * n..(link.0 + 1) * n]
    }

    pub fn is_occupied(&self, link: LinkId, slot: usize) -> bool {
        if slot == 0 || slot > self.slots {
            return true;
        }
        self.link(link)[slot - 1]
    }

    /// True when `[start, start + len - 1]` lies inside the band and is entirely free.
    pub fn window_free(&self, link: LinkId, start: usize, len: usize) -> bool {
        if start == 0 || len == 0 || start + len - 1 > self.slots {
            return false;
        }
        !self.link(link)[start - 1..start - 1 + len].iter().any(|&o| o)
    }

    pub(crate) fn set_window(&mut self, link: LinkId, start: usize, len: usize, value: bool) {
        for s in &mut self.link_mut(link)[start - 1..start - 1 + len] {
            *s = value;
        }
    }

    pub fn occupied_on(&self, link: LinkId) -> usize {
        self.link(link).iter().filter(|&&o| o).count()
    }

    /// Total occupied slot-links across the network.
    pub fn occupied_total(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Maximal free runs on `link` as `(start, len)`, 1-based, in slot order.
    pub fn free_runs(&self, link: LinkId) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &occ) in self.link(link).iter().enumerate() {
            match (occ, start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    runs.push((s + 1, i - s));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s + 1, self.slots - s));
        }
        runs
    }

    /// For every 1-based slot `k`, the length of the free run starting at `k` (0 if occupied).
    /// Position 0 of the returned vector is unused.
    pub fn free_run_from(&self, link: LinkId) -> Vec<usize> {
        let occ = self.link(link);
        let mut run = vec![0; self.slots + 2];
        for k in (1..=self.slots).rev() {
            run[k] = if occ[k - 1] { 0 } else { run[k + 1] + 1 };
        }
        run
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_edges_read_occupied() {
        let g = SpectrumGrid::new(1, 4);
        assert!(g.is_occupied(LinkId(0), 0));
        assert!(g.is_occupied(LinkId(0), 5));
        assert!(!g.is_occupied(LinkId(0), 4));
    }

    #[test]
    fn window_bounds() {
        let mut g = SpectrumGrid::new(1, 6);
        assert!(g.window_free(LinkId(0), 5, 2));
        assert!(!g.window_free(LinkId(0), 6, 2));
        assert!(!g.window_free(LinkId(0), 0, 1));
        g.set_window(LinkId(0), 3, 1, true);
        assert!(!g.window_free(LinkId(0), 2, 2));
        assert!(g.window_free(LinkId(0), 4, 3));
    }

    #[test]
    fn runs_and_run_lengths() {
        let mut g = SpectrumGrid::new(1, 8);
        g.set_window(LinkId(0), 3, 1, true);
        g.set_window(LinkId(0), 6, 2, true);
        assert_eq!(g.free_runs(LinkId(0)), vec![(1, 2), (4, 2), (8, 1)]);
        let run = g.free_run_from(LinkId(0));
        assert_eq!(&run[1..=8], &[2, 1, 0, 2, 1, 0, 0, 1]);
    }
}
