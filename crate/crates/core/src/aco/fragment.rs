use crate::model::{LinkId, NodeId, SpectrumGrid, Topology};

/// Change in the number of free fragments on `link` if `[start, start + slots - 1]` were
/// occupied. The block must currently be free.
///
/// Both flanking slots occupied: the block closes a fragment (−1). Exactly one occupied: the
/// fragment shrinks (0). Neither: the fragment splits in two (+1). Slots outside the band
/// count as occupied.
pub fn fragment_change(grid: &SpectrumGrid, link: LinkId, start: usize, slots: usize) -> i8 {
    debug_assert!(grid.window_free(link, start, slots));
    let flanks = u8::from(grid.is_occupied(link, start - 1))
        + u8::from(grid.is_occupied(link, start + slots));
    match flanks {
        2 => -1,
        1 => 0,
        _ => 1,
    }
}

/// Sum of [`fragment_change`] over every link of `path`.
pub fn path_fragment_change(
    grid: &SpectrumGrid,
    topology: &Topology,
    path: &[NodeId],
    start: usize,
    slots: usize,
) -> i64 {
    path.windows(2)
        .map(|w| {
            let link = topology.link_between(w[0], w[1]).expect("path follows links");
            i64::from(fragment_change(grid, link, start, slots))
        })
        .sum()
}
