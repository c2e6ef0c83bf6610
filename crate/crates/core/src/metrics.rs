//! Evaluation quantities: network average fragmentation, bandwidth blocking probability,
//! slot savings and extra carried load, plus the CSV row schema.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LinkId, SpectrumGrid};

/// `1 − largest free run / free slots` for one link; a link with no free slot scores 0.
pub fn link_fragmentation(grid: &SpectrumGrid, link: LinkId) -> f64 {
    let mut largest = 0;
    let mut free = 0;
    let mut run = 0;
    for &occ in grid.link(link) {
        if occ {
            run = 0;
        } else {
            run += 1;
            free += 1;
            largest = largest.max(run);
        }
    }
    if free == 0 {
        0.0
    } else {
        1.0 - largest as f64 / free as f64
    }
}

/// Mean [`link_fragmentation`] over all links.
pub fn network_average_fragmentation(grid: &SpectrumGrid) -> f64 {
    let links = grid.link_count();
    if links == 0 {
        return 0.0;
    }
    (0..links).map(|l| link_fragmentation(grid, LinkId(l))).sum::<f64>() / links as f64
}

/// Blocked requested rate over total requested rate, for `(rate_gbps, blocked)` pairs.
pub fn bandwidth_blocking_probability<I>(window: I) -> Result<f64>
where
    I: IntoIterator<Item = (f64, bool)>,
{
    let (mut total, mut blocked, mut seen) = (0.0, 0.0, false);
    for (rate, was_blocked) in window {
        seen = true;
        total += rate;
        if was_blocked {
            blocked += rate;
        }
    }
    if !seen || total <= 0.0 {
        return Err(Error::EmptyWindow);
    }
    Ok(blocked / total)
}

/// Percent fewer occupied slot-links used by `a` than by `b`.
pub fn fsu_savings_percent(slots_a: usize, slots_b: usize) -> f64 {
    if slots_b == 0 {
        return 0.0;
    }
    100.0 * (slots_b as f64 - slots_a as f64) / slots_b as f64
}

/// Savings of `a` over `b` at each shared load checkpoint. Both series must come from the
/// same traffic realisation and list the same checkpoints.
pub fn checkpoint_savings(a: &[MetricsRow], b: &[MetricsRow]) -> Result<Vec<(f64, f64)>> {
    if a.len() != b.len() {
        return Err(Error::MismatchedStream(format!("{} vs {} checkpoints", a.len(), b.len())));
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if x.seed != y.seed || x.lambda != y.lambda || x.hold_time != y.hold_time {
                return Err(Error::MismatchedStream(format!(
                    "seed/traffic differ ({} vs {})",
                    x.seed, y.seed
                )));
            }
            if x.checkpoint_load_gbps != y.checkpoint_load_gbps {
                return Err(Error::MismatchedStream(format!(
                    "checkpoint {} vs {}",
                    x.checkpoint_load_gbps, y.checkpoint_load_gbps
                )));
            }
            Ok((x.checkpoint_load_gbps, fsu_savings_percent(x.occupied_slot_links, y.occupied_slot_links)))
        })
        .collect()
}

/// Mean carried load of each formulation minus the smallest mean among them.
pub fn extra_load_handled(mean_loads: &[f64]) -> Vec<f64> {
    let min = mean_loads.iter().copied().fold(f64::INFINITY, f64::min);
    mean_loads.iter().map(|&m| m - min).collect()
}

/// One metrics sample. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub run_id: String,
    pub solver: String,
    pub seed: u64,
    pub lambda: f64,
    pub hold_time: f64,
    pub checkpoint_load_gbps: f64,
    pub naf: f64,
    pub bbp: f64,
    pub occupied_slot_links: usize,
    pub admitted_gbps: f64,
    pub blocked_gbps: f64,
}

pub const METRICS_COLUMNS: [&str; 11] = [
    "run_id",
    "solver",
    "seed",
    "lambda",
    "hold_time",
    "checkpoint_load_gbps",
    "naf",
    "bbp",
    "occupied_slot_links",
    "admitted_gbps",
    "blocked_gbps",
];

/// Writes `rows` with a header line in [`METRICS_COLUMNS`] order.
pub fn write_metrics_csv<W: Write>(out: W, rows: &[MetricsRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(METRICS_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Config(format!("write failed: {e}")))?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn runs(row: &[bool]) -> Vec<usize> {
        row.split(|&o| o).map(|r| r.len()).filter(|&l| l > 0).collect()
    }

    #[test]
    fn naf_cases() {
        let mut g = SpectrumGrid::new(2, 8);
        assert_eq!(network_average_fragmentation(&g), 0.0);
        // link 0: free runs {2, 2}
        g.set_window(LinkId(0), 1, 2, true);
        g.set_window(LinkId(0), 5, 2, true);
        assert_eq!(runs(g.link(LinkId(0))), vec![2, 2]);
        assert_eq!(network_average_fragmentation(&g), 0.25);
        let mut full = SpectrumGrid::new(2, 8);
        full.set_window(LinkId(0), 1, 8, true);
        full.set_window(LinkId(1), 1, 8, true);
        assert_eq!(network_average_fragmentation(&full), 0.0);
    }

    #[test]
    fn bbp_cases() {
        assert_eq!(bandwidth_blocking_probability([(100.0, false), (50.0, false)]).unwrap(), 0.0);
        assert_eq!(bandwidth_blocking_probability([(100.0, true), (50.0, true)]).unwrap(), 1.0);
        let mut window = vec![(100.0, true), (300.0, true)];
        window.extend([(400.0, false), (1200.0, false)]);
        assert!((bandwidth_blocking_probability(window).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(bandwidth_blocking_probability(Vec::<(f64, bool)>::new()), Err(Error::EmptyWindow));
    }

    #[test]
    fn bbp_monotone_under_relabel() {
        let w = vec![(100.0, false), (250.0, true), (75.0, false)];
        let before = bandwidth_blocking_probability(w.clone()).unwrap();
        let mut after = w;
        after[0].1 = true;
        assert!(bandwidth_blocking_probability(after).unwrap() >= before);
    }

    #[test]
    fn savings() {
        assert_eq!(fsu_savings_percent(200, 200), 0.0);
        assert!((fsu_savings_percent(189, 200) - 5.5).abs() < 1e-12);
        assert!(fsu_savings_percent(200, 189) < 0.0);
    }

    #[test]
    fn extra_load() {
        assert_eq!(extra_load_handled(&[7.0]), vec![0.0]);
        let v = extra_load_handled(&[10.0, 8.9]);
        assert!((v[0] - 1.1).abs() < 1e-12 && v[1] == 0.0);
        let w = extra_load_handled(&[8.9, 10.0]);
        assert_eq!((v[0], v[1]), (w[1], w[0]));
    }

    #[test]
    fn csv_header_order() {
        let row = MetricsRow {
            run_id: "r".into(),
            solver: "a3g".into(),
            seed: 1,
            lambda: 0.5,
            hold_time: 2.0,
            checkpoint_load_gbps: 1000.0,
            naf: 0.125,
            bbp: 0.0,
            occupied_slot_links: 42,
            admitted_gbps: 1000.0,
            blocked_gbps: 0.0,
        };
        let mut buf = Vec::new();
        write_metrics_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "run_id,solver,seed,lambda,hold_time,checkpoint_load_gbps,naf,bbp,occupied_slot_links,admitted_gbps,blocked_gbps\n\
             r,a3g,1,0.5,2.0,1000.0,0.125,0.0,42,1000.0,0.0\n"
        );
    }

    proptest! {
        #[test]
        fn naf_matches_run_scan(bits in proptest::collection::vec(proptest::bool::ANY, 3 * 12)) {
            let mut g = SpectrumGrid::new(3, 12);
            for (i, &b) in bits.iter().enumerate() {
                if b {
                    g.set_window(LinkId(i / 12), i % 12 + 1, 1, true);
                }
            }
            let oracle: f64 = (0..3)
                .map(|l| {
                    let r = runs(g.link(LinkId(l)));
                    let total: usize = r.iter().sum();
                    if total == 0 { 0.0 } else { 1.0 - *r.iter().max().unwrap() as f64 / total as f64 }
                })
                .sum::<f64>() / 3.0;
            prop_assert!((network_average_fragmentation(&g) - oracle).abs() < 1e-12);
        }

        #[test]
        fn savings_antisymmetric(a in 1usize..5000, b in 1usize..5000) {
            let ab = fsu_savings_percent(a, b);
            let ba = fsu_savings_percent(b, a);
            prop_assert!(ab == 0.0 && ba == 0.0 || ab.signum() == -ba.signum());
        }
    }
}
