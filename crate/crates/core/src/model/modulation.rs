use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gbps carried by one slot at modulation level 1; level `m` carries `m` times as much.
pub const SLOT_CAPACITY_GBPS: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulationLevel {
    /// 1-based level index; also the bits-per-symbol multiplier for slot capacity.
    pub index: u8,
    pub name: String,
    pub reach_km: f64,
}

/// Ordered modulation formats. Indices run 1..=M and reach strictly decreases with the index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulationTable {
    levels: Vec<ModulationLevel>,
}

impl Default for ModulationTable {
    fn default() -> Self {
        let level = |index, name: &str, reach_km| ModulationLevel { index, name: name.into(), reach_km };
        ModulationTable {
            levels: vec![
                level(1, "BPSK", 3600.0),
                level(2, "QPSK", 2400.0),
                level(3, "8QAM", 1200.0),
                level(4, "16QAM", 600.0),
            ],
        }
    }
}

impl ModulationTable {
    pub fn new(mut levels: Vec<ModulationLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config("modulation table is empty".into()));
        }
        levels.sort_by_key(|l| l.index);
        for (i, l) in levels.iter().enumerate() {
            if usize::from(l.index) != i + 1 {
                return Err(Error::Config(format!(
                    "modulation level indices must be 1..={}, found {}",
                    levels.len(),
                    l.index
                )));
            }
            if !(l.reach_km > 0.0) {
                return Err(Error::Config(format!("level {} has non-positive reach", l.index)));
            }
            if i > 0 && l.reach_km >= levels[i - 1].reach_km {
                return Err(Error::Config(format!(
                    "reach must strictly decrease with level index (level {})",
                    l.index
                )));
            }
        }
        Ok(ModulationTable { levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[ModulationLevel] {
        &self.levels
    }

    pub fn level(&self, index: u8) -> Result<&ModulationLevel> {
        usize::from(index)
            .checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .ok_or(Error::InvalidLevel(index))
    }

    pub fn reach(&self, index: u8) -> Result<f64> {
        self.level(index).map(|l| l.reach_km)
    }

    pub fn max_reach(&self) -> f64 {
        self.levels[0].reach_km
    }

    pub fn required_slots(&self, rate_gbps: f64, index: u8) -> Result<usize> {
        self.level(index)?;
        Ok(required_slots(rate_gbps, index))
    }

    /// Slot count per level, position `i` holding level `i + 1`.
    pub fn slots_per_level(&self, rate_gbps: f64) -> Vec<usize> {
        self.levels.iter().map(|l| required_slots(rate_gbps, l.index)).collect()
    }
}

/// Minimum contiguous slots to carry `rate_gbps` at level `level`: `ceil(rate / (10 * level))`.
pub fn required_slots(rate_gbps: f64, level: u8) -> usize {
    debug_assert!(level >= 1 && rate_gbps > 0.0);
    let slots = (rate_gbps / (SLOT_CAPACITY_GBPS * f64::from(level))).ceil() as usize;
    slots.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_counts() {
        let t = ModulationTable::default();
        assert_eq!(t.required_slots(500.0, 1).unwrap(), 50);
        assert_eq!(t.required_slots(10.0, 1).unwrap(), 1);
        // 125 / 40 = 3.125
        assert_eq!(t.required_slots(125.0, 4).unwrap(), 4);
        assert_eq!(t.required_slots(125.0, 5), Err(Error::InvalidLevel(5)));
        assert_eq!(t.required_slots(125.0, 0), Err(Error::InvalidLevel(0)));
    }

    #[test]
    fn default_table_matches_reaches() {
        let t = ModulationTable::default();
        let reaches: Vec<f64> = t.levels().iter().map(|l| l.reach_km).collect();
        assert_eq!(reaches, vec![3600.0, 2400.0, 1200.0, 600.0]);
        assert_eq!(t.max_reach(), 3600.0);
    }

    #[test]
    fn rejects_non_decreasing_reach() {
        let levels = vec![
            ModulationLevel { index: 1, name: "a".into(), reach_km: 100.0 },
            ModulationLevel { index: 2, name: "b".into(), reach_km: 100.0 },
        ];
        assert!(ModulationTable::new(levels).is_err());
        let gap = vec![ModulationLevel { index: 2, name: "b".into(), reach_km: 100.0 }];
        assert!(ModulationTable::new(gap).is_err());
    }

    proptest::proptest! {
        #[test]
        fn slots_non_increasing_in_level(rate in 0.5f64..2000.0) {
            let t = ModulationTable::default();
            let s = t.slots_per_level(rate);
            for w in s.windows(2) {
                proptest::prop_assert!(w[0] >= w[1]);
            }
        }
    }
}
