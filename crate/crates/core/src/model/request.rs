use serde::{Deserialize, Serialize};

use super::NodeId;
use crate::error::{Error, Result};

pub type RequestId = u64;

/// A connection demand. `hold_time` is `f64::INFINITY` for connections that never depart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: RequestId,
    pub source: NodeId,
    pub destination: NodeId,
    pub rate_gbps: f64,
    pub arrival: f64,
    pub hold_time: f64,
}

impl Request {
    pub fn new(
        id: RequestId,
        source: NodeId,
        destination: NodeId,
        rate_gbps: f64,
        arrival: f64,
        hold_time: f64,
    ) -> Result<Self> {
        if source == destination {
            return Err(Error::Config(format!("request {id}: source equals destination")));
        }
        if !(rate_gbps > 0.0) || !rate_gbps.is_finite() {
            return Err(Error::Config(format!("request {id}: data rate must be positive")));
        }
        if !(hold_time > 0.0) {
            return Err(Error::Config(format!("request {id}: hold time must be positive")));
        }
        Ok(Request { id, source, destination, rate_gbps, arrival, hold_time })
    }

    /// Request arriving at time 0 and never departing.
    pub fn permanent(id: RequestId, source: NodeId, destination: NodeId, rate_gbps: f64) -> Result<Self> {
        Request::new(id, source, destination, rate_gbps, 0.0, f64::INFINITY)
    }

    pub fn departs(&self) -> bool {
        self.hold_time.is_finite()
    }
}

/// Jointly chosen route, modulation level and slot window for one request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub request: RequestId,
    pub path: Vec<NodeId>,
    pub level: u8,
    /// First slot of the block, 1-based.
    pub start: usize,
    pub slots: usize,
}

impl Allocation {
    pub fn hops(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    /// Last slot of the block, 1-based and inclusive.
    pub fn end(&self) -> usize {
        self.start + self.slots - 1
    }
}
