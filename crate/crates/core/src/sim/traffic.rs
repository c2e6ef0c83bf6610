use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Request, RequestId};

/// Poisson arrivals with exponential holding, uniform node pairs and uniform data rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrafficConfig {
    /// Arrivals per unit time over the whole network.
    pub arrival_rate: f64,
    /// Mean holding time; `inf` for connections that never leave.
    pub mean_hold_time: f64,
    pub rate_min_gbps: f64,
    pub rate_max_gbps: f64,
    /// Stop after this many arrivals.
    pub requests: Option<usize>,
    /// Stop at the first arrival after this time.
    pub horizon: Option<f64>,
    pub seed: u64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            arrival_rate: 1.0,
            mean_hold_time: f64::INFINITY,
            rate_min_gbps: 50.0,
            rate_max_gbps: 500.0,
            requests: None,
            horizon: None,
            seed: 0,
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.arrival_rate > 0.0) || !self.arrival_rate.is_finite() {
            return Err(Error::Config("arrival rate must be positive".into()));
        }
        if !(self.mean_hold_time > 0.0) {
            return Err(Error::Config("mean hold time must be positive".into()));
        }
        if !(self.rate_min_gbps > 0.0) || self.rate_min_gbps > self.rate_max_gbps || !self.rate_max_gbps.is_finite() {
            return Err(Error::Config("data rate range must satisfy 0 < min <= max".into()));
        }
        Ok(())
    }

    pub fn infinite_hold(&self) -> bool {
        self.mean_hold_time.is_infinite()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        TrafficConfig { seed, ..self.clone() }
    }
}

/// Endless deterministic request stream for a network of `nodes` nodes.
pub struct RequestStream {
    rng: ChaCha8Rng,
    inter_arrival: Exp<f64>,
    holding: Option<Exp<f64>>,
    nodes: usize,
    rate: (f64, f64),
    clock: f64,
    next_id: RequestId,
}

impl RequestStream {
    pub fn new(config: &TrafficConfig, nodes: usize) -> Result<Self> {
        config.validate()?;
        if nodes < 2 {
            return Err(Error::Config("traffic needs at least two nodes".into()));
        }
        let holding = if config.infinite_hold() {
            None
        } else {
            Some(Exp::new(1.0 / config.mean_hold_time).map_err(|e| Error::Config(e.to_string()))?)
        };
        Ok(RequestStream {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            inter_arrival: Exp::new(config.arrival_rate).map_err(|e| Error::Config(e.to_string()))?,
            holding,
            nodes,
            rate: (config.rate_min_gbps, config.rate_max_gbps),
            clock: 0.0,
            next_id: 0,
        })
    }
}

impl Iterator for RequestStream {
    type Item = Request;

    fn next(&mut self) -> Option<Request> {
        self.clock += self.inter_arrival.sample(&mut self.rng);
        let source = self.rng.random_range(0..self.nodes);
        let mut destination = self.rng.random_range(0..self.nodes - 1);
        if destination >= source {
            destination += 1;
        }
        let rate = if self.rate.0 == self.rate.1 {
            self.rate.0
        } else {
            self.rng.random_range(self.rate.0..=self.rate.1)
        };
        let hold = match &self.holding {
            Some(d) => d.sample(&mut self.rng).max(f64::MIN_POSITIVE),
            None => f64::INFINITY,
        };
        let id = self.next_id;
        self.next_id += 1;
        Some(Request { id, source, destination, rate_gbps: rate, arrival: self.clock, hold_time: hold })
    }
}

/// Materialises the stream up to the configured request count or horizon.
pub fn generate_stream(config: &TrafficConfig, nodes: usize) -> Result<Vec<Request>> {
    if config.requests.is_none() && config.horizon.is_none() {
        return Err(Error::Config("traffic needs a request count or a time horizon".into()));
    }
    let limit = config.requests.unwrap_or(usize::MAX);
    let horizon = config.horizon.unwrap_or(f64::INFINITY);
    Ok(RequestStream::new(config, nodes)?
        .take(limit)
        .take_while(|r| r.arrival <= horizon)
        .collect())
}
