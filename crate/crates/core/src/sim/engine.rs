use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::traffic::{RequestStream, TrafficConfig};
use crate::aco::stream_seed;
use crate::error::{Error, Result};
use crate::metrics::{bandwidth_blocking_probability, network_average_fragmentation};
use crate::model::{validate_allocation, NetworkDescription, NetworkState, Request, RequestId};
use crate::solvers::{Solver, SolverKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Arrival(Request),
    Departure(RequestId),
}

impl Event {
    fn rank(&self) -> u8 {
        match self {
            Event::Departure(_) => 0,
            Event::Arrival(_) => 1,
        }
    }
}

#[derive(Debug)]
struct Pending {
    time: f64,
    seq: u64,
    event: Event,
}

impl Pending {
    fn key(&self) -> (f64, u8, u64) {
        (self.time, self.event.rank(), self.seq)
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    }
}

/// Pending events in time order; at equal times departures come before arrivals, then
/// insertion order.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Pending>>,
    seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: f64, event: Event) {
        self.seq += 1;
        self.heap.push(Reverse(Pending { time, seq: self.seq, event }));
    }

    pub fn pop(&mut self) -> Option<(f64, Event)> {
        self.heap.pop().map(|Reverse(p)| (p.time, p.event))
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn departures(&self) -> usize {
        self.heap.iter().filter(|Reverse(p)| matches!(p.event, Event::Departure(_))).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationOptions {
    /// Leading fraction of events excluded from window averages.
    pub warmup_fraction: f64,
    /// Spacing of admitted-load checkpoints.
    pub checkpoint_gbps: f64,
    /// Stop once the admitted load reaches this value (after recording its checkpoint).
    pub load_target_gbps: Option<f64>,
    /// Re-verify grid and load accounting after every event.
    pub check_invariants: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions { warmup_fraction: 0.2, checkpoint_gbps: 1000.0, load_target_gbps: None, check_invariants: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Arrival,
    Departure,
}

/// Network condition right after one processed event.
#[derive(Clone, Debug, PartialEq)]
pub struct EventSample {
    pub index: usize,
    pub time: f64,
    pub kind: EventKind,
    pub request: RequestId,
    pub naf: f64,
    pub occupied_slot_links: usize,
    pub carried_gbps: f64,
}

/// Observer called after every event.
pub trait MetricsSink {
    fn record(&mut self, state: &NetworkState, sample: &EventSample);
}

impl MetricsSink for () {
    fn record(&mut self, _: &NetworkState, _: &EventSample) {}
}

impl<F: FnMut(&NetworkState, &EventSample)> MetricsSink for F {
    fn record(&mut self, state: &NetworkState, sample: &EventSample) {
        self(state, sample)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RequestRecord {
    pub id: RequestId,
    pub arrival: f64,
    pub rate_gbps: f64,
    pub admitted: bool,
    pub event_index: usize,
    pub slot_links: usize,
}

/// Snapshot taken when cumulative admitted load first reaches a checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub timestamp: f64,
    pub checkpoint_load_gbps: f64,
    pub naf: f64,
    pub bbp: f64,
    pub occupied_slot_links: usize,
    pub admitted_gbps: f64,
    pub blocked_gbps: f64,
}

/// Averages over the post-warm-up window.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WindowSummary {
    pub start_time: f64,
    pub end_time: f64,
    pub requests: usize,
    pub blocked: usize,
    pub requested_gbps: f64,
    pub blocked_gbps: f64,
    pub bbp: f64,
    pub mean_naf: f64,
    pub mean_carried_gbps: f64,
    pub mean_occupied_slot_links: f64,
}

#[derive(Clone, Debug)]
pub struct SimulationReport {
    pub solver: SolverKind,
    pub seed: u64,
    pub events: usize,
    pub requests: Vec<RequestRecord>,
    pub checkpoints: Vec<MetricsRecord>,
    pub window: WindowSummary,
    pub requested_gbps: f64,
    pub admitted_gbps: f64,
    pub blocked_gbps: f64,
    pub final_state: NetworkState,
}

impl SimulationReport {
    pub fn blocked_requests(&self) -> usize {
        self.requests.iter().filter(|r| !r.admitted).count()
    }
}

pub fn run_simulation(
    net: &NetworkDescription,
    traffic: &TrafficConfig,
    solver: &Solver,
    options: &SimulationOptions,
) -> Result<SimulationReport> {
    run_simulation_with(net, traffic, solver, options, &mut ())
}

/// Runs one seeded simulation: each arrival is solved and allocated or blocked, each departure
/// releases its spectrum. A solver proposing an invalid allocation aborts the run.
pub fn run_simulation_with(
    net: &NetworkDescription,
    traffic: &TrafficConfig,
    solver: &Solver,
    options: &SimulationOptions,
    sink: &mut dyn MetricsSink,
) -> Result<SimulationReport> {
    traffic.validate()?;
    solver.validate()?;
    if traffic.requests.is_none() && traffic.horizon.is_none() && options.load_target_gbps.is_none() {
        return Err(Error::Config("simulation needs a request count, horizon or load target".into()));
    }
    if !(options.checkpoint_gbps > 0.0) || !(0.0..1.0).contains(&options.warmup_fraction) {
        return Err(Error::Config("checkpoint spacing must be positive and warm-up in [0, 1)".into()));
    }

    let mut state = net.empty_state();
    let mut stream = RequestStream::new(traffic, net.topology.node_count())?;
    let max_requests = traffic.requests.unwrap_or(usize::MAX);
    let horizon = traffic.horizon.unwrap_or(f64::INFINITY);
    let mut queue = EventQueue::new();
    let mut issued = 0usize;
    let mut issue = |queue: &mut EventQueue, stream: &mut RequestStream| {
        if issued >= max_requests {
            return false;
        }
        let r = stream.next().expect("stream is endless");
        if r.arrival > horizon {
            return false;
        }
        issued += 1;
        queue.push(r.arrival, Event::Arrival(r));
        true
    };
    issue(&mut queue, &mut stream);

    let mut rates: HashMap<RequestId, f64> = HashMap::new();
    let mut records = Vec::new();
    let mut samples: Vec<EventSample> = Vec::new();
    let mut checkpoints = Vec::new();
    let (mut requested, mut admitted, mut blocked, mut carried) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut next_checkpoint = options.checkpoint_gbps;

    while let Some((time, event)) = queue.pop() {
        let index = samples.len();
        let mut finished = false;
        let (kind, id) = match event {
            Event::Arrival(req) => {
                let seed = stream_seed(traffic.seed, req.id, 0x5eed);
                let outcome = solver.solve(&state, &req, &net.modulation, seed)?;
                requested += req.rate_gbps;
                let mut slot_links = 0;
                let ok = match outcome.allocation() {
                    Some(alloc) => {
                        validate_allocation(&state, &net.modulation, &req, alloc)?;
                        slot_links = alloc.hops() * alloc.slots;
                        state.allocate(alloc.clone())?;
                        true
                    }
                    None => false,
                };
                if ok {
                    admitted += req.rate_gbps;
                    carried += req.rate_gbps;
                    rates.insert(req.id, req.rate_gbps);
                    if req.departs() {
                        queue.push(time + req.hold_time, Event::Departure(req.id));
                    }
                } else {
                    blocked += req.rate_gbps;
                }
                records.push(RequestRecord {
                    id: req.id,
                    arrival: req.arrival,
                    rate_gbps: req.rate_gbps,
                    admitted: ok,
                    event_index: index,
                    slot_links,
                });
                let mut target_hit = false;
                while admitted >= next_checkpoint {
                    if let Some(target) = options.load_target_gbps {
                        if next_checkpoint > target + 1e-9 {
                            target_hit = true;
                            break;
                        }
                    }
                    checkpoints.push(MetricsRecord {
                        timestamp: time,
                        checkpoint_load_gbps: next_checkpoint,
                        naf: network_average_fragmentation(state.grid()),
                        bbp: blocked / requested,
                        occupied_slot_links: state.grid().occupied_total(),
                        admitted_gbps: admitted,
                        blocked_gbps: blocked,
                    });
                    next_checkpoint += options.checkpoint_gbps;
                }
                if let Some(target) = options.load_target_gbps {
                    target_hit |= next_checkpoint > target + 1e-9;
                }
                finished = target_hit || !issue(&mut queue, &mut stream);
                (EventKind::Arrival, req.id)
            }
            Event::Departure(id) => {
                state.release(id)?;
                carried -= rates.remove(&id).expect("departing request was admitted");
                (EventKind::Departure, id)
            }
        };

        let sample = EventSample {
            index,
            time,
            kind,
            request: id,
            naf: network_average_fragmentation(state.grid()),
            occupied_slot_links: state.grid().occupied_total(),
            carried_gbps: carried,
        };
        if options.check_invariants {
            check_event_invariants(&state, requested, admitted, blocked, carried, &rates)?;
        }
        sink.record(&state, &sample);
        samples.push(sample);
        if finished {
            break;
        }
    }

    let window = summarize(&samples, &records, options.warmup_fraction)?;
    Ok(SimulationReport {
        solver: solver.kind,
        seed: traffic.seed,
        events: samples.len(),
        requests: records,
        checkpoints,
        window,
        requested_gbps: requested,
        admitted_gbps: admitted,
        blocked_gbps: blocked,
        final_state: state,
    })
}

fn check_event_invariants(
    state: &NetworkState,
    requested: f64,
    admitted: f64,
    blocked: f64,
    carried: f64,
    rates: &HashMap<RequestId, f64>,
) -> Result<()> {
    state.check_invariants()?;
    let tol = 1e-9 * requested.max(1.0);
    if (admitted + blocked - requested).abs() > tol {
        return Err(Error::InvalidAllocation(format!(
            "load accounting: admitted {admitted} + blocked {blocked} != requested {requested}"
        )));
    }
    let live: f64 = rates.values().sum();
    if (live - carried).abs() > tol || rates.len() != state.active_count() {
        return Err(Error::InvalidAllocation("carried load disagrees with active connections".into()));
    }
    Ok(())
}

fn summarize(samples: &[EventSample], records: &[RequestRecord], warmup: f64) -> Result<WindowSummary> {
    if samples.is_empty() {
        return Ok(WindowSummary::default());
    }
    let cut = ((samples.len() as f64 * warmup).floor() as usize).min(samples.len() - 1);
    let window = &samples[cut..];
    let (start, end) = (window[0].time, window[window.len() - 1].time);
    let duration = end - start;
    let average = |f: &dyn Fn(&EventSample) -> f64| {
        if duration > 0.0 {
            window.windows(2).map(|w| f(&w[0]) * (w[1].time - w[0].time)).sum::<f64>() / duration
        } else {
            window.iter().map(f).sum::<f64>() / window.len() as f64
        }
    };
    let in_window: Vec<&RequestRecord> = records.iter().filter(|r| r.event_index >= cut).collect();
    let requested: f64 = in_window.iter().map(|r| r.rate_gbps).sum();
    let blocked_gbps: f64 = in_window.iter().filter(|r| !r.admitted).map(|r| r.rate_gbps).sum();
    let bbp = match bandwidth_blocking_probability(in_window.iter().map(|r| (r.rate_gbps, !r.admitted))) {
        Ok(v) => v,
        Err(Error::EmptyWindow) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(WindowSummary {
        start_time: start,
        end_time: end,
        requests: in_window.len(),
        blocked: in_window.iter().filter(|r| !r.admitted).count(),
        requested_gbps: requested,
        blocked_gbps,
        bbp,
        mean_naf: average(&|s| s.naf),
        mean_carried_gbps: average(&|s| s.carried_gbps),
        mean_occupied_slot_links: average(&|s| s.occupied_slot_links as f64),
    })
}
