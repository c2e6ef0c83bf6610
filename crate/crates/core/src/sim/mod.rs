//! Dynamic traffic generation and the discrete-event provisioning loop.

mod engine;
mod traffic;

pub use engine::{
    run_simulation, run_simulation_with, Event, EventKind, EventQueue, EventSample, MetricsRecord, MetricsSink,
    RequestRecord, SimulationOptions, SimulationReport, WindowSummary,
};
pub use traffic::{generate_stream, RequestStream, TrafficConfig};
