//! Network substrate: topology, spectrum grid, modulation formats and connection bookkeeping.

mod io;
mod modulation;
mod request;
mod spectrum;
mod state;
mod topology;
mod validate;

pub use io::{apply_occupancy, parse_network, parse_occupancy, NetworkDescription, OccupancyRecord, DEFAULT_SLOTS};
pub use modulation::{required_slots, ModulationLevel, ModulationTable, SLOT_CAPACITY_GBPS};
pub use request::{Allocation, Request, RequestId};
pub use spectrum::SpectrumGrid;
pub use state::NetworkState;
pub use topology::{Link, LinkId, NodeId, Topology};
pub use validate::validate_allocation;
