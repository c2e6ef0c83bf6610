//! Building blocks for the `eonsim` binary: network loading, text reports for single
//! solves, and experiment sweeps over solvers, arrival rates and seeds.

pub mod network;
pub mod report;
pub mod spec;
pub mod sweep;

use eon_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_BLOCKED: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_CONTRACT: u8 = 4;

/// Process exit code for a failed command.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Overlap { .. }
            | Error::InvalidAllocation(_)
            | Error::DuplicateRequest(_)
            | Error::UnknownRequest(_)
            | Error::MismatchedStream(_),
        ) => EXIT_CONTRACT,
        _ => EXIT_CONFIG,
    }
}
