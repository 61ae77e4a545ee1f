//! Command-line experiments on top of `tension-core`.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod harness;
pub mod report;

use tension_core::Error;

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNCONVERGED: i32 = 3;

/// Process exit status for a failed command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::NotConverged(_) => EXIT_UNCONVERGED,
                Error::SeedsDisconnected
                | Error::SeedOutsideCandidateSet(_)
                | Error::DisconnectedNodeSet
                | Error::DisconnectedPair { .. }
                | Error::UncoverableSkill(_)
                | Error::ComponentTooSmall { .. } => EXIT_INFEASIBLE,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}
