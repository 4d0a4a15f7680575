//! Minimum-latency broadcast scheduling for single-radio multi-channel
//! wireless ad-hoc networks modelled as unit disk graphs.
//!
//! Every node listens on one fixed reception channel but may retune its
//! single radio to any channel in order to transmit. A broadcast from the
//! source has to reach every node through collision-free transmissions,
//! and the goal is to finish in as few time slots as possible.
//!
//! The crate provides two schedulers:
//!
//! * [`bts`]: a layered baseline that serves each BFS layer channel by
//!   channel through distance-2 colourings, with latency at most
//!   `(4k + 12) * l`.
//! * [`ets`]: a broadcast-tree scheduler that assigns every transmitter the
//!   earliest slot free of interference, with latency at most
//!   `(k + 23) * l`.
//!
//! Here `k` is the number of channels and `l` the depth of the BFS tree
//! rooted at the source, which is also a lower bound on any schedule.
//! Schedules can be checked with [`verify::replay`], a slot-by-slot physical
//! simulation of the channel-aware collision model.

pub mod bts;
pub mod ets;
pub mod graphcolor;
pub mod layers;
pub mod schedule;
pub mod topo;
pub mod verify;

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

/// Channel number in `1..=k`.
pub type Channel = u32;

/// Time slot. Slot 0 is the instant the source holds the message; the first
/// transmission happens in slot 1.
pub type Slot = u32;

pub use bts::{bts_plan, bts_schedule, BtsPlan};
pub use ets::{
    audit_ets_bounds, build_broadcast_tree, ets_schedule, BoundAudit, BroadcastTree,
    EtsOutput, InterferenceModel,
};
pub use graphcolor::{Coloring, ConflictGraph};
pub use layers::{build_layers, lower_bound, LayeredDecomposition};
pub use schedule::{Schedule, ScheduleError, Transmission};
pub use topo::{random_topology, Point, Topology, TopologyError};
pub use verify::{
    brute_force_optimal, replay, Optimum, VerificationReport, Violation, ViolationKind,
    VerifyError,
};
