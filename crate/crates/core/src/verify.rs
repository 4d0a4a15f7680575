//! Physical replay of schedules under the channel-aware collision model, and
//! an exhaustive optimum for toy instances.
//!
//! Model: in every slot a node either transmits on one channel or listens on
//! its reception channel. A listening node `v` receives iff exactly one of
//! its neighbours transmits on `A(v)` in that slot. Transmitters hear
//! nothing.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::layers::build_layers;
use crate::schedule::Schedule;
use crate::topo::Topology;
use crate::{NodeId, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    UninformedTransmitter,
    DuplicateRadio,
    IntendedReceptionCollided,
    IntendedReceiverBusy,
    UncoveredNode,
    /// Unknown node or channel out of range.
    Malformed,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::UninformedTransmitter => "uninformed-transmitter",
            ViolationKind::DuplicateRadio => "duplicate-radio",
            ViolationKind::IntendedReceptionCollided => "intended-reception-collided",
            ViolationKind::IntendedReceiverBusy => "intended-receiver-busy",
            ViolationKind::UncoveredNode => "uncovered-node",
            ViolationKind::Malformed => "malformed",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub slot: Slot,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violation {} {} {}", self.slot, self.kind, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    /// First collision-free reception per node; `Some(0)` for the source.
    pub rcv_time: Vec<Option<Slot>>,
    pub violations: Vec<Violation>,
    /// Latest first-reception slot over the reachable nodes that got the
    /// message.
    pub latency: Slot,
}

impl VerificationReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    /// Human-readable summary followed by one `violation ...` line each.
    pub fn render(&self) -> String {
        let covered = self.rcv_time.iter().filter(|r| r.is_some()).count();
        let mut out = format!(
            "verification: {}\ncovered: {}/{}\nlatency: {}\nviolations: {}\n",
            if self.ok { "ok" } else { "FAILED" },
            covered,
            self.rcv_time.len(),
            self.latency,
            self.violations.len()
        );
        for v in &self.violations {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

/// Replays `s` slot by slot on `t`.
///
/// Opportunistic overhearing counts toward coverage. With `strict`, every
/// listed receiver of every transmission must also physically get that very
/// transmission.
pub fn replay(t: &Topology, s: &Schedule, strict: bool) -> VerificationReport {
    let n = t.len();
    let k = t.channel_count();
    let mut rcv: Vec<Option<Slot>> = vec![None; n];
    rcv[t.source()] = Some(0);
    let mut violations = Vec::new();
    let mut push = |slot, kind, detail: String| violations.push(Violation { slot, kind, detail });

    // Per-slot scratch: channel each node transmits on (first one wins for
    // lookups; duplicates are flagged separately).
    let mut tx_count = vec![0u32; n];
    let mut sender_on: Vec<Vec<(NodeId, bool)>> = Vec::new();

    let txs = s.transmissions();
    let mut start = 0;
    while start < txs.len() {
        let slot = txs[start].slot;
        let mut end = start;
        while end < txs.len() && txs[end].slot == slot {
            end += 1;
        }
        let group: Vec<_> = txs[start..end]
            .iter()
            .filter(|tx| {
                let ok = tx.node < n && (1..=k).contains(&tx.channel);
                if !ok {
                    push(
                        slot,
                        ViolationKind::Malformed,
                        format!("node {} channel {}", tx.node, tx.channel),
                    );
                }
                ok
            })
            .collect();

        // (transmitter, informed?) per node per channel heard
        sender_on.clear();
        sender_on.resize(n, Vec::new());
        for tx in &group {
            tx_count[tx.node] += 1;
        }
        let mut flagged = HashSet::new();
        for tx in &group {
            if tx_count[tx.node] > 1 && flagged.insert(tx.node) {
                push(
                    slot,
                    ViolationKind::DuplicateRadio,
                    format!("node {} transmits {} times", tx.node, tx_count[tx.node]),
                );
            }
            let informed = matches!(rcv[tx.node], Some(r) if r < slot);
            if !informed {
                push(
                    slot,
                    ViolationKind::UninformedTransmitter,
                    format!("node {} has not received the message", tx.node),
                );
            }
            for &v in t.neighbors(tx.node) {
                if t.channel(v) == tx.channel {
                    sender_on[v].push((tx.node, informed));
                }
            }
        }

        let heard = |v: NodeId| -> Option<(NodeId, bool)> {
            if tx_count[v] == 0 && sender_on[v].len() == 1 {
                Some(sender_on[v][0])
            } else {
                None
            }
        };

        if strict {
            for tx in &group {
                for &w in &tx.receivers {
                    if w >= n {
                        push(slot, ViolationKind::Malformed, format!("receiver {w} unknown"));
                    } else if tx_count[w] > 0 {
                        push(
                            slot,
                            ViolationKind::IntendedReceiverBusy,
                            format!("receiver {w} of node {} is transmitting", tx.node),
                        );
                    } else if heard(w).map(|(u, _)| u) != Some(tx.node) {
                        let why = if t.channel(w) != tx.channel {
                            "listens on another channel".to_string()
                        } else if !t.adjacent(w, tx.node) {
                            "is out of range".to_string()
                        } else {
                            format!("hears {} transmitters", sender_on[w].len())
                        };
                        push(
                            slot,
                            ViolationKind::IntendedReceptionCollided,
                            format!("receiver {w} of node {} {why}", tx.node),
                        );
                    }
                }
            }
        }

        for v in 0..n {
            if rcv[v].is_none() {
                if let Some((_, true)) = heard(v) {
                    rcv[v] = Some(slot);
                }
            }
        }
        for tx in &group {
            tx_count[tx.node] = 0;
        }
        start = end;
    }

    let d = build_layers(t);
    let horizon = s.horizon();
    let mut latency = 0;
    for v in 0..n {
        if !d.is_reachable(v) {
            continue;
        }
        match rcv[v] {
            Some(r) => latency = latency.max(r),
            None => push(
                horizon,
                ViolationKind::UncoveredNode,
                format!("node {v} never receives"),
            ),
        }
    }

    VerificationReport {
        ok: violations.is_empty(),
        rcv_time: rcv,
        violations,
        latency,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimum {
    Slots(Slot),
    Exceeded,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exhaustive search supports n <= 8 and k <= 3, got n = {n}, k = {k}")]
    InstanceTooLarge { n: usize, k: u32 },
}

/// Minimum number of slots needed to inform every node reachable from the
/// source, by breadth-first search over informed sets.
///
/// Only transmissions that could inform someone are enumerated: an informed
/// node either stays silent or sends on the reception channel of one of its
/// uninformed neighbours. Any other transmission can only cause collisions.
pub fn brute_force_optimal(t: &Topology, horizon_cap: Slot) -> Result<Optimum, VerifyError> {
    let n = t.len();
    let k = t.channel_count();
    if n > 8 || k > 3 {
        return Err(VerifyError::InstanceTooLarge { n, k });
    }
    let d = build_layers(t);
    let target: u16 = (0..n).filter(|&v| d.is_reachable(v)).fold(0, |m, v| m | 1 << v);
    let start: u16 = 1 << t.source();
    if start == target {
        return Ok(Optimum::Slots(0));
    }

    let mut seen = HashSet::from([start]);
    let mut frontier = vec![start];
    for depth in 1..=horizon_cap {
        let mut next = Vec::new();
        for &mask in &frontier {
            // options[i] = (node, candidate channels)
            let options: Vec<(NodeId, Vec<u32>)> = (0..n)
                .filter(|&u| mask & (1 << u) != 0)
                .filter_map(|u| {
                    let mut chans: Vec<u32> = t
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| mask & (1 << w) == 0)
                        .map(|&w| t.channel(w))
                        .collect();
                    chans.sort_unstable();
                    chans.dedup();
                    (!chans.is_empty()).then_some((u, chans))
                })
                .collect();

            // Mixed-radix counter; digit 0 = silent.
            let mut choice = vec![0usize; options.len()];
            loop {
                let mut active = vec![0u32; n];
                for (i, (u, chans)) in options.iter().enumerate() {
                    if choice[i] > 0 {
                        active[*u] = chans[choice[i] - 1];
                    }
                }
                let mut grown = mask;
                for v in 0..n {
                    if mask & (1 << v) != 0 {
                        continue;
                    }
                    let senders = t
                        .neighbors(v)
                        .iter()
                        .filter(|&&u| active[u] == t.channel(v))
                        .count();
                    if senders == 1 {
                        grown |= 1 << v;
                    }
                }
                if grown == target {
                    return Ok(Optimum::Slots(depth));
                }
                if seen.insert(grown) {
                    next.push(grown);
                }

                let mut i = 0;
                while i < choice.len() {
                    choice[i] += 1;
                    if choice[i] <= options[i].1.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Optimum::Exceeded)
}
