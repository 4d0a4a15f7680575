//! Broadcast schedules: timed transmit instances plus the receivers each
//! transmission is meant to reach.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::{Channel, NodeId, Slot};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("reachable node {0} is never covered")]
    Uncovered(NodeId),
    #[error("dominator {0} has no neighbour in the previous layer")]
    Orphan(NodeId),
}

/// One transmit instance: `node` sends on `channel` in `slot`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transmission {
    pub slot: Slot,
    pub node: NodeId,
    pub channel: Channel,
    /// Nodes this transmission must deliver to. Empty when parsed from text.
    pub receivers: Vec<NodeId>,
}

/// Transmissions ordered by `(slot, node, channel)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    transmissions: Vec<Transmission>,
}

impl Schedule {
    pub fn new(mut transmissions: Vec<Transmission>) -> Self {
        transmissions.sort();
        Schedule { transmissions }
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn len(&self) -> usize {
        self.transmissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transmissions.is_empty()
    }

    /// Latest slot used, 0 for the empty schedule.
    pub fn horizon(&self) -> Slot {
        self.transmissions.last().map_or(0, |tx| tx.slot)
    }

    /// Transmit instances `S_t` grouped by slot.
    pub fn slots(&self) -> BTreeMap<Slot, Vec<(NodeId, Channel)>> {
        let mut out: BTreeMap<Slot, Vec<(NodeId, Channel)>> = BTreeMap::new();
        for tx in &self.transmissions {
            out.entry(tx.slot).or_default().push((tx.node, tx.channel));
        }
        out
    }

    /// Slots at which `node` transmits on `channel`, ascending. A node can
    /// use the same channel more than once, e.g. as a dominator and later as
    /// a connector.
    pub fn tx_times(&self, node: NodeId, channel: Channel) -> Vec<Slot> {
        self.transmissions
            .iter()
            .filter(|tx| tx.node == node && tx.channel == channel)
            .map(|tx| tx.slot)
            .collect()
    }

    /// `T=<horizon>` followed by `slot node channel` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("T={}\n", self.horizon());
        for tx in &self.transmissions {
            let _ = writeln!(out, "{} {} {}", tx.slot, tx.node, tx.channel);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ScheduleError> {
        let err = |line: usize, msg: String| ScheduleError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| err(1, "missing `T=` header".into()))?;
        let horizon: Slot = header
            .strip_prefix("T=")
            .and_then(|h| h.parse().ok())
            .ok_or_else(|| err(hline, format!("bad header `{header}`")))?;

        let mut transmissions = Vec::new();
        for (line, body) in lines {
            let f: Vec<&str> = body.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err(line, "expected `slot node channel`".into()));
            }
            let parse = |s: &str, name: &str| -> Result<u64, ScheduleError> {
                s.parse()
                    .map_err(|_| err(line, format!("cannot parse {name} from `{s}`")))
            };
            let slot = parse(f[0], "slot")? as Slot;
            if slot == 0 {
                return Err(err(line, "slots start at 1".into()));
            }
            transmissions.push(Transmission {
                slot,
                node: parse(f[1], "node")? as NodeId,
                channel: parse(f[2], "channel")? as Channel,
                receivers: Vec::new(),
            });
        }
        let schedule = Schedule::new(transmissions);
        if schedule.horizon() != horizon {
            return Err(err(
                hline,
                format!("header says T={horizon} but last slot is {}", schedule.horizon()),
            ));
        }
        Ok(schedule)
    }
}
