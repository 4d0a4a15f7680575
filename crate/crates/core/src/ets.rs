//! Enhanced transmission scheduling on a greedily built broadcast tree.
//!
//! The tree picks, for every `(layer, channel)` slice, dominators that cover
//! the slice and connectors in the previous layer that cover the
//! dominators, both by greedy set cover. Scheduling then walks layers and
//! channels in order and gives each transmitter the earliest slot after it
//! has the message that interferes with nothing already scheduled. Unlike
//! BTS there is no barrier between layers.

use std::collections::{BTreeMap, BTreeSet};

use crate::layers::LayeredDecomposition;
use crate::schedule::{Schedule, ScheduleError, Transmission};
use crate::topo::Topology;
use crate::{Channel, NodeId, Slot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastTree {
    parent: Vec<Option<NodeId>>,
    dominator_cover: BTreeMap<NodeId, Vec<NodeId>>,
    // A connector lives in layer i - 1 and serves layer i only, so the
    // channel is enough to tell its roles apart.
    connector_cover: BTreeMap<(NodeId, Channel), Vec<NodeId>>,
    dominators: Vec<Vec<Vec<NodeId>>>,
    connectors: Vec<Vec<Vec<NodeId>>>,
}

impl BroadcastTree {
    /// Responsible transmitter `p(v)`.
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    /// `M_{i,c}` in selection order.
    pub fn dominators(&self, i: usize, c: Channel) -> &[NodeId] {
        &self.dominators[i][(c - 1) as usize]
    }

    /// `P_{i,c}` in selection order. These nodes sit in layer `i - 1`.
    pub fn connectors(&self, i: usize, c: Channel) -> &[NodeId] {
        &self.connectors[i][(c - 1) as usize]
    }

    /// Slice members `u` covers as a dominator.
    pub fn dominator_cover(&self, u: NodeId) -> &[NodeId] {
        self.dominator_cover.get(&u).map_or(&[], Vec::as_slice)
    }

    /// Dominators `u` covers as a connector on channel `c`.
    pub fn connector_cover(&self, u: NodeId, c: Channel) -> &[NodeId] {
        self.connector_cover.get(&(u, c)).map_or(&[], Vec::as_slice)
    }

    /// `C(u)`: everything `u` is responsible for, over all roles.
    pub fn cover(&self, u: NodeId) -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = self.dominator_cover(u).iter().copied().collect();
        for ((v, _), set) in self.connector_cover.range((u, 0)..=(u, Channel::MAX)) {
            debug_assert_eq!(*v, u);
            out.extend(set.iter().copied());
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.dominators.len() - 1
    }
}

/// Greedy broadcast-tree construction.
///
/// Per slice `L_{i,c}`: while a slice node is uncovered, the uncovered node
/// whose closed neighbourhood holds the most uncovered slice nodes becomes a
/// dominator and takes them over. Then, while a dominator lacks a parent,
/// the layer `i - 1` node adjacent to the most parentless dominators becomes
/// a connector. Ties go to the lowest id.
pub fn build_broadcast_tree(
    t: &Topology,
    d: &LayeredDecomposition,
) -> Result<BroadcastTree, ScheduleError> {
    let n = t.len();
    let k = t.channel_count() as usize;
    let mut parent = vec![None; n];
    let mut dominator_cover = BTreeMap::new();
    let mut connector_cover = BTreeMap::new();
    let mut dominators = vec![vec![Vec::new(); k]];
    let mut connectors = vec![vec![Vec::new(); k]];
    let mut in_slice = vec![false; n];
    let mut covered = vec![false; n];

    for i in 1..=d.depth() {
        let mut layer_dom = Vec::with_capacity(k);
        let mut layer_con = Vec::with_capacity(k);
        for c in 1..=k as Channel {
            let slice = d.slice(i, c);
            for &v in slice {
                in_slice[v] = true;
            }

            let mut doms = Vec::new();
            let mut remaining = slice.len();
            while remaining > 0 {
                let gain = |u: NodeId| {
                    1 + t
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| in_slice[w] && !covered[w])
                        .count()
                };
                // Slices are ascending, so max_by_key over (gain, Reverse(id))
                // picks the lowest id among equals.
                let u = slice
                    .iter()
                    .copied()
                    .filter(|&u| !covered[u])
                    .max_by_key(|&u| (gain(u), std::cmp::Reverse(u)))
                    .expect("uncovered node exists");
                covered[u] = true;
                let took: Vec<NodeId> = t
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| in_slice[w] && !covered[w])
                    .collect();
                for &w in &took {
                    covered[w] = true;
                    parent[w] = Some(u);
                }
                remaining -= 1 + took.len();
                dominator_cover.insert(u, took);
                doms.push(u);
            }

            let pool = d.layer(i - 1);
            let mut orphan = vec![false; n];
            for &m in &doms {
                orphan[m] = true;
            }
            let mut cons = Vec::new();
            let mut left = doms.len();
            while left > 0 {
                let gain = |u: NodeId| t.neighbors(u).iter().filter(|&&w| orphan[w]).count();
                let (u, g) = pool
                    .iter()
                    .map(|&u| (u, gain(u)))
                    .max_by_key(|&(u, g)| (g, std::cmp::Reverse(u)))
                    .expect("previous layer is nonempty");
                if g == 0 {
                    let m = doms.iter().copied().find(|&m| orphan[m]).unwrap();
                    return Err(ScheduleError::Orphan(m));
                }
                let took: Vec<NodeId> = t
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| orphan[w])
                    .collect();
                for &w in &took {
                    orphan[w] = false;
                    parent[w] = Some(u);
                }
                left -= took.len();
                connector_cover.insert((u, c), took);
                cons.push(u);
            }

            for &v in slice {
                in_slice[v] = false;
            }
            layer_dom.push(doms);
            layer_con.push(cons);
        }
        dominators.push(layer_dom);
        connectors.push(layer_con);
    }

    Ok(BroadcastTree {
        parent,
        dominator_cover,
        connector_cover,
        dominators,
        connectors,
    })
}

/// How `I₁` (slots where a neighbour of the transmitter is scheduled to
/// receive) and the receiver-side guard treat channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceModel {
    /// Any scheduled reception or transmission counts, whatever its channel.
    Literal,
    /// Only activity on the transmitter's channel counts.
    #[default]
    ChannelAware,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtsOutput {
    pub schedule: Schedule,
    /// Transmissions whose slot moved because the node already transmits
    /// elsewhere (`I₂`).
    pub same_node_bindings: usize,
    /// Transmissions whose slot moved because a receiver would otherwise
    /// hear an earlier-scheduled transmitter.
    pub receiver_guard_bindings: usize,
}

struct State<'a> {
    t: &'a Topology,
    model: InterferenceModel,
    rcv: Vec<Option<Slot>>,
    tx: Vec<Vec<(Slot, Channel)>>,
    out: Vec<Transmission>,
    same_node_bindings: usize,
    receiver_guard_bindings: usize,
}

impl State<'_> {
    fn counts(&self, channel_of_activity: Channel, c: Channel) -> bool {
        self.model == InterferenceModel::Literal || channel_of_activity == c
    }

    fn place(&mut self, u: NodeId, c: Channel, receivers: &[NodeId]) {
        let t = self.t;
        let ready = self.rcv[u].expect("transmitter holds the message");

        // I1: neighbours already scheduled to receive.
        let mut neighbor_rx = BTreeSet::new();
        for &w in t.neighbors(u) {
            if w == t.source() {
                continue;
            }
            if let Some(r) = self.rcv[w] {
                if self.counts(t.channel(w), c) {
                    neighbor_rx.insert(r);
                }
            }
        }
        // I2: the radio is already busy.
        let busy: BTreeSet<Slot> = self.tx[u].iter().map(|&(s, _)| s).collect();
        // Receiver guard: someone else already transmits next to a receiver,
        // or the receiver itself transmits.
        let mut guard = BTreeSet::new();
        for &v in receivers {
            guard.extend(self.tx[v].iter().map(|&(s, _)| s));
            for &x in t.neighbors(v) {
                if x == u {
                    continue;
                }
                for &(s, ch) in &self.tx[x] {
                    if self.counts(ch, t.channel(v)) {
                        guard.insert(s);
                    }
                }
            }
        }

        let earliest = |blocked: &dyn Fn(Slot) -> bool| {
            let mut s = ready + 1;
            while blocked(s) {
                s += 1;
            }
            s
        };
        let slot = earliest(&|s| neighbor_rx.contains(&s) || busy.contains(&s) || guard.contains(&s));
        if slot != earliest(&|s| neighbor_rx.contains(&s) || guard.contains(&s)) {
            self.same_node_bindings += 1;
        }
        if slot != earliest(&|s| neighbor_rx.contains(&s) || busy.contains(&s)) {
            self.receiver_guard_bindings += 1;
        }

        self.tx[u].push((slot, c));
        for &v in receivers {
            self.rcv[v] = Some(slot);
        }
        self.out.push(Transmission {
            slot,
            node: u,
            channel: c,
            receivers: receivers.to_vec(),
        });
    }
}

/// Earliest-slot scheduling over the broadcast tree.
///
/// Layers and channels are walked in order; within a slice connectors go
/// first, then dominators, each in selection order. A transmitter on
/// channel `c` avoids every slot in which
///
/// * a neighbour is scheduled to receive (`I₁`),
/// * it already transmits on some channel (`I₂`, applied to dominators too),
/// * one of its receivers has another transmitter in range, or transmits.
///
/// With `prune_empty`, dominators that cover nobody stay silent.
pub fn ets_schedule(
    t: &Topology,
    d: &LayeredDecomposition,
    b: &BroadcastTree,
    model: InterferenceModel,
    prune_empty: bool,
) -> EtsOutput {
    let mut st = State {
        t,
        model,
        rcv: vec![None; t.len()],
        tx: vec![Vec::new(); t.len()],
        out: Vec::new(),
        same_node_bindings: 0,
        receiver_guard_bindings: 0,
    };
    st.rcv[t.source()] = Some(0);

    for i in 1..=d.depth() {
        for c in 1..=t.channel_count() {
            for &u in b.connectors(i, c) {
                st.place(u, c, b.connector_cover(u, c));
            }
            for &u in b.dominators(i, c) {
                let cover = b.dominator_cover(u);
                if prune_empty && cover.is_empty() {
                    continue;
                }
                st.place(u, c, cover);
            }
        }
    }

    EtsOutput {
        schedule: Schedule::new(st.out),
        same_node_bindings: st.same_node_bindings,
        receiver_guard_bindings: st.receiver_guard_bindings,
    }
}

/// Per-node latency audit for an ETS schedule.
///
/// With `t_j` the last slot in which a node of layer `j` transmits, every
/// dominator of layer `i` should transmit by `t_{i-1} + 20`, every
/// connector sitting in layer `i >= 1` by `t_{i-1} + k + 23`, and the source
/// should be done by slot `k`. Breaches are findings, not errors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundAudit {
    pub dominator_checks: usize,
    pub connector_checks: usize,
    pub dominator_breaches: Vec<(NodeId, Slot, Slot)>,
    pub connector_breaches: Vec<(NodeId, Slot, Slot)>,
    pub source_finish: Slot,
    pub max_dominator_gap: i64,
    pub max_connector_gap: i64,
}

impl BoundAudit {
    pub fn is_clean(&self, k: Channel) -> bool {
        self.dominator_breaches.is_empty()
            && self.connector_breaches.is_empty()
            && self.source_finish <= k
    }
}

pub fn audit_ets_bounds(
    t: &Topology,
    d: &LayeredDecomposition,
    b: &BroadcastTree,
    schedule: &Schedule,
) -> BoundAudit {
    let k = t.channel_count();
    let mut finish = vec![0 as Slot; d.depth() + 1];
    for tx in schedule.transmissions() {
        if let Some(j) = d.layer_of(tx.node) {
            finish[j] = finish[j].max(tx.slot);
        }
    }
    let mut audit = BoundAudit {
        source_finish: finish[0],
        max_dominator_gap: i64::MIN,
        max_connector_gap: i64::MIN,
        ..Default::default()
    };

    for tx in schedule.transmissions() {
        let Some(j) = d.layer_of(tx.node) else { continue };
        if j == 0 {
            continue;
        }
        let base = finish[j - 1];
        let gap = tx.slot as i64 - base as i64;
        let is_dominator = b.dominators(j, tx.channel).contains(&tx.node)
            && tx.receivers.iter().all(|&w| d.layer_of(w) == Some(j));
        if is_dominator {
            audit.dominator_checks += 1;
            audit.max_dominator_gap = audit.max_dominator_gap.max(gap);
            if tx.slot > base + 20 {
                audit.dominator_breaches.push((tx.node, tx.slot, base));
            }
        } else {
            audit.connector_checks += 1;
            audit.max_connector_gap = audit.max_connector_gap.max(gap);
            if tx.slot > base + k + 23 {
                audit.connector_breaches.push((tx.node, tx.slot, base));
            }
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::build_layers;
    use crate::topo::{random_topology, Point};

    fn build(pts: &[(f64, f64)], channels: &[Channel], k: Channel) -> (Topology, LayeredDecomposition) {
        let pts = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let t = Topology::build(pts, 1.0, k, channels.to_vec(), 0).unwrap();
        let d = build_layers(&t);
        (t, d)
    }

    #[test]
    fn two_node_tree() {
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.0)], &[2, 2], 2);
        let b = build_broadcast_tree(&t, &d).unwrap();
        assert_eq!(b.dominators(1, 2), &[1]);
        assert_eq!(b.connectors(1, 2), &[0]);
        assert!(b.dominators(1, 1).is_empty());
        assert_eq!(b.parent(1), Some(0));
        assert_eq!(b.cover(0), BTreeSet::from([1]));

        let out = ets_schedule(&t, &d, &b, InterferenceModel::Literal, true);
        assert_eq!(out.schedule.to_text(), "T=1\n1 0 2\n");
    }

    #[test]
    fn clique_leaves_pick_lowest_id() {
        // Three mutually adjacent leaves; all have closed gain 3.
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.1), (0.5, -0.1), (0.6, 0.0)], &[1; 4], 1);
        let b = build_broadcast_tree(&t, &d).unwrap();
        assert_eq!(b.dominators(1, 1), &[1]);
        assert_eq!(b.connectors(1, 1), &[0]);
        assert_eq!(b.dominator_cover(1), &[2, 3]);
    }

    #[test]
    fn leaves_prefer_highest_coverage() {
        // Leaves 1 - 2 - 3 in a row, only 2 reaches both others.
        let (t, d) = build(
            &[(0.0, 0.0), (-0.55, 0.5), (0.0, 0.5), (0.55, 0.5)],
            &[1; 4],
            1,
        );
        assert!(!t.adjacent(1, 3));
        let b = build_broadcast_tree(&t, &d).unwrap();
        assert_eq!(b.dominators(1, 1), &[2]);
        assert_eq!(b.dominator_cover(2), &[1, 3]);
    }

    #[test]
    fn single_radio_forces_sequencing() {
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0)], &[1, 1, 2], 2);
        let b = build_broadcast_tree(&t, &d).unwrap();
        let out = ets_schedule(&t, &d, &b, InterferenceModel::ChannelAware, true);
        assert_eq!(out.schedule.to_text(), "T=2\n1 0 1\n2 0 2\n");
        assert_eq!(out.same_node_bindings, 1);
    }

    #[test]
    fn single_node() {
        let (t, d) = build(&[(0.0, 0.0)], &[1], 1);
        let b = build_broadcast_tree(&t, &d).unwrap();
        let out = ets_schedule(&t, &d, &b, InterferenceModel::Literal, true);
        assert!(out.schedule.is_empty());
        assert_eq!(out.schedule.horizon(), 0);
    }

    #[test]
    fn tree_invariants_random() {
        for seed in 0..30 {
            let t = random_topology(200, 5, 100.0, 400.0, seed).unwrap();
            let d = build_layers(&t);
            let b = build_broadcast_tree(&t, &d).unwrap();
            let mut seen = vec![false; t.len()];
            seen[t.source()] = true;
            for u in 0..t.len() {
                for w in b.cover(u) {
                    assert!(!seen[w], "seed {seed}: {w} covered twice");
                    seen[w] = true;
                    assert_eq!(b.parent(w), Some(u));
                    assert!(t.adjacent(u, w));
                }
            }
            for v in 0..t.len() {
                assert_eq!(seen[v], d.is_reachable(v));
            }
            for i in 1..=d.depth() {
                for c in 1..=t.channel_count() {
                    let doms = b.dominators(i, c);
                    assert!(doms.iter().all(|m| d.slice(i, c).contains(m)));
                    assert!(crate::graphcolor::is_independent(&t, doms));
                    assert!(b.connectors(i, c).iter().all(|&p| d.layer_of(p) == Some(i - 1)));
                }
            }
        }
    }
}
