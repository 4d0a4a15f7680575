//! Basic transmission scheduling: layer by layer, channel by channel.
//!
//! For each BFS layer `i` the scheduler runs two phases:
//!
//! 1. Cross-layer. For `c = 1..=k` in turn, the tree parents of the
//!    channel-`c` dominators transmit on `c`, slotted by a first-fit
//!    distance-2 colouring of the parents inside `G²[P(M) ∪ M]`. Channels
//!    are served one after another so a parent shared across channels
//!    never needs two radios.
//! 2. Same-layer. Every channel's dominators transmit in parallel, slotted
//!    by a smallest-degree-last distance-2 colouring inside `G²[L_{i,c}]`.
//!
//! Layer `i + 1` starts only once layer `i` is done.

use std::collections::BTreeMap;

use crate::graphcolor::{greedy_distance2_color, maximal_independent_set, sdl_distance2_color, Coloring};
use crate::layers::LayeredDecomposition;
use crate::schedule::{Schedule, ScheduleError, Transmission};
use crate::topo::Topology;
use crate::{Channel, NodeId, Slot};

/// Everything BTS decides for one `(layer, channel)` slice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlicePlan {
    /// Greedy MIS of `L_{i,c}` scanned by ascending id.
    pub dominators: Vec<NodeId>,
    /// Tree parents of the dominators, ascending and deduplicated.
    pub connectors: Vec<NodeId>,
    pub connector_coloring: Coloring,
    pub connector_receivers: BTreeMap<NodeId, Vec<NodeId>>,
    /// Dominators that actually transmit in the same-layer phase.
    pub dominator_targets: Vec<NodeId>,
    pub dominator_coloring: Coloring,
    pub dominator_receivers: BTreeMap<NodeId, Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BtsPlan {
    /// `slices[i][c - 1]`; layer 0 is left empty.
    pub slices: Vec<Vec<SlicePlan>>,
    pub schedule: Schedule,
}

impl BtsPlan {
    pub fn slice(&self, i: usize, c: Channel) -> &SlicePlan {
        &self.slices[i][(c - 1) as usize]
    }

    /// Largest cross-layer palette over all slices.
    pub fn max_connector_palette(&self) -> u32 {
        self.slices
            .iter()
            .flatten()
            .map(|s| s.connector_coloring.palette_size)
            .max()
            .unwrap_or(0)
    }

    /// Largest same-layer palette over all slices.
    pub fn max_dominator_palette(&self) -> u32 {
        self.slices
            .iter()
            .flatten()
            .map(|s| s.dominator_coloring.palette_size)
            .max()
            .unwrap_or(0)
    }
}

pub fn bts_schedule(
    t: &Topology,
    d: &LayeredDecomposition,
    prune_empty: bool,
) -> Result<Schedule, ScheduleError> {
    bts_plan(t, d, prune_empty).map(|p| p.schedule)
}

/// Runs BTS and keeps the intermediate sets and colourings.
///
/// With `prune_empty`, dominators left without receivers stay silent and
/// take no part in the same-layer colouring.
pub fn bts_plan(
    t: &Topology,
    d: &LayeredDecomposition,
    prune_empty: bool,
) -> Result<BtsPlan, ScheduleError> {
    let k = t.channel_count();
    let mut slices = vec![vec![SlicePlan::default(); k as usize]];

    for i in 1..=d.depth() {
        let mut per_channel = Vec::with_capacity(k as usize);
        for c in 1..=k {
            per_channel.push(plan_slice(t, d, i, c, prune_empty));
        }
        slices.push(per_channel);
    }

    let mut transmissions = Vec::new();
    let mut now: Slot = 0;
    for layer in slices.iter().skip(1) {
        for (ci, plan) in layer.iter().enumerate() {
            let c = ci as Channel + 1;
            for &p in &plan.connectors {
                transmissions.push(Transmission {
                    slot: now + plan.connector_coloring.colors[&p],
                    node: p,
                    channel: c,
                    receivers: plan.connector_receivers[&p].clone(),
                });
            }
            now += plan.connector_coloring.palette_size;
        }
        let mut longest = 0;
        for (ci, plan) in layer.iter().enumerate() {
            let c = ci as Channel + 1;
            for &m in &plan.dominator_targets {
                transmissions.push(Transmission {
                    slot: now + plan.dominator_coloring.colors[&m],
                    node: m,
                    channel: c,
                    receivers: plan.dominator_receivers[&m].clone(),
                });
            }
            longest = longest.max(plan.dominator_coloring.palette_size);
        }
        now += longest;
    }

    let mut covered = vec![false; t.len()];
    covered[t.source()] = true;
    for tx in &transmissions {
        for &w in &tx.receivers {
            covered[w] = true;
        }
    }
    if let Some(v) = (0..t.len()).find(|&v| d.is_reachable(v) && !covered[v]) {
        return Err(ScheduleError::Uncovered(v));
    }

    Ok(BtsPlan {
        slices,
        schedule: Schedule::new(transmissions),
    })
}

fn plan_slice(
    t: &Topology,
    d: &LayeredDecomposition,
    i: usize,
    c: Channel,
    prune_empty: bool,
) -> SlicePlan {
    let slice = d.slice(i, c);
    if slice.is_empty() {
        return SlicePlan::default();
    }
    let dominators = maximal_independent_set(t, slice);

    let mut connector_receivers: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &m in &dominators {
        let p = d.spt_parent(m).expect("non-source layer node has a tree parent");
        connector_receivers.entry(p).or_default().push(m);
    }
    let connectors: Vec<NodeId> = connector_receivers.keys().copied().collect();
    let mut scope = connectors.clone();
    scope.extend_from_slice(&dominators);
    let connector_coloring = greedy_distance2_color(t, &connectors, &scope);

    // Each non-dominator is claimed by its lowest-id adjacent dominator.
    let mut is_dominator = vec![false; t.len()];
    for &m in &dominators {
        is_dominator[m] = true;
    }
    let mut dominator_receivers: BTreeMap<NodeId, Vec<NodeId>> =
        dominators.iter().map(|&m| (m, Vec::new())).collect();
    for &w in slice {
        if is_dominator[w] {
            continue;
        }
        let owner = t
            .neighbors(w)
            .iter()
            .copied()
            .find(|&m| is_dominator[m])
            .expect("maximal independent set dominates its slice");
        dominator_receivers.get_mut(&owner).unwrap().push(w);
    }

    let dominator_targets: Vec<NodeId> = dominators
        .iter()
        .copied()
        .filter(|m| !prune_empty || !dominator_receivers[m].is_empty())
        .collect();
    dominator_receivers.retain(|m, _| dominator_targets.contains(m));
    let dominator_coloring = sdl_distance2_color(t, &dominator_targets, slice);

    SlicePlan {
        dominators,
        connectors,
        connector_coloring,
        connector_receivers,
        dominator_targets,
        dominator_coloring,
        dominator_receivers,
    }
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
    fn single_node_is_empty() {
        let (t, d) = build(&[(0.0, 0.0)], &[1], 1);
        let s = bts_schedule(&t, &d, true).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.horizon(), 0);
    }

    #[test]
    fn two_nodes_pruned() {
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.0)], &[1, 1], 1);
        let s = bts_schedule(&t, &d, true).unwrap();
        assert_eq!(s.to_text(), "T=1\n1 0 1\n");
        assert_eq!(s.transmissions()[0].receivers, vec![1]);
    }

    #[test]
    fn two_nodes_literal() {
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.0)], &[1, 1], 1);
        let s = bts_schedule(&t, &d, false).unwrap();
        assert_eq!(s.to_text(), "T=2\n1 0 1\n2 1 1\n");
        assert!(s.transmissions()[1].receivers.is_empty());
    }

    #[test]
    fn channels_served_sequentially() {
        // Source with leaves on channels 1 and 2.
        let (t, d) = build(&[(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0)], &[1, 1, 2], 2);
        let s = bts_schedule(&t, &d, true).unwrap();
        assert_eq!(s.to_text(), "T=2\n1 0 1\n2 0 2\n");
    }

    #[test]
    fn shared_slice_neighbor_gets_distinct_slots() {
        // Line 0-1-2-3 plus a layer-2 pair. Dominators of layer 2 share a
        // common slice neighbour.
        let (t, d) = build(
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 0.9), (2.0, -0.9)],
            &[1; 5],
            1,
        );
        let plan = bts_plan(&t, &d, true).unwrap();
        let sl = plan.slice(1, 1);
        assert_eq!(sl.dominators, vec![1]);
        assert_eq!(sl.connectors, vec![0]);
        let s2 = plan.slice(2, 1);
        assert_eq!(s2.connectors, vec![1]);
        assert!(!s2.dominators.is_empty());
    }

    #[test]
    fn deterministic_and_layered() {
        for seed in 0..10 {
            let t = random_topology(150, 4, 100.0, 350.0, seed).unwrap();
            let d = build_layers(&t);
            let a = bts_plan(&t, &d, true).unwrap();
            let b = bts_plan(&t, &d, true).unwrap();
            assert_eq!(a, b);

            // Every transmission serving layer i comes after those serving i - 1.
            let mut last_by_layer: BTreeMap<usize, (Slot, Slot)> = BTreeMap::new();
            for tx in a.schedule.transmissions() {
                if let Some(&w) = tx.receivers.first() {
                    let li = d.layer_of(w).unwrap();
                    let e = last_by_layer.entry(li).or_insert((Slot::MAX, 0));
                    e.0 = e.0.min(tx.slot);
                    e.1 = e.1.max(tx.slot);
                }
            }
            let spans: Vec<_> = last_by_layer.values().collect();
            for w in spans.windows(2) {
                assert!(w[0].1 < w[1].0, "seed {seed}: {spans:?}");
            }
        }
    }
}
