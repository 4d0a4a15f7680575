//! BFS layering from the source and the per-channel slices of each layer.

use crate::topo::Topology;
use crate::{Channel, NodeId};

/// Shortest-path (BFS) tree rooted at the source, split into layers and
/// per-channel slices `L_{i,c} = L_i ∩ H_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDecomposition {
    layer_of: Vec<Option<usize>>,
    spt_parent: Vec<Option<NodeId>>,
    layers: Vec<Vec<NodeId>>,
    // slices[i][c - 1]
    slices: Vec<Vec<Vec<NodeId>>>,
    unreachable: Vec<NodeId>,
    channel_count: Channel,
}

impl LayeredDecomposition {
    /// Depth `l` of the tree.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer_of(&self, v: NodeId) -> Option<usize> {
        self.layer_of[v]
    }

    pub fn spt_parent(&self, v: NodeId) -> Option<NodeId> {
        self.spt_parent[v]
    }

    /// Nodes of layer `i`, ascending.
    pub fn layer(&self, i: usize) -> &[NodeId] {
        &self.layers[i]
    }

    pub fn layers(&self) -> &[Vec<NodeId>] {
        &self.layers
    }

    /// Nodes of layer `i` listening on channel `c`, ascending.
    pub fn slice(&self, i: usize, c: Channel) -> &[NodeId] {
        &self.slices[i][(c - 1) as usize]
    }

    pub fn channel_count(&self) -> Channel {
        self.channel_count
    }

    pub fn unreachable(&self) -> &[NodeId] {
        &self.unreachable
    }

    pub fn is_connected(&self) -> bool {
        self.unreachable.is_empty()
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.layer_of[v].is_some()
    }

    pub fn reachable_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

/// Layer-synchronous BFS. Each layer is expanded in ascending id order, so
/// every node's tree parent is its lowest-id neighbour in the previous layer.
pub fn build_layers(t: &Topology) -> LayeredDecomposition {
    let n = t.len();
    let k = t.channel_count();
    let mut layer_of = vec![None; n];
    let mut spt_parent = vec![None; n];
    let mut layers = vec![vec![t.source()]];
    layer_of[t.source()] = Some(0);

    loop {
        let depth = layers.len();
        let mut next = Vec::new();
        for &u in &layers[depth - 1] {
            for &v in t.neighbors(u) {
                if layer_of[v].is_none() {
                    layer_of[v] = Some(depth);
                    spt_parent[v] = Some(u);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }

    let slices = layers
        .iter()
        .map(|layer| {
            let mut per_channel = vec![Vec::new(); k as usize];
            for &v in layer {
                per_channel[(t.channel(v) - 1) as usize].push(v);
            }
            per_channel
        })
        .collect();
    let unreachable = (0..n).filter(|&v| layer_of[v].is_none()).collect();

    LayeredDecomposition {
        layer_of,
        spt_parent,
        layers,
        slices,
        unreachable,
        channel_count: k,
    }
}

/// Depth of the BFS tree; no schedule can finish earlier.
pub fn lower_bound(d: &LayeredDecomposition) -> usize {
    d.depth()
}
