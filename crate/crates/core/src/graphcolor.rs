//! Maximal independent sets, smallest-degree-last ordering and greedy
//! distance-2 colouring.

use std::collections::{BTreeMap, HashMap};

use crate::topo::Topology;
use crate::NodeId;

/// Greedy sequential MIS over `candidates`, scanned in the given order.
/// The result keeps selection order.
pub fn maximal_independent_set(t: &Topology, candidates: &[NodeId]) -> Vec<NodeId> {
    let mut blocked = vec![false; t.len()];
    let mut chosen = Vec::new();
    for &u in candidates {
        if blocked[u] {
            continue;
        }
        chosen.push(u);
        blocked[u] = true;
        for &w in t.neighbors(u) {
            blocked[w] = true;
        }
    }
    chosen
}

/// Colour per node, 1-based. `palette_size` is the largest colour used.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring {
    pub colors: BTreeMap<NodeId, u32>,
    pub palette_size: u32,
}

impl Coloring {
    pub fn color(&self, v: NodeId) -> Option<u32> {
        self.colors.get(&v).copied()
    }
}

/// Symmetric conflict relation over a finite node set, stored as adjacency
/// lists over local indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
}

impl ConflictGraph {
    /// Builds the graph from an arbitrary symmetric predicate. Quadratic in
    /// the node count.
    pub fn from_relation(nodes: &[NodeId], conflicts: impl Fn(NodeId, NodeId) -> bool) -> Self {
        let mut adj = vec![Vec::new(); nodes.len()];
        for a in 0..nodes.len() {
            for b in (a + 1)..nodes.len() {
                if conflicts(nodes[a], nodes[b]) {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        Self::from_parts(nodes.to_vec(), adj)
    }

    /// Conflicts are pairs of `members` at distance at most two in the
    /// subgraph of `t` induced by `scope`. `members` must lie in `scope`.
    pub fn distance2_in_scope(t: &Topology, members: &[NodeId], scope: &[NodeId]) -> Self {
        let mut in_scope = vec![false; t.len()];
        for &v in scope {
            in_scope[v] = true;
        }
        let mut local = vec![usize::MAX; t.len()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }

        let mut adj = vec![Vec::new(); members.len()];
        let mut stamp = vec![usize::MAX; t.len()];
        for (a, &u) in members.iter().enumerate() {
            stamp[u] = a;
            let mut touch = |v: NodeId, adj_a: &mut Vec<usize>| {
                if stamp[v] != a {
                    stamp[v] = a;
                    if local[v] != usize::MAX {
                        adj_a.push(local[v]);
                    }
                }
            };
            for &w in t.neighbors(u) {
                if !in_scope[w] {
                    continue;
                }
                touch(w, &mut adj[a]);
                for &x in t.neighbors(w) {
                    if in_scope[x] {
                        touch(x, &mut adj[a]);
                    }
                }
            }
            adj[a].sort_unstable();
        }
        Self::from_parts(members.to_vec(), adj)
    }

    fn from_parts(nodes: Vec<NodeId>, adj: Vec<Vec<usize>>) -> Self {
        let index = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        ConflictGraph { nodes, index, adj }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn conflicts(&self, u: NodeId, v: NodeId) -> bool {
        match (self.index.get(&u), self.index.get(&v)) {
            (Some(&a), Some(&b)) => self.adj[a].contains(&b),
            _ => false,
        }
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.index.get(&v).map_or(0, |&a| self.adj[a].len())
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let a = self.index.get(&v).copied();
        a.into_iter()
            .flat_map(move |a| self.adj[a].iter().map(move |&b| self.nodes[b]))
    }

    /// First-fit colouring in `order`: each node takes the smallest colour
    /// not used by an already coloured conflicting node.
    pub fn greedy_color(&self, order: &[NodeId]) -> Coloring {
        let mut color = vec![0u32; self.nodes.len()];
        let mut palette = 0;
        let mut used = Vec::new();
        for &v in order {
            let a = self.index[&v];
            used.clear();
            used.extend(self.adj[a].iter().map(|&b| color[b]).filter(|&c| c > 0));
            used.sort_unstable();
            used.dedup();
            let mut c = 1;
            for &u in &used {
                if u == c {
                    c += 1;
                } else if u > c {
                    break;
                }
            }
            color[a] = c;
            palette = palette.max(c);
        }
        Coloring {
            colors: order.iter().map(|&v| (v, color[self.index[&v]])).collect(),
            palette_size: palette,
        }
    }
}

/// Classical smallest-degree-last ordering: repeatedly delete a node of
/// minimum remaining degree (lowest id on ties), then reverse the deletion
/// sequence.
pub fn smallest_degree_last_order(g: &ConflictGraph) -> Vec<NodeId> {
    let m = g.len();
    let mut degree: Vec<usize> = g.adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; m];
    let mut sequence = Vec::with_capacity(m);
    for _ in 0..m {
        let pick = (0..m)
            .filter(|&a| !removed[a])
            .min_by_key(|&a| (degree[a], g.nodes[a]))
            .expect("nodes remain");
        removed[pick] = true;
        for &b in &g.adj[pick] {
            if !removed[b] {
                degree[b] -= 1;
            }
        }
        sequence.push(g.nodes[pick]);
    }
    sequence.reverse();
    sequence
}

/// Colours `targets` in order; a target conflicts with every other target
/// within distance two of it inside the subgraph induced by `scope`.
pub fn greedy_distance2_color(t: &Topology, targets: &[NodeId], scope: &[NodeId]) -> Coloring {
    ConflictGraph::distance2_in_scope(t, targets, scope).greedy_color(targets)
}

/// Colours `targets` under their smallest-degree-last ordering in the
/// distance-2 conflict graph induced by `scope`.
pub fn sdl_distance2_color(t: &Topology, targets: &[NodeId], scope: &[NodeId]) -> Coloring {
    let g = ConflictGraph::distance2_in_scope(t, targets, scope);
    let order = smallest_degree_last_order(&g);
    g.greedy_color(&order)
}

/// Largest number of `set` members adjacent to a single node of `t`.
/// At most five whenever `set` is independent in a unit disk graph.
pub fn max_neighbors_in_set(t: &Topology, set: &[NodeId]) -> usize {
    let mut member = vec![false; t.len()];
    for &v in set {
        member[v] = true;
    }
    (0..t.len())
        .map(|u| t.neighbors(u).iter().filter(|&&w| member[w]).count())
        .max()
        .unwrap_or(0)
}

/// Largest number of `set` members within two hops of a single node of `t`
/// (the node itself included). At most nineteen for independent sets in a
/// unit disk graph.
pub fn max_two_hop_members(t: &Topology, set: &[NodeId]) -> usize {
    let mut member = vec![false; t.len()];
    for &v in set {
        member[v] = true;
    }
    let mut stamp = vec![usize::MAX; t.len()];
    let mut best = 0;
    for u in 0..t.len() {
        let mut count = 0;
        let mut visit = |v: NodeId, count: &mut usize| {
            if stamp[v] != u {
                stamp[v] = u;
                if member[v] {
                    *count += 1;
                }
            }
        };
        visit(u, &mut count);
        for &w in t.neighbors(u) {
            visit(w, &mut count);
            for &x in t.neighbors(w) {
                visit(x, &mut count);
            }
        }
        best = best.max(count);
    }
    best
}

pub fn is_independent(t: &Topology, set: &[NodeId]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !t.adjacent(u, v)))
}
