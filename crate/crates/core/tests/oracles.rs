use mcbcast::{
    brute_force_optimal, bts_schedule, build_broadcast_tree, build_layers, ets_schedule, lower_bound,
    random_topology, InterferenceModel, Optimum, Topology,
};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Connectivity from raw coordinates, independent of the adjacency lists.
fn connected_by_union_find(t: &Topology) -> bool {
    let pts = t.points();
    let r2 = t.radius() * t.radius();
    let mut uf = UnionFind::new(pts.len());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i].x - pts[j].x).powi(2) + (pts[i].y - pts[j].y).powi(2) <= r2 {
                uf.union(i, j);
            }
        }
    }
    let root = uf.find(0);
    (0..pts.len()).all(|v| uf.find(v) == root)
}

#[test]
fn dense_deployments_are_mostly_connected() {
    let mut connected = 0;
    for seed in 0..100 {
        let t = random_topology(200, 10, 100.0, 200.0, seed).unwrap();
        let oracle = connected_by_union_find(&t);
        assert_eq!(build_layers(&t).is_connected(), oracle, "seed {seed}");
        connected += usize::from(oracle);
    }
    println!("connected draws: {connected}/100");
    assert!(connected >= 90, "only {connected}/100 draws connected");
}

#[test]
fn sparse_connectivity_agrees_with_union_find() {
    for seed in 0..200 {
        let t = random_topology(40, 3, 100.0, 500.0, seed).unwrap();
        assert_eq!(build_layers(&t).is_connected(), connected_by_union_find(&t), "seed {seed}");
    }
}

#[test]
fn optimum_is_sandwiched() {
    let mut checked = 0;
    for seed in 0..400u64 {
        let n = 2 + (seed % 7) as usize;
        let k = 1 + (seed % 2) as u32;
        let t = random_topology(n, k, 100.0, 200.0, seed).unwrap();
        let d = build_layers(&t);
        let l = lower_bound(&d) as u32;
        let b = build_broadcast_tree(&t, &d).unwrap();
        let horizons = [
            bts_schedule(&t, &d, true).unwrap().horizon(),
            bts_schedule(&t, &d, false).unwrap().horizon(),
            ets_schedule(&t, &d, &b, InterferenceModel::ChannelAware, true).schedule.horizon(),
            ets_schedule(&t, &d, &b, InterferenceModel::Literal, true).schedule.horizon(),
        ];
        let best = *horizons.iter().min().unwrap();
        let Optimum::Slots(opt) = brute_force_optimal(&t, best).unwrap() else {
            panic!("seed {seed}: optimum exceeds a valid schedule of length {best}");
        };
        assert!(l <= opt && opt <= best, "seed {seed}: l={l} opt={opt} best={best}");
        checked += 1;
    }
    assert_eq!(checked, 400);
}

#[test]
fn disconnected_graph_serves_reachable_part() {
    let t = Topology::from_text("3 2 100 0\n0 0 0 1\n1 90 0 2\n2 900 0 1\n").unwrap();
    let d = build_layers(&t);
    assert_eq!(d.unreachable(), &[2]);
    let s = bts_schedule(&t, &d, true).unwrap();
    assert_eq!(s.to_text(), "T=1\n1 0 2\n");
    assert_eq!(brute_force_optimal(&t, 5).unwrap(), Optimum::Slots(1));
}
