use mcbcast::{
    bts_schedule, build_broadcast_tree, build_layers, ets_schedule, random_topology, replay, InterferenceModel,
    Point, Schedule, Topology,
};
use proptest::prelude::*;

fn arb_topology(max_n: usize, max_k: u32) -> impl Strategy<Value = Topology> {
    (1..=max_n, 1..=max_k, 50.0..400.0f64, any::<u64>())
        .prop_map(|(n, k, side, seed)| random_topology(n, k, 100.0, side, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_matches_closed_disk(t in arb_topology(40, 4)) {
        let r2 = t.radius() * t.radius();
        for u in 0..t.len() {
            prop_assert!(!t.adjacent(u, u));
            for v in 0..t.len() {
                let (a, b) = (t.points()[u], t.points()[v]);
                let d2 = (a.x - b.x).powi(2) + (a.y - b.y).powi(2);
                prop_assert_eq!(t.adjacent(u, v), u != v && d2 <= r2);
                prop_assert_eq!(t.adjacent(u, v), t.adjacent(v, u));
            }
            let listed: Vec<usize> = (0..t.len()).filter(|&v| t.adjacent(u, v)).collect();
            prop_assert_eq!(t.neighbors(u), listed.as_slice());
        }
    }

    #[test]
    fn two_hop_matches_depth_two_search(t in arb_topology(30, 2)) {
        for u in 0..t.len() {
            let mut within = vec![false; t.len()];
            within[u] = true;
            for &w in t.neighbors(u) {
                within[w] = true;
                for &x in t.neighbors(w) {
                    within[x] = true;
                }
            }
            for v in 0..t.len() {
                prop_assert_eq!(t.within_two_hops(u, v), within[v], "{} {}", u, v);
            }
        }
    }

    #[test]
    fn topology_text_round_trips(t in arb_topology(25, 5)) {
        let back = Topology::from_text(&t.to_text()).unwrap();
        prop_assert_eq!(back.len(), t.len());
        prop_assert_eq!(back.assignment(), t.assignment());
        for u in 0..t.len() {
            prop_assert_eq!(back.neighbors(u), t.neighbors(u));
        }
        prop_assert_eq!(back.to_text(), t.to_text());
    }

    #[test]
    fn schedules_replay_clean(t in arb_topology(60, 4), prune in any::<bool>(), literal in any::<bool>()) {
        let d = build_layers(&t);
        let model = if literal { InterferenceModel::Literal } else { InterferenceModel::ChannelAware };
        let b = build_broadcast_tree(&t, &d).unwrap();
        let ets = ets_schedule(&t, &d, &b, model, prune).schedule;
        let bts = bts_schedule(&t, &d, prune).unwrap();
        for s in [bts, ets] {
            let r = replay(&t, &s, true);
            prop_assert!(r.ok, "{}", r.render());
            for v in 0..t.len() {
                prop_assert_eq!(r.rcv_time[v].is_some(), d.is_reachable(v));
            }
            let back = Schedule::from_text(&s.to_text()).unwrap();
            prop_assert_eq!(back.to_text(), s.to_text());
        }
    }
}

#[test]
fn two_node_text_fixture() {
    let t = Topology::from_text("2 1 100 0\n0 0 0 1\n1 100 0 1\n").unwrap();
    assert!(t.adjacent(0, 1));
    assert_eq!(t.points()[1], Point::new(100.0, 0.0));
}
