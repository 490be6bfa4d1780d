mod common;

use minorlab::expansion::{check_expander_exact, find_violation_heuristic, ExpansionProfile, HeuristicOptions};
use minorlab::extraction::{
    decode_trace, encode_trace, extract_expander, verify_extraction_trace, ExtractionTrace, PipelineConfig,
};
use minorlab::gen::{gen, girth, GenModel, GenSpec};
use minorlab::oracle::{brute_force_minor, verify_minor_model};
use minorlab::Graph;
use proptest::prelude::*;

use common::{density, q};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn profile(kind: u8, n: usize) -> ExpansionProfile {
    match kind % 4 {
        0 => ExpansionProfile::delta(q(1, 256)).unwrap(),
        1 => ExpansionProfile::delta(q(32, 1)).unwrap(),
        2 => ExpansionProfile::delta_n(q(1, 10), n.max(4)).unwrap(),
        _ => ExpansionProfile::delta_n(q(1, 1), n.max(4)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn heuristic_violations_are_genuine(g in graph(12), kind in any::<u8>(), seed in any::<u64>()) {
        let p = profile(kind, g.order());
        let opts = HeuristicOptions { probe_cap: 8, seed };
        if let Some(v) = find_violation_heuristic(&g, &p, &opts) {
            prop_assert!(v.is_genuine(&g, &p));
            prop_assert!(!check_expander_exact(&g, &p, 20).unwrap().is_certified());
        }
    }

    #[test]
    fn traces_replay_and_round_trip(g in graph(14), kind in any::<u8>(), seed in any::<u64>()) {
        prop_assume!(g.edge_count() > 0);
        let p = profile(kind, g.order());
        let cfg = PipelineConfig { stop_order_delta: 4, rng_seed: seed, ..PipelineConfig::default() };
        let (h, trace) = extract_expander(&g, &p, &cfg).unwrap();
        prop_assert!(verify_extraction_trace(&g, &trace).unwrap());
        prop_assert!(density(&h) >= trace.density_floor());
        prop_assert_eq!(&decode_trace(&encode_trace(&trace)).unwrap(), &trace);
        prop_assert_eq!(&ExtractionTrace::from_json(&trace.to_json()).unwrap(), &trace);
        let mut forged = trace.clone();
        forged.final_density = minorlab::Density::new(h.edge_count() + 1, h.order()).unwrap();
        prop_assert!(!verify_extraction_trace(&g, &forged).unwrap());
    }

    #[test]
    fn oracle_is_monotone(g in graph(8), t in 2usize..=5, extra in any::<(u8, u8)>()) {
        let found = brute_force_minor(&g, t).unwrap();
        if let Some(m) = &found {
            prop_assert!(verify_minor_model(&g, m));
            prop_assert!(brute_force_minor(&g, t - 1).unwrap().is_some());
        }
        let n = g.order();
        let (u, v) = (extra.0 as usize % n, extra.1 as usize % n);
        if u != v && !g.has_edge(u, v) && found.is_some() {
            let edges: Vec<_> = g.edges().chain([(u.min(v), u.max(v))]).collect();
            let bigger = Graph::from_edges(n, edges).unwrap();
            prop_assert!(brute_force_minor(&bigger, t).unwrap().is_some());
        }
    }

    #[test]
    fn high_girth_meets_target(n in 20usize..200, target in 3u64..7, seed in any::<u64>()) {
        let spec = GenSpec::new(GenModel::HighGirth, n, target, seed);
        let g = gen(&spec).unwrap();
        prop_assert!(girth(&g).is_none_or(|c| c >= target as usize));
        prop_assert_eq!(gen(&spec).unwrap(), g);
    }
}
