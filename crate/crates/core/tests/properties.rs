use std::collections::BTreeSet;

use proptest::prelude::*;

use tdomset::algorithms::{log_star, ChooseSmallest, NamedAlgorithm, RulingParams};
use tdomset::graph::{parse_graph, write_graph, Label, LabeledGraph, RingSpec};
use tdomset::sim::{execute, execute_at, views_equal, AlgorithmFamily};
use tdomset::verify::{check_certificates, is_k_spaced, is_t_dominating, window_check_ring};

/// A connected graph: a random tree plus extra edges, labels a shuffled
/// subset of `1..=bound`.
fn connected_graph() -> impl Strategy<Value = LabeledGraph> {
    (2usize..30)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                proptest::collection::vec((0..n, 0..n), 0..n),
                Just((1..=3 * n as Label).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, parents, extra, labels)| {
            let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
            for v in 1..n {
                edges.insert((parents[v - 1].index(v), v));
            }
            for (a, b) in extra {
                if a != b
                    && !edges.contains(&(a.min(b), a.max(b)))
                    && !edges.contains(&(a.max(b), a.min(b)))
                {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            let edges: Vec<_> = edges.into_iter().collect();
            LabeledGraph::from_edges(labels[..n].to_vec(), &edges, 3 * n as Label).unwrap()
        })
}

fn shuffled_ring(min: usize, max: usize) -> impl Strategy<Value = RingSpec> {
    (min..max, any::<u64>()).prop_map(|(n, seed)| RingSpec::shuffled(n, seed).unwrap())
}

/// Members as ring positions.
fn gaps(bits: &[bool]) -> Vec<usize> {
    let pos: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
    (0..pos.len())
        .map(|i| (pos[(i + 1) % pos.len()] + bits.len() - pos[i] - 1) % bits.len() + 1)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_star_is_monotone(a in 1u64.., b in 1u64..) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(log_star(lo).unwrap() <= log_star(hi).unwrap());
    }

    #[test]
    fn log_star_of_power_of_two(m in 1u64..64) {
        prop_assert_eq!(log_star(1 << m).unwrap(), 1 + log_star(m).unwrap());
    }

    #[test]
    fn choose_smallest_on_graphs(g in connected_graph(), t in 0u32..10) {
        let res = execute(&ChooseSmallest::new(t), &g, t).unwrap();
        prop_assert!(is_t_dominating(&g, &res.member_set, t).unwrap().verdict);
        prop_assert_eq!(res.rounds_used, 2 * (t / 2));
        prop_assert!(check_certificates(&g, &res, t).verdict);
        let n = g.node_count();
        prop_assert!(res.size() <= n.saturating_sub((t / 2) as usize).max(1));
        // the largest floor(T/2) labels never join
        let mut labels = g.labels().to_vec();
        labels.sort_unstable();
        for &l in labels.iter().rev().take((t / 2) as usize) {
            if res.size() < n {
                prop_assert!(!res.is_member(g.node_of(l).unwrap()) || n <= (t / 2) as usize);
            }
        }
    }

    #[test]
    fn ruling_set_spacing(ring in shuffled_ring(3, 160), level in 0u32..3) {
        let n = ring.len();
        let t = RulingParams::cost(n as Label, level) as u32;
        let g = ring.to_graph(n as Label).unwrap();
        let alg = NamedAlgorithm::RulingSet.instantiate(t, n as Label);
        let res = execute(alg.as_ref(), &g, t).unwrap();
        let k = RulingParams::new(t, n as Label).k.unwrap();
        prop_assert!(res.rounds_used <= t);
        prop_assert!(is_t_dominating(&g, &res.member_set, k).unwrap().verdict);
        prop_assert!(check_certificates(&g, &res, k).verdict);
        if res.size() > 1 {
            prop_assert!(is_k_spaced(&g, &res.member_set, k).unwrap().verdict);
            prop_assert!(gaps(&res.bits()).iter().all(|&d| d <= 2 * k as usize + 1));
            prop_assert!(res.size() <= n / (k as usize + 1));
        }
    }

    /// Splicing a segment into a different ring keeps the views, and so the
    /// outputs, of nodes deep inside the segment.
    #[test]
    fn cut_and_paste_preserves_outputs(
        n in 12usize..60,
        seed in any::<u64>(),
        t in 1u32..4,
        alg in prop::sample::select(NamedAlgorithm::ALL.to_vec()),
    ) {
        let a = RingSpec::shuffled(n, seed).unwrap();
        let seg = 2 * t as usize + 4;
        prop_assume!(n > seg + 2);
        // keep the segment, reverse the rest
        let mut labels = a.labels()[..seg].to_vec();
        labels.extend(a.labels()[seg..].iter().rev());
        let b = RingSpec::new(labels).unwrap();
        let (ga, gb) = (a.to_graph(n as Label).unwrap(), b.to_graph(n as Label).unwrap());
        let inst = alg.instantiate(t, n as Label);
        let (ra, rb) = (execute(inst.as_ref(), &ga, t).unwrap(), execute(inst.as_ref(), &gb, t).unwrap());
        for p in t as usize..seg - t as usize {
            prop_assert!(views_equal(&ga.ball(p, t).unwrap(), &gb.ball(p, t).unwrap()));
            prop_assert_eq!(ra.is_member(p), rb.is_member(p));
        }
    }

    /// Deciding from a sub-view of a larger view agrees with the direct run.
    #[test]
    fn nested_agreement(ring in shuffled_ring(5, 40), t in 0u32..5, extra in 0u32..4, v in any::<prop::sample::Index>()) {
        let n = ring.len();
        let g = ring.to_graph(n as Label).unwrap();
        let alg = ChooseSmallest::new(t);
        let res = execute(&alg, &g, t).unwrap();
        let v = v.index(n);
        let big = g.ball(v, t + extra).unwrap();
        for (w, d) in g.ball_nodes(v, extra).unwrap() {
            prop_assert!(d <= extra);
            let out = execute_at(&alg, &big, g.label(w), t).unwrap();
            prop_assert_eq!(&out, &res.outputs[w]);
        }
    }

    #[test]
    fn window_check_matches_domination(ring in shuffled_ring(3, 40), t in 0u32..6, mask in any::<u64>()) {
        let n = ring.len();
        prop_assume!(n > 2 * t as usize);
        let g = ring.to_graph(n as Label).unwrap();
        let set: BTreeSet<usize> = (0..n).filter(|i| mask >> (i % 64) & 1 == 1 && i % 3 != 0).collect();
        prop_assert_eq!(
            is_t_dominating(&g, &set, t).unwrap().verdict,
            window_check_ring(&ring, &set, t).unwrap().verdict
        );
    }

    #[test]
    fn graph_text_round_trip(g in connected_graph()) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn relabelling_keeps_domination(ring in shuffled_ring(5, 50), t in 1u32..6) {
        // ChooseSmallest output depends on labels, but any output stays
        // dominating under every labelling
        let n = ring.len();
        let mut labels = ring.labels().to_vec();
        labels.reverse();
        for spec in [ring, RingSpec::new(labels).unwrap()] {
            let g = spec.to_graph(n as Label).unwrap();
            let res = execute(&ChooseSmallest::new(t), &g, t).unwrap();
            prop_assert!(is_t_dominating(&g, &res.member_set, t).unwrap().verdict);
        }
    }
}
