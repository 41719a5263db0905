//! Randomized structural properties: format round-trips, exact counting
//! identities on cones, LP duality, and enumeration cross-checks.

use proptest::prelude::*;

use conelab::certificates::{check_parameter_identities, cone_parameters, theorem_value};
use conelab::cones::{
    cone, generalized_cone, parse_graph_or_cone, parse_heights, serialize_cone, LoadedGraph,
};
use conelab::graph::{
    complete, cycle, direct_product, kneser, parse_graph, path_with_loop, serialize_graph, Graph,
};
use conelab::indep::{decompose_cone_independent, is_independent, maximal_independent_sets};
use conelab::ratlp::fractional_chromatic;
use conelab::ratlp::{verify_fractional_clique, verify_fractional_colouring};
use conelab::rational::{format_rational, parse_rational, Rational};

/// A graph on `1..=max` vertices with an arbitrary edge set (loops allowed
/// when `loops` is set), plus its edge mask for shrink-friendliness.
fn arb_graph(max: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u..n).map(move |v| (u, v)))
            .filter(|&(u, v)| loops || u != v)
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e)
                .collect();
            Graph::with_edges(n, &edges).expect("edges in range")
        })
    })
}

/// Heights in `1..=3`, one per pattern vertex.
fn arb_heights(pattern_size: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=3, pattern_size)
}

proptest! {
    #[test]
    fn graph_text_round_trips(g in arb_graph(9, true)) {
        let parsed = parse_graph(&serialize_graph(&g)).expect("own output parses");
        prop_assert_eq!(parsed, g);
    }

    #[test]
    fn cone_text_round_trips(
        g in arb_graph(5, false),
        h in arb_graph(3, false),
        heights in arb_heights(3),
    ) {
        let c = generalized_cone(&g, &h, &heights[..h.vertex_count()])
            .expect("cone builds");
        match parse_graph_or_cone(&serialize_cone(&c)).expect("own output parses") {
            LoadedGraph::Cone(back) => prop_assert_eq!(back, c),
            LoadedGraph::Plain(_) => prop_assert!(false, "labels were dropped"),
        }
    }

    #[test]
    fn rational_text_round_trips(n in any::<i64>(), d in 1u64..) {
        let r = Rational::new(n.into(), d.into());
        let back = parse_rational(&format_rational(&r)).expect("own output parses");
        prop_assert_eq!(back, r);
    }

    #[test]
    fn height_lists_round_trip(heights in proptest::collection::vec(1usize..=9, 1..=6)) {
        let spec: Vec<String> =
            heights.iter().enumerate().map(|(v, k)| format!("{v}:{k}")).collect();
        let parsed = parse_heights(&spec.join(","), heights.len()).expect("spec parses");
        prop_assert_eq!(parsed, heights);
    }

    #[test]
    fn parsers_never_panic_on_arbitrary_text(text in "\\PC*") {
        let _ = parse_graph(&text);
        let _ = parse_graph_or_cone(&text);
        let _ = parse_rational(&text);
        let _ = parse_heights(&text, 3);
    }

    /// |V| and |E| of a generalized cone in terms of the parts: every copy
    /// contributes its inner layers and an apex; layer-to-layer edges double
    /// the base's edges; each apex covers its top layer (the whole base for
    /// height 1), and apexes inherit the pattern's edges.
    #[test]
    fn cone_counts_are_exact(
        g in arb_graph(5, false),
        h in arb_graph(3, false),
        heights in arb_heights(3),
    ) {
        let heights = &heights[..h.vertex_count()];
        let c = generalized_cone(&g, &h, heights).expect("cone builds");
        let (nv, ne) = (g.vertex_count(), g.edge_count());
        let inner: usize = heights.iter().map(|k| k - 1).sum();
        prop_assert_eq!(
            c.graph().vertex_count(),
            nv * (1 + inner) + h.vertex_count()
        );
        let expected_edges = ne
            + heights.iter().map(|k| 2 * (k - 1) * ne + nv).sum::<usize>()
            + h.edge_count();
        prop_assert_eq!(c.graph().edge_count(), expected_edges);
    }

    #[test]
    fn plain_cone_counts_are_exact(g in arb_graph(6, false), n in 1usize..=4) {
        let c = cone(&g, n).expect("cone builds");
        prop_assert_eq!(c.graph().vertex_count(), n * g.vertex_count() + 1);
        prop_assert_eq!(
            c.graph().edge_count(),
            (2 * n - 1) * g.edge_count() + g.vertex_count()
        );
    }

    /// Direct products multiply: |V| exactly, and each unordered edge pair
    /// contributes two product edges (one per orientation pairing).
    #[test]
    fn direct_product_counts_are_exact(
        g in arb_graph(5, false),
        h in arb_graph(5, false),
    ) {
        let (p, labels) = direct_product(&g, &h);
        prop_assert_eq!(p.vertex_count(), g.vertex_count() * h.vertex_count());
        prop_assert_eq!(labels.len(), p.vertex_count());
        prop_assert_eq!(p.edge_count(), 2 * g.edge_count() * h.edge_count());
        for (i, &(x, y)) in labels.iter().enumerate() {
            for (j, &(xp, yp)) in labels.iter().enumerate() {
                prop_assert_eq!(
                    p.has_edge(i, j),
                    g.has_edge(x, xp) && h.has_edge(y, yp)
                );
            }
        }
    }

    #[test]
    fn splitting_a_subset_decides_independence(
        g in arb_graph(4, false),
        h in arb_graph(2, false),
        heights in arb_heights(2),
        picks in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let c = generalized_cone(&g, &h, &heights[..h.vertex_count()])
            .expect("cone builds");
        let total = c.graph().vertex_count();
        prop_assert!(total <= picks.len());
        let set: Vec<usize> = (0..total).filter(|&v| picks[v]).collect();
        let direct = is_independent(c.graph(), &set).expect("subset in range");
        let split = decompose_cone_independent(&c, &set).expect("decomposition runs");
        prop_assert_eq!(split.valid, direct);
    }
}

proptest! {
    // LP-backed properties pivot exact rationals; keep the case count low.
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_duality_holds_on_random_graphs(g in arb_graph(7, false)) {
        let lp = fractional_chromatic(&g).expect("LP solves");
        let primal = verify_fractional_colouring(&g, &lp.primal).expect("verifier runs");
        let dual = verify_fractional_clique(&g, &lp.dual, 1 << 20).expect("verifier runs");
        prop_assert!(primal.valid);
        prop_assert!(dual.valid);
        prop_assert_eq!(&primal.total, &lp.value);
        prop_assert_eq!(&dual.total, &lp.value);
        let n = Rational::from_integer((g.vertex_count() as i64).into());
        prop_assert!(lp.value >= Rational::from_integer(1.into()));
        prop_assert!(lp.value <= n);
    }

    /// Raising any copy height can only lower the cone's fractional value:
    /// the taller cone maps homomorphically onto the shorter one.
    #[test]
    fn taller_cones_never_increase_the_fractional_value(
        g in arb_graph(4, false).prop_filter("needs an edge", |g| g.edge_count() > 0),
        lows in arb_heights(2),
        bumps in proptest::collection::vec(0usize..=1, 2),
    ) {
        let k2 = complete(2).expect("complete");
        let highs: Vec<usize> =
            lows.iter().zip(&bumps).map(|(l, b)| l + b).collect();
        let low_cone = generalized_cone(&g, &k2, &lows).expect("cone builds");
        let high_cone = generalized_cone(&g, &k2, &highs).expect("cone builds");
        let low = fractional_chromatic(low_cone.graph()).expect("LP solves").value;
        let high = fractional_chromatic(high_cone.graph()).expect("LP solves").value;
        prop_assert!(high <= low);
    }

    #[test]
    fn enumerated_sets_match_brute_force(g in arb_graph(8, true)) {
        let family = maximal_independent_sets(&g, 1 << 16).expect("enumeration runs");
        prop_assert!(!family.truncated);
        let n = g.vertex_count();
        let mut brute = Vec::new();
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if !is_independent(&g, &set).expect("in range") {
                continue;
            }
            let maximal = (0..n).all(|v| {
                mask >> v & 1 == 1 || {
                    let mut bigger = set.clone();
                    bigger.push(v);
                    bigger.sort_unstable();
                    !is_independent(&g, &bigger).expect("in range")
                }
            });
            if maximal {
                brute.push(set);
            }
        }
        brute.sort();
        prop_assert_eq!(family.sets, brute);
    }

    /// The parameter identities are closed under any admissible rational
    /// inputs, not just the values arising from actual graphs.
    #[test]
    fn weight_identities_hold_for_random_parameters(
        gn in 2u32..=9, gd in 1u32..=3,
        hn in 1u32..=9, hd in 1u32..=3,
        n in 1usize..=6,
    ) {
        let cg = Rational::new(gn.into(), gd.into());
        let ch = Rational::new(hn.into(), hd.into());
        prop_assume!(cg >= Rational::from_integer(2.into()));
        prop_assume!(ch >= Rational::from_integer(1.into()));
        let params = cone_parameters(&cg, &ch, n).expect("parameters build");
        let report = check_parameter_identities(&params);
        let bad: Vec<&str> =
            report.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
        prop_assert!(report.all_hold, "failed: {}", bad.join(", "));
    }

    /// At height 1 the cone is a join, whose fractional value is the sum.
    #[test]
    fn height_one_value_is_the_sum(
        gn in 2u32..=9, gd in 1u32..=3,
        hn in 1u32..=9, hd in 1u32..=3,
    ) {
        let cg = Rational::new(gn.into(), gd.into());
        let ch = Rational::new(hn.into(), hd.into());
        prop_assume!(cg >= Rational::from_integer(2.into()));
        prop_assume!(ch >= Rational::from_integer(1.into()) && ch <= cg);
        let tv = theorem_value(&cg, &ch, 1).expect("closed form applies");
        prop_assert_eq!(tv.value, cg + ch);
    }
}

#[test]
fn generator_families_have_the_expected_shapes() {
    for n in 3..=9 {
        let g = cycle(n).expect("cycle builds");
        assert_eq!((g.vertex_count(), g.edge_count()), (n, n));
        assert!((0..n).all(|v| g.degree(v) == 2));
    }
    for n in 1..=8 {
        let g = complete(n).expect("complete builds");
        assert_eq!((g.vertex_count(), g.edge_count()), (n, n * (n - 1) / 2));
    }
    for n in 1..=6 {
        let g = path_with_loop(n).expect("path builds");
        assert_eq!((g.vertex_count(), g.edge_count()), (n + 1, n + 1));
        assert_eq!(g.loop_count(), 1);
        assert!(g.has_loop(0));
    }
    let choose = |s: usize, t: usize| (s - t + 1..=s).product::<usize>() / (1..=t).product::<usize>();
    for (s, t) in [(4, 1), (5, 2), (6, 2), (7, 3)] {
        let g = kneser(s, t).expect("kneser builds");
        assert_eq!(g.vertex_count(), choose(s, t));
        let degree = choose(s - t, t);
        assert!((0..g.vertex_count()).all(|v| g.degree(v) == degree));
        assert_eq!(g.edge_count(), g.vertex_count() * degree / 2);
    }
}
