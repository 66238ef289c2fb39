mod common;

use altlink::bracket::{bracket, mirror_symmetric};
use altlink::checkerboard::{dual, graph_of, is_isomorphic, reconstruct, unshaded_graph_of, IsoMode};
use altlink::conway::{parse, render};
use altlink::diagram::{build, canonical_code, sphere_iso, Diagram, ReflectionPolicy};
use altlink::flype::{find_flypes, orbit};
use proptest::prelude::*;

fn shuffled(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(0usize..4, n))
}

fn with_relabeling(max: usize) -> impl Strategy<Value = (Diagram, Vec<usize>, Vec<usize>)> {
    common::diagram(max).prop_flat_map(|d| {
        let n = d.crossing_count();
        (Just(d), shuffled(n)).prop_map(|(d, (p, s))| (d, p, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dual_is_an_involution(g in common::plane_graph(14)) {
        let gg = dual(&dual(&g));
        prop_assert_eq!(gg.vertex_count(), g.vertex_count());
        prop_assert!(is_isomorphic(&gg, &g, IsoMode::Embedded));
    }

    #[test]
    fn checkerboard_counts(d in common::diagram(12)) {
        let n = d.crossing_count();
        let g = graph_of(&d, false);
        let h = unshaded_graph_of(&d, false);
        prop_assert_eq!(g.edge_count(), n);
        prop_assert_eq!(h.edge_count(), n);
        prop_assert_eq!(g.vertex_count() + h.vertex_count(), n + 2);
        prop_assert!(is_isomorphic(&h, &dual(&g), IsoMode::Embedded));
    }

    #[test]
    fn mirror_swaps_graph_and_dual(d in common::diagram(12)) {
        let g = graph_of(&d, false);
        prop_assert!(is_isomorphic(&graph_of(&d.mirror(), false), &dual(&g), IsoMode::Embedded));
    }

    #[test]
    fn reconstruct_round_trips(d in common::diagram(12)) {
        let back = reconstruct(&graph_of(&d, true)).unwrap();
        prop_assert!(sphere_iso(&d, &back, ReflectionPolicy::PRESERVING).is_some());
    }

    #[test]
    fn reduce_is_idempotent(d in common::diagram(12)) {
        let r = d.reduce();
        prop_assert!(r.is_reduced());
        let p = ReflectionPolicy::PRESERVING;
        prop_assert_eq!(canonical_code(&r.reduce(), p), canonical_code(&r, p));
    }

    #[test]
    fn code_ignores_labels((d, perm, shift) in with_relabeling(12)) {
        let e = d.relabeled(&perm, &shift);
        for p in [ReflectionPolicy::PRESERVING, ReflectionPolicy::REFLECTING] {
            prop_assert_eq!(canonical_code(&e, p), canonical_code(&d, p));
        }
        prop_assert!(sphere_iso(&d, &e, ReflectionPolicy::PRESERVING).is_some());
    }

    #[test]
    fn parse_render_round_trip(e in common::expr(-3..5, 4)) {
        let text = render(&e);
        let back = parse(&text).unwrap();
        prop_assert_eq!(render(&back), text);
        prop_assert_eq!(back, e);
    }

    #[test]
    fn built_diagrams_alternate(d in common::built_diagram()) {
        prop_assert!(d.is_alternating());
        prop_assert!(d.is_connected());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_ignores_labels((d, perm, shift) in with_relabeling(10)) {
        prop_assert_eq!(bracket(&d.relabeled(&perm, &shift)).unwrap(), bracket(&d).unwrap());
    }

    #[test]
    fn mirror_inverts_the_variable(d in common::diagram(10)) {
        prop_assert_eq!(bracket(&d.mirror()).unwrap(), bracket(&d).unwrap().invert_variable());
        prop_assert_eq!(mirror_symmetric(&d.mirror()).unwrap(), mirror_symmetric(&d).unwrap());
    }

    #[test]
    fn bracket_survives_reduction_up_to_a_unit(d in common::diagram(10)) {
        // untwisting a curl multiplies the bracket by -A^{±3}
        let a = bracket(&d).unwrap();
        let b = bracket(&d.reduce()).unwrap();
        let terms = |p: &altlink::bracket::LaurentPoly| p.terms().map(|(_, c)| c.abs()).collect::<Vec<_>>();
        prop_assert_eq!(terms(&a), terms(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flypes_keep_the_bracket(d in common::prime_alternating(11)) {
        let b = bracket(&d).unwrap();
        let o = orbit(&d, 512).unwrap();
        for m in o.diagrams() {
            prop_assert!(m.is_alternating());
            prop_assert_eq!(m.crossing_count(), d.crossing_count());
            prop_assert_eq!(&bracket(m).unwrap(), &b);
        }
        for s in find_flypes(&d) {
            prop_assert!(s.side.len() < d.crossing_count());
        }
    }

    #[test]
    fn built_crossing_count_matches_expression(e in common::expr(1..4, 3)) {
        if let Ok(d) = build(&e) {
            prop_assert_eq!(d.crossing_count(), e.crossing_count());
        }
    }
}
