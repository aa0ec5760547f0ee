//! Randomized structural invariants over small tori: metric axioms,
//! neighborhood monotonicity, and consistency of the cut classifier with
//! its definitional brute-force counterparts.

use proptest::prelude::*;

use kcube::cuts::{
    classify_cut, closed_neighborhood, has_isolated_edge, has_isolated_vertex,
    survivor_components,
};
use kcube::{Torus, VertexSet};

fn torus() -> impl Strategy<Value = Torus> {
    // k^n stays at or below 125 vertices
    (2u64..=5, 1u32..=3).prop_map(|(k, n)| Torus::new(k, n).unwrap())
}

/// A torus together with a proper subset of its vertices.
fn torus_and_set() -> impl Strategy<Value = (Torus, VertexSet)> {
    torus().prop_flat_map(|t| {
        let nv = t.vertex_count();
        let max = nv as usize - 1;
        (
            Just(t),
            prop::collection::btree_set(0..nv, 0..=max),
        )
            .prop_map(|(t, codes)| (t, VertexSet::from_codes(t, codes).unwrap()))
    })
}

fn torus_and_codes<const M: usize>() -> impl Strategy<Value = (Torus, [u64; M])> {
    torus().prop_flat_map(|t| {
        let nv = t.vertex_count();
        (Just(t), std::array::from_fn(|_| 0..nv))
    })
}

proptest! {
    #[test]
    fn lee_distance_is_a_metric((t, [x, y, z]) in torus_and_codes::<3>()) {
        let (x, y, z) = (t.vertex(x).unwrap(), t.vertex(y).unwrap(), t.vertex(z).unwrap());
        prop_assert_eq!(t.lee_distance(x, x), 0);
        prop_assert_eq!(t.lee_distance(x, y), t.lee_distance(y, x));
        prop_assert!(t.lee_distance(x, z) <= t.lee_distance(x, y) + t.lee_distance(y, z));
        prop_assert_eq!(t.lee_distance(x, y) == 0, x == y);
        prop_assert_eq!(t.is_adjacent(x, y), t.lee_distance(x, y) == 1);
    }

    #[test]
    fn digit_strings_round_trip((t, [x]) in torus_and_codes::<1>()) {
        let v = t.vertex(x).unwrap();
        let s = t.vertex_string(v);
        prop_assert_eq!(s.len(), t.n() as usize);
        prop_assert_eq!(t.vertex_from_string(&s).unwrap(), v);
    }

    #[test]
    fn common_neighbors_match_brute_force((t, [x, y]) in torus_and_codes::<2>()) {
        prop_assume!(x != y);
        let (u, v) = (t.vertex(x).unwrap(), t.vertex(y).unwrap());
        let fast = t.common_neighbors(u, v).unwrap();
        let slow = t.neighbors(u).intersection(&t.neighbors(v)).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn closed_neighborhood_is_monotone((t, s) in torus_and_set()) {
        // drop every other element to get a guaranteed subset
        let smaller = VertexSet::from_codes(
            t,
            s.codes().iter().copied().step_by(2),
        ).unwrap();
        let ns = closed_neighborhood(&smaller);
        let nt = closed_neighborhood(&s);
        prop_assert!(smaller.is_subset_of(&s).unwrap());
        prop_assert!(ns.is_subset_of(&nt).unwrap() || s.codes() == smaller.codes());
    }

    #[test]
    fn survivor_components_partition_the_survivors((t, s) in torus_and_set()) {
        let comps = survivor_components(&s).unwrap();
        let total: usize = comps.iter().map(VertexSet::len).sum();
        prop_assert_eq!(total as u64, t.vertex_count() - s.len() as u64);
        for c in &comps {
            prop_assert!(!c.is_empty());
            prop_assert!(c.intersection(&s).unwrap().is_empty());
        }
        // no edge may join two distinct components
        for (i, c) in comps.iter().enumerate() {
            let reach = closed_neighborhood(c);
            for other in &comps[i + 1..] {
                prop_assert!(reach.intersection(other).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn classifier_agrees_with_definitions((_t, s) in torus_and_set()) {
        let class = classify_cut(&s).unwrap();
        let comps = survivor_components(&s).unwrap();
        let mut sizes: Vec<u64> = comps.iter().map(|c| c.len() as u64).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));

        prop_assert_eq!(&class.component_sizes, &sizes);
        prop_assert_eq!(class.is_cut, comps.len() > 1);
        prop_assert_eq!(class.isolated_vertex_present, has_isolated_vertex(&s));
        prop_assert_eq!(class.isolated_edge_present, has_isolated_edge(&s));
        for h in 0..=3u64 {
            let expected = comps.len() > 1 && sizes.iter().all(|&c| c > h);
            prop_assert_eq!(class.is_h_extra_cut(h), expected, "h={}", h);
        }
    }
}
