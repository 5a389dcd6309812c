mod common;

use common::{naive_nu, naive_rainbow};
use hypermatch_core::constructions::{complete, divisibility_barrier, space_barrier};
use hypermatch_core::oracles::{
    graph_from_mask, max_matching_exact, max_rainbow_matching_exact, min_dominating_set_exact, tuple_count,
};
use hypermatch_core::rainbow::HypergraphFamily;
use hypermatch_core::{DegreeProfile, OracleBudget};
use proptest::prelude::*;

fn nu(h: &hypermatch_core::KPartiteHypergraph) -> usize {
    let s = max_matching_exact(h, OracleBudget::default()).unwrap();
    assert!(s.is_exact());
    s.into_value().len()
}

// Frozen values, each cross-checked against the subset enumeration.
#[test]
fn frozen_matching_numbers() {
    let cases = [
        (divisibility_barrier(3, 4, None).unwrap().graph, 3),
        (divisibility_barrier(3, 2, None).unwrap().graph, 1),
        (
            space_barrier(3, 4, &DegreeProfile::new(vec![1, 1, 1])).unwrap().graph,
            3,
        ),
        (
            space_barrier(3, 5, &DegreeProfile::new(vec![2, 1, 0])).unwrap().graph,
            3,
        ),
        (complete(3, 4).unwrap(), 4),
        (complete(4, 3).unwrap(), 3),
    ];
    for (h, want) in cases {
        assert_eq!(naive_nu(&h), want);
        assert_eq!(nu(&h), want);
    }
}

#[test]
fn divisibility_barrier_is_never_perfect() {
    for n in [2usize, 4] {
        for a in 0..=n {
            for b in 0..=n {
                for c in 0..=n {
                    let sizes = [a, b, c];
                    let Ok(con) = divisibility_barrier(3, n, Some(&sizes)) else {
                        continue;
                    };
                    assert_eq!(nu(&con.graph), n - 1, "sizes {sizes:?}");
                }
            }
        }
    }
}

#[test]
fn space_barrier_reaches_its_sum() {
    for n in 1..=4usize {
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let p = DegreeProfile::new(vec![a, b, c]);
                    let g = space_barrier(3, n, &p).unwrap().graph;
                    assert_eq!(nu(&g), a + b + c, "n={n} a={:?}", p.as_slice());
                }
            }
        }
    }
}

#[test]
fn frozen_rainbow_numbers() {
    let s = space_barrier(3, 4, &DegreeProfile::new(vec![1, 0, 0])).unwrap().graph;
    let f = HypergraphFamily::new(vec![s; 3]).unwrap();
    assert_eq!(naive_rainbow(&f), 1);
    assert_eq!(
        max_rainbow_matching_exact(&f, OracleBudget::default())
            .unwrap()
            .value()
            .len(),
        1
    );

    let c = complete(3, 3).unwrap();
    let f = HypergraphFamily::new(vec![c.clone(), c.clone(), c]).unwrap();
    assert_eq!(
        max_rainbow_matching_exact(&f, OracleBudget::default())
            .unwrap()
            .value()
            .len(),
        3
    );
}

#[test]
fn frozen_domination_numbers() {
    let s = space_barrier(3, 5, &DegreeProfile::new(vec![1, 1, 1])).unwrap().graph;
    let d = min_dominating_set_exact(&s, 5, OracleBudget::default()).unwrap();
    assert_eq!(d.value().as_ref().map(Vec::len), Some(3));
    let d = min_dominating_set_exact(&s, 2, OracleBudget::default()).unwrap();
    assert!(d.is_exact() && d.value().is_none());
}

#[test]
fn all_small_graphs_are_enumerated() {
    assert_eq!(tuple_count(&[2, 2, 2]), Some(8));
    for i in 0..256u64 {
        let g = graph_from_mask(&[2, 2, 2], i).unwrap();
        assert_eq!(g.edge_count() as u32, i.count_ones());
        assert_eq!(nu(&g), naive_nu(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matching_oracle_agrees_with_enumeration(h in common::graphs(3, 4, 0.3)) {
        let s = max_matching_exact(&h, OracleBudget::default()).unwrap();
        prop_assert!(s.is_exact());
        h.validate_matching(s.value()).unwrap();
        prop_assert_eq!(s.value().len(), naive_nu(&h));
    }

    #[test]
    fn rainbow_oracle_agrees_with_enumeration(f in common::families(3, 3, 4, 0.3)) {
        let s = max_rainbow_matching_exact(&f, OracleBudget::default()).unwrap();
        prop_assert!(s.is_exact());
        hypermatch_core::rainbow::validate_rainbow(&f, s.value()).unwrap();
        prop_assert_eq!(s.value().len(), naive_rainbow(&f));
    }

    #[test]
    fn singleton_family_is_plain_matching(h in common::graphs(3, 3, 0.4)) {
        let f = HypergraphFamily::new(vec![h.clone()]).unwrap();
        let r = max_rainbow_matching_exact(&f, OracleBudget::default()).unwrap();
        prop_assert_eq!(r.value().len(), naive_nu(&h).min(1));
    }

    #[test]
    fn dominating_sets_dominate(h in common::graphs(3, 3, 0.3)) {
        let d = min_dominating_set_exact(&h, 9, OracleBudget::default()).unwrap();
        let set = d.value().clone().unwrap();
        prop_assert!(h.is_dominating(&set));
        // Every matching edge needs its own vertex.
        prop_assert!(set.len() >= naive_nu(&h));
    }
}
