mod common;

use common::naive_rainbow;
use hypermatch_core::constructions::{complete, space_barrier};
use hypermatch_core::rainbow::{
    almost_perfect_rainbow, pokrovskiy_rainbow, rainbow_m_plus_q, rainbow_or_dominating, validate_rainbow,
    HypergraphFamily, RainbowConfig, RainbowRun, StabilityOutcome,
};
use hypermatch_core::rational::{floor_usize, frac, int};
use hypermatch_core::{DegreeProfile, Error, Result};
use proptest::prelude::*;

/// Best effort may decline (unmet or inconclusive) but never produce a bad
/// matching or hit an internal inconsistency.
fn accept(r: Result<RainbowRun>, f: &HypergraphFamily, best: usize) -> std::result::Result<(), TestCaseError> {
    match r {
        Ok(run) => {
            prop_assert!(validate_rainbow(f, &run.matching).is_ok());
            prop_assert!(run.matching.len() <= best);
        }
        Err(Error::HypothesisUnmet(_) | Error::Inconclusive(_)) => {}
        Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn constructive_outputs_are_valid_and_dominated(f in common::families(3, 4, 4, 0.5)) {
        let best = naive_rainbow(&f);
        let profile = f.common_codegrees();
        let m = f.min_multiplicity(1 << 12).unwrap();
        let cfg = RainbowConfig::best_effort();
        accept(almost_perfect_rainbow(&f, &profile, m, &[], &cfg), &f, best)?;
        accept(almost_perfect_rainbow(&f, &profile, 0, &[0], &cfg), &f, best)?;
        accept(rainbow_m_plus_q(&f, &profile, m, &cfg), &f, best)?;
        accept(pokrovskiy_rainbow(&f, &profile, &cfg), &f, best)?;
        match rainbow_or_dominating(&f, &profile, frac(1, 4), &cfg) {
            Ok(StabilityOutcome::PerfectRainbow(mm)) => {
                prop_assert!(validate_rainbow(&f, &mm).is_ok());
                prop_assert_eq!(mm.len(), f.t());
            }
            Ok(StabilityOutcome::DominatedColours { colours, dominating_sets }) => {
                let cap = floor_usize((int(1) + int(6) * frac(1, 4)) * int(profile.total()));
                for (j, d) in colours.iter().zip(&dominating_sets) {
                    prop_assert!(f.member(*j).is_dominating(d));
                    prop_assert!(d.len() <= cap);
                }
            }
            Err(Error::Inconclusive(_) | Error::HypothesisUnmet(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn required_colours_appear_on_complete_members(n in 4usize..7, t in 2usize..5, c in 0usize..5) {
        let f = HypergraphFamily::new(vec![complete(3, n).unwrap(); t]).unwrap();
        let c = c % t;
        let run = almost_perfect_rainbow(&f, &DegreeProfile::new(vec![1, 0, 0]), 0, &[c], &RainbowConfig::best_effort()).unwrap();
        prop_assert!(run.matching.uses_colour(c));
        prop_assert_eq!(run.matching.len(), 1);
    }
}

#[test]
fn identical_space_barriers_are_dominated() {
    for (n, a) in [(6, vec![1, 1, 0]), (8, vec![2, 1, 0]), (9, vec![1, 1, 1])] {
        let p = DegreeProfile::new(a);
        let s = space_barrier(3, n, &p).unwrap().graph;
        let f = HypergraphFamily::new(vec![s; p.total()]).unwrap();
        match rainbow_or_dominating(&f, &p, frac(1, 10), &RainbowConfig::best_effort()).unwrap() {
            StabilityOutcome::DominatedColours {
                colours,
                dominating_sets,
            } => {
                assert_eq!(colours.len(), p.total());
                assert!(dominating_sets
                    .iter()
                    .zip(&colours)
                    .all(|(d, &j)| f.member(j).is_dominating(d)));
            }
            other => panic!("expected dominated colours, got {other:?}"),
        }
    }
}
