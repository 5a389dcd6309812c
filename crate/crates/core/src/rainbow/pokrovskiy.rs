//! Perfect rainbow matchings by induction on the number of colours.

use alloc::{format, string::String, vec::Vec};

use super::{check_degrees, check_shape, finish, Builder, HypergraphFamily, RainbowConfig, RainbowRun};
use crate::error::{unmet, violation, Result};
use crate::graph::{DegreeProfile, Edge, KPartiteHypergraph, Position, VertexMask, VertexRef, HOLE};

const STEP: &str = "pokrovskiy_rainbow";

/// A rainbow matching using every colour.
///
/// Colour `t` is handled last. If `H_t` has a matching of size
/// `kt - k + 1` the other colours are matched first and one of those edges
/// is untouched. Otherwise the vertices of a maximal matching `D` dominate
/// `H_t`; among disjoint (k-1)-tuples outside `D` avoiding the widest class
/// `i`, a vertex `v` of class `i` completing the most of them is reserved,
/// the other colours are matched with `v` deleted, and one of `v`'s tuples
/// finishes the job.
///
/// Guaranteed mode needs `t <= Q <= n / k^10` and the codegree profile. In
/// best effort `k^10` becomes `config.pokrovskiy_slack` (0 disables the
/// check), the tuple sample is clamped to what fits, and colours that
/// cannot be placed are skipped.
pub fn pokrovskiy_rainbow(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    config: &RainbowConfig,
) -> Result<RainbowRun> {
    check_shape(family, profile)?;
    let (k, t) = (family.k(), family.t());
    let q = profile.total() as u128;
    let n = family.min_class_size() as u128;
    let guaranteed = config.mode.is_guaranteed();
    if guaranteed {
        let k10 = (k as u128).pow(10);
        if t as u128 > q || q * k10 > n {
            return Err(unmet!("need t <= Q <= n/k^10, got t = {t}, Q = {q}, n = {n}"));
        }
        check_degrees(family, profile)?;
    } else if config.pokrovskiy_slack > 0 && q * config.pokrovskiy_slack as u128 > n {
        return Err(unmet!(
            "need Q * {} <= n, got Q = {q}, n = {n}",
            config.pokrovskiy_slack
        ));
    }

    let mut run = Recursion {
        family,
        wide: profile.argmax(),
        guaranteed,
        trace: Vec::new(),
    };
    let b = run.solve(t, &mut Vec::new())?;
    finish(family, config.mode, t, &b, run.trace, STEP)
}

struct Recursion<'a> {
    family: &'a HypergraphFamily,
    wide: usize,
    guaranteed: bool,
    trace: Vec<String>,
}

impl Recursion<'_> {
    /// Rainbow matching on colours `0..t` avoiding `removed`.
    fn solve(&mut self, t: usize, removed: &mut Vec<VertexRef>) -> Result<Builder> {
        if t == 0 {
            return Ok(Builder::new(self.family));
        }
        let k = self.family.k();
        let colour = t - 1;
        let h = self.family.member(colour).induced(removed);
        let greedy = h.greedy_maximal_matching();

        if greedy.len() + k > k * t {
            self.trace.push(format!("colour {colour}: case 1"));
            let b = self.solve(t - 1, removed)?;
            let e = greedy.edges.iter().find(|e| b.used.is_free(e)).cloned();
            return self.place(&h, b, colour, e);
        }

        let mut d = VertexMask::new(h.class_sizes());
        for e in &greedy.edges {
            d.insert_edge(e);
        }
        let tuples = disjoint_tuples(&h, &d, self.wide);
        let want = k.pow(5) * t;
        if tuples.len() < want {
            if self.guaranteed {
                return Err(violation!(
                    STEP,
                    "only {} disjoint tuples outside D, need {want}",
                    tuples.len()
                ));
            }
            self.trace
                .push(format!("colour {colour}: tuple sample clamped to {}", tuples.len()));
        }
        let tuples = &tuples[..tuples.len().min(want)];

        let mut best: Option<(Position, usize)> = None;
        for v in h.alive_positions(self.wide) {
            let hits = tuples
                .iter()
                .filter(|key| h.neighbours_of_key(key).binary_search(&v).is_ok())
                .count();
            if best.is_none_or(|(_, c)| hits > c) {
                best = Some((v, hits));
            }
        }
        let (v, hits) = match best {
            Some((v, hits)) if hits > 0 => (v, hits),
            _ => {
                if self.guaranteed {
                    return Err(violation!(
                        STEP,
                        "no vertex of class {} completes a sampled tuple",
                        self.wide
                    ));
                }
                self.trace.push(format!("colour {colour}: case 2 found no vertex"));
                let b = self.solve(t - 1, removed)?;
                let e = h.first_free_edge(&b.used).cloned();
                return self.place(&h, b, colour, e);
            }
        };
        if self.guaranteed && hits < k * k * t {
            return Err(violation!(
                STEP,
                "best vertex completes {hits} tuples, need k^2 t = {}",
                k * k * t
            ));
        }
        self.trace.push(format!(
            "colour {colour}: case 2 reserves {}",
            VertexRef::new(self.wide, v)
        ));

        removed.push(VertexRef::new(self.wide, v));
        let solved = self.solve(t - 1, removed);
        removed.pop();
        let b = solved?;
        let e = tuples
            .iter()
            .filter(|key| h.neighbours_of_key(key).binary_search(&v).is_ok())
            .map(|key| {
                let mut e = key.clone();
                e[self.wide] = v;
                e
            })
            .find(|e| b.used.is_free(e))
            .or_else(|| {
                if self.guaranteed {
                    None
                } else {
                    h.first_free_edge(&b.used).cloned()
                }
            });
        self.place(&h, b, colour, e)
    }

    fn place(&mut self, h: &KPartiteHypergraph, mut b: Builder, colour: usize, e: Option<Edge>) -> Result<Builder> {
        let e = match e {
            Some(e) => Some(e),
            None if self.guaranteed => {
                return Err(violation!(STEP, "no untouched edge left for colour {colour}"));
            }
            None => h.first_free_edge(&b.used).cloned(),
        };
        match e {
            Some(e) => b.put(colour, e),
            None => self.trace.push(format!("colour {colour}: skipped")),
        }
        Ok(b)
    }
}

/// Pairwise disjoint live (k-1)-tuples avoiding `class` and `d`, as keys:
/// the r-th tuple takes the r-th available position in every other class.
fn disjoint_tuples(h: &KPartiteHypergraph, d: &VertexMask, class: usize) -> Vec<Vec<Position>> {
    let lists: Vec<Vec<Position>> = (0..h.k())
        .filter(|&c| c != class)
        .map(|c| h.alive_positions(c).filter(|&p| !d.contains(c, p)).collect())
        .collect();
    let count = lists.iter().map(Vec::len).min().unwrap_or(0);
    (0..count)
        .map(|r| {
            let mut it = lists.iter();
            (0..h.k())
                .map(|c| if c == class { HOLE } else { it.next().unwrap()[r] })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::OracleBudget;
    use crate::constructions::{complete, space_barrier};
    use crate::error::Error;
    use crate::oracles::max_rainbow_matching_exact;
    use crate::rainbow::validate_rainbow;
    use alloc::vec;

    fn p(a: &[usize]) -> DegreeProfile {
        DegreeProfile::new(a.to_vec())
    }

    #[test]
    fn no_colours() {
        let f = HypergraphFamily::empty(vec![4, 4, 4]).unwrap();
        let run = pokrovskiy_rainbow(&f, &p(&[0, 0, 0]), &RainbowConfig::guaranteed()).unwrap();
        assert!(run.matching.is_empty());
        assert!(run.reached_target());
    }

    #[test]
    fn two_complete_members() {
        let c = complete(3, 8).unwrap();
        let f = HypergraphFamily::new(vec![c.clone(), c]).unwrap();
        let run = pokrovskiy_rainbow(&f, &p(&[1, 1, 0]), &RainbowConfig::best_effort()).unwrap();
        assert_eq!(run.matching.len(), 2);
        assert!(run.trace.iter().all(|l| l.ends_with("case 1")));
    }

    #[test]
    fn single_space_barrier() {
        let s = space_barrier(3, 6, &p(&[1, 0, 0])).unwrap().graph;
        let f = HypergraphFamily::new(vec![s]).unwrap();
        let run = pokrovskiy_rainbow(&f, &p(&[1, 0, 0]), &RainbowConfig::best_effort()).unwrap();
        assert_eq!(run.matching.len(), 1);
        let best = max_rainbow_matching_exact(&f, OracleBudget::default()).unwrap();
        assert_eq!(best.value().len(), 1);
    }

    #[test]
    fn case_two_reserves_a_vertex() {
        let s = space_barrier(3, 12, &p(&[2, 0, 0])).unwrap().graph;
        let f = HypergraphFamily::new(vec![s.clone(), s]).unwrap();
        let run = pokrovskiy_rainbow(&f, &p(&[2, 0, 0]), &RainbowConfig::best_effort()).unwrap();
        assert_eq!(run.matching.len(), 2);
        validate_rainbow(&f, &run.matching).unwrap();
        assert!(
            run.trace.iter().any(|l| l.contains("case 2 reserves")),
            "{:?}",
            run.trace
        );
    }

    #[test]
    fn thresholds() {
        let c = complete(3, 8).unwrap();
        let f = HypergraphFamily::new(vec![c.clone(), c]).unwrap();
        assert!(matches!(
            pokrovskiy_rainbow(&f, &p(&[1, 1, 0]), &RainbowConfig::guaranteed()),
            Err(Error::HypothesisUnmet(_))
        ));
        let mut cfg = RainbowConfig::best_effort();
        cfg.pokrovskiy_slack = 5;
        assert!(matches!(
            pokrovskiy_rainbow(&f, &p(&[1, 1, 0]), &cfg),
            Err(Error::HypothesisUnmet(_))
        ));
    }
}
