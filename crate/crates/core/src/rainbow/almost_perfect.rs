//! Rainbow matchings of size `m + Q` containing a prescribed colour set.

use alloc::{format, vec, vec::Vec};

use super::{
    check_degrees, check_multiplicity, check_shape, fill, finish, first_free_key, Builder, HypergraphFamily,
    RainbowConfig, RainbowRun,
};
use crate::budget::{Meter, Mode};
use crate::error::{invalid, unmet, violation, Result};
use crate::graph::{DegreeProfile, Edge, Position, VertexMask, VertexRef, HOLE};

const STEP: &str = "almost_perfect_rainbow";

/// A rainbow matching of size `m + Q` using every colour in `colours`.
///
/// Grows a greedy rainbow matching, then enlarges it one edge at a time.
/// Each round fixes free tuples `t_0..t_{k-1}` (`t_i` avoids class `i`) and
/// a free full tuple `f`, all disjoint and lexicographically first, and
/// tries in order: adding a free edge in an unused colour; trading the edge
/// `e_v` of a colour that `f` can take for `f` plus `t_i + v`; replacing one
/// edge `e` by `t_i + e_i` and `t_i' + e_i'` in two unused colours. Finally
/// each missing colour of `colours` is swapped in through a free tuple
/// avoiding the class with the largest `a_i`.
///
/// In guaranteed mode `n, t >= m + Q + k - 1`, `|C| <= Q/k`, the codegree
/// profile and the multiplicity floor are checked, and a round with no
/// applicable move is an invariant violation. Best effort skips those
/// checks, adds a wider swap search, and reports any shortfall in the trace.
pub fn almost_perfect_rainbow(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    m: usize,
    colours: &[usize],
    config: &RainbowConfig,
) -> Result<RainbowRun> {
    check_shape(family, profile)?;
    let (k, t) = (family.k(), family.t());
    let mut required = colours.to_vec();
    required.sort_unstable();
    required.dedup();
    if required.len() != colours.len() {
        return Err(invalid!("colour set {colours:?} has repeats"));
    }
    if let Some(&j) = required.iter().find(|&&j| j >= t) {
        return Err(invalid!("colour {j} out of range for t = {t}"));
    }
    let q = profile.total();
    let target = m + q;
    if config.mode.is_guaranteed() {
        let n = family.min_class_size();
        let need = m + q + k - 1;
        if n < need || t < need {
            return Err(unmet!("need n, t >= m + Q + k - 1 = {need}, got n = {n}, t = {t}"));
        }
        if required.len() * k > q {
            return Err(unmet!("|C| = {} exceeds Q/k = {q}/{k}", required.len()));
        }
        check_degrees(family, profile)?;
        check_multiplicity(family, m, config)?;
        config.budget.validate()?;
    }

    let mut trace = Vec::new();
    let mut b = Builder::new(family);
    for j in 0..t {
        if b.len() >= target {
            break;
        }
        if let Some(e) = family.member(j).first_free_edge(&b.used) {
            b.put(j, e.clone());
        }
    }
    trace.push(format!("greedy rainbow matching of size {}", b.len()));

    let mut meter = config.budget.meter();
    let mut moves = [0usize; 4];
    while b.len() < target {
        match augment(family, &mut b, config.mode, &mut meter) {
            Some(kind) => moves[kind] += 1,
            None if config.mode.is_guaranteed() => {
                return Err(violation!(
                    STEP,
                    "no augmenting move at size {} < {target}; profile {:?}, m = {m}, matching {:?}",
                    b.len(),
                    profile.as_slice(),
                    b.to_matching().assignments
                ))
            }
            None => {
                trace.push(format!("augmentation stalled at size {} < {target}", b.len()));
                break;
            }
        }
    }
    trace.push(format!(
        "augmentations: direct {}, f-swap {}, double swap {}, wide swap {}",
        moves[0], moves[1], moves[2], moves[3]
    ));

    let mut exchanges = 0;
    let mut skipped = Vec::new();
    while let Some(&j) = required
        .iter()
        .find(|&&j| b.edges[j].is_none() && !skipped.contains(&j))
    {
        if exchange(family, profile, &required, j, target, &mut b, config.mode) {
            exchanges += 1;
        } else if config.mode.is_guaranteed() {
            return Err(violation!(
                STEP,
                "colour {j} cannot be exchanged in; profile {:?}, C = {required:?}, matching {:?}",
                profile.as_slice(),
                b.to_matching().assignments
            ));
        } else {
            skipped.push(j);
        }
    }
    trace.push(format!("colour exchanges: {exchanges}"));
    if !skipped.is_empty() {
        trace.push(format!("colours of C left out: {skipped:?}"));
    }
    finish(family, config.mode, target, &b, trace, STEP)
}

/// Disjoint free keys `t_0..t_{k-1}` (hole at class `i`) and a free full
/// tuple `f`, taking free positions of each class in increasing order.
fn pick_tuples(family: &HypergraphFamily, used: &VertexMask) -> Option<(Vec<Vec<Position>>, Edge)> {
    let h = family.member(0);
    let k = family.k();
    let free: Vec<Vec<Position>> = (0..k).map(|c| h.free_positions(c, used)).collect();
    if free.iter().any(|l| l.len() < k) {
        return None;
    }
    let mut next = vec![0usize; k];
    let mut take = |c: usize| {
        let p = free[c][next[c]];
        next[c] += 1;
        p
    };
    let keys: Vec<Vec<Position>> = (0..k)
        .map(|i| (0..k).map(|c| if c == i { HOLE } else { take(c) }).collect())
        .collect();
    let f: Edge = (0..k).map(take).collect();
    Some((keys, f))
}

/// One enlarging move; returns which kind was applied.
fn augment(family: &HypergraphFamily, b: &mut Builder, mode: Mode, meter: &mut Meter) -> Option<usize> {
    let k = family.k();
    let unused = b.unused_colours();
    for &j in &unused {
        if let Some(e) = family.member(j).first_free_edge(&b.used) {
            b.put(j, e.clone());
            return Some(0);
        }
    }
    if let Some((keys, f)) = pick_tuples(family, &b.used) {
        for (i, key) in keys.iter().enumerate() {
            for &j in &unused {
                for &v in family.member(j).neighbours_of_key(key) {
                    let Some(c) = b.owner(VertexRef::new(i, v)) else {
                        continue;
                    };
                    if family.member(c).contains_edge(&f) {
                        b.take(c);
                        b.put(c, f.clone());
                        b.put(j, fill(key, i, v));
                        return Some(1);
                    }
                }
            }
        }
        for c in 0..family.t() {
            let Some(e) = b.edges[c].clone() else { continue };
            let takers: Vec<Vec<usize>> = (0..k)
                .map(|i| {
                    unused
                        .iter()
                        .copied()
                        .filter(|&j| {
                            family
                                .member(j)
                                .neighbours_of_key(&keys[i])
                                .binary_search(&e[i])
                                .is_ok()
                        })
                        .collect()
                })
                .collect();
            for i in 0..k {
                for i2 in (0..k).filter(|&i2| i2 != i) {
                    let pair = takers[i]
                        .iter()
                        .find_map(|&j1| takers[i2].iter().find(|&&j2| j2 != j1).map(|&j2| (j1, j2)));
                    if let Some((j1, j2)) = pair {
                        b.take(c);
                        b.put(j1, fill(&keys[i], i, e[i]));
                        b.put(j2, fill(&keys[i2], i2, e[i2]));
                        return Some(2);
                    }
                }
            }
        }
    }
    if !mode.is_guaranteed() && wide_swap(family, b, meter) {
        return Some(3);
    }
    None
}

/// Best-effort search: drop one edge and add two disjoint edges in distinct
/// colours. Since no unused colour had a free edge before the drop, one of
/// the new edges in an unused colour must meet the dropped edge.
fn wide_swap(family: &HypergraphFamily, b: &mut Builder, meter: &mut Meter) -> bool {
    let unused = b.unused_colours();
    for c in 0..family.t() {
        let Some(old) = b.take(c) else { continue };
        for &j1 in &unused {
            for e1 in family.member(j1).edges() {
                if !meter.tick() {
                    b.put(c, old);
                    return false;
                }
                if !b.used.is_free(e1) || !e1.iter().zip(&old).any(|(x, y)| x == y) {
                    continue;
                }
                b.put(j1, e1.clone());
                let second = unused
                    .iter()
                    .copied()
                    .chain(core::iter::once(c))
                    .filter(|&j2| j2 != j1)
                    .find_map(|j2| family.member(j2).first_free_edge(&b.used).map(|e| (j2, e.clone())));
                if let Some((j2, e2)) = second {
                    b.put(j2, e2);
                    return true;
                }
                b.take(j1);
            }
        }
        b.put(c, old);
    }
    false
}

/// Brings colour `j` into the matching without shrinking it, trading out
/// an edge whose colour is outside `required`.
fn exchange(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    required: &[usize],
    j: usize,
    target: usize,
    b: &mut Builder,
    mode: Mode,
) -> bool {
    let h = family.member(j);
    let i = profile.argmax();
    let spare = |b: &Builder| (0..family.t()).find(|c| b.edges[*c].is_some() && required.binary_search(c).is_err());
    if let Some(key) = first_free_key(h, &b.used, i) {
        for &v in h.neighbours_of_key(&key) {
            match b.owner(VertexRef::new(i, v)) {
                None => {
                    if b.len() >= target {
                        let Some(c) = spare(b) else { continue };
                        b.take(c);
                    }
                    b.put(j, fill(&key, i, v));
                    return true;
                }
                Some(c) if required.binary_search(&c).is_err() => {
                    b.take(c);
                    b.put(j, fill(&key, i, v));
                    return true;
                }
                Some(_) => {}
            }
        }
    }
    if mode.is_guaranteed() {
        return false;
    }
    for e in h.edges() {
        let mut owners: Vec<usize> = e
            .iter()
            .enumerate()
            .filter_map(|(c, &p)| b.owner(VertexRef::new(c, p)))
            .collect();
        owners.dedup();
        match owners.as_slice() {
            [] => {
                if b.len() >= target {
                    let Some(c) = spare(b) else { continue };
                    b.take(c);
                }
                b.put(j, e.clone());
                return true;
            }
            [c] if required.binary_search(c).is_err() => {
                b.take(*c);
                b.put(j, e.clone());
                return true;
            }
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::OracleBudget;
    use crate::constructions::{complete, space_barrier};
    use crate::oracles::max_rainbow_matching_exact;
    use crate::rainbow::validate_rainbow;

    fn p(a: &[usize]) -> DegreeProfile {
        DegreeProfile::new(a.to_vec())
    }

    #[test]
    fn complete_members_with_required_colour() {
        let c = complete(3, 8).unwrap();
        let f = HypergraphFamily::new(vec![c; 6]).unwrap().with_declared_m(3);
        let run = almost_perfect_rainbow(&f, &p(&[1, 0, 0]), 3, &[5], &RainbowConfig::best_effort()).unwrap();
        assert_eq!(run.matching.len(), 4);
        // |C| = 1 > Q/k here, so the guaranteed regime refuses.
        assert!(matches!(
            almost_perfect_rainbow(&f, &p(&[1, 0, 0]), 3, &[5], &RainbowConfig::guaranteed()),
            Err(crate::error::Error::HypothesisUnmet(_))
        ));
        assert!(run.matching.uses_colour(5));
        validate_rainbow(&f, &run.matching).unwrap();
    }

    #[test]
    fn zero_target_is_empty() {
        let c = complete(3, 3).unwrap();
        let f = HypergraphFamily::new(vec![c; 2]).unwrap();
        let run = almost_perfect_rainbow(&f, &p(&[0, 0, 0]), 0, &[], &RainbowConfig::best_effort()).unwrap();
        assert!(run.matching.is_empty());
        assert!(run.reached_target());
    }

    #[test]
    fn mixed_family_reaches_size_one() {
        let c = complete(3, 8).unwrap();
        let s = space_barrier(3, 8, &p(&[1, 0, 0])).unwrap().graph;
        let mut members = vec![c; 5];
        members.push(s);
        let f = HypergraphFamily::new(members).unwrap();
        let run = almost_perfect_rainbow(&f, &p(&[1, 0, 0]), 0, &[], &RainbowConfig::guaranteed()).unwrap();
        assert_eq!(run.matching.len(), 1);
        validate_rainbow(&f, &run.matching).unwrap();
    }

    #[test]
    fn guaranteed_mode_checks_hypotheses() {
        let c = complete(3, 3).unwrap();
        let f = HypergraphFamily::new(vec![c; 3]).unwrap();
        let err = almost_perfect_rainbow(&f, &p(&[1, 1, 0]), 0, &[], &RainbowConfig::guaranteed());
        assert!(matches!(err, Err(crate::Error::HypothesisUnmet(_))));
        let s = space_barrier(3, 8, &p(&[1, 0, 0])).unwrap().graph;
        let f = HypergraphFamily::new(vec![s; 6]).unwrap();
        let err = almost_perfect_rainbow(&f, &p(&[2, 0, 0]), 0, &[], &RainbowConfig::guaranteed());
        assert!(matches!(err, Err(crate::Error::HypothesisUnmet(_))));
        assert!(almost_perfect_rainbow(&f, &p(&[1, 0, 0]), 0, &[6], &RainbowConfig::guaranteed()).is_err());
    }

    #[test]
    fn swaps_are_needed_for_space_barriers() {
        // Greedy on colour 0 takes an edge through both A-vertices; the
        // augmentation has to split them across two edges.
        let s = space_barrier(3, 6, &p(&[1, 1, 0])).unwrap().graph;
        let f = HypergraphFamily::new(vec![s; 5]).unwrap();
        let run = almost_perfect_rainbow(&f, &p(&[1, 1, 0]), 0, &[3, 4], &RainbowConfig::guaranteed()).unwrap_err();
        // |C| = 2 > Q/k, so the guaranteed call is refused; best effort runs.
        assert!(matches!(run, crate::Error::HypothesisUnmet(_)));
        let run = almost_perfect_rainbow(&f, &p(&[1, 1, 0]), 0, &[4], &RainbowConfig::best_effort()).unwrap();
        assert_eq!(run.matching.len(), 2);
        assert!(run.matching.uses_colour(4));
        validate_rainbow(&f, &run.matching).unwrap();
        let best = max_rainbow_matching_exact(&f, OracleBudget::default()).unwrap();
        assert!(run.matching.len() <= best.value().len());
    }
}
