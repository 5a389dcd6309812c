//! Perfect rainbow matchings versus small dominating sets.

use alloc::{format, string::String, vec::Vec};

use serde::{Deserialize, Serialize};

use super::{check_degrees, check_shape, validate_rainbow, Builder, HypergraphFamily, RainbowConfig, RainbowMatching};
use crate::budget::{Mode, OracleBudget, Search};
use crate::error::{invalid, unmet, violation, Error, Result};
use crate::graph::{DegreeProfile, Edge, KPartiteHypergraph, Matching, VertexRef};
use crate::oracles::{max_matching_exact, min_dominating_set_exact};
use crate::rational::{at_least, at_most, floor_usize, int, Rational};

const STEP: &str = "rainbow_or_dominating";

/// Answer to "does `H` have a matching of at least this size?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeQuery {
    Found(Matching),
    /// The exact search finished below the target.
    ProvedBelow,
    /// Greedy fell short and the exact search ran out of budget; carries
    /// the best matching seen.
    Unknown(Matching),
}

/// Greedy first, then the exact oracle when greedy falls short.
pub fn matching_of_size_at_least(h: &KPartiteHypergraph, target: usize, budget: OracleBudget) -> Result<SizeQuery> {
    let greedy = h.greedy_maximal_matching();
    if greedy.len() >= target {
        return Ok(SizeQuery::Found(greedy));
    }
    if (0..h.k()).any(|c| h.alive_count(c) < target) {
        return Ok(SizeQuery::ProvedBelow);
    }
    Ok(match max_matching_exact(h, budget)? {
        Search::Exact(m) if m.len() >= target => SizeQuery::Found(m),
        Search::Exact(_) => SizeQuery::ProvedBelow,
        Search::Exhausted(m) if m.len() >= target => SizeQuery::Found(m),
        Search::Exhausted(m) => SizeQuery::Unknown(m),
    })
}

/// `n^e` for the smallest live class size `n`, saturating.
fn power(n: usize, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

/// Whether `deg_H(x) >= n^{k-1}/2`.
pub(crate) fn is_high_degree(h: &KPartiteHypergraph, n: usize, x: VertexRef) -> bool {
    2 * h.vertex_degree(x) as u128 >= power(n, h.k() - 1)
}

/// `{x in D : deg_H(x) >= n^{k-1}/2}`, sorted, with `n` the smallest live
/// class size.
///
/// `D` must dominate `H`. In guaranteed mode the call also requires
/// `n >= 5(1 + mu)Q` and `|D| <= (1 + mu)Q`, and checks that the result has
/// at least `(1 - 2 mu)Q` vertices.
pub fn high_degree_core(
    h: &KPartiteHypergraph,
    d: &[VertexRef],
    profile: &DegreeProfile,
    mu: Rational,
    mode: Mode,
) -> Result<Vec<VertexRef>> {
    if profile.k() != h.k() {
        return Err(invalid!("profile has {} entries, expected {}", profile.k(), h.k()));
    }
    if let Some(v) = d.iter().find(|v| v.class >= h.k() || v.pos >= h.class_sizes()[v.class]) {
        return Err(invalid!("vertex {v} is out of range"));
    }
    if let Some(e) = h.undominated_edge(d) {
        return Err(invalid!("the set does not dominate: {e:?} is missed"));
    }
    if mu < int(0) {
        return Err(invalid!("mu must be non-negative"));
    }
    let n = h.min_class_size();
    let q = int(profile.total());
    if mode.is_guaranteed() {
        if !at_least(n, int(5) * (int(1) + mu) * q) {
            return Err(unmet!("n = {n} < 5(1 + mu)Q = {}", int(5) * (int(1) + mu) * q));
        }
        if !at_most(d.len(), (int(1) + mu) * q) {
            return Err(unmet!("|D| = {} > (1 + mu)Q = {}", d.len(), (int(1) + mu) * q));
        }
    }
    let mut a: Vec<VertexRef> = d.iter().copied().filter(|&x| is_high_degree(h, n, x)).collect();
    a.sort_unstable();
    a.dedup();
    if mode.is_guaranteed() && !at_least(a.len(), (int(1) - int(2) * mu) * q) {
        return Err(violation!(
            "high_degree_core",
            "only {} high-degree vertices in D = {d:?}; profile {:?}, mu = {mu}",
            a.len(),
            profile.as_slice()
        ));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityOutcome {
    PerfectRainbow(RainbowMatching),
    /// `dominating_sets[r]` dominates the member `colours[r]`.
    DominatedColours {
        colours: Vec<usize>,
        dominating_sets: Vec<Vec<VertexRef>>,
    },
}

enum DomTest {
    Found(Vec<VertexRef>),
    None,
    Unknown,
}

/// Looks for a dominating set of size at most `cap`. A greedy matching
/// with more than `cap` edges rules one out; its vertex set is used
/// directly when small enough.
fn small_dominating_set(h: &KPartiteHypergraph, cap: usize, budget: OracleBudget) -> Result<DomTest> {
    let greedy = h.greedy_maximal_matching();
    if greedy.len() > cap {
        return Ok(DomTest::None);
    }
    if h.k() * greedy.len() <= cap {
        let mut d: Vec<VertexRef> = greedy.vertices().collect();
        d.sort_unstable();
        return Ok(DomTest::Found(d));
    }
    Ok(match min_dominating_set_exact(h, cap, budget)? {
        Search::Exact(Some(d)) => DomTest::Found(d),
        Search::Exact(None) => DomTest::None,
        Search::Exhausted(_) => DomTest::Unknown,
    })
}

enum Pick {
    Matching,
    Vertex(VertexRef),
    Edge(Edge),
}

/// Either a perfect rainbow matching or at least `(1 - eps)Q` colours whose
/// members have dominating sets of size at most `(1 + 2k eps)Q`.
///
/// Colours are first tested for small dominating sets. If enough have one,
/// those sets are returned. Otherwise the colours lacking one are moved to
/// the front and two passes build the matching: a reverse pass setting
/// aside, for each colour `j` (1-based position), nothing when
/// `H_j[U_j]` has a matching of size `kj`, else the first vertex of degree
/// at least `kj n^{k-2}` in `H_j[U_j]`, else the first edge of `H_j[U_j]`;
/// then a forward pass choosing disjoint edges accordingly.
///
/// Guaranteed mode requires `t <= (1 + eps)Q`, `n >= 8k^3 Q / eps` and the
/// codegree profile; a stuck pass is then an invariant violation. In best
/// effort a stuck pass gives [`Error::Inconclusive`].
pub fn rainbow_or_dominating(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    epsilon: Rational,
    config: &RainbowConfig,
) -> Result<StabilityOutcome> {
    check_shape(family, profile)?;
    if epsilon <= int(0) || epsilon >= int(1) {
        return Err(invalid!("epsilon = {epsilon} is outside (0, 1)"));
    }
    let (k, t) = (family.k(), family.t());
    let q = profile.total();
    let n = family.min_class_size();
    if config.mode.is_guaranteed() {
        if !at_most(t, (int(1) + epsilon) * int(q)) {
            return Err(unmet!("t = {t} > (1 + eps)Q = {}", (int(1) + epsilon) * int(q)));
        }
        let need = int(8 * k * k * k * q) / epsilon;
        if !at_least(n, need) {
            return Err(unmet!("n = {n} < 8k^3 Q / eps = {need}"));
        }
        check_degrees(family, profile)?;
    }
    if t == 0 {
        return Ok(StabilityOutcome::PerfectRainbow(RainbowMatching::default()));
    }

    let cap = floor_usize((int(1) + int(2 * k) * epsilon) * int(q));
    let mut dominated = Vec::new();
    let mut sets = Vec::new();
    for j in 0..t {
        if let DomTest::Found(d) = small_dominating_set(family.member(j), cap, config.budget)? {
            dominated.push(j);
            sets.push(d);
        }
    }
    if at_least(dominated.len(), (int(1) - epsilon) * int(q)) {
        for (j, d) in dominated.iter().zip(&sets) {
            if !family.member(*j).is_dominating(d) || d.len() > cap {
                return Err(violation!(STEP, "set {d:?} for colour {j} fails post-validation"));
            }
        }
        return Ok(StabilityOutcome::DominatedColours {
            colours: dominated,
            dominating_sets: sets,
        });
    }

    let order: Vec<usize> = (0..t)
        .filter(|j| dominated.binary_search(j).is_err())
        .chain(dominated.iter().copied())
        .collect();
    match two_passes(family, &order, n, config) {
        Ok(m) => {
            validate_rainbow(family, &m).map_err(|e| violation!(STEP, "output failed validation: {e}"))?;
            Ok(StabilityOutcome::PerfectRainbow(m))
        }
        Err(detail) if config.mode.is_guaranteed() => Err(violation!(STEP, "{detail}")),
        Err(detail) => Err(Error::Inconclusive(detail)),
    }
}

fn two_passes(
    family: &HypergraphFamily,
    order: &[usize],
    n: usize,
    config: &RainbowConfig,
) -> core::result::Result<RainbowMatching, String> {
    let k = family.k();
    let t = order.len();
    let mut removed: Vec<VertexRef> = Vec::new();
    let mut subs: Vec<KPartiteHypergraph> = Vec::with_capacity(t);
    let mut picks: Vec<Pick> = Vec::with_capacity(t);
    for idx in (0..t).rev() {
        let j = idx + 1;
        let h = family.member(order[idx]).induced(&removed);
        let pick = match matching_of_size_at_least(&h, k * j, config.budget).map_err(|e| format!("{e}"))? {
            SizeQuery::Found(_) => Pick::Matching,
            _ => {
                let threshold = (k * j) as u128 * power(n, k - 2);
                let x = (0..k).find_map(|c| {
                    h.alive_positions(c)
                        .map(|p| VertexRef::new(c, p))
                        .find(|&v| h.vertex_degree(v) as u128 >= threshold)
                });
                match (x, h.edges().first()) {
                    (Some(x), _) => {
                        removed.push(x);
                        Pick::Vertex(x)
                    }
                    (None, Some(e)) => {
                        removed.extend(e.iter().enumerate().map(|(c, &p)| VertexRef::new(c, p)));
                        Pick::Edge(e.clone())
                    }
                    (None, None) => {
                        return Err(format!(
                            "reverse pass stuck at position {j} (colour {}): no edge inside U_j",
                            order[idx]
                        ))
                    }
                }
            }
        };
        subs.push(h);
        picks.push(pick);
    }
    subs.reverse();
    picks.reverse();

    let mut b = Builder::new(family);
    for idx in 0..t {
        let h = &subs[idx];
        let e = match &picks[idx] {
            Pick::Edge(e) => b.used.is_free(e).then(|| e.clone()),
            Pick::Vertex(x) => h
                .edges()
                .iter()
                .find(|e| e[x.class] == x.pos && b.used.is_free(e))
                .cloned(),
            Pick::Matching => h.first_free_edge(&b.used).cloned(),
        };
        match e {
            Some(e) => b.put(order[idx], e),
            None => {
                return Err(format!(
                    "forward pass stuck at position {} (colour {})",
                    idx + 1,
                    order[idx]
                ))
            }
        }
    }
    Ok(b.to_matching())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, space_barrier};
    use crate::rational::frac;

    fn p(a: &[usize]) -> DegreeProfile {
        DegreeProfile::new(a.to_vec())
    }

    #[test]
    fn matching_query_examples() {
        let c = complete(3, 4).unwrap();
        assert!(matches!(
            matching_of_size_at_least(&c, 4, OracleBudget::default()).unwrap(),
            SizeQuery::Found(m) if m.len() >= 4
        ));
        let e = KPartiteHypergraph::empty(vec![4, 4, 4]).unwrap();
        assert_eq!(
            matching_of_size_at_least(&e, 1, OracleBudget::default()).unwrap(),
            SizeQuery::ProvedBelow
        );
        let s = space_barrier(3, 4, &p(&[1, 1, 1])).unwrap().graph;
        assert_eq!(
            matching_of_size_at_least(&s, 4, OracleBudget::default()).unwrap(),
            SizeQuery::ProvedBelow
        );
    }

    #[test]
    fn core_examples() {
        let c = complete(3, 4).unwrap();
        let d: Vec<VertexRef> = (0..4).map(|p| VertexRef::new(0, p)).collect();
        let a = high_degree_core(&c, &d, &p(&[0, 0, 0]), int(0), Mode::BestEffort).unwrap();
        assert_eq!(a, d);

        let s = space_barrier(3, 12, &p(&[1, 1, 0])).unwrap().graph;
        let d = vec![VertexRef::new(0, 0), VertexRef::new(1, 0)];
        let a = high_degree_core(&s, &d, &p(&[1, 1, 0]), frac(1, 50), Mode::Guaranteed).unwrap();
        assert!(a.contains(&VertexRef::new(0, 0)));
        assert_eq!(s.vertex_degree(VertexRef::new(0, 0)), 144);

        let e = KPartiteHypergraph::empty(vec![3, 3, 3]).unwrap();
        assert!(high_degree_core(&e, &[], &p(&[0, 0, 0]), int(0), Mode::Guaranteed)
            .unwrap()
            .is_empty());
        assert!(high_degree_core(&s, &[VertexRef::new(2, 0)], &p(&[1, 1, 0]), int(0), Mode::BestEffort).is_err());
    }

    #[test]
    fn space_barrier_members_are_dominated() {
        let s = space_barrier(3, 6, &p(&[1, 1, 1])).unwrap().graph;
        let f = HypergraphFamily::new(vec![s; 3]).unwrap();
        match rainbow_or_dominating(&f, &p(&[1, 1, 1]), frac(1, 10), &RainbowConfig::best_effort()).unwrap() {
            StabilityOutcome::DominatedColours {
                colours,
                dominating_sets,
            } => {
                assert_eq!(colours, vec![0, 1, 2]);
                let union = vec![VertexRef::new(0, 0), VertexRef::new(1, 0), VertexRef::new(2, 0)];
                assert!(dominating_sets.iter().all(|d| *d == union));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complete_members_give_perfect_rainbow() {
        let c = complete(3, 8).unwrap();
        let f = HypergraphFamily::new(vec![c; 2]).unwrap();
        match rainbow_or_dominating(&f, &p(&[2, 0, 0]), frac(1, 10), &RainbowConfig::best_effort()).unwrap() {
            StabilityOutcome::PerfectRainbow(m) => {
                assert_eq!(m.len(), 2);
                validate_rainbow(&f, &m).unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_family_is_perfect() {
        let f = HypergraphFamily::empty(vec![2, 2, 2]).unwrap();
        assert_eq!(
            rainbow_or_dominating(&f, &p(&[0, 0, 0]), frac(1, 2), &RainbowConfig::guaranteed()).unwrap(),
            StabilityOutcome::PerfectRainbow(RainbowMatching::default())
        );
    }

    #[test]
    fn guaranteed_thresholds_are_checked() {
        let c = complete(3, 8).unwrap();
        let f = HypergraphFamily::new(vec![c; 2]).unwrap();
        assert!(matches!(
            rainbow_or_dominating(&f, &p(&[2, 0, 0]), frac(1, 10), &RainbowConfig::guaranteed()),
            Err(Error::HypothesisUnmet(_))
        ));
        assert!(rainbow_or_dominating(&f, &p(&[2, 0, 0]), int(1), &RainbowConfig::best_effort()).is_err());
    }
}
