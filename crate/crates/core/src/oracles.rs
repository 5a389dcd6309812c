//! Exact exponential-time reference solvers.
//!
//! Every search takes an [`OracleBudget`] and returns [`Search::Exhausted`]
//! with the best object found when the budget runs out; that value is never
//! a proof of optimality.

use alloc::{string::String, vec::Vec};

use serde::{Deserialize, Serialize};

use crate::budget::{Meter, OracleBudget, Search};
use crate::error::{invalid, Result};
use crate::graph::{DegreeProfile, Edge, KPartiteHypergraph, Matching, Position, VertexMask, VertexRef};
use crate::rainbow::{Builder, HypergraphFamily, RainbowMatching};

struct MatchingSearch<'a> {
    h: &'a KPartiteHypergraph,
    firsts: Vec<Position>,
    used: VertexMask,
    free: Vec<usize>,
    current: Vec<Edge>,
    best: Vec<Edge>,
    ceiling: usize,
    meter: Meter,
}

impl MatchingSearch<'_> {
    fn bound(&self, idx: usize) -> usize {
        let rest = self.firsts.len() - idx;
        let tight = self.free[1..].iter().copied().min().unwrap_or(rest);
        self.current.len() + rest.min(tight)
    }

    fn run(&mut self, idx: usize) {
        if self.best.len() == self.ceiling || !self.meter.tick() {
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if idx == self.firsts.len() || self.bound(idx) <= self.best.len() {
            return;
        }
        let v = self.firsts[idx];
        for e in self.h.edges_through_first(v) {
            if !self.used.is_free(e) {
                continue;
            }
            self.used.insert_edge(e);
            for c in 1..e.len() {
                self.free[c] -= 1;
            }
            self.current.push(e.clone());
            self.run(idx + 1);
            self.current.pop();
            for c in 1..e.len() {
                self.free[c] += 1;
            }
            self.used.remove_edge(e);
            if self.meter.exhausted() || self.best.len() == self.ceiling {
                return;
            }
        }
        self.run(idx + 1);
    }
}

/// `nu(H)` with a witness, by branch-and-bound on the class-0 vertices in
/// increasing order (each is either matched by one of its edges or
/// skipped).
pub fn max_matching_exact(h: &KPartiteHypergraph, budget: OracleBudget) -> Result<Search<Matching>> {
    budget.validate()?;
    let firsts: Vec<Position> = h.alive_positions(0).collect();
    let free: Vec<usize> = (0..h.k()).map(|c| h.alive_count(c)).collect();
    let ceiling = free.iter().copied().min().unwrap_or(0);
    let mut s = MatchingSearch {
        h,
        firsts,
        used: h.empty_mask(),
        free,
        current: Vec::new(),
        best: h.greedy_maximal_matching().edges,
        ceiling,
        meter: budget.meter(),
    };
    s.run(0);
    let m = Matching::new(s.best).sorted();
    Ok(if s.meter.exhausted() {
        Search::Exhausted(m)
    } else {
        Search::Exact(m)
    })
}

struct RainbowSearch<'a> {
    family: &'a HypergraphFamily,
    current: Builder,
    best: RainbowMatching,
    free: Vec<usize>,
    ceiling: usize,
    meter: Meter,
}

impl RainbowSearch<'_> {
    fn bound(&self, colour: usize) -> usize {
        let tight = self.free.iter().copied().min().unwrap_or(0);
        let cur = self.current.len();
        let cheap = cur + (self.family.t() - colour).min(tight);
        if cheap <= self.best.len() {
            return cheap;
        }
        let live = (colour..self.family.t())
            .filter(|&j| self.family.member(j).first_free_edge(&self.current.used).is_some())
            .count();
        cur + live.min(tight)
    }

    fn run(&mut self, colour: usize) {
        if self.best.len() == self.ceiling || !self.meter.tick() {
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.to_matching();
        }
        if colour == self.family.t() || self.bound(colour) <= self.best.len() {
            return;
        }
        let h = self.family.member(colour);
        for e in h.edges() {
            if !self.current.used.is_free(e) {
                continue;
            }
            self.current.put(colour, e.clone());
            for f in &mut self.free {
                *f -= 1;
            }
            self.run(colour + 1);
            for f in &mut self.free {
                *f += 1;
            }
            self.current.take(colour);
            if self.meter.exhausted() || self.best.len() == self.ceiling {
                return;
            }
        }
        self.run(colour + 1);
    }
}

/// Largest rainbow matching, branching on colours in index order and on
/// each colour's edges lexicographically.
pub fn max_rainbow_matching_exact(family: &HypergraphFamily, budget: OracleBudget) -> Result<Search<RainbowMatching>> {
    budget.validate()?;
    let free: Vec<usize> = match family.members().first() {
        Some(h) => (0..family.k()).map(|c| h.alive_count(c)).collect(),
        None => family.class_sizes().iter().map(|&n| n as usize).collect(),
    };
    let ceiling = free.iter().copied().min().unwrap_or(0).min(family.t());

    let mut greedy = Builder::new(family);
    for j in 0..family.t() {
        if let Some(e) = family.member(j).first_free_edge(&greedy.used) {
            greedy.put(j, e.clone());
        }
    }
    let mut s = RainbowSearch {
        family,
        current: Builder::new(family),
        best: greedy.to_matching(),
        free,
        ceiling,
        meter: budget.meter(),
    };
    s.run(0);
    Ok(if s.meter.exhausted() {
        Search::Exhausted(s.best)
    } else {
        Search::Exact(s.best)
    })
}

struct DominatingSearch<'a> {
    h: &'a KPartiteHypergraph,
    chosen: Vec<VertexRef>,
    mask: VertexMask,
    meter: Meter,
}

impl DominatingSearch<'_> {
    /// Hitting-set branching: some vertex of the first missed edge must be
    /// in every dominating set that extends `chosen`.
    fn run(&mut self, limit: usize) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let missed = match self.h.edges().iter().find(|e| self.mask.is_free(e)) {
            None => return true,
            Some(e) => e.clone(),
        };
        if self.chosen.len() == limit {
            return false;
        }
        let mut options: Vec<VertexRef> = missed.iter().enumerate().map(|(c, &p)| VertexRef::new(c, p)).collect();
        options.sort_by(|a, b| self.h.vertex_degree(*b).cmp(&self.h.vertex_degree(*a)).then(a.cmp(b)));
        for v in options {
            self.mask.insert(v.class, v.pos);
            self.chosen.push(v);
            if self.run(limit) {
                return true;
            }
            self.chosen.pop();
            self.mask.remove(v.class, v.pos);
            if self.meter.exhausted() {
                return false;
            }
        }
        false
    }
}

/// A minimum dominating set of size at most `size_cap`.
///
/// `Exact(None)` certifies that no dominating set of size `<= size_cap`
/// exists. `Exhausted(_)` means the budget ran out before the answer was
/// settled. Only vertices of positive degree are ever chosen.
pub fn min_dominating_set_exact(
    h: &KPartiteHypergraph,
    size_cap: usize,
    budget: OracleBudget,
) -> Result<Search<Option<Vec<VertexRef>>>> {
    budget.validate()?;
    let mut s = DominatingSearch {
        h,
        chosen: Vec::new(),
        mask: h.empty_mask(),
        meter: budget.meter(),
    };
    for limit in 0..=size_cap {
        if s.run(limit) {
            let mut d = s.chosen;
            d.sort();
            return Ok(Search::Exact(Some(d)));
        }
        if s.meter.exhausted() {
            return Ok(Search::Exhausted(None));
        }
    }
    Ok(Search::Exact(None))
}

/// Which lower bound on `nu(H)` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCheck {
    /// `min{n - k + 2, Q}`, valid for every `n`.
    Fact15,
    /// `min{n - 1, Q}`, asserted for `n >= n_0`.
    ThmMain,
    /// `min{n, Q}`, asserted for `n >= n_0` when `q` is small.
    Thm17,
}

impl BoundCheck {
    pub fn bound(self, k: usize, n: usize, total: usize) -> usize {
        let cap = match self {
            BoundCheck::Fact15 => (n + 2).saturating_sub(k),
            BoundCheck::ThmMain => n.saturating_sub(1),
            BoundCheck::Thm17 => n,
        };
        cap.min(total)
    }

    /// Whether a violation is a hard failure rather than an observation
    /// below the asymptotic threshold.
    pub fn holds_for_all_n(self) -> bool {
        matches!(self, BoundCheck::Fact15)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    BelowThreshold,
    HypothesisUnmet,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub instance_id: String,
    pub check: BoundCheck,
    pub bound: usize,
    pub nu: Option<usize>,
    pub status: CheckStatus,
    pub witness: Option<Matching>,
}

/// Computes `nu(H)` and compares it with the selected bound, taking `n` as
/// the smallest class size.
///
/// A profile exceeding the computed codegrees gives `HypothesisUnmet`. When
/// the oracle runs out of budget the report still passes if the best
/// matching found already reaches the bound.
pub fn verify_theorem_bound(
    h: &KPartiteHypergraph,
    profile: &DegreeProfile,
    check: BoundCheck,
    budget: OracleBudget,
    instance_id: &str,
) -> Result<BoundReport> {
    if profile.k() != h.k() {
        return Err(invalid!("profile has {} entries, expected {}", profile.k(), h.k()));
    }
    let bound = check.bound(h.k(), h.min_class_size(), profile.total());
    let mut report = BoundReport {
        instance_id: String::from(instance_id),
        check,
        bound,
        nu: None,
        status: CheckStatus::HypothesisUnmet,
        witness: None,
    };
    if profile.check_against(h).is_err() {
        return Ok(report);
    }
    let search = max_matching_exact(h, budget)?;
    let exact = search.is_exact();
    let witness = search.into_value();
    let size = witness.len();
    report.status = match (exact, size >= bound) {
        (_, true) => CheckStatus::Pass,
        (false, false) => CheckStatus::Inconclusive,
        (true, false) if check.holds_for_all_n() => CheckStatus::Fail,
        (true, false) => CheckStatus::BelowThreshold,
    };
    report.nu = exact.then_some(size);
    report.witness = Some(witness);
    Ok(report)
}

/// Every subset of crossing tuples as a graph, for exhaustive sweeps over
/// tiny shapes. The `index`-th graph contains tuple `r` (in lexicographic
/// order) when bit `r` of `index` is set.
pub fn graph_from_mask(class_sizes: &[Position], index: u64) -> Result<KPartiteHypergraph> {
    let edges: Vec<Edge> = crate::graph::crossing_tuples(class_sizes)
        .enumerate()
        .filter(|(r, _)| *r < 64 && index >> r & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    KPartiteHypergraph::new(class_sizes.to_vec(), edges)
}

/// Number of crossing tuples, if it fits the exhaustive enumeration used by
/// [`graph_from_mask`].
pub fn tuple_count(class_sizes: &[Position]) -> Option<u32> {
    let total = class_sizes
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(u64::from(n)))?;
    (total <= 63).then_some(total as u32)
}
