//! Rainbow matchings in families of k-partite k-graphs on shared classes.
//!
//! Colours are 0-based indexes into [`HypergraphFamily::members`].
//!
//! * [`almost_perfect`]: size `m + Q` with prescribed colours, via
//!   augmenting swaps and a colour-exchange loop.
//! * [`stability`]: the perfect-rainbow-or-dominating-sets dichotomy and the
//!   high-degree core of a small dominating set.
//! * [`exact_size`]: size exactly `m + Q` near the threshold `t ~ Q`.
//! * [`pokrovskiy`]: the recursive perfect-rainbow construction for `t <= Q`.

use alloc::{format, string::String, vec, vec::Vec};
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::{Mode, OracleBudget};
use crate::error::{invalid, Result};
use crate::graph::{crossing_tuples, DegreeProfile, Edge, KPartiteHypergraph, Position, VertexMask, VertexRef};

pub mod almost_perfect;
pub mod exact_size;
pub mod pokrovskiy;
pub mod stability;

pub use almost_perfect::almost_perfect_rainbow;
pub use exact_size::rainbow_m_plus_q;
pub use pokrovskiy::pokrovskiy_rainbow;
pub use stability::{high_degree_core, matching_of_size_at_least, rainbow_or_dominating, SizeQuery, StabilityOutcome};

/// Ordered family `H_0, ..., H_{t-1}` of k-graphs on common classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphFamily {
    k: usize,
    class_sizes: Vec<Position>,
    members: Vec<KPartiteHypergraph>,
    declared_m: Option<usize>,
}

impl HypergraphFamily {
    /// Requires every member to share `k` and the class sizes. An empty
    /// family needs the shape given explicitly, see [`Self::empty`].
    pub fn new(members: Vec<KPartiteHypergraph>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| invalid!("a family built from members needs at least one member"))?;
        let class_sizes = first.class_sizes().to_vec();
        Self::with_shape(class_sizes, members)
    }

    pub fn with_shape(class_sizes: Vec<Position>, members: Vec<KPartiteHypergraph>) -> Result<Self> {
        if class_sizes.len() < 2 {
            return Err(invalid!("k must be at least 2"));
        }
        if let Some(j) = members.iter().position(|h| h.class_sizes() != class_sizes.as_slice()) {
            return Err(invalid!(
                "member {j} has class sizes {:?}, expected {:?}",
                members[j].class_sizes(),
                class_sizes
            ));
        }
        Ok(HypergraphFamily {
            k: class_sizes.len(),
            class_sizes,
            members,
            declared_m: None,
        })
    }

    pub fn empty(class_sizes: Vec<Position>) -> Result<Self> {
        Self::with_shape(class_sizes, Vec::new())
    }

    /// Records a caller-declared multiplicity floor; see
    /// [`Self::check_declared_m`].
    pub fn with_declared_m(mut self, m: usize) -> Self {
        self.declared_m = Some(m);
        self
    }

    pub fn declared_m(&self) -> Option<usize> {
        self.declared_m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class_sizes(&self) -> &[Position] {
        &self.class_sizes
    }

    pub fn t(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[KPartiteHypergraph] {
        &self.members
    }

    pub fn member(&self, colour: usize) -> &KPartiteHypergraph {
        &self.members[colour]
    }

    /// `|{j : e in E(H_j)}|`.
    pub fn multiplicity(&self, e: &[Position]) -> usize {
        self.members.iter().filter(|h| h.contains_edge(e)).count()
    }

    /// Minimum multiplicity over every live crossing tuple, refusing when
    /// there are more than `max_tuples` of them.
    pub fn min_multiplicity(&self, max_tuples: usize) -> Result<usize> {
        let total = self
            .class_sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize));
        match total {
            Some(total) if total <= max_tuples => {}
            _ => {
                return Err(invalid!(
                    "{} crossing tuples exceed the enumeration budget of {max_tuples}; declare m instead",
                    total.map_or_else(|| String::from("too many"), |t| format!("{t}"))
                ))
            }
        }
        let alive = |e: &Edge| {
            self.members
                .first()
                .is_none_or(|h| e.iter().enumerate().all(|(c, &p)| h.is_alive(VertexRef::new(c, p))))
        };
        Ok(crossing_tuples(&self.class_sizes)
            .filter(alive)
            .map(|e| self.multiplicity(&e))
            .min()
            .unwrap_or(self.t()))
    }

    /// Checks that the declared floor does not exceed the computed minimum.
    pub fn check_declared_m(&self, max_tuples: usize) -> Result<()> {
        if let Some(m) = self.declared_m {
            let actual = self.min_multiplicity(max_tuples)?;
            if m > actual {
                return Err(crate::error::unmet!(
                    "declared multiplicity {m} exceeds computed minimum {actual}"
                ));
            }
        }
        Ok(())
    }

    /// Every member restricted to `V \ removed`.
    pub fn induced(&self, removed: &[VertexRef]) -> HypergraphFamily {
        HypergraphFamily {
            k: self.k,
            class_sizes: self.class_sizes.clone(),
            members: self.members.iter().map(|h| h.induced(removed)).collect(),
            declared_m: self.declared_m,
        }
    }

    /// Sub-family on the given colours, in the given order.
    pub fn select(&self, colours: &[usize]) -> HypergraphFamily {
        HypergraphFamily {
            k: self.k,
            class_sizes: self.class_sizes.clone(),
            members: colours.iter().map(|&j| self.members[j].clone()).collect(),
            declared_m: None,
        }
    }

    /// Smallest live class size (taken from the first member; members share
    /// restrictions when built through [`Self::induced`]).
    pub fn min_class_size(&self) -> usize {
        self.members.first().map_or_else(
            || self.class_sizes.iter().copied().min().unwrap_or(0) as usize,
            |h| h.min_class_size(),
        )
    }

    /// First member whose codegrees fall below `profile`, with the reason.
    pub fn check_profile(&self, profile: &DegreeProfile) -> core::result::Result<(), String> {
        if profile.k() != self.k {
            return Err(format!("profile has {} entries, expected {}", profile.k(), self.k));
        }
        for (j, h) in self.members.iter().enumerate() {
            profile.check_against(h).map_err(|e| format!("member {j}: {e}"))?;
        }
        Ok(())
    }

    /// Pointwise minimum of the members' codegrees.
    pub fn common_codegrees(&self) -> DegreeProfile {
        let mut a = vec![usize::MAX; self.k];
        for h in &self.members {
            for (i, d) in h.codegrees().as_slice().iter().enumerate() {
                a[i] = a[i].min(*d);
            }
        }
        if self.members.is_empty() {
            a = vec![0; self.k];
        }
        DegreeProfile::new(a)
    }
}

/// One coloured edge of a rainbow matching.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColouredEdge {
    pub colour: usize,
    pub edge: Edge,
}

/// Pairwise-disjoint tuples with an injective colour assignment, kept
/// sorted by colour.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RainbowMatching {
    pub assignments: Vec<ColouredEdge>,
}

impl RainbowMatching {
    pub fn new(mut assignments: Vec<ColouredEdge>) -> Self {
        assignments.sort();
        RainbowMatching { assignments }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn colours(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignments.iter().map(|a| a.colour)
    }

    pub fn uses_colour(&self, colour: usize) -> bool {
        self.assignments.iter().any(|a| a.colour == colour)
    }

    pub fn edge_of(&self, colour: usize) -> Option<&Edge> {
        self.assignments.iter().find(|a| a.colour == colour).map(|a| &a.edge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RainbowViolation {
    ColourOutOfRange(usize),
    DuplicateColour(usize),
    Malformed(ColouredEdge),
    NotAnEdge(ColouredEdge),
    Overlap(ColouredEdge, ColouredEdge),
}

impl fmt::Display for RainbowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RainbowViolation::ColourOutOfRange(c) => write!(f, "colour {c} out of range"),
            RainbowViolation::DuplicateColour(c) => write!(f, "colour {c} used twice"),
            RainbowViolation::Malformed(a) => write!(f, "malformed tuple {:?}", a.edge),
            RainbowViolation::NotAnEdge(a) => {
                write!(f, "{:?} is not an edge of colour {}", a.edge, a.colour)
            }
            RainbowViolation::Overlap(a, b) => write!(
                f,
                "{:?} (colour {}) and {:?} (colour {}) share a vertex",
                a.edge, a.colour, b.edge, b.colour
            ),
        }
    }
}

/// Checks colour range, colour injectivity, per-colour edge membership and
/// disjointness, scanning assignments in colour order.
pub fn validate_rainbow(family: &HypergraphFamily, m: &RainbowMatching) -> core::result::Result<(), RainbowViolation> {
    let mut sorted: Vec<&ColouredEdge> = m.assignments.iter().collect();
    sorted.sort();
    let mut used = VertexMask::new(family.class_sizes());
    let mut owner: Vec<&ColouredEdge> = Vec::new();
    let mut seen = vec![false; family.t()];
    for a in sorted {
        if a.colour >= family.t() {
            return Err(RainbowViolation::ColourOutOfRange(a.colour));
        }
        if seen[a.colour] {
            return Err(RainbowViolation::DuplicateColour(a.colour));
        }
        seen[a.colour] = true;
        if a.edge.len() != family.k() || a.edge.iter().zip(family.class_sizes()).any(|(&p, &n)| p >= n) {
            return Err(RainbowViolation::Malformed(a.clone()));
        }
        if !family.member(a.colour).contains_edge(&a.edge) {
            return Err(RainbowViolation::NotAnEdge(a.clone()));
        }
        if !used.is_free(&a.edge) {
            let prev = owner
                .iter()
                .find(|b| b.edge.iter().zip(&a.edge).any(|(x, y)| x == y))
                .expect("an occupied vertex has an owner");
            return Err(RainbowViolation::Overlap((*prev).clone(), a.clone()));
        }
        used.insert_edge(&a.edge);
        owner.push(a);
    }
    Ok(())
}

/// Settings shared by the rainbow algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RainbowConfig {
    pub mode: Mode,
    /// Budget for the exponential subroutines (matching-size decisions and
    /// dominating-set searches).
    pub budget: OracleBudget,
    /// Replaces `k^10` in the recursive construction's size condition
    /// `Q <= min n_i / k^10` when running best effort; 0 disables the check.
    pub pokrovskiy_slack: u64,
    /// Cap on crossing tuples enumerated when verifying multiplicity floors.
    pub max_tuples: usize,
}

impl Default for RainbowConfig {
    fn default() -> Self {
        RainbowConfig {
            mode: Mode::BestEffort,
            budget: OracleBudget::nodes(2_000_000),
            pokrovskiy_slack: 1,
            max_tuples: 1 << 22,
        }
    }
}

impl RainbowConfig {
    pub fn guaranteed() -> Self {
        RainbowConfig {
            mode: Mode::Guaranteed,
            ..Default::default()
        }
    }

    pub fn best_effort() -> Self {
        Self::default()
    }
}

/// A rainbow matching returned by a constructive algorithm together with
/// the size it was aiming for and the steps it took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowRun {
    pub mode: Mode,
    pub target: usize,
    pub matching: RainbowMatching,
    pub trace: Vec<String>,
}

impl RainbowRun {
    pub fn achieved(&self) -> usize {
        self.matching.len()
    }

    pub fn reached_target(&self) -> bool {
        self.matching.len() >= self.target
    }
}

/// Internal bookkeeping for a rainbow matching under construction.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    pub edges: Vec<Option<Edge>>,
    pub used: VertexMask,
}

impl Builder {
    pub fn new(family: &HypergraphFamily) -> Self {
        Builder {
            edges: vec![None; family.t()],
            used: VertexMask::new(family.class_sizes()),
        }
    }

    pub fn from_matching(family: &HypergraphFamily, m: &RainbowMatching) -> Self {
        let mut b = Self::new(family);
        for a in &m.assignments {
            b.put(a.colour, a.edge.clone());
        }
        b
    }

    pub fn len(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn put(&mut self, colour: usize, edge: Edge) {
        debug_assert!(self.edges[colour].is_none());
        debug_assert!(self.used.is_free(&edge));
        self.used.insert_edge(&edge);
        self.edges[colour] = Some(edge);
    }

    pub fn take(&mut self, colour: usize) -> Option<Edge> {
        let e = self.edges[colour].take()?;
        self.used.remove_edge(&e);
        Some(e)
    }

    pub fn unused_colours(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&j| self.edges[j].is_none()).collect()
    }

    /// Colour of the edge containing `v`, if any.
    pub fn owner(&self, v: VertexRef) -> Option<usize> {
        if !self.used.contains(v.class, v.pos) {
            return None;
        }
        self.edges
            .iter()
            .position(|e| e.as_ref().is_some_and(|e| e[v.class] == v.pos))
    }

    pub fn to_matching(&self) -> RainbowMatching {
        RainbowMatching::new(
            self.edges
                .iter()
                .enumerate()
                .filter_map(|(colour, e)| {
                    e.as_ref().map(|e| ColouredEdge {
                        colour,
                        edge: e.clone(),
                    })
                })
                .collect(),
        )
    }
}

/// Profile length must match the family's `k`.
pub(crate) fn check_shape(family: &HypergraphFamily, profile: &DegreeProfile) -> Result<()> {
    if profile.k() != family.k() {
        return Err(invalid!("profile has {} entries, expected {}", profile.k(), family.k()));
    }
    Ok(())
}

/// Codegree hypothesis (i) for every member.
pub(crate) fn check_degrees(family: &HypergraphFamily, profile: &DegreeProfile) -> Result<()> {
    family.check_profile(profile).map_err(|e| crate::error::unmet!("{e}"))
}

/// Multiplicity hypothesis (ii). When the tuple count is over budget the
/// declared floor is trusted instead.
pub(crate) fn check_multiplicity(family: &HypergraphFamily, m: usize, config: &RainbowConfig) -> Result<()> {
    if m == 0 {
        return Ok(());
    }
    let actual = match family.min_multiplicity(config.max_tuples) {
        Ok(actual) => actual,
        Err(e) => match family.declared_m() {
            Some(d) => d,
            None => return Err(e),
        },
    };
    if actual < m {
        return Err(crate::error::unmet!("multiplicity {actual} is below m = {m}"));
    }
    Ok(())
}

/// `key` with its hole filled by `v`.
pub(crate) fn fill(key: &[Position], class: usize, v: Position) -> Edge {
    let mut e = key.to_vec();
    e[class] = v;
    e
}

/// Lexicographically first live (k-1)-tuple avoiding `class` and the
/// vertices in `blocked`, as a key with a hole at `class`.
pub(crate) fn first_free_key(h: &KPartiteHypergraph, blocked: &VertexMask, class: usize) -> Option<Vec<Position>> {
    (0..h.k())
        .map(|c| {
            if c == class {
                Some(crate::graph::HOLE)
            } else {
                h.alive_positions(c).find(|&p| !blocked.contains(c, p))
            }
        })
        .collect()
}

/// Validates `b` and packages it.
pub(crate) fn finish(
    family: &HypergraphFamily,
    mode: Mode,
    target: usize,
    b: &Builder,
    trace: Vec<String>,
    step: &str,
) -> Result<RainbowRun> {
    let matching = b.to_matching();
    validate_rainbow(family, &matching).map_err(|e| crate::error::violation!(step, "output failed validation: {e}"))?;
    Ok(RainbowRun {
        mode,
        target,
        matching,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete;

    fn fam(members: Vec<KPartiteHypergraph>) -> HypergraphFamily {
        HypergraphFamily::new(members).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        let c = complete(3, 2).unwrap();
        let e = KPartiteHypergraph::empty(vec![2, 2, 2]).unwrap();
        let all = fam(vec![c.clone(), c.clone(), c.clone()]);
        assert_eq!(all.multiplicity(&[0, 1, 0]), 3);
        assert_eq!(all.min_multiplicity(1000).unwrap(), 3);
        let none = fam(vec![e.clone(), e.clone()]);
        assert_eq!(none.multiplicity(&[1, 1, 1]), 0);
        assert_eq!(none.min_multiplicity(1000).unwrap(), 0);
        let mixed = fam(vec![c, e.clone(), e]);
        assert_eq!(mixed.multiplicity(&[0, 0, 1]), 1);
        assert_eq!(mixed.min_multiplicity(1000).unwrap(), 1);
        assert!(mixed.min_multiplicity(7).is_err());
    }

    #[test]
    fn declared_m_is_checked() {
        let c = complete(3, 2).unwrap();
        let e = KPartiteHypergraph::empty(vec![2, 2, 2]).unwrap();
        let f = fam(vec![c, e]).with_declared_m(2);
        assert!(matches!(f.check_declared_m(100), Err(crate::Error::HypothesisUnmet(_))));
        assert!(f.clone().with_declared_m(1).check_declared_m(100).is_ok());
    }

    #[test]
    fn family_shapes_must_agree() {
        let a = complete(3, 2).unwrap();
        let b = complete(3, 3).unwrap();
        assert!(HypergraphFamily::new(vec![a, b]).is_err());
        assert!(HypergraphFamily::new(vec![]).is_err());
        assert_eq!(HypergraphFamily::empty(vec![2, 2]).unwrap().t(), 0);
    }

    #[test]
    fn validate_rainbow_examples() {
        let c = complete(3, 3).unwrap();
        let sparse = KPartiteHypergraph::new(vec![3, 3, 3], vec![vec![0, 0, 0]]).unwrap();
        let f = fam(vec![c.clone(), sparse]);
        assert!(validate_rainbow(&f, &RainbowMatching::default()).is_ok());

        let dup = RainbowMatching::new(vec![
            ColouredEdge {
                colour: 0,
                edge: vec![0, 0, 0],
            },
            ColouredEdge {
                colour: 0,
                edge: vec![1, 1, 1],
            },
        ]);
        assert_eq!(validate_rainbow(&f, &dup), Err(RainbowViolation::DuplicateColour(0)));

        let wrong = RainbowMatching::new(vec![ColouredEdge {
            colour: 1,
            edge: vec![1, 1, 1],
        }]);
        assert!(matches!(
            validate_rainbow(&f, &wrong),
            Err(RainbowViolation::NotAnEdge(_))
        ));

        let overlap = RainbowMatching::new(vec![
            ColouredEdge {
                colour: 0,
                edge: vec![0, 1, 2],
            },
            ColouredEdge {
                colour: 1,
                edge: vec![0, 0, 0],
            },
        ]);
        assert!(matches!(
            validate_rainbow(&f, &overlap),
            Err(RainbowViolation::Overlap(_, _))
        ));

        let ok = RainbowMatching::new(vec![
            ColouredEdge {
                colour: 0,
                edge: vec![1, 1, 1],
            },
            ColouredEdge {
                colour: 1,
                edge: vec![0, 0, 0],
            },
        ]);
        assert!(validate_rainbow(&f, &ok).is_ok());
        assert!(matches!(
            validate_rainbow(
                &f,
                &RainbowMatching::new(vec![ColouredEdge {
                    colour: 5,
                    edge: vec![0, 0, 0]
                }])
            ),
            Err(RainbowViolation::ColourOutOfRange(5))
        ));
    }
}
