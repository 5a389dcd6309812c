//! Vertex/edge model for k-partite k-graphs.
//!
//! A vertex is a `(class, position)` pair. An edge is stored as its position
//! vector: entry `j` is the vertex of class `j`. Restriction to a vertex
//! subset ([`KPartiteHypergraph::induced`]) keeps the original numbering and
//! marks removed vertices dead, so tuples picked before a restriction stay
//! addressable after it.

use alloc::{format, string::String, vec, vec::Vec};
use core::fmt;

use hashbrown::{HashMap, HashSet};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Position = u32;

/// A full crossing k-tuple, one position per class.
pub type Edge = Vec<Position>;

/// Marker for the avoided class inside a neighbourhood-index key.
pub(crate) const HOLE: Position = Position::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexRef {
    pub class: usize,
    pub pos: Position,
}

impl VertexRef {
    pub fn new(class: usize, pos: Position) -> Self {
        VertexRef { class, pos }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}:{}", self.class, self.pos)
    }
}

/// A vertex set with at most one vertex per class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingTuple {
    slots: Vec<Option<Position>>,
}

impl CrossingTuple {
    pub fn empty(k: usize) -> Self {
        CrossingTuple { slots: vec![None; k] }
    }

    pub fn from_slots(slots: Vec<Option<Position>>) -> Self {
        CrossingTuple { slots }
    }

    pub fn full(edge: &[Position]) -> Self {
        CrossingTuple {
            slots: edge.iter().map(|&p| Some(p)).collect(),
        }
    }

    /// The (k-1)-tuple avoiding `class`; `others` lists the positions of the
    /// remaining classes in increasing class order.
    pub fn avoiding(k: usize, class: usize, others: &[Position]) -> Self {
        assert_eq!(others.len() + 1, k, "a tuple avoiding one class has k-1 entries");
        let mut rest = others.iter();
        let slots = (0..k)
            .map(|j| if j == class { None } else { rest.next().copied() })
            .collect();
        CrossingTuple { slots }
    }

    pub fn k(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Option<Position>] {
        &self.slots
    }

    pub fn set(&mut self, class: usize, pos: Option<Position>) {
        self.slots[class] = pos;
    }

    /// Number of classes the tuple meets.
    pub fn size(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// The single class this tuple avoids, if it avoids exactly one.
    pub fn avoided_class(&self) -> Option<usize> {
        let mut missing = self.slots.iter().enumerate().filter(|(_, s)| s.is_none());
        match (missing.next(), missing.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(c, s)| s.map(|p| VertexRef::new(c, p)))
    }

    pub fn as_edge(&self) -> Option<Edge> {
        self.slots.iter().copied().collect()
    }

    pub(crate) fn key(&self) -> Vec<Position> {
        self.slots.iter().map(|s| s.unwrap_or(HOLE)).collect()
    }
}

/// Sum-aware vector `(a_1, ..., a_k)` of codegree lower bounds.
///
/// No ordering is imposed on the entries; callers that need
/// `a_1 >= ... >= a_k` relabel classes themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeProfile(Vec<usize>);

impl DegreeProfile {
    pub fn new(a: Vec<usize>) -> Self {
        DegreeProfile(a)
    }

    pub fn zeros(k: usize) -> Self {
        DegreeProfile(vec![0; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `Q`: the sum over every class.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `q`: the sum over every class except the first.
    pub fn tail(&self) -> usize {
        self.0.iter().skip(1).sum()
    }

    /// Index of the largest entry, smallest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &a) in self.0.iter().enumerate() {
            if a > self.0[best] {
                best = i;
            }
        }
        best
    }

    /// Checks `a_i <= min_codegree_into(H, i)` for every class; on failure
    /// names the first offending class.
    pub fn check_against(&self, h: &KPartiteHypergraph) -> core::result::Result<(), String> {
        if self.k() != h.k() {
            return Err(format!("profile has {} entries but k = {}", self.k(), h.k()));
        }
        for (i, &a) in self.0.iter().enumerate() {
            let d = h.min_codegree_into(i);
            if d < a {
                return Err(format!("codegree into class {i} is {d} < a_{i} = {a}"));
            }
        }
        Ok(())
    }
}

/// Every full crossing tuple over `class_sizes`, lexicographically.
pub fn crossing_tuples(class_sizes: &[Position]) -> impl Iterator<Item = Edge> + '_ {
    let k = class_sizes.len();
    let empty = class_sizes.contains(&0);
    let mut next = (!empty && k > 0).then(|| vec![0; k]);
    core::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for c in (0..k).rev() {
            succ[c] += 1;
            if succ[c] < class_sizes[c] {
                next = Some(succ);
                break;
            }
            succ[c] = 0;
        }
        Some(current)
    })
}

/// Per-class membership bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMask {
    bits: Vec<Vec<bool>>,
}

impl VertexMask {
    pub fn new(class_sizes: &[Position]) -> Self {
        VertexMask {
            bits: class_sizes.iter().map(|&n| vec![false; n as usize]).collect(),
        }
    }

    pub fn contains(&self, class: usize, pos: Position) -> bool {
        self.bits[class][pos as usize]
    }

    pub fn insert(&mut self, class: usize, pos: Position) {
        self.bits[class][pos as usize] = true;
    }

    pub fn remove(&mut self, class: usize, pos: Position) {
        self.bits[class][pos as usize] = false;
    }

    pub fn insert_edge(&mut self, edge: &[Position]) {
        for (c, &p) in edge.iter().enumerate() {
            self.insert(c, p);
        }
    }

    pub fn remove_edge(&mut self, edge: &[Position]) {
        for (c, &p) in edge.iter().enumerate() {
            self.remove(c, p);
        }
    }

    /// True when no vertex of `edge` is in the mask. `HOLE` entries are
    /// skipped, so partial keys can be tested too.
    pub fn is_free(&self, edge: &[Position]) -> bool {
        edge.iter().enumerate().all(|(c, &p)| p == HOLE || !self.contains(c, p))
    }

    pub fn count_in_class(&self, class: usize) -> usize {
        self.bits[class].iter().filter(|&&b| b).count()
    }
}

/// A set of full crossing tuples; validity against a host graph is checked
/// with [`KPartiteHypergraph::validate_matching`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub edges: Vec<Edge>,
}

impl Matching {
    pub fn new(edges: Vec<Edge>) -> Self {
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.edges
            .iter()
            .flat_map(|e| e.iter().enumerate().map(|(c, &p)| VertexRef::new(c, p)))
    }

    pub fn sorted(mut self) -> Self {
        self.edges.sort();
        self
    }
}

/// First problem found by [`KPartiteHypergraph::validate_matching`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingViolation {
    Malformed(Edge),
    NotAnEdge(Edge),
    Overlap(Edge, Edge),
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::Malformed(e) => write!(f, "malformed tuple {e:?}"),
            MatchingViolation::NotAnEdge(e) => write!(f, "{e:?} is not an edge"),
            MatchingViolation::Overlap(a, b) => write!(f, "{a:?} and {b:?} share a vertex"),
        }
    }
}

/// A k-partite k-graph with O(1) edge membership and a neighbourhood index
/// for every crossing (k-1)-tuple.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct KPartiteHypergraph {
    class_sizes: Vec<Position>,
    alive: Vec<Vec<bool>>,
    edges: Vec<Edge>,
    edge_set: HashSet<Edge>,
    neighbourhoods: HashMap<Vec<Position>, Vec<Position>>,
    vertex_degrees: Vec<Vec<usize>>,
}

impl PartialEq for KPartiteHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.class_sizes == other.class_sizes && self.alive == other.alive && self.edges == other.edges
    }
}

impl Eq for KPartiteHypergraph {}

impl KPartiteHypergraph {
    /// Builds a graph from an edge list, rejecting malformed, out-of-range
    /// and duplicate edges.
    pub fn new(class_sizes: Vec<Position>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let k = class_sizes.len();
        if k < 2 {
            return Err(invalid!("k must be at least 2, got {k}"));
        }
        if let Some(i) = class_sizes.iter().position(|&n| n == 0) {
            return Err(invalid!("class {i} is empty"));
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for e in edges {
            if e.len() != k {
                return Err(invalid!("edge {e:?} has {} entries, expected {k}", e.len()));
            }
            if let Some(c) = (0..k).find(|&c| e[c] >= class_sizes[c]) {
                return Err(invalid!(
                    "edge {e:?} position {} out of range for class {c} of size {}",
                    e[c],
                    class_sizes[c]
                ));
            }
            if !seen.insert(e.clone()) {
                return Err(invalid!("duplicate edge {e:?}"));
            }
            list.push(e);
        }
        let alive = class_sizes.iter().map(|&n| vec![true; n as usize]).collect();
        Ok(Self::assemble(class_sizes, alive, list, seen))
    }

    /// Empty graph on the given classes.
    pub fn empty(class_sizes: Vec<Position>) -> Result<Self> {
        Self::new(class_sizes, Vec::new())
    }

    fn assemble(
        class_sizes: Vec<Position>,
        alive: Vec<Vec<bool>>,
        mut edges: Vec<Edge>,
        edge_set: HashSet<Edge>,
    ) -> Self {
        edges.sort_unstable();
        let k = class_sizes.len();
        let mut neighbourhoods: HashMap<Vec<Position>, Vec<Position>> = HashMap::new();
        let mut vertex_degrees: Vec<Vec<usize>> = class_sizes.iter().map(|&n| vec![0; n as usize]).collect();
        for e in &edges {
            for i in 0..k {
                let mut key = e.clone();
                key[i] = HOLE;
                // Sorted edge order keeps every list ascending.
                neighbourhoods.entry(key).or_default().push(e[i]);
                vertex_degrees[i][e[i] as usize] += 1;
            }
        }
        KPartiteHypergraph {
            class_sizes,
            alive,
            edges,
            edge_set,
            neighbourhoods,
            vertex_degrees,
        }
    }

    pub fn k(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[Position] {
        &self.class_sizes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &[Position]) -> bool {
        self.edge_set.contains(e)
    }

    pub fn is_alive(&self, v: VertexRef) -> bool {
        v.class < self.k() && v.pos < self.class_sizes[v.class] && self.alive[v.class][v.pos as usize]
    }

    pub fn alive_positions(&self, class: usize) -> impl Iterator<Item = Position> + '_ {
        self.alive[class]
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(p, _)| p as Position)
    }

    pub fn alive_count(&self, class: usize) -> usize {
        self.alive[class].iter().filter(|&&a| a).count()
    }

    /// Size of the smallest class after restriction; this is the `n` the
    /// lemmas see when class sizes are only bounded from below.
    pub fn min_class_size(&self) -> usize {
        (0..self.k()).map(|c| self.alive_count(c)).min().unwrap_or(0)
    }

    /// `Some(n)` when every class has exactly `n` live vertices.
    pub fn uniform_class_size(&self) -> Option<usize> {
        let n = self.alive_count(0);
        (1..self.k()).all(|c| self.alive_count(c) == n).then_some(n)
    }

    pub fn all_alive(&self) -> bool {
        self.alive.iter().all(|c| c.iter().all(|&a| a))
    }

    /// Number of edges containing `v`.
    pub fn vertex_degree(&self, v: VertexRef) -> usize {
        self.vertex_degrees[v.class][v.pos as usize]
    }

    /// Sorted neighbourhood of a key with exactly one `HOLE`.
    pub(crate) fn neighbours_of_key(&self, key: &[Position]) -> &[Position] {
        self.neighbourhoods.get(key).map_or(&[], |v| v.as_slice())
    }

    fn check_tuple(&self, s: &CrossingTuple) -> Result<usize> {
        if s.k() != self.k() {
            return Err(invalid!("tuple has {} slots, expected {}", s.k(), self.k()));
        }
        let avoided = s
            .avoided_class()
            .ok_or_else(|| invalid!("tuple {:?} does not avoid exactly one class", s.slots()))?;
        for v in s.vertices() {
            if !self.is_alive(v) {
                return Err(invalid!("vertex {v} is out of range or removed"));
            }
        }
        Ok(avoided)
    }

    /// `N_H(S)`: the positions in the avoided class completing `s` to an edge.
    pub fn neighbourhood(&self, s: &CrossingTuple) -> Result<&[Position]> {
        self.check_tuple(s)?;
        Ok(self.neighbours_of_key(&s.key()))
    }

    /// `deg(S)` for a crossing (k-1)-tuple.
    pub fn degree(&self, s: &CrossingTuple) -> Result<usize> {
        self.neighbourhood(s).map(<[Position]>::len)
    }

    /// Calls `f` on the key of every live crossing (k-1)-tuple avoiding
    /// `class`, in lexicographic order. Stops early when `f` returns false.
    pub(crate) fn for_each_key_avoiding(&self, class: usize, mut f: impl FnMut(&[Position]) -> bool) {
        let k = self.k();
        let lists: Vec<Vec<Position>> = (0..k)
            .map(|c| {
                if c == class {
                    vec![HOLE]
                } else {
                    self.alive_positions(c).collect()
                }
            })
            .collect();
        if lists.iter().any(Vec::is_empty) {
            return;
        }
        let mut idx = vec![0usize; k];
        let mut key: Vec<Position> = lists.iter().map(|l| l[0]).collect();
        loop {
            if !f(&key) {
                return;
            }
            let mut c = k;
            loop {
                if c == 0 {
                    return;
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < lists[c].len() {
                    key[c] = lists[c][idx[c]];
                    break;
                }
                idx[c] = 0;
                key[c] = lists[c][0];
            }
        }
    }

    /// `delta_{[k] \ {i}}(H)`: minimum degree over live crossing (k-1)-tuples
    /// avoiding class `i`. When no such tuple exists the condition is vacuous
    /// and the live size of class `i` is returned.
    pub fn min_codegree_into(&self, class: usize) -> usize {
        assert!(class < self.k(), "class {class} out of range");
        let mut best = self.alive_count(class);
        self.for_each_key_avoiding(class, |key| {
            best = best.min(self.neighbours_of_key(key).len());
            best > 0
        });
        best
    }

    /// Minimum codegree into every class.
    pub fn codegrees(&self) -> DegreeProfile {
        DegreeProfile::new((0..self.k()).map(|i| self.min_codegree_into(i)).collect())
    }

    /// Edges whose class-0 vertex is `pos` (a contiguous run of the sorted
    /// edge list).
    pub fn edges_through_first(&self, pos: Position) -> &[Edge] {
        let lo = self.edges.partition_point(|e| e[0] < pos);
        let hi = self.edges.partition_point(|e| e[0] <= pos);
        &self.edges[lo..hi]
    }

    /// The (k-1)-graph on classes `1..k` of tuples forming an edge with a
    /// class-0 vertex. Class `j` of the result is class `j + 1` here.
    pub fn link_graph(&self, v: VertexRef) -> Result<KPartiteHypergraph> {
        if v.class != 0 {
            return Err(invalid!("link graphs are taken at class-0 vertices, got {v}"));
        }
        if self.k() < 3 {
            return Err(invalid!("link graph needs k >= 3, got k = {}", self.k()));
        }
        if !self.is_alive(v) {
            return Err(invalid!("vertex {v} is out of range or removed"));
        }
        let edges: Vec<Edge> = self
            .edges_through_first(v.pos)
            .iter()
            .map(|e| e[1..].to_vec())
            .collect();
        let set = edges.iter().cloned().collect();
        Ok(Self::assemble(
            self.class_sizes[1..].to_vec(),
            self.alive[1..].to_vec(),
            edges,
            set,
        ))
    }

    /// `H[V \ removed]`, keeping the original numbering.
    pub fn induced(&self, removed: &[VertexRef]) -> KPartiteHypergraph {
        let mut alive = self.alive.clone();
        for v in removed {
            if v.class < self.k() && v.pos < self.class_sizes[v.class] {
                alive[v.class][v.pos as usize] = false;
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.iter().enumerate().all(|(c, &p)| alive[c][p as usize]))
            .cloned()
            .collect();
        let set = edges.iter().cloned().collect();
        Self::assemble(self.class_sizes.clone(), alive, edges, set)
    }

    /// Same graph with `extra` edges added (duplicates ignored); used to
    /// check monotonicity.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Result<KPartiteHypergraph> {
        let mut set = self.edge_set.clone();
        let mut edges = self.edges.clone();
        for e in extra {
            if e.len() != self.k()
                || e.iter()
                    .enumerate()
                    .any(|(c, &p)| p >= self.class_sizes[c] || !self.alive[c][p as usize])
            {
                return Err(invalid!("edge {e:?} is not a live crossing tuple"));
            }
            if set.insert(e.clone()) {
                edges.push(e);
            }
        }
        Ok(Self::assemble(self.class_sizes.clone(), self.alive.clone(), edges, set))
    }

    /// First edge (lexicographically) missed by `set`, or `None` when `set`
    /// dominates the graph.
    pub fn undominated_edge(&self, set: &[VertexRef]) -> Option<&Edge> {
        let mut mask = VertexMask::new(&self.class_sizes);
        for v in set {
            if v.class < self.k() && v.pos < self.class_sizes[v.class] {
                mask.insert(v.class, v.pos);
            }
        }
        self.edges.iter().find(|e| mask.is_free(e))
    }

    pub fn is_dominating(&self, set: &[VertexRef]) -> bool {
        self.undominated_edge(set).is_none()
    }

    /// Checks that `m` is a set of pairwise-disjoint edges of this graph.
    ///
    /// Tuples are scanned in lexicographic order and the first problem is
    /// reported: a malformed or non-edge tuple, or an overlap with an
    /// earlier tuple.
    pub fn validate_matching(&self, m: &Matching) -> core::result::Result<(), MatchingViolation> {
        let mut sorted: Vec<&Edge> = m.edges.iter().collect();
        sorted.sort();
        let mut owner: HashMap<VertexRef, usize> = HashMap::new();
        for (idx, e) in sorted.iter().enumerate() {
            if e.len() != self.k() || e.iter().enumerate().any(|(c, &p)| p >= self.class_sizes[c]) {
                return Err(MatchingViolation::Malformed((*e).clone()));
            }
            if !self.contains_edge(e) {
                return Err(MatchingViolation::NotAnEdge((*e).clone()));
            }
            let clash = e
                .iter()
                .enumerate()
                .filter_map(|(c, &p)| owner.get(&VertexRef::new(c, p)).copied())
                .min();
            if let Some(prev) = clash {
                return Err(MatchingViolation::Overlap(sorted[prev].clone(), (*e).clone()));
            }
            for (c, &p) in e.iter().enumerate() {
                owner.insert(VertexRef::new(c, p), idx);
            }
        }
        Ok(())
    }

    pub(crate) fn empty_mask(&self) -> VertexMask {
        VertexMask::new(&self.class_sizes)
    }

    /// Live positions of `class` not in `used`, ascending.
    pub(crate) fn free_positions(&self, class: usize, used: &VertexMask) -> Vec<Position> {
        self.alive_positions(class)
            .filter(|&p| !used.contains(class, p))
            .collect()
    }

    /// Lexicographically smallest edge avoiding `used`.
    pub(crate) fn first_free_edge(&self, used: &VertexMask) -> Option<&Edge> {
        self.edges.iter().find(|e| used.is_free(e))
    }

    /// Greedy maximal matching: scan edges lexicographically, keep each one
    /// disjoint from those already kept.
    pub fn greedy_maximal_matching(&self) -> Matching {
        let mut used = self.empty_mask();
        let mut out = Vec::new();
        for e in &self.edges {
            if used.is_free(e) {
                used.insert_edge(e);
                out.push(e.clone());
            }
        }
        Matching::new(out)
    }
}
