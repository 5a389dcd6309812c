//! Bipartite matching, canonical Hall violators and the robust-matchability
//! dichotomy.

use alloc::{collections::VecDeque, vec, vec::Vec};

use rand_core::RngCore;
use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, unmet, violation, Result};
use crate::rational::{at_least, at_most, frac, int, Rational};

/// Two-class graph given by left-indexed adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    left_size: usize,
    right_size: usize,
    adjacency: Vec<Vec<usize>>,
}

/// Pairs `(left, right)` sorted by left index.
pub type BipMatching = Vec<(usize, usize)>;

impl BipartiteGraph {
    /// Adjacency lists are sorted; duplicates and out-of-range entries are
    /// rejected.
    pub fn new(left_size: usize, right_size: usize, mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        if adjacency.len() != left_size {
            return Err(invalid!(
                "{} adjacency lists for {left_size} left vertices",
                adjacency.len()
            ));
        }
        for (x, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(&y) = list.iter().find(|&&y| y >= right_size) {
                return Err(invalid!("edge {x}-{y} leaves the right class of size {right_size}"));
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid!("duplicate edge at left vertex {x}"));
            }
        }
        Ok(BipartiteGraph {
            left_size,
            right_size,
            adjacency,
        })
    }

    pub fn from_edges(left_size: usize, right_size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); left_size];
        for &(x, y) in edges {
            if x >= left_size {
                return Err(invalid!("edge {x}-{y} leaves the left class of size {left_size}"));
            }
            adjacency[x].push(y);
        }
        Self::new(left_size, right_size, adjacency)
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.right_size];
        for list in &self.adjacency {
            for &y in list {
                d[y] += 1;
            }
        }
        d
    }

    /// `N(S)`, sorted.
    pub fn neighbourhood_of(&self, set: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.right_size];
        for &x in set {
            for &y in &self.adjacency[x] {
                seen[y] = true;
            }
        }
        (0..self.right_size).filter(|&y| seen[y]).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }
}

struct Kuhn<'a> {
    g: &'a BipartiteGraph,
    right_ok: &'a [bool],
    mate_left: Vec<Option<usize>>,
    mate_right: Vec<Option<usize>>,
    stamp: Vec<usize>,
    round: usize,
}

impl<'a> Kuhn<'a> {
    fn new(g: &'a BipartiteGraph, right_ok: &'a [bool]) -> Self {
        Kuhn {
            g,
            right_ok,
            mate_left: vec![None; g.left_size],
            mate_right: vec![None; g.right_size],
            stamp: vec![0; g.right_size],
            round: 0,
        }
    }

    fn augment(&mut self, x: usize) -> bool {
        for i in 0..self.g.adjacency[x].len() {
            let y = self.g.adjacency[x][i];
            if !self.right_ok[y] || self.stamp[y] == self.round {
                continue;
            }
            self.stamp[y] = self.round;
            let free = match self.mate_right[y] {
                None => true,
                Some(z) => self.augment(z),
            };
            if free {
                self.mate_left[x] = Some(y);
                self.mate_right[y] = Some(x);
                return true;
            }
        }
        false
    }

    fn run(&mut self, lefts: impl Iterator<Item = usize>) {
        for x in lefts {
            self.round += 1;
            self.augment(x);
        }
    }

    fn pairs(&self) -> BipMatching {
        self.mate_left
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect()
    }
}

/// Maximum matching by augmenting paths, scanning left vertices and their
/// adjacency lists in index order.
pub fn max_bip_matching(g: &BipartiteGraph) -> BipMatching {
    max_bip_matching_avoiding(g, &[])
}

/// Maximum matching in `G - deleted`, where `deleted` lists right vertices.
pub fn max_bip_matching_avoiding(g: &BipartiteGraph, deleted: &[usize]) -> BipMatching {
    let right_ok = right_mask(g, deleted);
    let mut k = Kuhn::new(g, &right_ok);
    k.run(0..g.left_size);
    k.pairs()
}

/// Maximum matching between the left vertices in `left` and the right
/// vertices in `right`.
pub fn max_matching_into(g: &BipartiteGraph, left: &[usize], right: &[usize]) -> BipMatching {
    let mut right_ok = vec![false; g.right_size];
    for &y in right {
        right_ok[y] = true;
    }
    let mut k = Kuhn::new(g, &right_ok);
    k.run(left.iter().copied());
    k.pairs()
}

/// A matching saturating `left` using only right vertices in `right`, if
/// one exists.
pub fn saturating_matching_into(g: &BipartiteGraph, left: &[usize], right: &[usize]) -> Option<BipMatching> {
    let m = max_matching_into(g, left, right);
    (m.len() == left.len()).then_some(m)
}

fn right_mask(g: &BipartiteGraph, deleted: &[usize]) -> Vec<bool> {
    let mut ok = vec![true; g.right_size];
    for &y in deleted {
        if y < g.right_size {
            ok[y] = false;
        }
    }
    ok
}

/// `None` when a matching saturating the left class exists, otherwise the
/// canonical violator: the left vertices reachable from unmatched left
/// vertices along alternating paths of a maximum matching.
pub fn hall_violator(g: &BipartiteGraph) -> Option<Vec<usize>> {
    hall_violator_avoiding(g, &[])
}

/// [`hall_violator`] in `G - deleted`.
pub fn hall_violator_avoiding(g: &BipartiteGraph, deleted: &[usize]) -> Option<Vec<usize>> {
    let right_ok = right_mask(g, deleted);
    let mut k = Kuhn::new(g, &right_ok);
    k.run(0..g.left_size);
    let mut seen_left = vec![false; g.left_size];
    let mut seen_right = vec![false; g.right_size];
    let mut queue: VecDeque<usize> = (0..g.left_size).filter(|&x| k.mate_left[x].is_none()).collect();
    if queue.is_empty() {
        return None;
    }
    for &x in &queue {
        seen_left[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &g.adjacency[x] {
            if !right_ok[y] || seen_right[y] {
                continue;
            }
            seen_right[y] = true;
            let z = k.mate_right[y].expect("a maximum matching has no augmenting path");
            if !seen_left[z] {
                seen_left[z] = true;
                queue.push_back(z);
            }
        }
    }
    Some((0..g.left_size).filter(|&x| seen_left[x]).collect())
}

/// One deletion set tried by [`dichotomy_24`] and the saturating matching
/// found after deleting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestedDeletion {
    pub deleted: Vec<usize>,
    pub matching: BipMatching,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy24 {
    /// Every tested deletion set leaves a matching of size `|A|`.
    RobustWitness { tested: Vec<TestedDeletion> },
    /// `deleted` broke saturation; every `floor(q/2)`-subset of `x` should
    /// match perfectly into `b_prime`.
    Core {
        deleted: Vec<usize>,
        x: Vec<usize>,
        b_prime: Vec<usize>,
    },
}

/// Seed for the subset sampler used in post-validation.
const SAMPLE_SEED: u64 = 0x2_4d1c;
const SAMPLES: usize = 50;

/// Either robust matchability of the left class or a highly matchable core.
///
/// Deletion sets are tested in order: the empty set, then sets grown one
/// right vertex at a time, each time deleting the vertex whose removal
/// shrinks the maximum matching most (ties: larger degree, then smaller
/// index), up to `floor(mu q)` vertices. The first set that breaks
/// saturation yields the core: `X` is its canonical Hall violator and `B'`
/// the first `floor(q/2)` vertices of `N(X)` with at most `q/5`
/// non-neighbours in `X`. Core outputs are checked on up to 50 subsets of
/// `X` (all of them when there are few).
pub fn dichotomy_24(g: &BipartiteGraph, q: usize, mu: Rational) -> Result<Dichotomy24> {
    if q == 0 {
        return Err(invalid!("q must be positive"));
    }
    if mu < int(0) || mu > frac(1, 50) {
        return Err(invalid!("mu = {mu} is outside [0, 1/50]"));
    }
    let qr = int(q);
    if !at_most(g.left_size, (int(1) + mu) * qr) {
        return Err(unmet!(
            "|A| = {} exceeds (1 + mu) q = {}",
            g.left_size,
            (int(1) + mu) * qr
        ));
    }
    if let Some(x) = (0..g.left_size).find(|&x| !at_least(g.degree(x), (int(1) - mu) * qr)) {
        return Err(unmet!(
            "left vertex {x} has degree {} < (1 - mu) q = {}",
            g.degree(x),
            (int(1) - mu) * qr
        ));
    }

    let max_deleted = crate::rational::floor_usize(mu * qr);
    let right_degree = g.right_degrees();
    let mut deleted: Vec<usize> = Vec::new();
    let mut tested = Vec::new();
    loop {
        if let Some(x) = hall_violator_avoiding(g, &deleted) {
            return core_from_violator(g, q, mu, deleted, x);
        }
        tested.push(TestedDeletion {
            deleted: deleted.clone(),
            matching: max_bip_matching_avoiding(g, &deleted),
        });
        if deleted.len() >= max_deleted {
            return Ok(Dichotomy24::RobustWitness { tested });
        }
        let mut best: Option<(usize, usize)> = None;
        for y in 0..g.right_size {
            if deleted.contains(&y) || right_degree[y] == 0 {
                continue;
            }
            deleted.push(y);
            let size = max_bip_matching_avoiding(g, &deleted).len();
            deleted.pop();
            let better = match best {
                None => true,
                Some((bs, by)) => size < bs || (size == bs && right_degree[y] > right_degree[by]),
            };
            if better {
                best = Some((size, y));
            }
        }
        match best {
            Some((_, y)) => {
                deleted.push(y);
                deleted.sort_unstable();
            }
            None => return Ok(Dichotomy24::RobustWitness { tested }),
        }
    }
}

fn core_from_violator(
    g: &BipartiteGraph,
    q: usize,
    mu: Rational,
    deleted: Vec<usize>,
    x: Vec<usize>,
) -> Result<Dichotomy24> {
    let s = q / 2;
    let dump = |what: &str| {
        violation!(
            "dichotomy_24",
            "{what}; q = {q}, mu = {mu}, deleted = {deleted:?}, X = {x:?}, graph = {g:?}"
        )
    };
    if !at_least(x.len(), (int(1) - int(2) * mu) * int(q)) {
        return Err(dump("|X| < (1 - 2 mu) q"));
    }
    let n_x = g.neighbourhood_of(&x);
    let b_prime: Vec<usize> = n_x
        .iter()
        .copied()
        .filter(|&y| {
            let missing = x.iter().filter(|&&v| !g.has_edge(v, y)).count();
            5 * missing <= q
        })
        .take(s)
        .collect();
    if b_prime.len() < s {
        return Err(dump("fewer than floor(q/2) admissible vertices in N(X)"));
    }
    for a in sample_subsets(&x, s) {
        if saturating_matching_into(g, &a, &b_prime).is_none() {
            return Err(dump("a subset of X has no perfect matching into B'"));
        }
    }
    Ok(Dichotomy24::Core { deleted, x, b_prime })
}

/// Up to [`SAMPLES`] `size`-subsets of `pool`: all of them when there are
/// at most that many, otherwise a seeded sample.
pub fn sample_subsets(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size > pool.len() {
        return Vec::new();
    }
    if binomial_at_most(pool.len(), size, SAMPLES) {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| pool[i]).collect());
            let mut i = size;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < pool.len() - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let mut rng = SplitMix64::seed_from_u64(SAMPLE_SEED);
    (0..SAMPLES)
        .map(|_| {
            let mut p = pool.to_vec();
            for i in 0..size {
                let j = i + (rng.next_u64() % (p.len() - i) as u64) as usize;
                p.swap(i, j);
            }
            let mut a = p[..size].to_vec();
            a.sort_unstable();
            a
        })
        .collect()
}

fn binomial_at_most(n: usize, r: usize, cap: usize) -> bool {
    let r = r.min(n - r);
    let mut c: u128 = 1;
    for i in 0..r {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > cap as u128 {
            return false;
        }
    }
    true
}
