//! Instance generators and the remove-one-add-two matcher.
//!
//! Both barrier constructions put their distinguished sets `A_i` on the
//! first `|A_i|` positions of class `i`.

use alloc::{string::String, vec, vec::Vec};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, unmet, violation, Result};
use crate::graph::{crossing_tuples, DegreeProfile, Edge, KPartiteHypergraph, Matching, Position};
use crate::rational::Rational;

/// Version tag of the random-instance generator. Bump it whenever the
/// sampling rule below changes, since it changes every generated instance.
pub const RANDOM_GENERATOR_VERSION: &str = "splitmix64-bernoulli-v1";

/// A generated graph plus the prefix sets it was built from.
#[derive(Clone, Debug)]
pub struct Construction {
    pub graph: KPartiteHypergraph,
    pub meta: ConstructionMeta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub construction: String,
    pub k: usize,
    pub n: usize,
    /// `|A_i|` per class; `A_i` is the prefix `0..|A_i|` of class `i`.
    pub a_sizes: Vec<usize>,
}

impl ConstructionMeta {
    pub fn a_sets(&self) -> Vec<Vec<Position>> {
        self.a_sizes.iter().map(|&s| (0..s as Position).collect()).collect()
    }
}

fn check_kn(k: usize, n: usize) -> Result<Vec<Position>> {
    if k < 2 {
        return Err(invalid!("k must be at least 2, got {k}"));
    }
    if n == 0 || n > Position::MAX as usize / 2 {
        return Err(invalid!("n must be positive, got {n}"));
    }
    Ok(vec![n as Position; k])
}

/// The complete k-partite k-graph with classes of size `n`.
pub fn complete(k: usize, n: usize) -> Result<KPartiteHypergraph> {
    let sizes = check_kn(k, n)?;
    let edges: Vec<Edge> = crossing_tuples(&sizes).collect();
    KPartiteHypergraph::new(sizes, edges)
}

/// Whether `s` is an admissible `|A_i|`: `n/2 - 1 <= s <= n/2 + 1`.
fn divisibility_size_ok(n: usize, s: usize) -> bool {
    2 * s + 2 >= n && 2 * s <= n + 2 && s <= n
}

/// Default `|A_i|` vector: every class at `floor(n/2)`, then the first
/// class moved by one to make the total odd (down if admissible, else up).
pub fn default_divisibility_sizes(k: usize, n: usize) -> Result<Vec<usize>> {
    let mut sizes = vec![n / 2; k];
    if sizes.iter().sum::<usize>() % 2 == 0 {
        if sizes[0] > 0 && divisibility_size_ok(n, sizes[0] - 1) {
            sizes[0] -= 1;
        } else if divisibility_size_ok(n, sizes[0] + 1) {
            sizes[0] += 1;
        } else {
            return Err(invalid!("no admissible odd-sum size vector for k={k}, n={n}"));
        }
    }
    Ok(sizes)
}

/// Divisibility barrier: edges are the crossing tuples with an even number
/// of vertices in the union of the `A_i`. Codegrees are about `n/2`, yet no
/// matching is perfect because the `A_i` have odd total size.
pub fn divisibility_barrier(k: usize, n: usize, sizes: Option<&[usize]>) -> Result<Construction> {
    let class_sizes = check_kn(k, n)?;
    let sizes = match sizes {
        Some(s) => s.to_vec(),
        None => default_divisibility_sizes(k, n)?,
    };
    if sizes.len() != k {
        return Err(invalid!("expected {k} set sizes, got {}", sizes.len()));
    }
    if let Some(&s) = sizes.iter().find(|&&s| !divisibility_size_ok(n, s)) {
        return Err(invalid!("|A_i| = {s} outside [n/2 - 1, n/2 + 1] for n = {n}"));
    }
    if sizes.iter().sum::<usize>() % 2 == 0 {
        return Err(invalid!("sum of |A_i| must be odd, got {:?}", sizes));
    }
    let edges: Vec<Edge> = crossing_tuples(&class_sizes)
        .filter(|e| e.iter().zip(&sizes).filter(|&(&p, &s)| (p as usize) < s).count() % 2 == 0)
        .collect();
    Ok(Construction {
        graph: KPartiteHypergraph::new(class_sizes, edges)?,
        meta: ConstructionMeta {
            construction: "divisibility".into(),
            k,
            n,
            a_sizes: sizes,
        },
    })
}

fn meets_prefix(e: &[Position], a: &[usize]) -> bool {
    e.iter().zip(a).any(|(&p, &s)| (p as usize) < s)
}

/// Space barrier: edges are the crossing tuples meeting the union of the
/// `A_i` with `|A_i| = a_i`, so no matching exceeds `sum a_i`.
pub fn space_barrier(k: usize, n: usize, a: &DegreeProfile) -> Result<Construction> {
    let class_sizes = check_kn(k, n)?;
    if a.k() != k {
        return Err(invalid!("profile has {} entries, expected {k}", a.k()));
    }
    if let Some(&ai) = a.as_slice().iter().find(|&&ai| ai > n) {
        return Err(invalid!("a_i = {ai} exceeds n = {n}"));
    }
    let edges: Vec<Edge> = crossing_tuples(&class_sizes)
        .filter(|e| meets_prefix(e, a.as_slice()))
        .collect();
    Ok(Construction {
        graph: KPartiteHypergraph::new(class_sizes, edges)?,
        meta: ConstructionMeta {
            construction: "space".into(),
            k,
            n,
            a_sizes: a.as_slice().to_vec(),
        },
    })
}

/// Space barrier backbone plus independent Bernoulli(`density`) edges.
///
/// Sampling rule (version [`RANDOM_GENERATOR_VERSION`]): a `SplitMix64`
/// stream seeded with `seed` yields one `u64` draw `x` per crossing tuple, in
/// lexicographic tuple order, whether or not the tuple is already in the
/// backbone. A tuple outside the backbone becomes an edge iff
/// `x * den < num * 2^64` for `density = num / den`.
pub fn random_instance(
    k: usize,
    n: usize,
    a: &DegreeProfile,
    density: Rational,
    seed: u64,
) -> Result<KPartiteHypergraph> {
    let class_sizes = check_kn(k, n)?;
    if a.k() != k || a.as_slice().iter().any(|&ai| ai > n) {
        return Err(invalid!("profile {:?} invalid for k={k}, n={n}", a.as_slice()));
    }
    let (num, den) = (*density.numer(), *density.denom());
    if num < 0 || den <= 0 || num > den || den > u64::MAX as i128 {
        return Err(invalid!("density must lie in [0, 1], got {num}/{den}"));
    }
    let (num, den) = (num as u128, den as u128);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let edges: Vec<Edge> = crossing_tuples(&class_sizes)
        .filter(|e| {
            let x = rng.next_u64() as u128;
            meets_prefix(e, a.as_slice()) || x * den < num << 64
        })
        .collect();
    KPartiteHypergraph::new(class_sizes, edges)
}

/// A matching of exactly `min{n - k + 2, Q}` edges found by local search.
///
/// Starting from the greedy maximal matching, each round applies the first
/// strictly improving move in lexicographic order: add one free edge, or
/// drop one matching edge and add two disjoint edges in its place. Below the
/// target such a move always exists, so failing to find one is reported as
/// an invariant violation.
pub fn fact_1_5_matching(h: &KPartiteHypergraph, profile: &DegreeProfile) -> Result<Matching> {
    profile.check_against(h).map_err(|e| unmet!("{e}"))?;
    let k = h.k();
    let n = h.min_class_size();
    let target = (n + 2).saturating_sub(k).min(profile.total());

    let mut matching = h.greedy_maximal_matching().edges;
    matching.truncate(target);
    let mut used = h.empty_mask();
    for e in &matching {
        used.insert_edge(e);
    }

    let cap = (n * profile.total()).max(target);
    let mut rounds = 0;
    while matching.len() < target {
        rounds += 1;
        if rounds > cap {
            return Err(violation!(
                "fact_1_5",
                "iteration cap {cap} reached at size {} < target {target}",
                matching.len()
            ));
        }
        if let Some(e) = h.first_free_edge(&used) {
            let e = e.clone();
            used.insert_edge(&e);
            matching.push(e);
            continue;
        }
        matching.sort();
        let swap = matching.iter().enumerate().find_map(|(idx, out)| {
            used.remove_edge(out);
            let found = two_disjoint_free_edges(h, &used);
            used.insert_edge(out);
            found.map(|(f1, f2)| (idx, f1, f2))
        });
        match swap {
            Some((idx, f1, f2)) => {
                let out = matching.swap_remove(idx);
                used.remove_edge(&out);
                used.insert_edge(&f1);
                used.insert_edge(&f2);
                matching.push(f1);
                matching.push(f2);
            }
            None => {
                return Err(violation!(
                    "fact_1_5",
                    "no improving move at size {} < target {target}; profile {:?}, matching {:?}",
                    matching.len(),
                    profile.as_slice(),
                    matching
                ))
            }
        }
    }
    matching.sort();
    Ok(Matching::new(matching))
}

fn two_disjoint_free_edges(h: &KPartiteHypergraph, used: &crate::graph::VertexMask) -> Option<(Edge, Edge)> {
    let free: Vec<&Edge> = h.edges().iter().filter(|e| used.is_free(e)).collect();
    for (i, f1) in free.iter().enumerate() {
        for f2 in &free[i + 1..] {
            if f1.iter().zip(f2.iter()).all(|(a, b)| a != b) {
                return Some(((*f1).clone(), (*f2).clone()));
            }
        }
    }
    None
}
