//! Rainbow matchings of size exactly `m + Q` when `t` is close to `Q`.

use alloc::{format, string::String, vec, vec::Vec};

use super::stability::is_high_degree;
use super::{
    almost_perfect_rainbow, check_degrees, check_multiplicity, check_shape, fill, finish, first_free_key,
    high_degree_core, rainbow_or_dominating, Builder, HypergraphFamily, RainbowConfig, RainbowRun, StabilityOutcome,
};
use crate::bipartite::{
    dichotomy_24, max_bip_matching_avoiding, max_matching_into, BipMatching, BipartiteGraph, Dichotomy24,
};
use crate::budget::Mode;
use crate::error::{unmet, violation, Error, Result};
use crate::graph::{DegreeProfile, VertexMask, VertexRef};
use crate::rational::{at_most, frac, int};

const STEP: &str = "rainbow_m_plus_q";

/// A rainbow matching of size `m + Q`.
///
/// When `floor(Q/2) >= k - 1`: run the stability dichotomy with
/// `eps = 1/200k`. A perfect rainbow matching is cut down to `m + Q`
/// colours. Otherwise the dominated colours `A` and all vertices form a
/// bipartite graph `G` (`jx` is an edge when `deg_{H_j}(x) >= n^{k-1}/2`)
/// and the robust-matchability dichotomy with `mu = 1/50` decides between
/// (a) setting aside a rainbow matching of the colours outside `A` and
/// matching `A` into the remaining vertices, or (b) deleting the core `Z`,
/// running [`almost_perfect_rainbow`] on the rest with every colour outside
/// the core forced in, and matching `floor(Q/2)` leftover core colours
/// into `Z`. Each matched pair `(j, x)` is then extended to an edge of
/// `H_j` through `x`.
///
/// When `Q < 2k` every member must have a dominating set of size at most
/// `Q` (`eps = 1/3kQ`); with `X` their union the matching is built colour
/// by colour from a tuple outside `X` avoiding a class `i` where fewer than
/// `a_i` vertices of `X_i` are used, completed inside `X_i`.
///
/// Guaranteed mode requires `n >= max(1600k^4 Q, 100k^6)`,
/// `m + Q <= t <= (1 + 1/200k)Q`, the codegree profile and the
/// multiplicity floor; any failed step is an invariant violation naming the
/// step. Best effort falls back to [`almost_perfect_rainbow`] when the main
/// route stalls and keeps the larger result.
pub fn rainbow_m_plus_q(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    m: usize,
    config: &RainbowConfig,
) -> Result<RainbowRun> {
    check_shape(family, profile)?;
    let (k, t) = (family.k(), family.t());
    let q = profile.total();
    let target = m + q;
    let n = family.min_class_size();
    let guaranteed = config.mode.is_guaranteed();
    if guaranteed {
        let k4 = (k * k * k * k) as u128;
        let need = (1600 * k4 * q as u128).max(100 * k4 * (k * k) as u128);
        if (n as u128) < need {
            return Err(unmet!("n = {n} < max(1600k^4 Q, 100k^6) = {need}"));
        }
        if t < target || !at_most(t, (int(1) + frac(1, 200 * k as i128)) * int(q)) {
            return Err(unmet!(
                "need m + Q <= t <= (1 + 1/200k)Q, got m + Q = {target}, t = {t}, Q = {q}"
            ));
        }
        check_degrees(family, profile)?;
        check_multiplicity(family, m, config)?;
        config.budget.validate()?;
    }

    let mut trace = Vec::new();
    if target == 0 {
        return finish(family, config.mode, target, &Builder::new(family), trace, STEP);
    }
    let primary = if q / 2 + 1 >= k {
        large_q(family, profile, m, config, &mut trace)
    } else {
        small_q(family, profile, config, &mut trace)
    };
    let mut b = match primary {
        Ok(b) => b,
        Err(e) if guaranteed => return Err(e),
        Err(e) => {
            trace.push(format!("main route stopped: {e}"));
            Builder::new(family)
        }
    };
    if !guaranteed && b.len() < target {
        let fallback = almost_perfect_rainbow(family, profile, m, &[], config)?;
        trace.push(format!("fallback search reached {}", fallback.matching.len()));
        if fallback.matching.len() > b.len() {
            b = Builder::from_matching(family, &fallback.matching);
        }
    }
    if guaranteed && b.len() < target {
        return Err(violation!(STEP, "assembled {} < m + Q = {target}", b.len()));
    }
    for j in (0..t).rev() {
        if b.len() <= target {
            break;
        }
        b.take(j);
    }
    finish(family, config.mode, target, &b, trace, STEP)
}

/// Right side of `G`: every vertex, class by class.
struct VertexIndex {
    offsets: Vec<usize>,
}

impl VertexIndex {
    fn new(family: &HypergraphFamily) -> Self {
        let mut offsets = vec![0];
        for &s in family.class_sizes() {
            offsets.push(offsets.last().unwrap() + s as usize);
        }
        VertexIndex { offsets }
    }

    fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn id(&self, v: VertexRef) -> usize {
        self.offsets[v.class] + v.pos as usize
    }

    fn vertex(&self, id: usize) -> VertexRef {
        let class = self.offsets.partition_point(|&o| o <= id) - 1;
        VertexRef::new(class, (id - self.offsets[class]) as u32)
    }
}

fn fail(mode: Mode, what: String) -> Error {
    if mode.is_guaranteed() {
        violation!(STEP, "{what}")
    } else {
        Error::Inconclusive(what)
    }
}

fn large_q(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    m: usize,
    config: &RainbowConfig,
    trace: &mut Vec<String>,
) -> Result<Builder> {
    let (k, t) = (family.k(), family.t());
    let q = profile.total();
    let mode = config.mode;
    let eta = frac(1, 200 * k as i128);
    let (a, sets) = match rainbow_or_dominating(family, profile, eta, config)? {
        StabilityOutcome::PerfectRainbow(mm) => {
            trace.push(String::from("stability: perfect rainbow matching"));
            return Ok(Builder::from_matching(family, &mm));
        }
        StabilityOutcome::DominatedColours {
            colours,
            dominating_sets,
        } => (colours, dominating_sets),
    };
    trace.push(format!("stability: {} dominated colours", a.len()));
    for (&j, d) in a.iter().zip(&sets) {
        high_degree_core(family.member(j), d, profile, int(2 * k) * eta, mode)?;
    }

    let n = family.min_class_size();
    let index = VertexIndex::new(family);
    let adjacency: Vec<Vec<usize>> = a
        .iter()
        .map(|&j| {
            let h = family.member(j);
            (0..k)
                .flat_map(|c| h.alive_positions(c).map(move |p| VertexRef::new(c, p)))
                .filter(|&x| is_high_degree(h, n, x))
                .map(|x| index.id(x))
                .collect()
        })
        .collect();
    let g = BipartiteGraph::new(a.len(), index.total(), adjacency)?;
    let split = dichotomy_24(&g, q, frac(1, 50)).map_err(|e| match e {
        Error::HypothesisUnmet(d) if mode.is_guaranteed() => violation!(STEP, "auxiliary graph: {d}"),
        other => other,
    })?;

    let mut b = Builder::new(family);
    let mg: BipMatching = match split {
        Dichotomy24::RobustWitness { .. } => {
            trace.push(String::from("dichotomy: robust"));
            let rest: Vec<usize> = (0..t).filter(|j| a.binary_search(j).is_err()).collect();
            let wide = profile.argmax();
            if mode.is_guaranteed() && profile.get(wide) < rest.len() {
                return Err(violation!(
                    STEP,
                    "a_max = {} < t - |A| = {}; the set-aside matching is not guaranteed",
                    profile.get(wide),
                    rest.len()
                ));
            }
            for &j in &rest {
                let h = family.member(j);
                let through_key = first_free_key(h, &b.used, wide).and_then(|key| {
                    h.neighbours_of_key(&key)
                        .iter()
                        .find(|&&v| !b.used.contains(wide, v))
                        .map(|&v| fill(&key, wide, v))
                });
                let e = match through_key {
                    Some(e) => e,
                    None if !mode.is_guaranteed() => match h.first_free_edge(&b.used) {
                        Some(e) => e.clone(),
                        None => continue,
                    },
                    None => return Err(violation!(STEP, "set-aside edge for colour {j} not found")),
                };
                b.put(j, e);
            }
            let y: Vec<usize> = b
                .to_matching()
                .assignments
                .iter()
                .flat_map(|c| {
                    c.edge
                        .iter()
                        .enumerate()
                        .map(|(cl, &p)| index.id(VertexRef::new(cl, p)))
                        .collect::<Vec<_>>()
                })
                .collect();
            let mg = max_bip_matching_avoiding(&g, &y);
            if mg.len() < a.len() {
                return Err(fail(
                    mode,
                    format!("A matches only {} of {} colours outside Y", mg.len(), a.len()),
                ));
            }
            mg
        }
        Dichotomy24::Core { x, b_prime, .. } => {
            let s = q / 2;
            trace.push(format!(
                "dichotomy: core with |X| = {}, |Z| = {}",
                x.len(),
                b_prime.len()
            ));
            let z: Vec<VertexRef> = b_prime.iter().map(|&id| index.vertex(id)).collect();
            let mut reduced: Vec<usize> = (0..k)
                .map(|i| profile.get(i).saturating_sub(z.iter().filter(|v| v.class == i).count()))
                .collect();
            let mut excess = reduced.iter().sum::<usize>().saturating_sub(q - s);
            for r in reduced.iter_mut().rev() {
                let cut = excess.min(*r);
                *r -= cut;
                excess -= cut;
            }
            if reduced.iter().sum::<usize>() != q - s {
                return Err(fail(
                    mode,
                    format!("reduced profile {reduced:?} does not sum to Q - s = {}", q - s),
                ));
            }
            let core_colours: Vec<usize> = x.iter().map(|&r| a[r]).collect();
            let forced: Vec<usize> = (0..t).filter(|j| !core_colours.contains(j)).collect();
            let rest = family.induced(&z);
            let inner = almost_perfect_rainbow(&rest, &DegreeProfile::new(reduced), m, &forced, config)?;
            for a_ in &inner.matching.assignments {
                b.put(a_.colour, a_.edge.clone());
            }
            let leftover: Vec<usize> = x.iter().copied().filter(|&r| b.edges[a[r]].is_none()).take(s).collect();
            if leftover.len() < s {
                return Err(fail(
                    mode,
                    format!("only {} unused core colours, need {s}", leftover.len()),
                ));
            }
            let mg = max_matching_into(&g, &leftover, &b_prime);
            if mg.len() < s {
                return Err(fail(
                    mode,
                    format!("leftover colours match only {} of {s} into Z", mg.len()),
                ));
            }
            if mode.is_guaranteed() && b.len() + mg.len() != m + q {
                return Err(violation!(
                    STEP,
                    "size accounting {} + {} != m + Q = {}",
                    b.len(),
                    mg.len(),
                    m + q
                ));
            }
            mg
        }
    };

    let mut blocked = VertexMask::new(family.class_sizes());
    for &(_, id) in &mg {
        let v = index.vertex(id);
        blocked.insert(v.class, v.pos);
    }
    let mut extended = 0;
    for &(r, id) in &mg {
        let j = a[r];
        let x = index.vertex(id);
        blocked.remove(x.class, x.pos);
        let f = family
            .member(j)
            .edges()
            .iter()
            .find(|e| e[x.class] == x.pos && b.used.is_free(e) && blocked.is_free(e))
            .cloned();
        blocked.insert(x.class, x.pos);
        match f {
            Some(f) => {
                b.put(j, f);
                extended += 1;
            }
            None if mode.is_guaranteed() => {
                return Err(violation!(
                    STEP,
                    "no edge of colour {j} through {x} avoids the matching"
                ))
            }
            None => {}
        }
    }
    trace.push(format!("extended {extended} of {} matched colours", mg.len()));
    Ok(b)
}

fn small_q(
    family: &HypergraphFamily,
    profile: &DegreeProfile,
    config: &RainbowConfig,
    trace: &mut Vec<String>,
) -> Result<Builder> {
    let (k, t) = (family.k(), family.t());
    let q = profile.total();
    let mode = config.mode;
    if q == 0 {
        return Err(fail(mode, String::from("Q = 0 leaves nothing to build on")));
    }
    let eps = frac(1, (3 * k * q) as i128);
    let sets = match rainbow_or_dominating(family, profile, eps, config)? {
        StabilityOutcome::PerfectRainbow(mm) => {
            trace.push(String::from("stability: perfect rainbow matching"));
            return Ok(Builder::from_matching(family, &mm));
        }
        StabilityOutcome::DominatedColours {
            colours,
            dominating_sets,
        } => {
            if colours.len() < t {
                return Err(fail(
                    mode,
                    format!(
                        "only {} of {t} colours have dominating sets of size <= Q",
                        colours.len()
                    ),
                ));
            }
            dominating_sets
        }
    };
    let mut x = VertexMask::new(family.class_sizes());
    for v in sets.iter().flatten() {
        x.insert(v.class, v.pos);
    }
    trace.push(format!(
        "union of dominating sets has {} vertices",
        (0..k).map(|c| x.count_in_class(c)).sum::<usize>()
    ));

    let mut b = Builder::new(family);
    let mut used_in_x = vec![0usize; k];
    for j in 0..t {
        let h = family.member(j);
        let mut blocked = b.used.clone();
        for c in 0..k {
            for p in h.alive_positions(c) {
                if x.contains(c, p) {
                    blocked.insert(c, p);
                }
            }
        }
        let open: Vec<usize> = (0..k).filter(|&i| used_in_x[i] < profile.get(i)).collect();
        let tries = if mode.is_guaranteed() {
            &open[..open.len().min(1)]
        } else {
            &open[..]
        };
        let found = tries.iter().find_map(|&i| {
            let key = first_free_key(h, &blocked, i)?;
            h.neighbours_of_key(&key)
                .iter()
                .find(|&&u| x.contains(i, u) && !b.used.contains(i, u))
                .map(|&u| (i, fill(&key, i, u)))
        });
        match found {
            Some((i, e)) => {
                used_in_x[i] += 1;
                b.put(j, e);
            }
            None => return Err(fail(mode, format!("no edge for colour {j} meeting X once"))),
        }
    }
    Ok(b)
}
