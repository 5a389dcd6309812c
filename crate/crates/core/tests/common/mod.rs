#![allow(dead_code)]

use hypermatch_core::graph::crossing_tuples;
use hypermatch_core::rainbow::HypergraphFamily;
use hypermatch_core::{Edge, KPartiteHypergraph, Position};
use proptest::prelude::*;

/// Largest matching by trying every subset of edges in order.
pub fn naive_nu(h: &KPartiteHypergraph) -> usize {
    fn go(edges: &[Edge], i: usize, chosen: &mut Vec<Edge>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if chosen.len() + (edges.len() - i) <= *best {
            return;
        }
        for j in i..edges.len() {
            if chosen.iter().all(|c| c.iter().zip(&edges[j]).all(|(a, b)| a != b)) {
                chosen.push(edges[j].clone());
                go(edges, j + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    go(h.edges(), 0, &mut Vec::new(), &mut best);
    best
}

/// Largest rainbow matching: each colour is skipped or given a disjoint edge.
pub fn naive_rainbow(f: &HypergraphFamily) -> usize {
    fn go(f: &HypergraphFamily, j: usize, chosen: &mut Vec<Edge>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if j == f.t() || chosen.len() + f.t() - j <= *best {
            return;
        }
        for e in f.member(j).edges() {
            if chosen.iter().all(|c| c.iter().zip(e).all(|(a, b)| a != b)) {
                chosen.push(e.clone());
                go(f, j + 1, chosen, best);
                chosen.pop();
            }
        }
        go(f, j + 1, chosen, best);
    }
    let mut best = 0;
    go(f, 0, &mut Vec::new(), &mut best);
    best
}

/// Naive `delta_{[k] \ {i}}`: every tuple avoiding `i`, every completion.
pub fn naive_codegree(h: &KPartiteHypergraph, i: usize) -> usize {
    let sizes = h.class_sizes().to_vec();
    let mut others = sizes.clone();
    others[i] = 1;
    crossing_tuples(&others)
        .map(|mut e| {
            (0..sizes[i])
                .filter(|&v| {
                    e[i] = v;
                    h.contains_edge(&e)
                })
                .count()
        })
        .min()
        .unwrap_or(sizes[i] as usize)
}

pub fn graph_from_bits(k: usize, n: usize, bits: &[bool]) -> KPartiteHypergraph {
    let sizes = vec![n as Position; k];
    let edges: Vec<Edge> = crossing_tuples(&sizes)
        .zip(bits)
        .filter(|(_, &b)| b)
        .map(|(e, _)| e)
        .collect();
    KPartiteHypergraph::new(sizes, edges).unwrap()
}

/// Graphs with `k` equal classes of size `1..=max_n`, each tuple present
/// with probability about `density`.
pub fn graphs(k: usize, max_n: usize, density: f64) -> impl Strategy<Value = KPartiteHypergraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let bits = proptest::collection::vec(proptest::bool::weighted(density), n.pow(k as u32));
            (Just(n), bits)
        })
        .prop_map(move |(n, bits)| graph_from_bits(k, n, &bits))
}

/// Families of `1..=max_t` graphs on a shared shape.
pub fn families(k: usize, max_n: usize, max_t: usize, density: f64) -> impl Strategy<Value = HypergraphFamily> {
    (1..=max_n, 1..=max_t)
        .prop_flat_map(move |(n, t)| {
            let member = proptest::collection::vec(proptest::bool::weighted(density), n.pow(k as u32));
            (Just(n), proptest::collection::vec(member, t))
        })
        .prop_map(move |(n, members)| {
            HypergraphFamily::new(members.iter().map(|b| graph_from_bits(k, n, b)).collect()).unwrap()
        })
}
