//! Test-corpus generators: random valid regression graphs, same-skeleton
//! variants, exhaustive enumerations for small node counts, and constructive
//! generators for graphs that are guaranteed to orient into a DAG.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::equivalence::dag_orientable;
use crate::graph::{RegressionGraph, StoredEdge, UndirectedGraph};

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Random valid regression graph, built constructively: responses are split
/// into ordered blocks carrying dashed lines; arrows run from later blocks
/// and context nodes into earlier blocks; full lines join context nodes.
pub fn random_graph(n: usize, density: f64, rng: &mut impl Rng) -> RegressionGraph {
    let mut context = vec![false; n];
    for c in context.iter_mut() {
        *c = rng.gen_bool(0.25);
    }
    let mut responses: Vec<usize> = (0..n).filter(|&v| !context[v]).collect();
    responses.shuffle(rng);
    let mut block_of = vec![usize::MAX; n];
    let mut blocks = 0usize;
    for (pos, &v) in responses.iter().enumerate() {
        if pos == 0 || rng.gen_bool(0.5) {
            blocks += 1;
        }
        block_of[v] = blocks - 1;
    }

    let mut edges = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            if !rng.gen_bool(density) {
                continue;
            }
            let e = match (context[i], context[k]) {
                (true, true) => Some(StoredEdge::Full),
                (true, false) => Some(StoredEdge::Arrow { head: k }),
                (false, true) => Some(StoredEdge::Arrow { head: i }),
                (false, false) => {
                    use std::cmp::Ordering::*;
                    match block_of[i].cmp(&block_of[k]) {
                        Equal => Some(StoredEdge::Dashed),
                        // the later block holds the arrow tail
                        Less => Some(StoredEdge::Arrow { head: i }),
                        Greater => Some(StoredEdge::Arrow { head: k }),
                    }
                }
            };
            if let Some(e) = e {
                edges.push((i, k, e));
            }
        }
    }
    RegressionGraph::from_indexed(labels(n), context, &edges)
        .expect("constructive generator always yields a valid graph")
}

/// Random re-typing of the edges of `g` on the same skeleton, retried until
/// the result is a valid regression graph.
pub fn same_skeleton_variant(g: &RegressionGraph, rng: &mut impl Rng) -> Option<RegressionGraph> {
    let pairs: Vec<(usize, usize)> = g.edges().map(|(p, _)| p).collect();
    let context: Vec<bool> = (0..g.n()).map(|v| g.is_context(v)).collect();
    for _ in 0..200 {
        let edges: Vec<(usize, usize, StoredEdge)> = pairs
            .iter()
            .map(|&(lo, hi)| {
                let e = match rng.gen_range(0..4) {
                    0 => StoredEdge::Arrow { head: hi },
                    1 => StoredEdge::Arrow { head: lo },
                    2 => StoredEdge::Dashed,
                    _ => StoredEdge::Full,
                };
                (lo, hi, e)
            })
            .collect();
        if let Ok(v) = RegressionGraph::from_indexed(g.labels().to_vec(), context.clone(), &edges)
        {
            return Some(v);
        }
    }
    None
}

/// Every valid regression graph on `n` nodes: all context subsets crossed
/// with all 5 per-pair edge states, filtered through validation. Intended
/// for n <= 4.
pub fn enumerate_graphs(n: usize) -> Vec<RegressionGraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect();
    let mut out = Vec::new();
    let states = 5u64.pow(pairs.len() as u32);
    for ctx_mask in 0u32..(1 << n) {
        let context: Vec<bool> = (0..n).map(|v| ctx_mask >> v & 1 == 1).collect();
        for code in 0..states {
            let mut c = code;
            let mut edges = Vec::new();
            for &(i, k) in &pairs {
                let state = c % 5;
                c /= 5;
                match state {
                    0 => {}
                    1 => edges.push((i, k, StoredEdge::Arrow { head: k })),
                    2 => edges.push((i, k, StoredEdge::Arrow { head: i })),
                    3 => edges.push((i, k, StoredEdge::Dashed)),
                    _ => edges.push((i, k, StoredEdge::Full)),
                }
            }
            if let Ok(g) = RegressionGraph::from_indexed(labels(n), context.clone(), &edges) {
                out.push(g);
            }
        }
    }
    out
}

/// Every DAG on `n` nodes (3 states per pair, filtered for acyclicity).
pub fn enumerate_dags(n: usize) -> Vec<RegressionGraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect();
    let mut out = Vec::new();
    for code in 0..3u64.pow(pairs.len() as u32) {
        let mut c = code;
        let mut edges = Vec::new();
        for &(i, k) in &pairs {
            match c % 3 {
                0 => {}
                1 => edges.push((i, k, StoredEdge::Arrow { head: k })),
                _ => edges.push((i, k, StoredEdge::Arrow { head: i })),
            }
            c /= 3;
        }
        if let Ok(g) = RegressionGraph::from_indexed(labels(n), vec![false; n], &edges) {
            out.push(g);
        }
    }
    out
}

/// Every undirected graph on `n` nodes under the given flavor.
pub fn enumerate_undirected(n: usize, flavor: crate::graph::Flavor) -> Vec<UndirectedGraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            UndirectedGraph::new(labels(n), &edges, flavor).unwrap()
        })
        .collect()
}

/// Random graph that passes the orientability test, by rejection.
pub fn random_orientable(n: usize, rng: &mut impl Rng) -> RegressionGraph {
    loop {
        let g = random_graph(n, rng.gen_range(0.15..0.5), rng);
        if dag_orientable(&g).is_ok() {
            return g;
        }
    }
}

/// Large orientable graph, built constructively: response nodes form dashed
/// pairs; the two members of a pair share an identical set of arrow parents
/// drawn from later pairs, which chords every would-be collision path.
/// Produces n/2 + 2*k edges for some k, as close to `target_edges` as parity
/// allows.
pub fn large_orientable(n: usize, target_edges: usize, rng: &mut impl Rng) -> RegressionGraph {
    assert!(n % 2 == 0 && target_edges >= n / 2);
    let blocks = n / 2;
    let mut edges: Vec<(usize, usize, StoredEdge)> = (0..blocks)
        .map(|b| (2 * b, 2 * b + 1, StoredEdge::Dashed))
        .collect();
    // candidate (block, parent node) pairs: parents live in later blocks
    let mut candidates: Vec<(usize, usize)> = (0..blocks)
        .flat_map(|b| (2 * b + 2..n).map(move |v| (b, v)))
        .collect();
    candidates.shuffle(rng);
    let wanted = (target_edges - n / 2) / 2;
    for &(b, v) in candidates.iter().take(wanted) {
        edges.push((v, 2 * b, StoredEdge::Arrow { head: 2 * b }));
        edges.push((v, 2 * b + 1, StoredEdge::Arrow { head: 2 * b + 1 }));
    }
    let g = RegressionGraph::from_indexed(labels(n), vec![false; n], &edges)
        .expect("shared-parent construction is always valid");
    debug_assert!(dag_orientable(&g).is_ok());
    g
}
