//! Markov equivalence of regression graphs and membership tests for the
//! neighboring model classes (DAG-orientable, concentration, covariance,
//! AMP and LWF chain graphs on the same components).
//!
//! Two regression graphs are Markov equivalent iff they have the same
//! skeleton and the same collision Vs, irrespective of edge type.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, RegressionGraph, UndirectedGraph};
use crate::orientation::max_cardinality_search;
use crate::separation::{classify_inner, collision_vs, InnerClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Lexicographically smallest skeleton edge present in exactly one graph.
    pub skeleton_mismatch: Option<(String, String)>,
    /// Smallest collision V present in exactly one graph: (endpoints, inner).
    pub collision_mismatch: Option<((String, String), String)>,
}

pub fn markov_equivalent(
    g1: &RegressionGraph,
    g2: &RegressionGraph,
) -> Result<EquivalenceReport> {
    let mut l1: Vec<&String> = g1.labels().iter().collect();
    let mut l2: Vec<&String> = g2.labels().iter().collect();
    l1.sort();
    l2.sort();
    if l1 != l2 {
        return Err(Error::NodeSetMismatch);
    }

    let skel = |g: &RegressionGraph| -> BTreeSet<(String, String)> {
        g.edges()
            .map(|((lo, hi), _)| sorted_pair(g.label(lo), g.label(hi)))
            .collect()
    };
    let (s1, s2) = (skel(g1), skel(g2));
    let skeleton_mismatch = s1.symmetric_difference(&s2).min().cloned();

    let vs = |g: &RegressionGraph| -> BTreeSet<((String, String), String)> {
        collision_vs(g)
            .iter()
            .map(|v| {
                (
                    sorted_pair(g.label(v.endpoints.0), g.label(v.endpoints.1)),
                    g.label(v.inner).to_string(),
                )
            })
            .collect()
    };
    let (v1, v2) = (vs(g1), vs(g2));
    let collision_mismatch = v1.symmetric_difference(&v2).min().cloned();

    Ok(EquivalenceReport {
        equivalent: skeleton_mismatch.is_none() && collision_mismatch.is_none(),
        skeleton_mismatch,
        collision_mismatch,
    })
}

fn sorted_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// Chordal, with the maximum cardinality search ordering (its reverse is
    /// a perfect elimination ordering).
    Chordal { mcs_order: Vec<usize> },
    /// A chordless cycle of length >= 4.
    NotChordal { cycle: Vec<usize> },
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal { .. })
    }
}

pub fn is_chordal(u: &UndirectedGraph) -> Chordality {
    let n = u.n();
    // MCS per component, concatenated.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if !seen[s] {
            let comp = max_cardinality_search(u, s);
            for &v in &comp {
                seen[v] = true;
            }
            order.extend(comp);
        }
    }
    // Chordality check: for each node, its earlier-ordered neighbors minus
    // the latest of them must all be adjacent to that latest one.
    let mut pos = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    for &v in &order {
        let earlier: Vec<usize> = u
            .neighbors(v)
            .into_iter()
            .filter(|&w| pos[w] < pos[v])
            .collect();
        if let Some(&latest) = earlier.iter().max_by_key(|&&w| pos[w]) {
            for &w in &earlier {
                if w != latest && !u.has_edge(w, latest) {
                    let cycle = chordless_cycle_witness(u)
                        .expect("failed elimination check implies a chordless cycle");
                    return Chordality::NotChordal { cycle };
                }
            }
        }
    }
    Chordality::Chordal { mcs_order: order }
}

/// Find some chordless cycle of length >= 4: scan triples (v, a, b) with a, b
/// neighbors of v and a-b missing, then connect a to b avoiding v and all
/// other neighbors of v; a shortest such path closes a chordless cycle.
fn chordless_cycle_witness(u: &UndirectedGraph) -> Option<Vec<usize>> {
    let n = u.n();
    for v in 0..n {
        let nbrs = u.neighbors(v);
        for (ai, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[ai + 1..] {
                if u.has_edge(a, b) {
                    continue;
                }
                let mut blocked = vec![false; n];
                blocked[v] = true;
                for &w in &nbrs {
                    if w != a && w != b {
                        blocked[w] = true;
                    }
                }
                if let Some(path) = shortest_path(u, a, b, &blocked) {
                    if path.len() >= 3 {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
    }
    None
}

fn shortest_path(u: &UndirectedGraph, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
    use std::collections::VecDeque;
    let n = u.n();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut q = VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in u.neighbors(x) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                prev[w] = x;
                q.push_back(w);
            }
        }
    }
    None
}

/// A chordless four-node path whose two inner nodes are collision nodes on
/// the path. Chordlessness is checked on consecutive triples only; an edge
/// between the two endpoints is permitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CollisionPath4 {
    pub nodes: [usize; 4],
    pub semi_directed: bool,
}

pub fn find_collision_paths4(
    g: &RegressionGraph,
    semi_directed_only: bool,
) -> Vec<CollisionPath4> {
    let mut out = Vec::new();
    for ((lo, hi), _) in g.edges() {
        for (k1, k2) in [(lo, hi), (hi, lo)] {
            for &k0 in g.neighbors(k1) {
                if k0 == k2 || g.coupled(k0, k2) {
                    continue;
                }
                if !matches!(classify_inner(g, k0, k1, k2).unwrap(), InnerClass::Collision(_)) {
                    continue;
                }
                for &k3 in g.neighbors(k2) {
                    if k3 == k1 || k3 == k0 || k3 <= k0 || g.coupled(k1, k3) {
                        continue;
                    }
                    if !matches!(
                        classify_inner(g, k1, k2, k3).unwrap(),
                        InnerClass::Collision(_)
                    ) {
                        continue;
                    }
                    let kinds = [
                        g.edge_between(k0, k1).unwrap().kind(),
                        g.edge_between(k1, k2).unwrap().kind(),
                        g.edge_between(k2, k3).unwrap().kind(),
                    ];
                    let semi = kinds.iter().any(|&k| k == EdgeKind::Arrow)
                        && kinds.iter().any(|&k| k != EdgeKind::Arrow);
                    if semi_directed_only && !semi {
                        continue;
                    }
                    out.push(CollisionPath4 { nodes: [k0, k1, k2, k3], semi_directed: semi });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Why a graph cannot be oriented into a Markov equivalent DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    NonChordalContext(Vec<usize>),
    CollisionPath(CollisionPath4),
}

/// Orientability test: the full-line (context) subgraph must be chordal and
/// no chordless collision path in four nodes may exist.
pub fn dag_orientable(g: &RegressionGraph) -> std::result::Result<(), Obstruction> {
    let full_edges: Vec<(usize, usize)> = g
        .edges()
        .filter(|(_, e)| e.kind() == EdgeKind::Full)
        .map(|(p, _)| p)
        .collect();
    let ctx = UndirectedGraph::new(
        g.labels().to_vec(),
        &full_edges,
        crate::graph::Flavor::Concentration,
    )
    .expect("full-line subgraph is a valid undirected graph");
    if let Chordality::NotChordal { cycle } = is_chordal(&ctx) {
        return Err(Obstruction::NonChordalContext(cycle));
    }
    if let Some(&p) = find_collision_paths4(g, false).first() {
        return Err(Obstruction::CollisionPath(p));
    }
    Ok(())
}

/// Markov equivalent to its skeleton concentration graph iff no collision V.
pub fn concentration_equivalent(g: &RegressionGraph) -> bool {
    collision_vs(g).is_empty()
}

/// Markov equivalent to its skeleton covariance graph iff no transmitting V.
pub fn covariance_equivalent(g: &RegressionGraph) -> bool {
    transmitting_v_witness(g).is_none()
}

fn transmitting_v_witness(g: &RegressionGraph) -> Option<(usize, usize, usize)> {
    for i in 0..g.n() {
        let nbrs = g.neighbors(i);
        for (ai, &h) in nbrs.iter().enumerate() {
            for &k in &nbrs[ai + 1..] {
                if g.coupled(h, k) {
                    continue;
                }
                if classify_inner(g, h, i, k).unwrap() == InnerClass::Transmitting {
                    return Some((h, i, k));
                }
            }
        }
    }
    None
}

/// A covariance graph and a concentration graph of the same skeleton are
/// Markov equivalent iff every connected component is complete.
pub fn cov_con_equivalent(u: &UndirectedGraph) -> bool {
    incomplete_component_pair(u).is_none()
}

fn incomplete_component_pair(u: &UndirectedGraph) -> Option<(usize, usize)> {
    for comp in u.components() {
        for (ai, &x) in comp.iter().enumerate() {
            for &y in &comp[ai + 1..] {
                if !u.has_edge(x, y) {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

/// Same independence structure as an AMP chain graph on the same components
/// iff the dashed graph of every response component is complete.
pub fn amp_same_components(g: &RegressionGraph) -> bool {
    amp_witness(g).is_none()
}

fn amp_witness(g: &RegressionGraph) -> Option<(usize, usize)> {
    for comp in g.components() {
        if g.is_context(comp[0]) {
            continue;
        }
        for (ai, &x) in comp.iter().enumerate() {
            for &y in &comp[ai + 1..] {
                if !g.coupled(x, y) {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

/// Same structure as an LWF chain graph on the same components iff response
/// components are complete and no semi-directed chordless collision 4-path
/// exists.
pub fn lwf_same_components(g: &RegressionGraph) -> bool {
    amp_same_components(g) && find_collision_paths4(g, true).is_empty()
}

/// A chordless path in four nodes blocks a covariance graph from being
/// Markov equivalent to any DAG.
pub fn covariance_dag_obstruction(u: &UndirectedGraph) -> Option<[usize; 4]> {
    let n = u.n();
    let mut best: Option<[usize; 4]> = None;
    for k1 in 0..n {
        for k2 in u.neighbors(k1) {
            for k0 in u.neighbors(k1) {
                if k0 == k2 || u.has_edge(k0, k2) {
                    continue;
                }
                for k3 in u.neighbors(k2) {
                    if k3 == k1 || k3 == k0 || k3 <= k0 || u.has_edge(k1, k3) {
                        continue;
                    }
                    let cand = [k0, k1, k2, k3];
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best
}

/// Membership flags against the neighboring model classes, with witnesses.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub dag_orientable: bool,
    pub concentration_equivalent: bool,
    pub covariance_equivalent: bool,
    pub amp_same_components: bool,
    pub lwf_same_components: bool,
    pub cov_con_equivalent: bool,
    pub dag_witness: Option<Obstruction>,
    pub concentration_witness: Option<crate::separation::VConfig>,
    pub covariance_witness: Option<(usize, usize, usize)>,
    pub amp_witness: Option<(usize, usize)>,
    pub lwf_witness: Option<CollisionPath4>,
    pub cov_con_witness: Option<(usize, usize)>,
}

pub fn classify(g: &RegressionGraph) -> ClassReport {
    let dag = dag_orientable(g);
    let con_witness = collision_vs(g).into_iter().next();
    let cov_witness = transmitting_v_witness(g);
    let amp_w = amp_witness(g);
    let lwf_path = find_collision_paths4(g, true).into_iter().next();
    let skel = g.skeleton();
    let cc_w = incomplete_component_pair(&skel);
    ClassReport {
        dag_orientable: dag.is_ok(),
        concentration_equivalent: con_witness.is_none(),
        covariance_equivalent: cov_witness.is_none(),
        amp_same_components: amp_w.is_none(),
        lwf_same_components: amp_w.is_none() && lwf_path.is_none(),
        cov_con_equivalent: cc_w.is_none(),
        dag_witness: dag.err(),
        concentration_witness: con_witness,
        covariance_witness: cov_witness,
        amp_witness: amp_w,
        lwf_witness: lwf_path,
        cov_con_witness: cc_w,
    }
}
