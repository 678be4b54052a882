//! Path activeness and the global Markov property for regression graphs.
//!
//! Every edge end carries a mark: arrows have a head at the node they point
//! to and a tail at the other end, dashed lines carry heads at both ends,
//! full lines tails at both ends. The inner node of a V is a collision node
//! exactly when both of its edge ends are heads; everything else transmits.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{RegressionGraph, StoredEdge, UndirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Head,
    Tail,
}

/// Collision subtypes: dashed--dashed, arrow--arrow head-to-head, and
/// arrow--dashed at the inner node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CollisionKind {
    Undirected,
    Directed,
    SemiDirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerClass {
    Collision(CollisionKind),
    Transmitting,
}

/// An induced three-node configuration with a collision inner node;
/// endpoints are stored as an unordered (sorted) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VConfig {
    pub endpoints: (usize, usize),
    pub inner: usize,
    pub kind: CollisionKind,
}

/// An independence statement a ⫫ b | c over node index sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndependenceStatement {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub c: BTreeSet<usize>,
}

/// The mark of edge (i, k) at its end `at`.
pub fn node_mark(g: &RegressionGraph, i: usize, k: usize, at: usize) -> Result<Mark> {
    if at != i && at != k {
        return Err(Error::NotIncident(g.label(at).to_string()));
    }
    let e = g
        .edge_between(i, k)
        .ok_or_else(|| Error::MissingEdge(g.label(i).to_string(), g.label(k).to_string()))?;
    Ok(mark_of(e, at))
}

fn mark_of(e: StoredEdge, at: usize) -> Mark {
    match e {
        StoredEdge::Arrow { head } => {
            if head == at {
                Mark::Head
            } else {
                Mark::Tail
            }
        }
        StoredEdge::Dashed => Mark::Head,
        StoredEdge::Full => Mark::Tail,
    }
}

/// Classify the inner node i of the two-edge path h - i - k. Valid whether or
/// not h and k are coupled.
pub fn classify_inner(
    g: &RegressionGraph,
    h: usize,
    i: usize,
    k: usize,
) -> Result<InnerClass> {
    let eh = g
        .edge_between(h, i)
        .ok_or_else(|| Error::MissingEdge(g.label(h).to_string(), g.label(i).to_string()))?;
    let ek = g
        .edge_between(i, k)
        .ok_or_else(|| Error::MissingEdge(g.label(i).to_string(), g.label(k).to_string()))?;
    let (mh, mk) = (mark_of(eh, i), mark_of(ek, i));
    if mh == Mark::Head && mk == Mark::Head {
        let kind = match (eh.kind(), ek.kind()) {
            (crate::graph::EdgeKind::Dashed, crate::graph::EdgeKind::Dashed) => {
                CollisionKind::Undirected
            }
            (crate::graph::EdgeKind::Arrow, crate::graph::EdgeKind::Arrow) => {
                CollisionKind::Directed
            }
            _ => CollisionKind::SemiDirected,
        };
        Ok(InnerClass::Collision(kind))
    } else {
        Ok(InnerClass::Transmitting)
    }
}

/// All induced Vs (endpoints uncoupled) whose inner node is a collision node.
pub fn collision_vs(g: &RegressionGraph) -> BTreeSet<VConfig> {
    let mut out = BTreeSet::new();
    for i in 0..g.n() {
        let nbrs = g.neighbors(i);
        for (ai, &h) in nbrs.iter().enumerate() {
            for &k in &nbrs[ai + 1..] {
                if g.coupled(h, k) {
                    continue;
                }
                if let Ok(InnerClass::Collision(kind)) = classify_inner(g, h, i, k) {
                    out.insert(VConfig { endpoints: (h.min(k), h.max(k)), inner: i, kind });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    Active,
    Breaks,
}

fn check_sets(g: &RegressionGraph, a: &BTreeSet<usize>, b: &BTreeSet<usize>, c: &BTreeSet<usize>) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::BadSets("a and b must be nonempty".into()));
    }
    if a.intersection(b).next().is_some()
        || a.intersection(c).next().is_some()
        || b.intersection(c).next().is_some()
    {
        return Err(Error::BadSets("a, b, c must be pairwise disjoint".into()));
    }
    if let Some(&v) = a.iter().chain(b).chain(c).find(|&&v| v >= g.n()) {
        return Err(Error::UnknownLabel(format!("node index {v}")));
    }
    Ok(())
}

/// Decide whether a simple path from a to b is active given c: every inner
/// collision node is in c or has a strict descendant in c, and every inner
/// transmitting node lies in m = N \ (a ∪ b ∪ c).
pub fn is_active_path(
    g: &RegressionGraph,
    path: &[usize],
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    c: &BTreeSet<usize>,
) -> Result<PathStatus> {
    check_sets(g, a, b, c)?;
    if path.len() < 2
        || !a.contains(&path[0])
        || !b.contains(path.last().unwrap())
        || path.iter().collect::<BTreeSet<_>>().len() != path.len()
    {
        return Err(Error::NotAPath(format!("{path:?}")));
    }
    for w in path.windows(2) {
        if !g.coupled(w[0], w[1]) {
            return Err(Error::NotAPath(format!("{path:?}")));
        }
    }
    let col_ok = collision_pass_set(g, c);
    for w in path.windows(3) {
        let (h, i, k) = (w[0], w[1], w[2]);
        match classify_inner(g, h, i, k)? {
            InnerClass::Collision(_) => {
                if !col_ok[i] {
                    return Ok(PathStatus::Breaks);
                }
            }
            InnerClass::Transmitting => {
                if a.contains(&i) || b.contains(&i) || c.contains(&i) {
                    return Ok(PathStatus::Breaks);
                }
            }
        }
    }
    Ok(PathStatus::Active)
}

/// Nodes that are in c or have a strict descendant in c: c together with its
/// strict ancestors, by reverse traversal of arrows.
fn collision_pass_set(g: &RegressionGraph, c: &BTreeSet<usize>) -> Vec<bool> {
    let mut ok = vec![false; g.n()];
    let mut q: VecDeque<usize> = c.iter().copied().collect();
    for &v in c {
        ok[v] = true;
    }
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if let Some(StoredEdge::Arrow { head }) = g.edge_between(v, w) {
                if head == v && !ok[w] {
                    ok[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    ok
}

/// The global Markov property: true iff no active path from a to b given c
/// exists. Mark-aware reachability over states (node, mark of entry); each
/// state is visited at most once, so a query costs O(n + e) state expansions
/// times node degree.
pub fn separates(
    g: &RegressionGraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    c: &BTreeSet<usize>,
) -> Result<bool> {
    check_sets(g, a, b, c)?;
    let n = g.n();
    let col_ok = collision_pass_set(g, c);
    let in_a = set_flags(n, a);
    let in_b = set_flags(n, b);
    let in_c = set_flags(n, c);

    // state = (node, entered with Head?) as 2n flags
    let mut seen = vec![false; 2 * n];
    let mut q: VecDeque<(usize, Mark)> = VecDeque::new();

    for &x in a {
        for &y in g.neighbors(x) {
            if in_b[y] {
                return Ok(false);
            }
            let m = mark_of(g.edge_between(x, y).unwrap(), y);
            let s = y * 2 + (m == Mark::Head) as usize;
            if !seen[s] {
                seen[s] = true;
                q.push_back((y, m));
            }
        }
    }

    while let Some((i, entry)) = q.pop_front() {
        for &k in g.neighbors(i) {
            let e = g.edge_between(i, k).unwrap();
            let collision = entry == Mark::Head && mark_of(e, i) == Mark::Head;
            let passable = if collision {
                col_ok[i]
            } else {
                !in_a[i] && !in_b[i] && !in_c[i]
            };
            if !passable {
                continue;
            }
            if in_b[k] {
                return Ok(false);
            }
            let m = mark_of(e, k);
            let s = k * 2 + (m == Mark::Head) as usize;
            if !seen[s] {
                seen[s] = true;
                q.push_back((k, m));
            }
        }
    }
    Ok(true)
}

fn set_flags(n: usize, s: &BTreeSet<usize>) -> Vec<bool> {
    let mut f = vec![false; n];
    for &v in s {
        f[v] = true;
    }
    f
}

/// The defining pairwise independences, one per missing edge: within a
/// response component i ⫫ k | g_{>j}; across components i ⫫ k | g_{>j}\{k};
/// for two context nodes i ⫫ k | v\{i,k}.
pub fn pairwise_independences(g: &RegressionGraph) -> Vec<IndependenceStatement> {
    let mut out = Vec::new();
    for i in 0..g.n() {
        for k in i + 1..g.n() {
            if g.coupled(i, k) {
                continue;
            }
            let c: BTreeSet<usize> = if g.is_context(i) && g.is_context(k) {
                g.context_nodes().into_iter().filter(|&v| v != i && v != k).collect()
            } else {
                // the node in the earlier component plays the role of i
                let (ji, jk) = (g.component_of(i), g.component_of(k));
                let (early, late) = if ji <= jk { (ji, k) } else { (jk, i) };
                let mut past: BTreeSet<usize> = g.past_of(early).into_iter().collect();
                past.remove(&late);
                past
            };
            out.push(IndependenceStatement {
                a: BTreeSet::from([i]),
                b: BTreeSet::from([k]),
                c,
            });
        }
    }
    out
}

/// Marginal independence read off an undirected graph: no edge between a and
/// b in the subgraph induced by a ∪ b.
pub fn marginal_independent(
    u: &UndirectedGraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::BadSets("a and b must be nonempty".into()));
    }
    if a.intersection(b).next().is_some() {
        return Err(Error::BadSets("a and b must be disjoint".into()));
    }
    Ok(!a.iter().any(|&i| b.iter().any(|&k| u.has_edge(i, k))))
}
