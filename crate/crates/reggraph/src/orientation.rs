//! Orientation of an eligible regression graph into a Markov equivalent DAG:
//! maximum cardinality search over the full-line blocks, then stepwise
//! replacement of the undirected edges, with self-verification.
//!
//! Ranks are kept as (major, minor) pairs so that a node can later be slotted
//! strictly below an already-ranked anchor without renumbering; ties are
//! broken by node index, and the final labeling is flattened to dense ranks.

use std::collections::BTreeMap;

use crate::equivalence::{dag_orientable, Obstruction};
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, RegressionGraph, StoredEdge, UndirectedGraph};
use crate::separation::collision_vs;

/// Order the connected component of `seed` so that each next node maximizes
/// the number of already-ordered neighbors; ties go to the smallest index.
pub fn max_cardinality_search(u: &UndirectedGraph, seed: usize) -> Vec<usize> {
    let n = u.n();
    let mut in_comp = vec![false; n];
    let mut stack = vec![seed];
    in_comp[seed] = true;
    while let Some(x) = stack.pop() {
        for w in u.neighbors(x) {
            if !in_comp[w] {
                in_comp[w] = true;
                stack.push(w);
            }
        }
    }
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::new();
    let mut next = Some(seed);
    while let Some(v) = next {
        done[v] = true;
        order.push(v);
        for w in u.neighbors(v) {
            weight[w] += 1;
        }
        next = (0..n)
            .filter(|&w| in_comp[w] && !done[w])
            .max_by(|&x, &y| weight[x].cmp(&weight[y]).then(y.cmp(&x)));
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u8,
    /// Tail of the resulting arrow.
    pub from: usize,
    /// Head of the resulting arrow.
    pub to: usize,
    pub before: EdgeKind,
}

impl StepRecord {
    pub fn render(&self, g: &RegressionGraph) -> String {
        let sym = match self.before {
            EdgeKind::Dashed => "~~",
            EdgeKind::Full => "--",
            EdgeKind::Arrow => "->",
        };
        format!(
            "step {}: {} {} {} => {} -> {}",
            self.step,
            g.label(self.from),
            sym,
            g.label(self.to),
            g.label(self.from),
            g.label(self.to),
        )
    }
}

#[derive(Debug, Clone)]
pub struct OrientationResult {
    /// All-arrow acyclic graph on the same skeleton, context flags cleared.
    pub dag: RegressionGraph,
    /// Dense integer rank per node label; every arrow in `dag` runs from a
    /// higher rank to a lower one.
    pub labeling: BTreeMap<String, usize>,
    pub steps: Vec<StepRecord>,
}

impl OrientationResult {
    pub fn trace(&self, input: &RegressionGraph) -> Vec<String> {
        self.steps.iter().map(|s| s.render(input)).collect()
    }
}

/// Provisional rank: compared as (major, minor, node index).
type Rank = (u64, i64);

struct Ranker {
    label: Vec<Option<Rank>>,
    next_major: u64,
    next_sub: i64,
}

impl Ranker {
    fn new(n: usize) -> Self {
        Ranker { label: vec![None; n], next_major: 1, next_sub: 1 }
    }
    fn fresh(&mut self, v: usize) {
        debug_assert!(self.label[v].is_none());
        self.label[v] = Some((self.next_major, 0));
        self.next_major += 1;
    }
    fn below(&mut self, v: usize, anchor: usize) {
        debug_assert!(self.label[v].is_none());
        let (maj, min) = self.label[anchor].expect("anchor must be ranked");
        self.label[v] = Some((maj, min - self.next_sub));
        self.next_sub += 1;
    }
    fn key(&self, v: usize) -> Option<(u64, i64, usize)> {
        self.label[v].map(|(a, b)| (a, b, v))
    }
    fn higher(&self, x: usize, y: usize) -> bool {
        self.key(x).expect("ranked") > self.key(y).expect("ranked")
    }
    /// Make sure a forced arrow from -> to is reflected in the ranks where
    /// freedom remains; already-ranked pairs are left untouched.
    fn force(&mut self, from: usize, to: usize) {
        match (self.label[from].is_some(), self.label[to].is_some()) {
            (false, false) => {
                self.fresh(to);
                self.fresh(from);
            }
            (false, true) => self.fresh(from),
            (true, false) => self.below(to, from),
            (true, true) => {}
        }
    }
}

struct Rewriter<'g> {
    g: &'g RegressionGraph,
    edges: BTreeMap<(usize, usize), StoredEdge>,
    ranker: Ranker,
    steps: Vec<StepRecord>,
}

impl<'g> Rewriter<'g> {
    fn mark_head_at(&self, x: usize, y: usize, at: usize) -> bool {
        let key = (x.min(y), x.max(y));
        match self.edges[&key] {
            StoredEdge::Arrow { head } => head == at,
            StoredEdge::Dashed => true,
            StoredEdge::Full => false,
        }
    }

    fn is_dashed(&self, x: usize, y: usize) -> bool {
        self.edges[&(x.min(y), x.max(y))] == StoredEdge::Dashed
    }

    fn orient(&mut self, step: u8, from: usize, to: usize) {
        let key = (from.min(to), from.max(to));
        let before = self.edges[&key].kind();
        self.edges.insert(key, StoredEdge::Arrow { head: to });
        self.steps.push(StepRecord { step, from, to, before });
    }

    /// Step 3: a dashed edge i ~ o becomes i -> o when some k, uncoupled with
    /// i, meets o with an arrowhead-bearing edge (dashed or arrow into o).
    fn step3_candidate(&self) -> Option<(usize, usize)> {
        for (&(lo, hi), e) in &self.edges {
            if *e != StoredEdge::Dashed {
                continue;
            }
            for (i, o) in [(lo, hi), (hi, lo)] {
                let hit = self
                    .g
                    .neighbors(o)
                    .iter()
                    .any(|&k| k != i && !self.g.coupled(i, k) && self.mark_head_at(o, k, o));
                if hit {
                    return Some((i, o));
                }
            }
        }
        None
    }

    /// Step 4: a triangle with two dashed edges i ~ o ~ k and coupled i, k
    /// becomes the sink path i -> o <- k. Prefer a candidate whose forced
    /// arrows do not contradict existing ranks.
    fn step4_candidate(&self) -> Option<(usize, usize, usize)> {
        let mut fallback = None;
        for o in 0..self.g.n() {
            let nbrs = self.g.neighbors(o);
            for (ai, &i) in nbrs.iter().enumerate() {
                if !self.is_dashed(i, o) {
                    continue;
                }
                for &k in &nbrs[ai + 1..] {
                    if !self.is_dashed(o, k) || !self.g.coupled(i, k) {
                        continue;
                    }
                    let conflict = [i, k].iter().any(|&x| {
                        self.ranker.label[x].is_some()
                            && self.ranker.label[o].is_some()
                            && self.ranker.higher(o, x)
                    });
                    if !conflict {
                        return Some((o, i, k));
                    }
                    fallback.get_or_insert((o, i, k));
                }
            }
        }
        fallback
    }

    fn remaining_dashed(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|(_, e)| **e == StoredEdge::Dashed)
            .map(|(&p, _)| p)
            .collect()
    }
}

/// Turn an orientable regression graph into a Markov equivalent DAG.
pub fn orient_to_dag(g: &RegressionGraph) -> Result<OrientationResult> {
    if let Err(ob) = dag_orientable(g) {
        return Err(Error::NotOrientable(obstruction_text(g, &ob)));
    }

    let mut rw = Rewriter {
        g,
        edges: g.edges().collect(),
        ranker: Ranker::new(g.n()),
        steps: Vec::new(),
    };

    // Step 1: rank the full-line blocks by maximum cardinality search, blocks
    // taken from the back of the compatible ordering, ranks decreasing along
    // each visit order (first visited node of a block ranks highest).
    let full_edges: Vec<(usize, usize)> = rw
        .edges
        .iter()
        .filter(|(_, e)| **e == StoredEdge::Full)
        .map(|(&p, _)| p)
        .collect();
    let fl = UndirectedGraph::new(
        g.labels().to_vec(),
        &full_edges,
        crate::graph::Flavor::Concentration,
    )
    .expect("full-line subgraph is a valid undirected graph");
    for comp in g.components().iter().rev() {
        if !g.is_context(comp[0]) {
            continue;
        }
        let seed = *comp.iter().min().unwrap();
        let order = max_cardinality_search(&fl, seed);
        let base = rw.ranker.next_major;
        rw.ranker.next_major += order.len() as u64;
        for (j, &v) in order.iter().enumerate() {
            rw.ranker.label[v] = Some((base + (order.len() - 1 - j) as u64, 0));
        }
    }

    // Step 2: full lines become arrows from higher rank to lower.
    for (lo, hi) in full_edges {
        let (from, to) = if rw.ranker.higher(lo, hi) { (lo, hi) } else { (hi, lo) };
        rw.orient(2, from, to);
    }

    // Step 3 to a fixed point.
    while let Some((i, o)) = rw.step3_candidate() {
        rw.ranker.force(i, o);
        rw.orient(3, i, o);
    }

    // Step 4 to a fixed point.
    while let Some((o, i, k)) = rw.step4_candidate() {
        rw.ranker.force(i, o);
        rw.ranker.force(k, o);
        rw.orient(4, i, o);
        rw.orient(4, k, o);
    }

    // Step 5: remaining dashed lines from higher rank to lower; fresh ranks
    // for unranked endpoints in ascending node-index order.
    for (lo, hi) in rw.remaining_dashed() {
        for v in [lo, hi] {
            if rw.ranker.label[v].is_none() {
                rw.ranker.fresh(v);
            }
        }
        let (from, to) = if rw.ranker.higher(lo, hi) { (lo, hi) } else { (hi, lo) };
        rw.orient(5, from, to);
    }

    // Any node never touched by an undirected edge gets a trailing rank.
    for v in 0..g.n() {
        if rw.ranker.label[v].is_none() {
            rw.ranker.fresh(v);
        }
    }

    let dag_edges: Vec<(usize, usize, StoredEdge)> =
        rw.edges.iter().map(|(&(lo, hi), &e)| (lo, hi, e)).collect();
    let dag = RegressionGraph::from_indexed(g.labels().to_vec(), vec![false; g.n()], &dag_edges)
        .map_err(|e| Error::InternalInvariantViolation(format!("oriented graph rejected: {e}")))?;

    let mut by_rank: Vec<usize> = (0..g.n()).collect();
    by_rank.sort_by_key(|&v| rw.ranker.key(v));
    let mut labeling = BTreeMap::new();
    for (rank, &v) in by_rank.iter().enumerate() {
        labeling.insert(g.label(v).to_string(), rank);
    }

    let result = OrientationResult { dag, labeling, steps: rw.steps };
    if !verify_orientation(g, &result) {
        return Err(Error::InternalInvariantViolation(
            "orientation failed self-verification".into(),
        ));
    }
    Ok(result)
}

pub fn obstruction_text(g: &RegressionGraph, ob: &Obstruction) -> String {
    match ob {
        Obstruction::NonChordalContext(cycle) => {
            let names: Vec<&str> = cycle.iter().map(|&v| g.label(v)).collect();
            format!("chordless full-line cycle {}", names.join("-"))
        }
        Obstruction::CollisionPath(p) => {
            let names: Vec<&str> = p.nodes.iter().map(|&v| g.label(v)).collect();
            format!("chordless collision path {}", names.join("~"))
        }
    }
}

/// Check that a result really is an all-arrow acyclic graph with the input's
/// skeleton and collision Vs; for small graphs also replay the full
/// independence structure through the brute-force oracle.
pub fn verify_orientation(input: &RegressionGraph, result: &OrientationResult) -> bool {
    let dag = &result.dag;
    if dag.edges().any(|(_, e)| e.kind() != EdgeKind::Arrow) {
        return false;
    }
    if !dag.context_nodes().is_empty() {
        return false;
    }
    if !acyclic(dag) {
        return false;
    }
    let by_label = |g: &RegressionGraph| -> std::collections::BTreeSet<(String, String)> {
        g.edges()
            .map(|((lo, hi), _)| {
                let (a, b) = (g.label(lo), g.label(hi));
                if a <= b {
                    (a.to_string(), b.to_string())
                } else {
                    (b.to_string(), a.to_string())
                }
            })
            .collect()
    };
    if by_label(input) != by_label(dag) {
        return false;
    }
    let vs = |g: &RegressionGraph| -> std::collections::BTreeSet<(String, String, String)> {
        collision_vs(g)
            .iter()
            .map(|v| {
                let (a, b) = (g.label(v.endpoints.0), g.label(v.endpoints.1));
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a.to_string(), b.to_string(), g.label(v.inner).to_string())
            })
            .collect()
    };
    if vs(input) != vs(dag) {
        return false;
    }
    if input.n() <= 8 && !crate::oracle::structures_equal(input, dag).unwrap_or(false) {
        return false;
    }
    true
}

fn acyclic(g: &RegressionGraph) -> bool {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for ((lo, hi), e) in g.edges() {
        if let StoredEdge::Arrow { head } = e {
            let tail = if head == lo { hi } else { lo };
            out[tail].push(head);
            indeg[head] += 1;
        }
    }
    let mut q: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut taken = 0;
    while let Some(v) = q.pop() {
        taken += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                q.push(w);
            }
        }
    }
    taken == n
}
