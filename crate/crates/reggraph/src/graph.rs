//! Regression-graph data model: three edge types, response/context partition,
//! connected components and a compatible component ordering.
//!
//! A regression graph has arrows (directed), dashed lines (between responses)
//! and full lines (between context nodes). No loops, at most one edge per
//! pair, no arrowhead at a context node, and no directed or semi-directed
//! cycle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Edge type as given in the input; an `Arrow` is oriented by the order of
/// the endpoint pair it is declared with (tail, head).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Arrow,
    Dashed,
    Full,
}

/// Stored edge for an unordered pair `(lo, hi)`; for arrows the head node is
/// recorded separately so the pair key stays unordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoredEdge {
    Arrow { head: usize },
    Dashed,
    Full,
}

impl StoredEdge {
    pub fn kind(&self) -> EdgeKind {
        match self {
            StoredEdge::Arrow { .. } => EdgeKind::Arrow,
            StoredEdge::Dashed => EdgeKind::Dashed,
            StoredEdge::Full => EdgeKind::Full,
        }
    }
}

fn pair(i: usize, k: usize) -> (usize, usize) {
    if i < k {
        (i, k)
    } else {
        (k, i)
    }
}

#[derive(Debug, Clone)]
pub struct RegressionGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    context: Vec<bool>,
    edges: BTreeMap<(usize, usize), StoredEdge>,
    adj: Vec<Vec<usize>>,
    /// Components in compatible order: arrows between components always point
    /// from a later component to an earlier one; context components last.
    comps: Vec<Vec<usize>>,
    comp_of: Vec<usize>,
}

impl RegressionGraph {
    /// Build and validate a graph from labels. Arrow edges are given as
    /// `(tail, head, Arrow)`; for `Dashed`/`Full` the endpoint order is
    /// irrelevant.
    pub fn build(
        nodes: &[&str],
        context: &[&str],
        edges: &[(&str, &str, EdgeKind)],
    ) -> Result<RegressionGraph> {
        let mut labels = Vec::with_capacity(nodes.len());
        let mut index = HashMap::new();
        for &l in nodes {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::UnknownLabel(l.to_string()));
            }
            if index.insert(l.to_string(), labels.len()).is_some() {
                return Err(Error::UnknownLabel(format!("duplicate label {l}")));
            }
            labels.push(l.to_string());
        }
        let mut ctx = vec![false; labels.len()];
        for &l in context {
            let &i = index.get(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            ctx[i] = true;
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(a, b, kind) in edges {
            let &i = index.get(a).ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            let &k = index.get(b).ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
            let stored = match kind {
                EdgeKind::Arrow => StoredEdge::Arrow { head: k },
                EdgeKind::Dashed => StoredEdge::Dashed,
                EdgeKind::Full => StoredEdge::Full,
            };
            idx_edges.push((i, k, stored));
        }
        Self::from_parts(labels, index, ctx, &idx_edges)
    }

    /// Index-based constructor; labels are taken as `1..=n` style strings
    /// supplied by the caller. Used by generators and parsers.
    pub fn from_indexed(
        labels: Vec<String>,
        context: Vec<bool>,
        edges: &[(usize, usize, StoredEdge)],
    ) -> Result<RegressionGraph> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::UnknownLabel(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::UnknownLabel(format!("duplicate label {l}")));
            }
        }
        Self::from_parts(labels, index, context, edges)
    }

    fn from_parts(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        context: Vec<bool>,
        edges: &[(usize, usize, StoredEdge)],
    ) -> Result<RegressionGraph> {
        let n = labels.len();
        let mut map: BTreeMap<(usize, usize), StoredEdge> = BTreeMap::new();
        for &(i, k, stored) in edges {
            if i == k {
                return Err(Error::SelfLoop(labels[i].clone()));
            }
            let key = pair(i, k);
            if map.insert(key, stored).is_some() {
                return Err(Error::DuplicateEdge(labels[key.0].clone(), labels[key.1].clone()));
            }
            match stored {
                StoredEdge::Full => {
                    if !context[i] || !context[k] {
                        return Err(Error::EdgeTypeViolation(format!(
                            "full line {} -- {} touches a response node",
                            labels[i], labels[k]
                        )));
                    }
                }
                StoredEdge::Dashed => {
                    if context[i] || context[k] {
                        return Err(Error::EdgeTypeViolation(format!(
                            "dashed line {} ~~ {} touches a context node",
                            labels[i], labels[k]
                        )));
                    }
                }
                StoredEdge::Arrow { head } => {
                    if context[head] {
                        return Err(Error::EdgeTypeViolation(format!(
                            "arrow points to context node {}",
                            labels[head]
                        )));
                    }
                }
            }
        }

        let mut adj = vec![Vec::new(); n];
        for (&(lo, hi), _) in &map {
            adj[lo].push(hi);
            adj[hi].push(lo);
        }
        for a in &mut adj {
            a.sort_unstable();
        }

        let mut g = RegressionGraph {
            labels,
            index,
            context,
            edges: map,
            adj,
            comps: Vec::new(),
            comp_of: vec![usize::MAX; n],
        };
        g.compute_components()?;
        Ok(g)
    }

    /// Undirected components (dashed/full edges only), then a compatible
    /// ordering: arrows run from a later component to an earlier one. A
    /// directed cycle on the component quotient is exactly a directed or
    /// semi-directed cycle of the graph.
    fn compute_components(&mut self) -> Result<()> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut q = VecDeque::from([start]);
            while let Some(v) = q.pop_front() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX
                        && !matches!(self.edge_at(v, w), StoredEdge::Arrow { .. })
                    {
                        comp[w] = id;
                        members.push(w);
                        q.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }

        // Quotient arcs: tail component -> head component for every arrow.
        let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
        for (&(lo, hi), e) in &self.edges {
            if let StoredEdge::Arrow { head } = e {
                let tail = if *head == lo { hi } else { lo };
                let (tc, hc) = (comp[tail], comp[*head]);
                if tc == hc {
                    return Err(Error::CycleViolation(format!(
                        "semi-directed cycle through arrow {} -> {}",
                        self.labels[tail], self.labels[*head]
                    )));
                }
                out[tc].insert(hc);
            }
        }

        // Place component c once all its arrow targets are placed, so arrows
        // point from later components to earlier ones. Response components
        // are placed before any context component; ties break on the
        // smallest member index.
        let mut placed = vec![false; comps.len()];
        let mut order = Vec::with_capacity(comps.len());
        while order.len() < comps.len() {
            let mut best: Option<usize> = None;
            for c in 0..comps.len() {
                if placed[c] || !out[c].iter().all(|&t| placed[t]) {
                    continue;
                }
                let is_ctx = self.context[comps[c][0]];
                let better = match best {
                    None => true,
                    Some(b) => {
                        let b_ctx = self.context[comps[b][0]];
                        (is_ctx, comps[c][0]) < (b_ctx, comps[b][0])
                    }
                };
                if better {
                    best = Some(c);
                }
            }
            match best {
                Some(c) => {
                    placed[c] = true;
                    order.push(c);
                }
                None => {
                    return Err(Error::CycleViolation(
                        "directed cycle among components".to_string(),
                    ))
                }
            }
        }

        self.comps = order.iter().map(|&c| comps[c].clone()).collect();
        for (pos, members) in self.comps.iter().enumerate() {
            for &v in members {
                self.comp_of[v] = pos;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn is_context(&self, i: usize) -> bool {
        self.context[i]
    }

    pub fn context_nodes(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.context[i]).collect()
    }

    pub fn edge_between(&self, i: usize, k: usize) -> Option<StoredEdge> {
        self.edges.get(&pair(i, k)).copied()
    }

    fn edge_at(&self, i: usize, k: usize) -> StoredEdge {
        self.edges[&pair(i, k)]
    }

    pub fn coupled(&self, i: usize, k: usize) -> bool {
        self.edges.contains_key(&pair(i, k))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Iterate edges as `((lo, hi), stored)` in key order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), StoredEdge)> + '_ {
        self.edges.iter().map(|(&k, &e)| (k, e))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Connected components `g_1..g_J` in the stored compatible ordering.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    /// Position of the component of node `i` in the compatible ordering.
    pub fn component_of(&self, i: usize) -> usize {
        self.comp_of[i]
    }

    /// Union of the components strictly after position `j` (the past of g_j).
    pub fn past_of(&self, j: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.comps[j + 1..].iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// All nodes reachable from `i` by a directed path of one or more arrows.
    pub fn strict_descendants(&self, i: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut q = VecDeque::from([i]);
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v] {
                if let StoredEdge::Arrow { head } = self.edge_at(v, w) {
                    if head == w && !seen.contains(&w) {
                        seen.insert(w);
                        q.push_back(w);
                    }
                }
            }
        }
        seen.remove(&i);
        seen
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        UndirectedGraph {
            labels: self.labels.clone(),
            edges: self.edges.keys().copied().collect(),
            flavor: Flavor::Skeleton,
        }
    }

    pub fn induced_subgraph(&self, s: &[usize]) -> Result<RegressionGraph> {
        let mut keep: Vec<usize> = s.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&v| v >= self.n()) {
            return Err(Error::UnknownLabel(format!("node index {bad}")));
        }
        let mut new_of = vec![usize::MAX; self.n()];
        let mut labels = Vec::new();
        let mut context = Vec::new();
        for (ni, &v) in keep.iter().enumerate() {
            new_of[v] = ni;
            labels.push(self.labels[v].clone());
            context.push(self.context[v]);
        }
        let mut edges = Vec::new();
        for (&(lo, hi), &e) in &self.edges {
            if new_of[lo] != usize::MAX && new_of[hi] != usize::MAX {
                let stored = match e {
                    StoredEdge::Arrow { head } => StoredEdge::Arrow { head: new_of[head] },
                    other => other,
                };
                edges.push((new_of[lo], new_of[hi], stored));
            }
        }
        RegressionGraph::from_indexed(labels, context, &edges)
    }

    /// Structural equality by labels: same label set, context set and typed
    /// edge set, regardless of index assignment.
    pub fn structural_eq(&self, other: &RegressionGraph) -> bool {
        let key = |g: &RegressionGraph| {
            let mut ls: Vec<&String> = g.labels.iter().collect();
            ls.sort();
            let ctx: BTreeSet<&String> = g
                .labels
                .iter()
                .enumerate()
                .filter(|(i, _)| g.context[*i])
                .map(|(_, l)| l)
                .collect();
            let edges: BTreeSet<(String, String, u8)> = g
                .edges
                .iter()
                .map(|(&(lo, hi), &e)| match e {
                    StoredEdge::Arrow { head } => {
                        let tail = if head == lo { hi } else { lo };
                        (g.labels[tail].clone(), g.labels[head].clone(), 0)
                    }
                    StoredEdge::Dashed => {
                        let (a, b) = ordered_labels(g, lo, hi);
                        (a, b, 1)
                    }
                    StoredEdge::Full => {
                        let (a, b) = ordered_labels(g, lo, hi);
                        (a, b, 2)
                    }
                })
                .collect();
            (
                ls.into_iter().cloned().collect::<Vec<_>>(),
                ctx.into_iter().cloned().collect::<Vec<_>>(),
                edges,
            )
        };
        key(self) == key(other)
    }
}

fn ordered_labels(g: &RegressionGraph, lo: usize, hi: usize) -> (String, String) {
    let (a, b) = (g.labels[lo].clone(), g.labels[hi].clone());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Reading of an undirected graph: a bare skeleton, a covariance graph
/// (missing edge = marginal independence) or a concentration graph (missing
/// edge = independence given all remaining nodes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Skeleton,
    Covariance,
    Concentration,
}

#[derive(Debug, Clone)]
pub struct UndirectedGraph {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    flavor: Flavor,
}

impl UndirectedGraph {
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)], flavor: Flavor) -> Result<Self> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for &(i, k) in edges {
            if i == k {
                return Err(Error::SelfLoop(labels[i].clone()));
            }
            if i >= n || k >= n {
                return Err(Error::UnknownLabel(format!("node index {}", i.max(k))));
            }
            set.insert(pair(i, k));
        }
        Ok(UndirectedGraph { labels, edges: set, flavor })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    pub fn has_edge(&self, i: usize, k: usize) -> bool {
        self.edges.contains(&pair(i, k))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&k| k != i && self.has_edge(i, k)).collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for w in 0..n {
                    if comp[w] == usize::MAX && self.has_edge(v, w) {
                        comp[w] = id;
                        members.push(w);
                        q.push_back(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    /// The same node and edge set read as a regression graph: covariance
    /// flavor becomes all-dashed responses, concentration flavor all-full
    /// context. A bare skeleton is read as covariance.
    pub fn to_regression_graph(&self) -> RegressionGraph {
        let (ctx, kind) = match self.flavor {
            Flavor::Concentration => (true, StoredEdge::Full),
            _ => (false, StoredEdge::Dashed),
        };
        let edges: Vec<(usize, usize, StoredEdge)> =
            self.edges.iter().map(|&(i, k)| (i, k, kind)).collect();
        RegressionGraph::from_indexed(self.labels.clone(), vec![ctx; self.n()], &edges)
            .expect("undirected graph is always a valid regression graph")
    }
}
