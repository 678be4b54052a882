//! Brute-force reference implementations used as ground truth on small
//! graphs: exhaustive simple-path enumeration and full independence-structure
//! enumeration. Deliberately independent of the reachability traversal in
//! `separation::separates`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::RegressionGraph;
use crate::separation::{self, InnerClass, PathStatus};

/// Hard cap for brute-force path enumeration.
pub const MAX_BRUTE_NODES: usize = 12;
/// Cap for singleton-pair structure enumeration.
pub const MAX_SINGLETON_NODES: usize = 8;
/// Cap for set-valued structure enumeration.
pub const MAX_SET_VALUED_NODES: usize = 6;

/// All simple i-k paths (any edge types and directions), lexicographic.
pub fn enumerate_simple_paths(g: &RegressionGraph, i: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut visited = vec![false; g.n()];
    let mut path = vec![i];
    visited[i] = true;
    dfs_paths(g, k, &mut path, &mut visited, &mut out);
    out
}

fn dfs_paths(
    g: &RegressionGraph,
    target: usize,
    path: &mut Vec<usize>,
    visited: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &w in g.neighbors(last) {
        if w == target {
            let mut p = path.clone();
            p.push(w);
            out.push(p);
        } else if !visited[w] {
            visited[w] = true;
            path.push(w);
            dfs_paths(g, target, path, visited, out);
            path.pop();
            visited[w] = false;
        }
    }
}

/// Exhaustive form of the global Markov property: enumerate every simple
/// path from a to b and test each for activeness given c.
pub fn separates_bruteforce(
    g: &RegressionGraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    c: &BTreeSet<usize>,
) -> Result<bool> {
    if g.n() > MAX_BRUTE_NODES {
        return Err(Error::TooLarge(g.n(), MAX_BRUTE_NODES));
    }
    for &i in a {
        for &k in b {
            for path in enumerate_simple_paths(g, i, k) {
                if separation::is_active_path(g, &path, a, b, c)? == PathStatus::Active {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One inner node of a precomputed path: for a collision node `pass` is the
/// node itself plus its strict descendants (active when it meets c); for a
/// transmitting node only the node bit (must avoid a ∪ b ∪ c).
struct InnerAnn {
    bit: u32,
    collision: bool,
    pass: u32,
}

struct AnnotatedPath {
    ends: (u32, u32),
    inner: Vec<InnerAnn>,
}

/// Annotate every simple path of the graph once; the per-(a,b,c) activeness
/// check is then a handful of mask operations per path.
fn path_table(g: &RegressionGraph) -> Vec<AnnotatedPath> {
    let n = g.n();
    let mut desc_pass = vec![0u32; n];
    for v in 0..n {
        desc_pass[v] = 1 << v;
        for d in g.strict_descendants(v) {
            desc_pass[v] |= 1 << d;
        }
    }
    let mut table = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for path in enumerate_simple_paths(g, i, k) {
                let inner = path
                    .windows(3)
                    .map(|w| {
                        let collision = matches!(
                            separation::classify_inner(g, w[0], w[1], w[2]).unwrap(),
                            InnerClass::Collision(_)
                        );
                        InnerAnn {
                            bit: 1 << w[1],
                            collision,
                            pass: if collision { desc_pass[w[1]] } else { 1 << w[1] },
                        }
                    })
                    .collect();
                table.push(AnnotatedPath { ends: (1 << i, 1 << k), inner });
            }
        }
    }
    table
}

fn path_active(p: &AnnotatedPath, abc: u32, c: u32) -> bool {
    p.inner.iter().all(|ann| {
        if ann.collision {
            ann.pass & c != 0
        } else {
            ann.bit & abc == 0
        }
    })
}

/// Independence structure of a graph over node-set bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceStructure {
    /// Statements i ⫫ k | c for singleton pairs, as (i, k, c-mask), i < k.
    pub singleton: BTreeSet<(usize, usize, u32)>,
    /// All set-valued statements (a, b, c) with min(a) < min(b), when
    /// computed.
    pub set_valued: Option<BTreeSet<(u32, u32, u32)>>,
}

pub fn independence_structure(
    g: &RegressionGraph,
    set_valued: bool,
) -> Result<IndependenceStructure> {
    let n = g.n();
    let limit = if set_valued { MAX_SET_VALUED_NODES } else { MAX_SINGLETON_NODES };
    if n > limit {
        return Err(Error::TooLarge(n, limit));
    }
    let table = path_table(g);

    let mut singleton = BTreeSet::new();
    for i in 0..n {
        for k in i + 1..n {
            let paths: Vec<&AnnotatedPath> =
                table.iter().filter(|p| p.ends == (1 << i, 1 << k)).collect();
            let rest: Vec<usize> = (0..n).filter(|&v| v != i && v != k).collect();
            for sub in 0u32..(1 << rest.len()) {
                let mut c = 0u32;
                for (pos, &v) in rest.iter().enumerate() {
                    if sub >> pos & 1 == 1 {
                        c |= 1 << v;
                    }
                }
                let abc = (1 << i) | (1 << k) | c;
                if !paths.iter().any(|p| path_active(p, abc, c)) {
                    singleton.insert((i, k, c));
                }
            }
        }
    }

    let set_valued = if set_valued {
        let mut stmts = BTreeSet::new();
        // each node gets one of four roles: m, a, b, c
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let (mut a, mut b, mut c) = (0u32, 0u32, 0u32);
            let mut rem = code;
            for v in 0..n {
                match rem % 4 {
                    1 => a |= 1 << v,
                    2 => b |= 1 << v,
                    3 => c |= 1 << v,
                    _ => {}
                }
                rem /= 4;
            }
            if a == 0 || b == 0 || a.trailing_zeros() > b.trailing_zeros() {
                continue;
            }
            let abc = a | b | c;
            let active = table.iter().any(|p| {
                let (pi, pk) = p.ends;
                let spans = (pi & a != 0 && pk & b != 0) || (pi & b != 0 && pk & a != 0);
                spans && path_active(p, abc, c)
            });
            if !active {
                stmts.insert((a, b, c));
            }
        }
        Some(stmts)
    } else {
        None
    };

    Ok(IndependenceStructure { singleton, set_valued })
}

/// Equality of implied independence structures, set-valued when both graphs
/// are small enough, singleton-pair otherwise. Node identity is by label.
pub fn structures_equal(g1: &RegressionGraph, g2: &RegressionGraph) -> Result<bool> {
    if g1.n() != g2.n() {
        return Err(Error::NodeSetMismatch);
    }
    let mut l1: Vec<&String> = g1.labels().iter().collect();
    let mut l2: Vec<&String> = g2.labels().iter().collect();
    l1.sort();
    l2.sort();
    if l1 != l2 {
        return Err(Error::NodeSetMismatch);
    }
    // permutation: g2 index -> g1 index
    let perm: Vec<usize> = (0..g2.n())
        .map(|v| g1.index_of(g2.label(v)).unwrap())
        .collect();
    let set_valued = g1.n() <= MAX_SET_VALUED_NODES;
    let s1 = independence_structure(g1, set_valued)?;
    let s2 = independence_structure(g2, set_valued)?;
    let s2 = remap_structure(&s2, &perm);
    Ok(s1 == s2)
}

fn remap_structure(s: &IndependenceStructure, perm: &[usize]) -> IndependenceStructure {
    let map_mask = |m: u32| -> u32 {
        let mut out = 0;
        for (v, &p) in perm.iter().enumerate() {
            if m >> v & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    };
    let singleton = s
        .singleton
        .iter()
        .map(|&(i, k, c)| {
            let (ni, nk) = (perm[i], perm[k]);
            (ni.min(nk), ni.max(nk), map_mask(c))
        })
        .collect();
    let set_valued = s.set_valued.as_ref().map(|sv| {
        sv.iter()
            .map(|&(a, b, c)| {
                let (na, nb) = (map_mask(a), map_mask(b));
                if na.trailing_zeros() <= nb.trailing_zeros() {
                    (na, nb, map_mask(c))
                } else {
                    (nb, na, map_mask(c))
                }
            })
            .collect()
    });
    IndependenceStructure { singleton, set_valued }
}

impl IndependenceStructure {
    /// Canonical sorted text listing, one singleton statement per line.
    pub fn to_text(&self, g: &RegressionGraph) -> String {
        let mut lines: Vec<String> = self
            .singleton
            .iter()
            .map(|&(i, k, c)| {
                let cs: Vec<&str> = (0..g.n())
                    .filter(|&v| c >> v & 1 == 1)
                    .map(|v| g.label(v))
                    .collect();
                format!("{{{}}} _||_ {{{}}} | {{{}}}", g.label(i), g.label(k), cs.join(","))
            })
            .collect();
        lines.sort();
        lines.join("\n")
    }
}
