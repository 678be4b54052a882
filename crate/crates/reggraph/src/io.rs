//! Text format for regression graphs, canonical serialization and DOT export.
//!
//! Grammar, line oriented: `#` starts a comment; an optional `nodes:` line
//! and an optional `context:` line declare labels; edge lines are
//! `A -> B` (arrow from A to B), `A -- B` (full line) or `A ~~ B` (dashed
//! line), tokens separated by whitespace. Labels not declared up front are
//! registered in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{RegressionGraph, StoredEdge};

pub fn parse(text: &str) -> Result<RegressionGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut context_labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize, u8)> = Vec::new(); // 0 arrow, 1 full, 2 dashed

    let intern = |labels: &mut Vec<String>, index: &mut HashMap<String, usize>, t: &str| {
        *index.entry(t.to_string()).or_insert_with(|| {
            labels.push(t.to_string());
            labels.len() - 1
        })
    };

    for (ln, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        // token together with its 1-based starting column
        let tokens: Vec<(usize, &str)> = line
            .split_whitespace()
            .map(|t| {
                let col = t.as_ptr() as usize - line.as_ptr() as usize + 1;
                (col, t)
            })
            .collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0].1 {
            "nodes:" => {
                for &(_, t) in &tokens[1..] {
                    intern(&mut labels, &mut index, t);
                }
            }
            "context:" => {
                for &(_, t) in &tokens[1..] {
                    intern(&mut labels, &mut index, t);
                    context_labels.push(t.to_string());
                }
            }
            _ => {
                if tokens.len() != 3 {
                    let (col, _) = *tokens.get(3).unwrap_or(&(line.len() + 1, ""));
                    return Err(Error::SyntaxError {
                        line: ln + 1,
                        col,
                        msg: "expected an edge line 'A -> B', 'A -- B' or 'A ~~ B'".into(),
                    });
                }
                let kind = match tokens[1].1 {
                    "->" => 0,
                    "--" => 1,
                    "~~" => 2,
                    other => {
                        return Err(Error::SyntaxError {
                            line: ln + 1,
                            col: tokens[1].0,
                            msg: format!("unknown edge token '{other}'"),
                        })
                    }
                };
                let a = intern(&mut labels, &mut index, tokens[0].1);
                let b = intern(&mut labels, &mut index, tokens[2].1);
                edges.push((a, b, kind));
            }
        }
    }

    let mut context = vec![false; labels.len()];
    for l in &context_labels {
        context[index[l]] = true;
    }
    let stored: Vec<(usize, usize, StoredEdge)> = edges
        .into_iter()
        .map(|(a, b, kind)| {
            let e = match kind {
                0 => StoredEdge::Arrow { head: b },
                1 => StoredEdge::Full,
                _ => StoredEdge::Dashed,
            };
            (a, b, e)
        })
        .collect();
    RegressionGraph::from_indexed(labels, context, &stored)
}

/// Canonical form: sorted `nodes:` and `context:` lines followed by the edge
/// lines in lexicographic order; `parse` of the output reproduces the graph.
pub fn serialize(g: &RegressionGraph) -> String {
    let mut nodes: Vec<&str> = g.labels().iter().map(String::as_str).collect();
    nodes.sort_unstable();
    let mut ctx: Vec<&str> = g.context_nodes().iter().map(|&i| g.label(i)).collect();
    ctx.sort_unstable();

    let mut out = String::from("nodes:");
    for l in &nodes {
        write!(out, " {l}").unwrap();
    }
    out.push_str("\ncontext:");
    for l in &ctx {
        write!(out, " {l}").unwrap();
    }
    out.push('\n');

    let mut lines: Vec<String> = g
        .edges()
        .map(|((lo, hi), e)| {
            let (a, b) = (g.label(lo), g.label(hi));
            match e {
                StoredEdge::Arrow { head } => {
                    let (t, h) = if head == hi { (a, b) } else { (b, a) };
                    format!("{t} -> {h}")
                }
                StoredEdge::Full => {
                    let (x, y) = if a <= b { (a, b) } else { (b, a) };
                    format!("{x} -- {y}")
                }
                StoredEdge::Dashed => {
                    let (x, y) = if a <= b { (a, b) } else { (b, a) };
                    format!("{x} ~~ {y}")
                }
            }
        })
        .collect();
    lines.sort_unstable();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// DOT digraph: arrows directed, dashed lines `dir=none, style=dashed`, full
/// lines `dir=none`; nodes and edges in sorted order.
pub fn export_dot(g: &RegressionGraph) -> String {
    let mut out = String::from("digraph regression_graph {\n");
    let mut nodes: Vec<&str> = g.labels().iter().map(String::as_str).collect();
    nodes.sort_unstable();
    for l in nodes {
        writeln!(out, "  \"{l}\";").unwrap();
    }
    let mut lines: Vec<String> = g
        .edges()
        .map(|((lo, hi), e)| {
            let (a, b) = (g.label(lo), g.label(hi));
            match e {
                StoredEdge::Arrow { head } => {
                    let (t, h) = if head == hi { (a, b) } else { (b, a) };
                    format!("  \"{t}\" -> \"{h}\";")
                }
                StoredEdge::Full => {
                    let (x, y) = if a <= b { (a, b) } else { (b, a) };
                    format!("  \"{x}\" -> \"{y}\" [dir=none];")
                }
                StoredEdge::Dashed => {
                    let (x, y) = if a <= b { (a, b) } else { (b, a) };
                    format!("  \"{x}\" -> \"{y}\" [dir=none, style=dashed];")
                }
            }
        })
        .collect();
    lines.sort_unstable();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out.push_str("}\n");
    out
}
