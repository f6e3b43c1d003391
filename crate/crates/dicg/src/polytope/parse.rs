//! Text formats for graph-backed polytope instances.
//!
//! All three formats are whitespace-separated token streams, so any mix
//! of spaces and newlines parses the same way:
//!
//! - DAG:       `n m s t` header, then m edges `tail head`
//! - bipartite: `n m` header (n nodes per side), then m edges `left right`
//! - chain:     `L` header, then L per-node state counts
//!
//! Inputs are untrusted; sizes are capped at desk scale so that parsing
//! plus construction stays cheap even on adversarial input.

use crate::error::{Error, Result};
use crate::polytope::{BipartiteGraph, ChainModel, DagGraph};
use std::fmt::Write as _;

pub const MAX_DAG_NODES: usize = 10_000;
pub const MAX_DAG_EDGES: usize = 100_000;
pub const MAX_BIPARTITE_SIDE: usize = 128;
pub const MAX_BIPARTITE_EDGES: usize = 16_384;
pub const MAX_CHAIN_NODES: usize = 256;
pub const MAX_CHAIN_STATES: usize = 64;
pub const MAX_CHAIN_DIM: usize = 100_000;

struct Tokens<'a> {
    iter: std::str::SplitAsciiWhitespace<'a>,
    consumed: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            iter: text.split_ascii_whitespace(),
            consumed: 0,
        }
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let tok = self
            .iter
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what} (token {})", self.consumed)))?;
        self.consumed += 1;
        tok.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad {what} {tok:?} (token {})", self.consumed)))
    }

    fn finish(mut self) -> Result<()> {
        match self.iter.next() {
            Some(extra) => Err(Error::Parse(format!(
                "trailing input starting at {extra:?}"
            ))),
            None => Ok(()),
        }
    }
}

pub fn parse_dag(text: &str) -> Result<DagGraph> {
    let mut tokens = Tokens::new(text);
    let n = tokens.next_usize("node count")?;
    let m = tokens.next_usize("edge count")?;
    if n > MAX_DAG_NODES || m > MAX_DAG_EDGES {
        return Err(Error::Parse(format!(
            "DAG too large: {n} nodes / {m} edges (caps {MAX_DAG_NODES} / {MAX_DAG_EDGES})"
        )));
    }
    let s = tokens.next_usize("source")?;
    let t = tokens.next_usize("target")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let tail = tokens.next_usize("edge tail")?;
        let head = tokens.next_usize("edge head")?;
        edges.push((tail, head));
    }
    tokens.finish()?;
    DagGraph::new(n, edges, s, t)
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let mut tokens = Tokens::new(text);
    let n = tokens.next_usize("side size")?;
    let m = tokens.next_usize("edge count")?;
    if n > MAX_BIPARTITE_SIDE || m > MAX_BIPARTITE_EDGES {
        return Err(Error::Parse(format!(
            "bipartite graph too large: side {n} / {m} edges (caps {MAX_BIPARTITE_SIDE} / {MAX_BIPARTITE_EDGES})"
        )));
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let l = tokens.next_usize("edge left endpoint")?;
        let r = tokens.next_usize("edge right endpoint")?;
        edges.push((l, r));
    }
    tokens.finish()?;
    BipartiteGraph::new(n, edges)
}

pub fn parse_chain(text: &str) -> Result<ChainModel> {
    let mut tokens = Tokens::new(text);
    let len = tokens.next_usize("chain length")?;
    if len > MAX_CHAIN_NODES {
        return Err(Error::Parse(format!(
            "chain too long: {len} nodes (cap {MAX_CHAIN_NODES})"
        )));
    }
    let mut counts = Vec::with_capacity(len);
    for _ in 0..len {
        let k = tokens.next_usize("state count")?;
        if k > MAX_CHAIN_STATES {
            return Err(Error::Parse(format!(
                "state count {k} too large (cap {MAX_CHAIN_STATES})"
            )));
        }
        counts.push(k);
    }
    tokens.finish()?;
    let model = ChainModel::new(counts)?;
    if model.dim() > MAX_CHAIN_DIM {
        return Err(Error::Parse(format!(
            "chain dimension {} too large (cap {MAX_CHAIN_DIM})",
            model.dim()
        )));
    }
    Ok(model)
}

pub fn format_dag(graph: &DagGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        graph.num_nodes(),
        graph.num_edges(),
        graph.source(),
        graph.target()
    );
    for &(tail, head) in graph.edges() {
        let _ = writeln!(out, "{tail} {head}");
    }
    out
}

pub fn format_bipartite(graph: &BipartiteGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.side(), graph.num_edges());
    for &(l, r) in graph.edges() {
        let _ = writeln!(out, "{l} {r}");
    }
    out
}

pub fn format_chain(model: &ChainModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", model.len());
    for &k in model.state_counts() {
        let _ = writeln!(out, "{k}");
    }
    out
}
