//! Unit s-t flow polytope on a DAG: vertices are indicator vectors of
//! s-t paths; the LMO is shortest path by dynamic programming over a
//! topological order, which is exact for arbitrary (also negative) costs.

use crate::error::{Error, Result};
use crate::polytope::{check_cost, check_mask, PolytopeOracle};
use crate::vertex::Vertex;

/// A directed acyclic graph with designated source and target. Edges are
/// identified by their position in the input list; that position is the
/// coordinate index in the flow polytope.
#[derive(Debug, Clone)]
pub struct DagGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
    target: usize,
    topo: Vec<usize>,
}

impl DagGraph {
    pub fn new(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        source: usize,
        target: usize,
    ) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::InvalidParameter("graph needs nodes".into()));
        }
        if source >= num_nodes || target >= num_nodes {
            return Err(Error::InvalidParameter(format!(
                "source {source} / target {target} out of range for {num_nodes} nodes"
            )));
        }
        if source == target {
            return Err(Error::InvalidParameter(
                "source and target must differ".into(),
            ));
        }
        for &(tail, head) in &edges {
            if tail >= num_nodes || head >= num_nodes {
                return Err(Error::InvalidParameter(format!(
                    "edge ({tail}, {head}) out of range for {num_nodes} nodes"
                )));
            }
        }
        let topo = topological_order(num_nodes, &edges)?;
        Ok(DagGraph {
            num_nodes,
            edges,
            source,
            target,
            topo,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }
}

/// Kahn's algorithm; fails on cycles (self-loops included).
fn topological_order(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; num_nodes];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
    for &(tail, head) in edges {
        indegree[head] += 1;
        out[tail].push(head);
    }
    let mut queue: Vec<usize> = (0..num_nodes).filter(|&u| indegree[u] == 0).collect();
    let mut order = Vec::with_capacity(num_nodes);
    let mut next = 0;
    while next < queue.len() {
        let u = queue[next];
        next += 1;
        order.push(u);
        for &v in &out[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push(v);
            }
        }
    }
    if order.len() != num_nodes {
        return Err(Error::InfeasibleGraph("graph contains a cycle".into()));
    }
    Ok(order)
}

#[derive(Debug, Clone)]
pub struct FlowPolytope {
    graph: DagGraph,
    out_edges: Vec<Vec<usize>>,
    diam_sq: f64,
}

impl FlowPolytope {
    /// Requires the target to be reachable, so the polytope is nonempty.
    pub fn new(graph: DagGraph) -> Result<Self> {
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); graph.num_nodes];
        for (id, &(tail, _)) in graph.edges.iter().enumerate() {
            out_edges[tail].push(id);
        }
        let longest = longest_path_len(&graph, &out_edges).ok_or_else(|| {
            Error::InfeasibleGraph("target unreachable from source".into())
        })?;
        Ok(FlowPolytope {
            graph,
            out_edges,
            // Two edge-disjoint paths of maximal length; upper bound in
            // general, exact when such a pair exists.
            diam_sq: 2.0 * longest as f64,
        })
    }

    pub fn graph(&self) -> &DagGraph {
        &self.graph
    }

    fn shortest_path(&self, cost: &[f64], mask: Option<&[bool]>) -> Option<Vertex> {
        let g = &self.graph;
        let mut dist = vec![f64::INFINITY; g.num_nodes];
        let mut pred = vec![usize::MAX; g.num_nodes];
        dist[g.source] = 0.0;
        for &u in &g.topo {
            if !dist[u].is_finite() {
                continue;
            }
            for &e in &self.out_edges[u] {
                if mask.is_some_and(|m| !m[e]) {
                    continue;
                }
                let head = g.edges[e].1;
                let nd = dist[u] + cost[e];
                if nd < dist[head] {
                    dist[head] = nd;
                    pred[head] = e;
                }
            }
        }
        if !dist[g.target].is_finite() {
            return None;
        }
        let mut support = Vec::new();
        let mut node = g.target;
        while node != g.source {
            let e = pred[node];
            debug_assert_ne!(e, usize::MAX);
            support.push(e);
            node = g.edges[e].0;
        }
        Some(Vertex::new(support, g.num_edges()).expect("path edges are distinct"))
    }
}

/// Maximum edge count over s-t paths, None when t is unreachable.
fn longest_path_len(graph: &DagGraph, out_edges: &[Vec<usize>]) -> Option<usize> {
    let mut dist = vec![isize::MIN; graph.num_nodes];
    dist[graph.source] = 0;
    for &u in &graph.topo {
        if dist[u] == isize::MIN {
            continue;
        }
        for &e in &out_edges[u] {
            let head = graph.edges[e].1;
            dist[head] = dist[head].max(dist[u] + 1);
        }
    }
    (dist[graph.target] != isize::MIN).then_some(dist[graph.target] as usize)
}

impl PolytopeOracle for FlowPolytope {
    fn dim(&self) -> usize {
        self.graph.num_edges()
    }

    fn lmo(&self, cost: &[f64]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        self.shortest_path(cost, None)
            .ok_or_else(|| Error::InfeasibleGraph("target unreachable from source".into()))
    }

    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        check_mask(mask, self.dim())?;
        self.shortest_path(cost, Some(mask))
            .ok_or(Error::EmptySupport)
    }

    fn diam_sq(&self) -> f64 {
        self.diam_sq
    }

    /// Flow conservation: net outflow must be +1 at the source, -1 at the
    /// target, 0 elsewhere.
    fn equality_residual(&self, x: &[f64]) -> f64 {
        let g = &self.graph;
        let mut net = vec![0.0f64; g.num_nodes];
        for (e, &(tail, head)) in g.edges.iter().enumerate() {
            net[tail] += x[e];
            net[head] -= x[e];
        }
        let mut residual = 0.0f64;
        for (u, &flow) in net.iter().enumerate() {
            let expected = if u == g.source {
                1.0
            } else if u == g.target {
                -1.0
            } else {
                0.0
            };
            residual = residual.max((flow - expected).abs());
        }
        residual
    }
}
