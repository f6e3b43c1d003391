//! Complete vertex lists for desk-scale polytopes, plus exhaustive oracles
//! used to cross-check the specialized ones.

use crate::error::{Error, Result};
use crate::polytope::{BipartiteGraph, ChainModel, DagGraph};
use crate::vertex::Vertex;

/// How a vertex list was produced. Mostly informative, but the generators
/// promise completeness only within their size caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Basis,
    Paths,
    Matchings,
    Assignments,
    Explicit,
}

/// A complete, duplicate-free list of polytope vertices.
#[derive(Debug, Clone)]
pub struct VertexEnumeration {
    vertices: Vec<Vertex>,
    method: Method,
}

impl VertexEnumeration {
    fn from_parts(vertices: Vec<Vertex>, method: Method) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter(
                "vertex enumeration is empty".into(),
            ));
        }
        let dim = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vertices.iter().map(Vertex::dim).find(|d| *d != dim).unwrap(),
            });
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "vertex enumeration contains duplicates".into(),
            ));
        }
        Ok(VertexEnumeration { vertices, method })
    }

    /// The n basis vectors of the unit simplex.
    pub fn simplex_basis(n: usize) -> Result<Self> {
        let vertices = (0..n)
            .map(|i| Vertex::new(vec![i], n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(vertices, Method::Basis)
    }

    /// Every source-target path, as an edge indicator. Errors out once more
    /// than `max_paths` paths exist instead of enumerating them all.
    pub fn dag_paths(graph: &DagGraph, max_paths: usize) -> Result<Self> {
        let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph.num_nodes()];
        for (id, &(tail, head)) in graph.edges().iter().enumerate() {
            out[tail].push((id, head));
        }
        let mut vertices = Vec::new();
        let mut stack = Vec::new();
        collect_paths(
            graph.source(),
            graph.target(),
            &out,
            graph.num_edges(),
            &mut stack,
            &mut vertices,
            max_paths,
        )?;
        Self::from_parts(vertices, Method::Paths)
    }

    /// Every perfect matching of a balanced bipartite graph, as an edge
    /// indicator over the graph's edge order.
    pub fn perfect_matchings(graph: &BipartiteGraph, max_matchings: usize) -> Result<Self> {
        let n = graph.side();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(left, right)) in graph.edges().iter().enumerate() {
            adj[left].push((id, right));
        }
        let mut vertices = Vec::new();
        let mut used_right = vec![false; n];
        let mut picked = Vec::new();
        collect_matchings(
            0,
            &adj,
            graph.num_edges(),
            &mut used_right,
            &mut picked,
            &mut vertices,
            max_matchings,
        )?;
        if vertices.is_empty() {
            return Err(Error::InfeasibleGraph(
                "bipartite graph has no perfect matching".into(),
            ));
        }
        Self::from_parts(vertices, Method::Matchings)
    }

    /// Every joint assignment of a chain model, as its marginal vector.
    pub fn chain_assignments(model: &ChainModel, max_assignments: usize) -> Result<Self> {
        let total: usize = model.state_counts().iter().product();
        if total > max_assignments {
            return Err(Error::InvalidParameter(format!(
                "chain has {total} assignments, above the cap {max_assignments}"
            )));
        }
        let mut vertices = Vec::with_capacity(total);
        let mut assignment = vec![0usize; model.len()];
        loop {
            vertices.push(model.assignment_vertex(&assignment)?);
            // Odometer increment over the per-node state ranges.
            let mut node = 0;
            loop {
                if node == model.len() {
                    return Self::from_parts(vertices, Method::Assignments);
                }
                assignment[node] += 1;
                if assignment[node] < model.state_counts()[node] {
                    break;
                }
                assignment[node] = 0;
                node += 1;
            }
        }
    }

    /// A caller-supplied list, checked for consistency.
    pub fn explicit(vertices: Vec<Vertex>) -> Result<Self> {
        Self::from_parts(vertices, Method::Explicit)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

fn collect_paths(
    node: usize,
    target: usize,
    out: &[Vec<(usize, usize)>],
    dim: usize,
    stack: &mut Vec<usize>,
    vertices: &mut Vec<Vertex>,
    max_paths: usize,
) -> Result<()> {
    if node == target {
        if vertices.len() == max_paths {
            return Err(Error::InvalidParameter(format!(
                "graph has more than {max_paths} paths"
            )));
        }
        vertices.push(Vertex::new(stack.clone(), dim)?);
        return Ok(());
    }
    for &(id, head) in &out[node] {
        stack.push(id);
        collect_paths(head, target, out, dim, stack, vertices, max_paths)?;
        stack.pop();
    }
    Ok(())
}

fn collect_matchings(
    left: usize,
    adj: &[Vec<(usize, usize)>],
    dim: usize,
    used_right: &mut [bool],
    picked: &mut Vec<usize>,
    vertices: &mut Vec<Vertex>,
    max_matchings: usize,
) -> Result<()> {
    if left == adj.len() {
        if vertices.len() == max_matchings {
            return Err(Error::InvalidParameter(format!(
                "graph has more than {max_matchings} perfect matchings"
            )));
        }
        vertices.push(Vertex::new(picked.clone(), dim)?);
        return Ok(());
    }
    for &(id, right) in &adj[left] {
        if !used_right[right] {
            used_right[right] = true;
            picked.push(id);
            collect_matchings(left + 1, adj, dim, used_right, picked, vertices, max_matchings)?;
            picked.pop();
            used_right[right] = false;
        }
    }
    Ok(())
}

/// Exhaustive argmin of cost over the enumeration, lowest index on ties.
pub fn brute_lmo(enumeration: &VertexEnumeration, cost: &[f64]) -> Result<Vertex> {
    if cost.len() != enumeration.dim() {
        return Err(Error::DimensionMismatch {
            expected: enumeration.dim(),
            got: cost.len(),
        });
    }
    let mut best: Option<(&Vertex, f64)> = None;
    for v in enumeration.vertices() {
        let value = v.dot(cost);
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((v, value));
        }
    }
    Ok(best.expect("enumeration is nonempty").0.clone())
}

/// Exhaustive argmin restricted to vertices whose support sits inside the
/// mask; errors like the specialized oracles when none qualifies.
pub fn brute_restricted_lmo(
    enumeration: &VertexEnumeration,
    cost: &[f64],
    mask: &[bool],
) -> Result<Vertex> {
    if cost.len() != enumeration.dim() || mask.len() != enumeration.dim() {
        return Err(Error::DimensionMismatch {
            expected: enumeration.dim(),
            got: cost.len().max(mask.len()),
        });
    }
    let mut best: Option<(&Vertex, f64)> = None;
    for v in enumeration.vertices().iter().filter(|v| v.within_mask(mask)) {
        let value = v.dot(cost);
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((v, value));
        }
    }
    match best {
        Some((v, _)) => Ok(v.clone()),
        None => Err(Error::EmptySupport),
    }
}
