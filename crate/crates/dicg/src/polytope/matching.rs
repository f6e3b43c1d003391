//! Bipartite perfect-matching polytope: coordinates are edges of a
//! balanced bipartite graph, vertices are perfect matchings, and the LMO
//! is a minimum-cost assignment solved by the O(n^3) Hungarian method.

use crate::error::{Error, Result};
use crate::polytope::{check_cost, check_mask, PolytopeOracle};
use crate::vertex::Vertex;
use std::collections::HashMap;

/// Sentinel for forbidden cells of the assignment matrix. Large enough to
/// never be chosen when a feasible matching exists, small enough that
/// n-fold sums stay finite.
const FORBIDDEN: f64 = 1e18;

/// Balanced bipartite graph on n + n nodes. Edge k joins left node
/// edges[k].0 to right node edges[k].1; k is the polytope coordinate.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Validates the edge list and requires at least one perfect matching.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "bipartite graph needs at least one node per side".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for &(l, r) in &edges {
            if l >= n || r >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({l}, {r}) out of range for side size {n}"
                )));
            }
            if !seen.insert((l, r)) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({l}, {r})"
                )));
            }
        }
        let graph = BipartiteGraph { n, edges };
        if !graph.has_perfect_matching() {
            return Err(Error::InfeasibleGraph("no perfect matching".into()));
        }
        Ok(graph)
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Kuhn's augmenting-path test.
    fn has_perfect_matching(&self) -> bool {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(l, r) in &self.edges {
            adj[l].push(r);
        }
        let mut match_right = vec![usize::MAX; self.n];
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            match_right: &mut [usize],
            visited: &mut [bool],
        ) -> bool {
            for &r in &adj[u] {
                if visited[r] {
                    continue;
                }
                visited[r] = true;
                if match_right[r] == usize::MAX
                    || augment(match_right[r], adj, match_right, visited)
                {
                    match_right[r] = u;
                    return true;
                }
            }
            false
        }
        let mut matched = 0;
        for u in 0..self.n {
            let mut visited = vec![false; self.n];
            if augment(u, &adj, &mut match_right, &mut visited) {
                matched += 1;
            }
        }
        matched == self.n
    }
}

#[derive(Debug, Clone)]
pub struct MatchingPolytope {
    graph: BipartiteGraph,
    edge_id: HashMap<(usize, usize), usize>,
}

impl MatchingPolytope {
    pub fn new(graph: BipartiteGraph) -> Self {
        let edge_id = graph
            .edges
            .iter()
            .enumerate()
            .map(|(id, &e)| (e, id))
            .collect();
        MatchingPolytope { graph, edge_id }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    fn assignment(&self, cost: &[f64], mask: Option<&[bool]>) -> Option<Vertex> {
        let n = self.graph.n;
        let mut matrix = vec![vec![FORBIDDEN; n]; n];
        let mut min_cost = f64::INFINITY;
        for (id, &(l, r)) in self.graph.edges.iter().enumerate() {
            if mask.is_some_and(|m| !m[id]) {
                continue;
            }
            matrix[l][r] = cost[id];
            min_cost = min_cost.min(cost[id]);
        }
        // Shift real entries to be nonnegative; every perfect matching
        // picks exactly n cells, so the argmin is unchanged.
        if min_cost < 0.0 {
            for row in matrix.iter_mut() {
                for cell in row.iter_mut() {
                    if *cell < FORBIDDEN {
                        *cell -= min_cost;
                    }
                }
            }
        }
        let assignment = hungarian(&matrix)?;
        let mut support = Vec::with_capacity(n);
        for (l, r) in assignment.into_iter().enumerate() {
            match self.edge_id.get(&(l, r)) {
                Some(&id) if mask.is_none_or(|m| m[id]) => support.push(id),
                _ => return None,
            }
        }
        Some(Vertex::new(support, self.graph.num_edges()).expect("matching edges are distinct"))
    }
}

/// Potential-based Hungarian algorithm on an n x n matrix with
/// nonnegative real entries and FORBIDDEN sentinels. Returns the
/// min-cost assignment left -> right, or None when only sentinel-using
/// assignments exist.
fn hungarian(matrix: &[Vec<f64>]) -> Option<Vec<usize>> {
    let n = matrix.len();
    // 1-indexed with a virtual column 0, as in the classical formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = matrix[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            // All remaining columns sit behind forbidden cells: the rows
            // seen so far cannot be completed into a matching.
            if delta >= FORBIDDEN / 2.0 {
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![usize::MAX; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    Some(assignment)
}

impl PolytopeOracle for MatchingPolytope {
    fn dim(&self) -> usize {
        self.graph.num_edges()
    }

    fn lmo(&self, cost: &[f64]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        self.assignment(cost, None).ok_or_else(|| {
            Error::InternalConsistency(
                "assignment failed although a perfect matching exists".into(),
            )
        })
    }

    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        check_mask(mask, self.dim())?;
        self.assignment(cost, Some(mask)).ok_or(Error::EmptySupport)
    }

    fn diam_sq(&self) -> f64 {
        // Two disjoint perfect matchings differ in all 2n coordinates.
        2.0 * self.graph.n as f64
    }

    /// Degree constraints: each left and right node carries unit mass.
    fn equality_residual(&self, x: &[f64]) -> f64 {
        let n = self.graph.n;
        let mut left = vec![0.0f64; n];
        let mut right = vec![0.0f64; n];
        for (id, &(l, r)) in self.graph.edges.iter().enumerate() {
            left[l] += x[id];
            right[r] += x[id];
        }
        left.iter()
            .chain(right.iter())
            .fold(0.0f64, |acc, &s| acc.max((s - 1.0).abs()))
    }
}
