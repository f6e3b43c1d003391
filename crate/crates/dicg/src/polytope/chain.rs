//! Chain marginal polytope: locally consistent unary and pairwise
//! marginals of a chain-structured model. Vertices are exactly the
//! indicator vectors of full state assignments, and the LMO is min-sum
//! dynamic programming (Viterbi) over the chain.

use crate::error::{Error, Result};
use crate::polytope::{check_cost, check_mask, PolytopeOracle};
use crate::vertex::Vertex;

/// Layout of marginal coordinates for a chain with node state counts
/// k_0..k_{L-1}: first the unary blocks node by node, then the pairwise
/// blocks edge by edge in row-major (left state, right state) order.
#[derive(Debug, Clone)]
pub struct ChainModel {
    state_counts: Vec<usize>,
    unary_offsets: Vec<usize>,
    pair_offsets: Vec<usize>,
    dim: usize,
}

impl ChainModel {
    pub fn new(state_counts: Vec<usize>) -> Result<Self> {
        if state_counts.is_empty() {
            return Err(Error::InvalidParameter("chain needs nodes".into()));
        }
        if state_counts.contains(&0) {
            return Err(Error::InvalidParameter(
                "every chain node needs at least one state".into(),
            ));
        }
        let mut offset = 0usize;
        let mut unary_offsets = Vec::with_capacity(state_counts.len());
        for &k in &state_counts {
            unary_offsets.push(offset);
            offset = offset
                .checked_add(k)
                .ok_or_else(|| Error::InvalidParameter("chain dimension overflow".into()))?;
        }
        let mut pair_offsets = Vec::with_capacity(state_counts.len().saturating_sub(1));
        for w in state_counts.windows(2) {
            pair_offsets.push(offset);
            let block = w[0]
                .checked_mul(w[1])
                .ok_or_else(|| Error::InvalidParameter("chain dimension overflow".into()))?;
            offset = offset
                .checked_add(block)
                .ok_or_else(|| Error::InvalidParameter("chain dimension overflow".into()))?;
        }
        Ok(ChainModel {
            state_counts,
            unary_offsets,
            pair_offsets,
            dim: offset,
        })
    }

    /// Number of chain nodes.
    pub fn len(&self) -> usize {
        self.state_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn state_counts(&self) -> &[usize] {
        &self.state_counts
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of factors (unary plus pairwise blocks): 2L - 1.
    pub fn num_factors(&self) -> usize {
        2 * self.len() - 1
    }

    pub fn unary_index(&self, node: usize, state: usize) -> usize {
        debug_assert!(state < self.state_counts[node]);
        self.unary_offsets[node] + state
    }

    /// Index of the pairwise coordinate for chain edge node..node+1.
    pub fn pair_index(&self, node: usize, left_state: usize, right_state: usize) -> usize {
        debug_assert!(left_state < self.state_counts[node]);
        debug_assert!(right_state < self.state_counts[node + 1]);
        self.pair_offsets[node] + left_state * self.state_counts[node + 1] + right_state
    }

    /// Indicator vertex of a full assignment y_0..y_{L-1}.
    pub fn assignment_vertex(&self, assignment: &[usize]) -> Result<Vertex> {
        if assignment.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: assignment.len(),
            });
        }
        for (node, &y) in assignment.iter().enumerate() {
            if y >= self.state_counts[node] {
                return Err(Error::InvalidParameter(format!(
                    "state {y} out of range at node {node}"
                )));
            }
        }
        let mut support = Vec::with_capacity(self.num_factors());
        for (node, &y) in assignment.iter().enumerate() {
            support.push(self.unary_index(node, y));
        }
        for node in 0..self.len() - 1 {
            support.push(self.pair_index(node, assignment[node], assignment[node + 1]));
        }
        Vertex::new(support, self.dim)
    }
}

#[derive(Debug, Clone)]
pub struct ChainMarginalPolytope {
    model: ChainModel,
}

impl ChainMarginalPolytope {
    pub fn new(model: ChainModel) -> Self {
        ChainMarginalPolytope { model }
    }

    pub fn model(&self) -> &ChainModel {
        &self.model
    }

    /// Min-sum DP. A state or transition is available unless the mask
    /// rules it out; ties resolve toward lower state indices because
    /// strict improvement is required to switch.
    fn viterbi(&self, cost: &[f64], mask: Option<&[bool]>) -> Option<Vertex> {
        let m = &self.model;
        let len = m.len();
        let allowed_state =
            |node: usize, s: usize| mask.is_none_or(|mk| mk[m.unary_index(node, s)]);
        let allowed_pair = |node: usize, s: usize, r: usize| {
            mask.is_none_or(|mk| mk[m.pair_index(node, s, r)])
        };

        let mut dp: Vec<Vec<f64>> = Vec::with_capacity(len);
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(len);
        dp.push(
            (0..m.state_counts[0])
                .map(|s| {
                    if allowed_state(0, s) {
                        cost[m.unary_index(0, s)]
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        );
        back.push(vec![usize::MAX; m.state_counts[0]]);

        for node in 1..len {
            let mut layer = vec![f64::INFINITY; m.state_counts[node]];
            let mut pred = vec![usize::MAX; m.state_counts[node]];
            for r in 0..m.state_counts[node] {
                if !allowed_state(node, r) {
                    continue;
                }
                let unary = cost[m.unary_index(node, r)];
                for s in 0..m.state_counts[node - 1] {
                    if !dp[node - 1][s].is_finite() || !allowed_pair(node - 1, s, r) {
                        continue;
                    }
                    let total = dp[node - 1][s] + cost[m.pair_index(node - 1, s, r)] + unary;
                    if total < layer[r] {
                        layer[r] = total;
                        pred[r] = s;
                    }
                }
            }
            dp.push(layer);
            back.push(pred);
        }

        let last = &dp[len - 1];
        let mut best: Option<usize> = None;
        for (s, &v) in last.iter().enumerate() {
            if v.is_finite() && best.is_none_or(|b| v < last[b]) {
                best = Some(s);
            }
        }
        let mut assignment = vec![0usize; len];
        assignment[len - 1] = best?;
        for node in (1..len).rev() {
            assignment[node - 1] = back[node][assignment[node]];
        }
        Some(
            m.assignment_vertex(&assignment)
                .expect("DP produces in-range states"),
        )
    }
}

impl PolytopeOracle for ChainMarginalPolytope {
    fn dim(&self) -> usize {
        self.model.dim
    }

    fn lmo(&self, cost: &[f64]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        self.viterbi(cost, None).ok_or_else(|| {
            Error::InternalConsistency("chain DP found no assignment".into())
        })
    }

    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex> {
        check_cost(cost, self.dim())?;
        check_mask(mask, self.dim())?;
        self.viterbi(cost, Some(mask)).ok_or(Error::EmptySupport)
    }

    fn diam_sq(&self) -> f64 {
        // Assignments differing at every node differ in all 2L - 1
        // factor coordinates of both vertices.
        2.0 * self.model.num_factors() as f64
    }

    /// Local consistency: unary blocks are distributions and pairwise
    /// blocks marginalize to their endpoints.
    fn equality_residual(&self, x: &[f64]) -> f64 {
        let m = &self.model;
        let mut residual = 0.0f64;
        for node in 0..m.len() {
            let total: f64 = (0..m.state_counts[node])
                .map(|s| x[m.unary_index(node, s)])
                .sum();
            residual = residual.max((total - 1.0).abs());
        }
        for node in 0..m.len().saturating_sub(1) {
            for s in 0..m.state_counts[node] {
                let row: f64 = (0..m.state_counts[node + 1])
                    .map(|r| x[m.pair_index(node, s, r)])
                    .sum();
                residual = residual.max((row - x[m.unary_index(node, s)]).abs());
            }
            for r in 0..m.state_counts[node + 1] {
                let col: f64 = (0..m.state_counts[node])
                    .map(|s| x[m.pair_index(node, s, r)])
                    .sum();
                residual = residual.max((col - x[m.unary_index(node + 1, r)]).abs());
            }
        }
        residual
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> ChainMarginalPolytope {
        // Nodes with 2 states each: 4 unary + 4 pairwise coordinates.
        ChainMarginalPolytope::new(ChainModel::new(vec![2, 2]).unwrap())
    }

    #[test]
    fn layout_is_unaries_then_pairs() {
        let m = ChainModel::new(vec![2, 3, 2]).unwrap();
        assert_eq!(m.dim(), 7 + 6 + 6);
        assert_eq!(m.unary_index(0, 1), 1);
        assert_eq!(m.unary_index(2, 0), 5);
        assert_eq!(m.pair_index(0, 1, 2), 7 + 5);
        assert_eq!(m.pair_index(1, 2, 1), 13 + 5);
        assert_eq!(m.num_factors(), 5);
    }

    #[test]
    fn lmo_decodes_cheapest_assignment() {
        let p = two_node();
        let m = p.model();
        let mut cost = vec![0.0; m.dim()];
        // Make assignment (1, 0) cheapest through its pairwise term.
        cost[m.unary_index(0, 0)] = 1.0;
        cost[m.pair_index(0, 1, 0)] = -3.0;
        cost[m.pair_index(0, 1, 1)] = 2.0;
        let v = p.lmo(&cost).unwrap();
        let expected = m.assignment_vertex(&[1, 0]).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn zero_cost_ties_resolve_to_lowest_states() {
        let p = two_node();
        let v = p.lmo(&vec![0.0; p.dim()]).unwrap();
        assert_eq!(v, p.model().assignment_vertex(&[0, 0]).unwrap());
    }

    #[test]
    fn single_node_chain_is_a_simplex() {
        let p = ChainMarginalPolytope::new(ChainModel::new(vec![3]).unwrap());
        assert_eq!(p.dim(), 3);
        assert_eq!(p.diam_sq(), 2.0);
        let v = p.lmo(&[2.0, -1.0, 0.0]).unwrap();
        assert_eq!(v.support(), &[1]);
    }

    #[test]
    fn restricted_lmo_blocks_states_and_transitions() {
        let p = two_node();
        let m = p.model();
        let mut mask = vec![true; m.dim()];
        // Forbid state 0 at node 0.
        mask[m.unary_index(0, 0)] = false;
        let v = p.restricted_lmo(&vec![0.0; m.dim()], &mask).unwrap();
        assert_eq!(v, m.assignment_vertex(&[1, 0]).unwrap());
        // Forbidding both transitions out of state 1 kills everything.
        mask[m.pair_index(0, 1, 0)] = false;
        mask[m.pair_index(0, 1, 1)] = false;
        assert!(matches!(
            p.restricted_lmo(&vec![0.0; m.dim()], &mask),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn residual_checks_local_consistency() {
        let p = two_node();
        let m = p.model();
        // Mixture of assignments (0,0) and (1,1) with weights 0.25/0.75.
        let mut x = vec![0.0; m.dim()];
        for (w, assign) in [(0.25, [0usize, 0usize]), (0.75, [1, 1])] {
            for (node, &s) in assign.iter().enumerate() {
                x[m.unary_index(node, s)] += w;
            }
            x[m.pair_index(0, assign[0], assign[1])] += w;
        }
        assert!(p.equality_residual(&x) < 1e-15);
        // Break pairwise-to-unary consistency.
        x[m.pair_index(0, 0, 1)] += 0.1;
        x[m.pair_index(0, 0, 0)] -= 0.1;
        assert!(p.equality_residual(&x) > 0.09);
    }

    #[test]
    fn assignment_vertex_validates_input() {
        let m = ChainModel::new(vec![2, 2]).unwrap();
        assert!(m.assignment_vertex(&[0]).is_err());
        assert!(m.assignment_vertex(&[0, 5]).is_err());
        assert!(ChainModel::new(vec![]).is_err());
        assert!(ChainModel::new(vec![2, 0]).is_err());
    }
}
