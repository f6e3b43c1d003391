//! Explicit convex-decomposition store for the baseline solvers.
//!
//! PCG and ACG must track which vertices currently compose the iterate;
//! this is exactly the bookkeeping the decomposition-invariant method
//! avoids. The store keeps insertion order, so argmax ties resolve to the
//! oldest entry and runs stay deterministic.

use crate::error::{Error, Result};
use crate::vertex::Vertex;
use crate::{EPS_NUM, EPS_SUPP};
use std::collections::HashMap;

/// Max-norm drift between the stored decomposition and the iterate above
/// which the run aborts with an internal-consistency error.
pub const STORE_DRIFT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DecompositionStore {
    entries: Vec<(Vertex, f64)>,
    index: HashMap<Vertex, usize>,
}

impl DecompositionStore {
    /// Store holding a single vertex with weight 1.
    pub fn new(vertex: Vertex) -> Self {
        let mut index = HashMap::new();
        index.insert(vertex.clone(), 0);
        DecompositionStore {
            entries: vec![(vertex, 1.0)],
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vertex(&self, idx: usize) -> &Vertex {
        &self.entries[idx].0
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.entries[idx].1
    }

    pub fn weights_sum(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Entry maximizing cost . v; ties keep the oldest entry.
    pub fn max_dot(&self, cost: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (idx, (v, _)) in self.entries.iter().enumerate() {
            let score = v.dot(cost);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((idx, score));
            }
        }
        best
    }

    /// Pairwise transfer: move eta of weight from entry `from` onto
    /// vertex `to`, inserting it if new. eta must not exceed the source
    /// weight.
    pub fn transfer(&mut self, from: usize, to: &Vertex, eta: f64) {
        debug_assert!(eta <= self.entries[from].1 + EPS_NUM);
        self.entries[from].1 -= eta;
        match self.index.get(to) {
            Some(&i) => self.entries[i].1 += eta,
            None => {
                self.index.insert(to.clone(), self.entries.len());
                self.entries.push((to.clone(), eta));
            }
        }
        self.purge();
    }

    /// Frank-Wolfe update x <- (1 - eta) x + eta v in weight space.
    pub fn scale_and_add(&mut self, v: &Vertex, eta: f64) {
        for (_, w) in self.entries.iter_mut() {
            *w *= 1.0 - eta;
        }
        match self.index.get(v) {
            Some(&i) => self.entries[i].1 += eta,
            None => {
                self.index.insert(v.clone(), self.entries.len());
                self.entries.push((v.clone(), eta));
            }
        }
        self.purge();
    }

    /// Away update x <- (1 + eta) x - eta v_away in weight space; eta must
    /// not exceed w_away / (1 - w_away).
    pub fn away_scale(&mut self, away: usize, eta: f64) {
        for (_, w) in self.entries.iter_mut() {
            *w *= 1.0 + eta;
        }
        self.entries[away].1 -= eta;
        self.purge();
    }

    /// Drops entries whose weight fell below the support threshold,
    /// preserving the order of the survivors.
    pub(crate) fn purge(&mut self) {
        if self.entries.iter().all(|(_, w)| *w >= EPS_SUPP) {
            return;
        }
        self.entries.retain(|(_, w)| *w >= EPS_SUPP);
        self.index.clear();
        for (idx, (v, _)) in self.entries.iter().enumerate() {
            self.index.insert(v.clone(), idx);
        }
    }

    pub fn reconstruct(&self, dim: usize) -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for (v, w) in &self.entries {
            for &i in v.support() {
                x[i] += w;
            }
        }
        x
    }

    /// Max-norm distance between the stored combination and x.
    pub fn drift(&self, x: &[f64]) -> f64 {
        let rebuilt = self.reconstruct(x.len());
        rebuilt
            .iter()
            .zip(x)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// Consistency gate run every iteration by the baseline solvers.
    pub fn validate_against(&self, x: &[f64], t: usize) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InternalConsistency(format!(
                "decomposition store empty at iteration {t}"
            )));
        }
        let sum = self.weights_sum();
        if (sum - 1.0).abs() > EPS_NUM {
            return Err(Error::InternalConsistency(format!(
                "store weights sum to {sum} at iteration {t}"
            )));
        }
        if self.entries.iter().any(|(_, w)| *w < 0.0) {
            return Err(Error::InternalConsistency(format!(
                "negative store weight at iteration {t}"
            )));
        }
        let drift = self.drift(x);
        if drift > STORE_DRIFT_TOL {
            return Err(Error::InternalConsistency(format!(
                "store reconstruction drift {drift} at iteration {t}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(i: usize) -> Vertex {
        Vertex::new(vec![i], 3).unwrap()
    }

    #[test]
    fn transfer_moves_weight_and_inserts() {
        let mut store = DecompositionStore::new(basis(0));
        store.transfer(0, &basis(1), 0.25);
        assert_eq!(store.len(), 2);
        assert_eq!(store.weight(0), 0.75);
        assert_eq!(store.weight(1), 0.25);
        assert_eq!(store.reconstruct(3), vec![0.75, 0.25, 0.0]);
    }

    #[test]
    fn full_transfer_is_a_drop_step() {
        let mut store = DecompositionStore::new(basis(0));
        store.transfer(0, &basis(1), 0.5);
        // Move everything left on entry 0: it must disappear.
        store.transfer(0, &basis(1), 0.5);
        assert_eq!(store.len(), 1);
        assert_eq!(store.vertex(0), &basis(1));
        assert!((store.weights_sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scale_and_add_matches_fw_step() {
        let mut store = DecompositionStore::new(basis(0));
        store.scale_and_add(&basis(2), 0.25);
        assert_eq!(store.reconstruct(3), vec![0.75, 0.0, 0.25]);
        // Full FW step wipes the rest of the store.
        store.scale_and_add(&basis(1), 1.0);
        assert_eq!(store.len(), 1);
        assert_eq!(store.reconstruct(3), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn away_scale_can_drop_the_away_vertex() {
        let mut store = DecompositionStore::new(basis(0));
        store.transfer(0, &basis(1), 0.25);
        // Away from entry 1 (weight 0.25) at the cap 0.25/0.75 = 1/3.
        store.away_scale(1, 0.25 / 0.75);
        assert_eq!(store.len(), 1);
        assert!((store.weights_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_dot_prefers_oldest_on_ties() {
        let mut store = DecompositionStore::new(basis(1));
        store.transfer(0, &basis(0), 0.5);
        let (idx, score) = store.max_dot(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(idx, 0, "tie must keep the insertion-order winner");
        assert_eq!(score, 1.0);
    }

    #[test]
    fn validate_catches_drift() {
        let store = DecompositionStore::new(basis(0));
        assert!(store.validate_against(&[1.0, 0.0, 0.0], 1).is_ok());
        let err = store.validate_against(&[0.5, 0.5, 0.0], 1);
        assert!(matches!(err, Err(Error::InternalConsistency(_))));
    }
}
