//! The unit simplex: x >= 0, sum x = 1; vertices are the basis vectors.

use crate::error::{Error, Result};
use crate::polytope::{check_cost, check_mask, PolytopeOracle};
use crate::vertex::Vertex;

#[derive(Debug, Clone)]
pub struct UnitSimplex {
    n: usize,
}

impl UnitSimplex {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "simplex needs at least one coordinate".into(),
            ));
        }
        Ok(UnitSimplex { n })
    }
}

impl PolytopeOracle for UnitSimplex {
    fn dim(&self) -> usize {
        self.n
    }

    fn lmo(&self, cost: &[f64]) -> Result<Vertex> {
        check_cost(cost, self.n)?;
        let mut best = 0;
        for (i, &c) in cost.iter().enumerate() {
            if c < cost[best] {
                best = i;
            }
        }
        Vertex::new(vec![best], self.n)
    }

    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex> {
        check_cost(cost, self.n)?;
        check_mask(mask, self.n)?;
        let mut best: Option<usize> = None;
        for i in 0..self.n {
            if mask[i] && best.is_none_or(|b| cost[i] < cost[b]) {
                best = Some(i);
            }
        }
        match best {
            Some(i) => Vertex::new(vec![i], self.n),
            None => Err(Error::EmptySupport),
        }
    }

    fn diam_sq(&self) -> f64 {
        // Distance between two distinct basis vectors; 0 when n = 1.
        if self.n > 1 {
            2.0
        } else {
            0.0
        }
    }

    fn equality_residual(&self, x: &[f64]) -> f64 {
        let total: f64 = x.iter().sum();
        (total - 1.0).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lmo_picks_minimum_with_lowest_index_ties() {
        let s = UnitSimplex::new(4).unwrap();
        assert_eq!(s.lmo(&[3.0, -1.0, 2.0, 5.0]).unwrap().support(), &[1]);
        // All equal: lowest index wins.
        assert_eq!(s.lmo(&[1.0, 1.0, 1.0, 1.0]).unwrap().support(), &[0]);
        // Tie between 1 and 3.
        assert_eq!(s.lmo(&[2.0, 0.5, 2.0, 0.5]).unwrap().support(), &[1]);
    }

    #[test]
    fn restricted_lmo_respects_mask_and_stays_tie_consistent() {
        let s = UnitSimplex::new(4).unwrap();
        let cost = [3.0, -1.0, 2.0, 5.0];
        let masked = s
            .restricted_lmo(&cost, &[true, false, true, true])
            .unwrap();
        assert_eq!(masked.support(), &[2]);
        // Full mask agrees with the unrestricted oracle, ties included.
        let tie = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            s.restricted_lmo(&tie, &[true; 4]).unwrap(),
            s.lmo(&tie).unwrap()
        );
    }

    #[test]
    fn restricted_lmo_rejects_empty_mask() {
        let s = UnitSimplex::new(3).unwrap();
        assert!(matches!(
            s.restricted_lmo(&[1.0, 2.0, 3.0], &[false; 3]),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn dimension_checks() {
        let s = UnitSimplex::new(3).unwrap();
        assert!(s.lmo(&[1.0]).is_err());
        assert!(s.restricted_lmo(&[1.0, 2.0, 3.0], &[true]).is_err());
        assert!(s.lmo(&[1.0, f64::NAN, 0.0]).is_err());
        assert!(UnitSimplex::new(0).is_err());
    }

    #[test]
    fn residual_measures_mass_defect() {
        let s = UnitSimplex::new(3).unwrap();
        assert_eq!(s.equality_residual(&[0.5, 0.25, 0.25]), 0.0);
        assert!((s.equality_residual(&[0.5, 0.25, 0.5]) - 0.25).abs() < 1e-15);
    }
}
