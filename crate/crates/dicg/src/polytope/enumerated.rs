//! Polytope given by an explicit vertex list, with an optional inequality
//! description A2 x <= b2 used by the tight-face away oracle of the
//! arbitrary-polytope solver.

use crate::error::{Error, Result};
use crate::point::dot;
use crate::polytope::{check_cost, check_mask, PolytopeOracle};
use crate::vertex::Vertex;
use crate::EPS_NUM;
use ndarray::{Array1, Array2, ArrayView1};

#[derive(Debug, Clone)]
pub struct EnumPolytope {
    vertices: Vec<Vertex>,
    inequalities: Option<(Array2<f64>, Array1<f64>)>,
    dim: usize,
    diam_sq: f64,
}

impl EnumPolytope {
    /// Vertex list only; the away oracle is unavailable without an
    /// inequality description.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        Self::build(vertices, None)
    }

    /// Vertex list plus A2 x <= b2. Every vertex must satisfy the
    /// description (within the numeric slack).
    pub fn with_inequalities(
        vertices: Vec<Vertex>,
        a2: Array2<f64>,
        b2: Array1<f64>,
    ) -> Result<Self> {
        Self::build(vertices, Some((a2, b2)))
    }

    fn build(
        vertices: Vec<Vertex>,
        inequalities: Option<(Array2<f64>, Array1<f64>)>,
    ) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) => v.dim(),
            None => {
                return Err(Error::InvalidParameter(
                    "enumerated polytope needs at least one vertex".into(),
                ))
            }
        };
        if vertices.iter().any(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vertices.iter().map(Vertex::dim).find(|&d| d != dim).unwrap(),
            });
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "duplicate vertex in enumerated polytope".into(),
            ));
        }
        if let Some((a2, b2)) = &inequalities {
            if a2.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a2.ncols(),
                });
            }
            if a2.nrows() != b2.len() {
                return Err(Error::DimensionMismatch {
                    expected: a2.nrows(),
                    got: b2.len(),
                });
            }
            for v in &vertices {
                let dense = v.to_dense();
                let lhs = a2.dot(&ArrayView1::from(&dense));
                for (row, (&l, &r)) in lhs.iter().zip(b2.iter()).enumerate() {
                    if l > r + EPS_NUM {
                        return Err(Error::InvalidParameter(format!(
                            "vertex violates inequality row {row}: {l} > {r}"
                        )));
                    }
                }
            }
        }
        let mut diam_sq = 0usize;
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                diam_sq = diam_sq.max(a.dist_sq(b));
            }
        }
        Ok(EnumPolytope {
            vertices,
            inequalities,
            dim,
            diam_sq: diam_sq as f64,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Rows of A2 x <= b2 that are tight at x (slack within the numeric
    /// tolerance). Errors when no inequality description was given.
    pub fn tight_rows(&self, x: &[f64]) -> Result<Vec<usize>> {
        let (a2, b2) = self.inequalities.as_ref().ok_or_else(|| {
            Error::InvalidParameter("polytope has no inequality description".into())
        })?;
        let lhs = a2.dot(&ArrayView1::from(x));
        Ok(lhs
            .iter()
            .zip(b2.iter())
            .enumerate()
            .filter(|(_, (&l, &r))| r - l <= EPS_NUM)
            .map(|(row, _)| row)
            .collect())
    }

    /// Away oracle over the tight face at x: among vertices lying on
    /// every inequality that is tight at x, returns the one maximizing
    /// grad . v. The current point is in the convex hull of that face, so
    /// the face is never empty at a feasible x.
    pub fn away_lmo(&self, grad: &[f64], x: &[f64]) -> Result<Vertex> {
        check_cost(grad, self.dim)?;
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let tight = self.tight_rows(x)?;
        let (a2, b2) = self.inequalities.as_ref().expect("checked by tight_rows");
        let mut best: Option<(usize, f64)> = None;
        for (idx, v) in self.vertices.iter().enumerate() {
            let dense = v.to_dense();
            let on_face = tight.iter().all(|&row| {
                let lhs = dot(&a2.row(row).to_vec(), &dense);
                (lhs - b2[row]).abs() <= EPS_NUM
            });
            if !on_face {
                continue;
            }
            let score = v.dot(grad);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((idx, score));
            }
        }
        match best {
            Some((idx, _)) => Ok(self.vertices[idx].clone()),
            None => Err(Error::InfeasibleState(
                "no vertex lies on the tight face; x is not feasible".into(),
            )),
        }
    }

    /// Largest eta with A2 (x + eta d) <= b2 and eta <= 1.
    pub fn max_step(&self, x: &[f64], dir: &[f64]) -> Result<f64> {
        let (a2, b2) = self.inequalities.as_ref().ok_or_else(|| {
            Error::InvalidParameter("polytope has no inequality description".into())
        })?;
        let lhs = a2.dot(&ArrayView1::from(x));
        let along = a2.dot(&ArrayView1::from(dir));
        let mut gamma = 1.0f64;
        for ((l, &d), &r) in lhs.iter().zip(along.iter()).zip(b2.iter()) {
            if d > 0.0 {
                gamma = gamma.min(((r - l) / d).max(0.0));
            }
        }
        Ok(gamma)
    }

    /// Worst violation of A2 x <= b2 (zero when no description exists).
    pub fn inequality_residual(&self, x: &[f64]) -> f64 {
        match &self.inequalities {
            Some((a2, b2)) => {
                let lhs = a2.dot(&ArrayView1::from(x));
                lhs.iter()
                    .zip(b2.iter())
                    .fold(0.0f64, |acc, (&l, &r)| acc.max(l - r))
            }
            None => 0.0,
        }
    }
}

impl PolytopeOracle for EnumPolytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn lmo(&self, cost: &[f64]) -> Result<Vertex> {
        check_cost(cost, self.dim)?;
        let mut best = 0usize;
        let mut best_score = self.vertices[0].dot(cost);
        for (idx, v) in self.vertices.iter().enumerate().skip(1) {
            let score = v.dot(cost);
            if score < best_score {
                best = idx;
                best_score = score;
            }
        }
        Ok(self.vertices[best].clone())
    }

    fn restricted_lmo(&self, cost: &[f64], mask: &[bool]) -> Result<Vertex> {
        check_cost(cost, self.dim)?;
        check_mask(mask, self.dim)?;
        let mut best: Option<(usize, f64)> = None;
        for (idx, v) in self.vertices.iter().enumerate() {
            if !v.within_mask(mask) {
                continue;
            }
            let score = v.dot(cost);
            if best.is_none_or(|(_, s)| score < s) {
                best = Some((idx, score));
            }
        }
        match best {
            Some((idx, _)) => Ok(self.vertices[idx].clone()),
            None => Err(Error::EmptySupport),
        }
    }

    fn diam_sq(&self) -> f64 {
        self.diam_sq
    }

    /// The enumerated form carries no equality description of its own.
    fn equality_residual(&self, _x: &[f64]) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    /// Unit square in the plane: x >= 0 and x <= 1 as A2 x <= b2.
    fn unit_square() -> EnumPolytope {
        let vertices = vec![
            Vertex::new(vec![], 2).unwrap(),
            Vertex::new(vec![0], 2).unwrap(),
            Vertex::new(vec![1], 2).unwrap(),
            Vertex::new(vec![0, 1], 2).unwrap(),
        ];
        let a2 = array![
            [-1.0, 0.0],
            [0.0, -1.0],
            [1.0, 0.0],
            [0.0, 1.0]
        ];
        let b2 = array![0.0, 0.0, 1.0, 1.0];
        EnumPolytope::with_inequalities(vertices, a2, b2).unwrap()
    }

    #[test]
    fn lmo_scans_all_vertices() {
        let p = unit_square();
        assert_eq!(p.lmo(&[1.0, 1.0]).unwrap().support(), &[] as &[usize]);
        assert_eq!(p.lmo(&[-1.0, 1.0]).unwrap().support(), &[0]);
        assert_eq!(p.lmo(&[-1.0, -1.0]).unwrap().support(), &[0, 1]);
    }

    #[test]
    fn restricted_lmo_uses_list_order_for_ties() {
        let p = unit_square();
        // Zero cost: every vertex ties; the first listed one wins.
        let v = p.restricted_lmo(&[0.0, 0.0], &[true, true]).unwrap();
        assert_eq!(v.support(), &[] as &[usize]);
        // Empty-support vertex fits any mask, so this never errors here.
        assert!(p.restricted_lmo(&[0.0, 0.0], &[false, false]).is_ok());
    }

    #[test]
    fn away_oracle_restricts_to_the_tight_face() {
        let p = unit_square();
        // On edge x2 = 0 (rows x2 >= 0 tight): face vertices are (0,0)
        // and (1,0).
        let grad = [1.0, 5.0];
        let away = p.away_lmo(&grad, &[0.5, 0.0]).unwrap();
        assert_eq!(away.support(), &[0]);
        // Interior point: no tight rows, away scans all vertices.
        let away = p.away_lmo(&grad, &[0.5, 0.5]).unwrap();
        assert_eq!(away.support(), &[0, 1]);
    }

    #[test]
    fn max_step_is_a_ratio_test() {
        let p = unit_square();
        // From (0.25, 0) along (1, 0): hits x1 <= 1 at eta = 0.75.
        assert_eq!(p.max_step(&[0.25, 0.0], &[1.0, 0.0]).unwrap(), 0.75);
        // Direction leaving the box immediately.
        assert_eq!(p.max_step(&[0.25, 0.0], &[0.0, -1.0]).unwrap(), 0.0);
        // Interior direction capped at 1.
        assert_eq!(p.max_step(&[0.25, 0.5], &[0.0, 0.25]).unwrap(), 1.0);
    }

    #[test]
    fn construction_validates_vertices() {
        let dup = vec![
            Vertex::new(vec![0], 2).unwrap(),
            Vertex::new(vec![0], 2).unwrap(),
        ];
        assert!(EnumPolytope::new(dup).is_err());
        assert!(EnumPolytope::new(vec![]).is_err());
        // Vertex (1,1) violates x1 + x2 <= 1.
        let verts = vec![
            Vertex::new(vec![0], 2).unwrap(),
            Vertex::new(vec![0, 1], 2).unwrap(),
        ];
        assert!(EnumPolytope::with_inequalities(
            verts,
            array![[1.0, 1.0]],
            array![1.0]
        )
        .is_err());
    }

    #[test]
    fn diameter_is_max_pairwise_distance() {
        assert_eq!(unit_square().diam_sq(), 2.0);
    }
}
