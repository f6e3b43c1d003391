//! 0/1 polytope vertices stored as sorted support index lists.

use crate::error::{Error, Result};

/// A vertex of a 0/1 polytope: the indicator vector of `support` in
/// dimension `dim`. Support indices are stored sorted and duplicate-free,
/// so equality and hashing are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    support: Vec<usize>,
    dim: usize,
}

impl Vertex {
    /// Builds a vertex from a support list. The list is sorted here;
    /// duplicates or out-of-range indices are rejected.
    pub fn new(mut support: Vec<usize>, dim: usize) -> Result<Self> {
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "vertex support contains duplicate indices".into(),
            ));
        }
        if let Some(&last) = support.last() {
            if last >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: last + 1,
                });
            }
        }
        Ok(Vertex { support, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nonzero coordinates.
    pub fn card(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    /// True when every support index is allowed by `mask`.
    pub fn within_mask(&self, mask: &[bool]) -> bool {
        self.support.iter().all(|&i| mask.get(i).copied().unwrap_or(false))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &i in &self.support {
            v[i] = 1.0;
        }
        v
    }

    /// cost . v = sum of the cost entries on the support.
    pub fn dot(&self, cost: &[f64]) -> f64 {
        self.support.iter().map(|&i| cost[i]).sum()
    }

    /// Squared Euclidean distance between two 0/1 vertices equals the size
    /// of their support symmetric difference.
    pub fn dist_sq(&self, other: &Vertex) -> usize {
        let mut a = self.support.iter().peekable();
        let mut b = other.support.iter().peekable();
        let mut diff = 0;
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x == y {
                        a.next();
                        b.next();
                    } else if x < y {
                        diff += 1;
                        a.next();
                    } else {
                        diff += 1;
                        b.next();
                    }
                }
                (Some(_), None) => {
                    diff += 1;
                    a.next();
                }
                (None, Some(_)) => {
                    diff += 1;
                    b.next();
                }
                (None, None) => return diff,
            }
        }
    }
}

/// Applies x <- x + eta * (v_plus - v_minus) touching only the support
/// symmetric difference. Indices in both supports are skipped entirely, so
/// coordinates shared by the two vertices are bit-identical afterwards.
/// This is what keeps dyadic iterates exactly on the dyadic lattice.
pub(crate) fn apply_pairwise_step(x: &mut [f64], v_plus: &Vertex, v_minus: &Vertex, eta: f64) {
    let plus = v_plus.support();
    let minus = v_minus.support();
    let (mut i, mut j) = (0, 0);
    while i < plus.len() && j < minus.len() {
        if plus[i] == minus[j] {
            i += 1;
            j += 1;
        } else if plus[i] < minus[j] {
            x[plus[i]] += eta;
            i += 1;
        } else {
            x[minus[j]] -= eta;
            j += 1;
        }
    }
    for &p in &plus[i..] {
        x[p] += eta;
    }
    for &m in &minus[j..] {
        x[m] -= eta;
    }
}

/// Boolean mask of coordinates above the global support threshold.
pub fn support_mask(x: &[f64]) -> Vec<bool> {
    x.iter().map(|&v| v > crate::EPS_SUPP).collect()
}
