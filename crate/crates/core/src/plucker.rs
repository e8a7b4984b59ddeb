//! Plücker vectors: maps from k-subsets of [m] to exact rationals, compared
//! projectively.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_q, is_k_subset, k_subsets, minor, parse_q, rank, Matrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PluckerError {
    #[error("Plücker vector is identically zero")]
    AllZero,
    #[error("subset {0:?} is not a {1}-subset of 1..={2}")]
    BadSubset(Vec<usize>, usize, usize),
    #[error("inconsistent subset sizes")]
    MixedSizes,
    #[error("matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("matrix rows have unequal lengths")]
    Ragged,
    #[error("bad value: {0}")]
    Value(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    m: usize,
    k: usize,
    coords: BTreeMap<Vec<usize>, Q>,
}

impl PluckerVector {
    /// Missing subsets are zero.
    pub fn new(m: usize, k: usize, values: BTreeMap<Vec<usize>, Q>) -> Result<Self, PluckerError> {
        let mut coords: BTreeMap<Vec<usize>, Q> = k_subsets(m, k).into_iter().map(|s| (s, Q::zero())).collect();
        for (s, v) in values {
            if !is_k_subset(&s, m, k) {
                return Err(PluckerError::BadSubset(s, k, m));
            }
            coords.insert(s, v);
        }
        if coords.values().all(|v| v.is_zero()) {
            return Err(PluckerError::AllZero);
        }
        Ok(PluckerVector { m, k, coords })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, subset: &[usize]) -> Q {
        self.coords.get(subset).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.coords.iter()
    }

    pub fn support(&self) -> Vec<Vec<usize>> {
        self.coords.iter().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s.clone()).collect()
    }

    pub fn is_zero_at(&self, subset: &[usize]) -> bool {
        self.get(subset).is_zero()
    }

    /// Equal up to one nonzero global scalar.
    pub fn projectively_eq(&self, other: &PluckerVector) -> bool {
        if self.m != other.m || self.k != other.k {
            return false;
        }
        let Some((s, a)) = self.coords.iter().find(|(_, v)| !v.is_zero()) else {
            return false;
        };
        let b = other.get(s);
        if b.is_zero() {
            return false;
        }
        let scale = b / a;
        self.coords.iter().all(|(s, v)| v * &scale == other.get(s))
    }

    /// Scales so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> PluckerVector {
        let first = self.coords.values().find(|v| !v.is_zero()).cloned().unwrap_or_else(Q::one);
        let coords = self.coords.iter().map(|(s, v)| (s.clone(), v / &first)).collect();
        PluckerVector { m: self.m, k: self.k, coords }
    }

    /// Coordinates on subsets avoiding the given label, relabelled into [m-1]
    /// when the label is m.
    pub fn restrict_without_last(&self) -> Option<PluckerVector> {
        let values: BTreeMap<Vec<usize>, Q> =
            self.coords.iter().filter(|(s, _)| !s.contains(&self.m)).map(|(s, v)| (s.clone(), v.clone())).collect();
        PluckerVector::new(self.m - 1, self.k, values).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coords.iter().map(|(s, v)| serde_json::json!({ "subset": s, "value": format_q(v) })).collect(),
        )
    }

    pub fn from_json(m: usize, value: &serde_json::Value) -> Result<Self, PluckerError> {
        let entries: Vec<PluckerEntry> =
            serde_json::from_value(value.clone()).map_err(|e| PluckerError::Value(e.to_string()))?;
        let k = entries.first().map(|e| e.subset.len()).ok_or(PluckerError::AllZero)?;
        let mut values = BTreeMap::new();
        for e in entries {
            if e.subset.len() != k {
                return Err(PluckerError::MixedSizes);
            }
            let v = parse_q(&e.value).map_err(|err| PluckerError::Value(err.to_string()))?;
            values.insert(e.subset, v);
        }
        PluckerVector::new(m, k, values)
    }
}

#[derive(Serialize, Deserialize)]
struct PluckerEntry {
    subset: Vec<usize>,
    value: String,
}

/// A full-rank k×m matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMatrix {
    rows: Matrix,
}

impl PointMatrix {
    pub fn new(rows: Matrix) -> Result<Self, PluckerError> {
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(PluckerError::Ragged);
        }
        let r = rank(&rows);
        if r != rows.len() {
            return Err(PluckerError::RankDeficient { rank: r, k: rows.len() });
        }
        Ok(PointMatrix { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn minor(&self, cols: &[usize]) -> Q {
        minor(&self.rows, cols)
    }
}

pub fn minors_of_matrix(mat: &PointMatrix) -> PluckerVector {
    let values = k_subsets(mat.m(), mat.k()).into_iter().map(|s| {
        let v = mat.minor(&s);
        (s, v)
    });
    PluckerVector::new(mat.m(), mat.k(), values.collect()).expect("full rank matrix has a nonzero minor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn minors_of_small_matrices() {
        let id = PointMatrix::new(vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]).unwrap();
        let p = minors_of_matrix(&id);
        assert_eq!(p.get(&[1, 2]), q(1));
        assert_eq!(p.support(), vec![vec![1, 2]]);

        let m = PointMatrix::new(vec![vec![q(1), q(0), q(-1)], vec![q(0), q(1), q(0)]]).unwrap();
        let p = minors_of_matrix(&m);
        assert_eq!(p.get(&[1, 2]), q(1));
        assert_eq!(p.get(&[1, 3]), q(0));
        assert_eq!(p.get(&[2, 3]), q(1));
    }

    #[test]
    fn rank_deficient_rejected() {
        let m = PointMatrix::new(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(matches!(m, Err(PluckerError::RankDeficient { .. })));
    }

    #[test]
    fn projective_equality() {
        let m = PointMatrix::new(vec![vec![q(1), q(3), q(-1)], vec![q(0), q(1), q(5)]]).unwrap();
        let a = minors_of_matrix(&m);
        let scaled = PluckerVector::new(3, 2, a.iter().map(|(s, v)| (s.clone(), v * q(-7))).collect()).unwrap();
        assert!(a.projectively_eq(&scaled));
        assert!(a.projectively_eq(&a.normalized()));
    }

    #[test]
    fn json_round_trip() {
        let m = PointMatrix::new(vec![vec![q(1), q(3), q(-1)], vec![q(0), q(1), q(5)]]).unwrap();
        let a = minors_of_matrix(&m);
        let back = PluckerVector::from_json(3, &a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
