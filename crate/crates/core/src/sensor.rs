//! Points in sensor space and policy parameter vectors.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};

/// A point in sensor (and therefore goal/outcome) space.
///
/// Ground-truth observations are 2-D; image observations are a flattened
/// 50×50 RGB frame of length 7500 (see [`crate::camera`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SensorVector(Vec<f64>);

impl SensorVector {
    pub fn new(values: Vec<f64>) -> Self {
        SensorVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for SensorVector {
    fn from(values: Vec<f64>) -> Self {
        SensorVector(values)
    }
}

impl<const N: usize> From<[f64; N]> for SensorVector {
    fn from(values: [f64; N]) -> Self {
        SensorVector(values.to_vec())
    }
}

/// Flat parameter vector of one policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolicyParams(Vec<f64>);

impl PolicyParams {
    pub fn new(values: Vec<f64>) -> Self {
        PolicyParams(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for PolicyParams {
    fn from(values: Vec<f64>) -> Self {
        PolicyParams(values)
    }
}

impl<const N: usize> From<[f64; N]> for PolicyParams {
    fn from(values: [f64; N]) -> Self {
        PolicyParams(values.to_vec())
    }
}

/// Squared Euclidean distance, summed left to right in index order.
///
/// Every distance in the crate reduces to this exact summation order, which
/// keeps cached, sparse and dense evaluations bit-identical.
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        sum += d * d;
    }
    sum
}

/// Plain Euclidean distance between two sensor vectors.
pub fn euclidean_distance(a: &SensorVector, b: &SensorVector) -> Result<f64> {
    check_dim(a.len(), b.len())?;
    Ok(squared_distance(a.values(), b.values()).sqrt())
}
