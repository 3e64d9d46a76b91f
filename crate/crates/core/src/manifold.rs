//! k-neighbour graph over achieved outcomes and basis-goal selection.
//!
//! Every outcome gets the mean distance to its `k` nearest other outcomes
//! (all `n - 1` others when `n <= k`). The basis goal is the outcome where
//! that mean is largest: the one most isolated from what has been found so
//! far. Ties resolve to the lowest index, both among neighbours and in the
//! argmax.

use crate::error::{Error, Result};
use crate::repertoire::{smallest_k, Repertoire};
use crate::sensor::{euclidean_distance, SensorVector};

pub const DEFAULT_K: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborStats {
    pub neighbors: Vec<usize>,
    pub avg_distance: f64,
}

/// Neighbour list of outcome `i` from its distance row.
fn stats_from_row(row: &[f64], i: usize, k: usize) -> NeighborStats {
    let nearest = smallest_k(
        row.iter().copied().enumerate().filter(|&(j, _)| j != i),
        k,
    );
    let sum: f64 = nearest.iter().map(|&(_, d)| d).sum();
    NeighborStats {
        avg_distance: sum / nearest.len() as f64,
        neighbors: nearest.into_iter().map(|(j, _)| j).collect(),
    }
}

/// Brute-force k-neighbour graph.
pub fn knn(outcomes: &[SensorVector], k: usize) -> Result<Vec<NeighborStats>> {
    if outcomes.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: outcomes.len(),
        });
    }
    assert!(k >= 1, "k must be at least 1");
    (0..outcomes.len())
        .map(|i| {
            let row = outcomes
                .iter()
                .map(|o| euclidean_distance(&outcomes[i], o))
                .collect::<Result<Vec<_>>>()?;
            Ok(stats_from_row(&row, i, k))
        })
        .collect()
}

/// Index with the largest `avg_distance`, lowest index on ties.
pub fn select_basis(stats: &[NeighborStats]) -> Result<usize> {
    if stats.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            available: 0,
        });
    }
    let mut best = 0;
    for (i, s) in stats.iter().enumerate() {
        if s.avg_distance > stats[best].avg_distance {
            best = i;
        }
    }
    Ok(best)
}

/// The neighbour graph of a growing repertoire.
///
/// Each outcome's neighbour list is kept up to date as outcomes arrive: a
/// new outcome only enters an existing list when it is strictly closer than
/// that list's current farthest member, since later indices lose ties. The
/// lists therefore always equal [`knn`] on the current outcomes.
#[derive(Clone, Debug)]
pub struct ManifoldGraph {
    k: usize,
    nearest: Vec<Vec<(usize, f64)>>,
    avg: Vec<f64>,
}

fn mean_distance(list: &[(usize, f64)]) -> f64 {
    list.iter().map(|&(_, d)| d).sum::<f64>() / list.len() as f64
}

impl ManifoldGraph {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be at least 1");
        ManifoldGraph {
            k,
            nearest: Vec::new(),
            avg: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nearest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nearest.is_empty()
    }

    /// Adds the outcomes appended to `rep` since the last sync.
    pub fn sync(&mut self, rep: &Repertoire) {
        assert!(rep.len() >= self.len(), "repertoire shrank");
        let mut row = Vec::with_capacity(rep.len());
        for m in self.len()..rep.len() {
            row.clear();
            rep.distances_before(m, &mut row);
            for (j, &d) in row.iter().enumerate() {
                let list = &mut self.nearest[j];
                if list.len() == self.k && d >= list[self.k - 1].1 {
                    continue;
                }
                let pos = list.partition_point(|&(_, b)| b <= d);
                list.insert(pos, (m, d));
                list.truncate(self.k);
                self.avg[j] = mean_distance(list);
            }
            let own = smallest_k(row.iter().copied().enumerate(), self.k);
            self.avg.push(if own.is_empty() { 0.0 } else { mean_distance(&own) });
            self.nearest.push(own);
        }
    }

    pub fn stats(&self) -> Vec<NeighborStats> {
        self.nearest
            .iter()
            .zip(&self.avg)
            .map(|(list, &avg_distance)| NeighborStats {
                neighbors: list.iter().map(|&(j, _)| j).collect(),
                avg_distance,
            })
            .collect()
    }

    /// Basis goal of the synced outcomes; the sole outcome when there is one.
    pub fn basis(&self) -> Result<usize> {
        match self.len() {
            0 => Err(Error::EmptyRepertoire),
            1 => Ok(0),
            _ => {
                let mut best = 0;
                for (i, &a) in self.avg.iter().enumerate() {
                    if a > self.avg[best] {
                        best = i;
                    }
                }
                Ok(best)
            }
        }
    }
}
