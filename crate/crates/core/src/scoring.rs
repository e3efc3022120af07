//! Density Z-scores with per-subspace memoization of the dataset mean and
//! standard deviation.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimator::{DensityEstimator, EstimatorKind};
use crate::subspace::Subspace;

/// Population mean and standard deviation of the base scores of all records
/// in one subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceScoreStats {
    pub mean: f64,
    pub stddev: f64,
    pub estimator: EstimatorKind,
}

/// Scores every record of the dataset in `s` and summarizes them.
pub fn subspace_stats(est: &dyn DensityEstimator, s: &Subspace) -> Result<SubspaceScoreStats> {
    let (mean, stddev) = mean_stddev(&est.score_all(s)?);
    Ok(SubspaceScoreStats {
        mean,
        stddev,
        estimator: est.kind(),
    })
}

/// Population mean and standard deviation, with the mean refined by the
/// residual sum. Identical values give a standard deviation of exactly 0.
fn mean_stddev(values: &[f64]) -> (f64, f64) {
    let Some(&first) = values.first() else {
        return (0.0, 0.0);
    };
    if values.iter().all(|&v| v == first) {
        return (first, 0.0);
    }
    let n = values.len() as f64;
    let rough = values.iter().sum::<f64>() / n;
    let mean = rough + values.iter().map(|v| v - rough).sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// `(base - μ) / σ`, or 0 when σ is 0.
pub fn z_score(stats: &SubspaceScoreStats, base: f64) -> f64 {
    if stats.stddev > 0.0 {
        (base - stats.mean) / stats.stddev
    } else {
        0.0
    }
}

/// Subspace statistics shared across queries of one dataset.
///
/// Reads are concurrent; inserts take the write lock. Two workers may compute
/// the same key concurrently, and both write the same value.
#[derive(Debug, Default)]
pub struct ScoreCache {
    entries: RwLock<HashMap<(EstimatorKind, Subspace), SubspaceScoreStats>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl ScoreCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, kind: EstimatorKind, s: &Subspace) -> Option<SubspaceScoreStats> {
        let found = self
            .entries
            .read()
            .expect("score cache poisoned")
            .get(&(kind, s.clone()))
            .copied();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, s: Subspace, stats: SubspaceScoreStats) {
        self.entries
            .write()
            .expect("score cache poisoned")
            .entry((stats.estimator, s))
            .or_insert(stats);
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("score cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

/// Computes Z-scores of query points through an estimator, optionally
/// backed by a [`ScoreCache`].
pub struct Scorer<'e> {
    estimator: &'e dyn DensityEstimator,
    cache: Option<&'e ScoreCache>,
    computed: AtomicU64,
}

impl<'e> Scorer<'e> {
    pub fn new(estimator: &'e dyn DensityEstimator, cache: Option<&'e ScoreCache>) -> Self {
        Scorer {
            estimator,
            cache,
            computed: AtomicU64::new(0),
        }
    }

    pub fn estimator(&self) -> &'e dyn DensityEstimator {
        self.estimator
    }

    pub fn stats(&self, s: &Subspace) -> Result<SubspaceScoreStats> {
        let kind = self.estimator.kind();
        if let Some(stats) = self.cache.and_then(|c| c.get(kind, s)) {
            return Ok(stats);
        }
        let stats = subspace_stats(self.estimator, s)?;
        self.computed.fetch_add(1, Ordering::Relaxed);
        if let Some(cache) = self.cache {
            cache.insert(s.clone(), stats);
        }
        Ok(stats)
    }

    /// Z-score of `point` (indexed by attribute id) in `s`.
    pub fn z(&self, s: &Subspace, point: &[f64]) -> Result<f64> {
        let stats = self.stats(s)?;
        Ok(z_score(&stats, self.estimator.score(s, point)?))
    }

    /// Number of subspace statistics computed (not served from the cache).
    pub fn computed(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }
}
