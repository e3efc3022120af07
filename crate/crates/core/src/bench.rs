//! Timed end-to-end mining runs over identical query sets.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::estimator::EstimatorKind;
use crate::miner::{Miner, MinerConfig};

/// One timed run. Index build time is reported apart from search time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub estimator: EstimatorKind,
    pub n: usize,
    pub d: usize,
    pub depth: usize,
    pub queries: usize,
    pub build_ms: f64,
    pub search_ms: f64,
    /// Distinct subspace statistics computed over all queries.
    pub subspaces_scored: u64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "estimator,n,d,depth,queries,build_ms,search_ms,subspaces_scored";

    pub fn total_ms(&self) -> f64 {
        self.build_ms + self.search_ms
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{:.3},{}",
            self.estimator,
            self.n,
            self.d,
            self.depth,
            self.queries,
            self.build_ms,
            self.search_ms,
            self.subspaces_scored
        )
    }
}

/// Runs every configuration `repeats` times, sequentially, each with a fresh
/// index and cache. Rows are grouped by configuration.
pub fn bench_estimators(
    ds: &Dataset,
    queries: &[usize],
    configs: &[MinerConfig],
    repeats: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(configs.len() * repeats);
    for cfg in configs {
        for _ in 0..repeats {
            let miner = Miner::new(ds, cfg.clone())?;
            let start = Instant::now();
            miner.mine(queries, 1)?;
            let search = start.elapsed();
            rows.push(BenchRow {
                estimator: cfg.estimator,
                n: ds.n(),
                d: ds.d(),
                depth: cfg.max_depth,
                queries: queries.len(),
                build_ms: miner.build_time().as_secs_f64() * 1e3,
                search_ms: search.as_secs_f64() * 1e3,
                subspaces_scored: miner.stats_computed(),
            });
        }
    }
    Ok(rows)
}

/// `count` record ids spread evenly over `[0, n)`.
pub fn spread_queries(n: usize, count: usize) -> Vec<usize> {
    let count = count.min(n);
    (0..count).map(|i| i * n / count).collect()
}
