//! Beam search for the subspaces in which a query is most outlying.
//!
//! All one- and two-attribute subspaces are scored exhaustively. The best
//! `W` pairs form the first frontier; each later level extends every frontier
//! subspace by one attribute and keeps the best `W` new candidates. Lower
//! density Z-scores are better throughout.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{build_estimator, DensityEstimator, EstimatorKind, DEFAULT_BLOCK_SIZE};
use crate::scoring::{ScoreCache, Scorer};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    /// Largest subspace size explored (ℓ).
    pub max_depth: usize,
    /// Frontier size per level (W).
    pub beam_width: usize,
    /// Number of subspaces returned.
    pub top_k: usize,
    pub estimator: EstimatorKind,
    /// Drop results whose Z-score is not below this threshold.
    pub tau: Option<f64>,
    /// Bit-set block width of the grid estimators.
    pub block_size: usize,
    /// Share subspace statistics across queries.
    pub use_cache: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            max_depth: 5,
            beam_width: 100,
            top_k: 10,
            estimator: EstimatorKind::Sgrid,
            tau: None,
            block_size: DEFAULT_BLOCK_SIZE,
            use_cache: true,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self, d: usize) -> Result<()> {
        if self.max_depth < 2 {
            return Err(Error::Config(format!(
                "search depth must be at least 2 (got {})",
                self.max_depth
            )));
        }
        if self.max_depth > d {
            return Err(Error::Config(format!(
                "search depth {} exceeds the {d} attributes of the data",
                self.max_depth
            )));
        }
        if self.beam_width == 0 {
            return Err(Error::Config("beam width must be positive".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top-k must be positive".into()));
        }
        if !matches!(self.block_size, 8 | 16 | 32 | 64 | 128) {
            return Err(Error::Config(format!(
                "block size must be one of 8, 16, 32, 64, 128 (got {})",
                self.block_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSubspace {
    pub subspace: Subspace,
    pub z: f64,
}

impl ScoredSubspace {
    /// Ascending Z, then smaller subspaces, then lexicographic attributes.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        self.z
            .total_cmp(&other.z)
            .then_with(|| self.subspace.tie_order(&other.subspace))
    }
}

/// Keeps at most `cap` entries, evicting the worst when a better one arrives.
fn offer(list: &mut Vec<ScoredSubspace>, cand: &ScoredSubspace, cap: usize) {
    if list.len() < cap {
        list.push(cand.clone());
        return;
    }
    let worst = list
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.rank_cmp(b.1))
        .map(|(i, _)| i);
    if let Some(i) = worst {
        if cand.rank_cmp(&list[i]) == Ordering::Less {
            list[i] = cand.clone();
        }
    }
}

fn sort_ranked(list: &mut [ScoredSubspace]) {
    list.sort_by(ScoredSubspace::rank_cmp);
}

/// Audit record of one search.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchTrace {
    /// Frontier of each level, starting at the two-attribute level, in the
    /// order it was expanded.
    pub frontiers: Vec<Vec<Subspace>>,
    /// Every candidate of size three or more, with the frontier subspace
    /// that generated it.
    pub expansions: Vec<(Subspace, Subspace)>,
    /// Number of subspaces scored for this query.
    pub scored: usize,
}

/// Runs the beam search for one query point (indexed by attribute id).
pub fn beam_search(scorer: &Scorer<'_>, q: &[f64], cfg: &MinerConfig) -> Result<Vec<ScoredSubspace>> {
    beam_search_traced(scorer, q, cfg).map(|(s, _)| s)
}

pub fn beam_search_traced(
    scorer: &Scorer<'_>,
    q: &[f64],
    cfg: &MinerConfig,
) -> Result<(Vec<ScoredSubspace>, SearchTrace)> {
    let pool = scorer.estimator().attributes();
    let mut trace = SearchTrace::default();
    let mut visited: HashSet<Subspace> = HashSet::new();

    let score = |s: Subspace, trace: &mut SearchTrace| -> Result<ScoredSubspace> {
        trace.scored += 1;
        let z = scorer.z(&s, q)?;
        Ok(ScoredSubspace { subspace: s, z })
    };

    let mut low = Vec::new();
    let mut pairs = Vec::new();
    for (i, &a) in pool.iter().enumerate() {
        let single = Subspace::single(a);
        visited.insert(single.clone());
        low.push(score(single, &mut trace)?);
        for &b in &pool[i + 1..] {
            let pair = Subspace::pair(a, b);
            visited.insert(pair.clone());
            pairs.push(score(pair, &mut trace)?);
        }
    }
    low.extend(pairs.iter().cloned());
    sort_ranked(&mut low);
    low.truncate(cfg.top_k);
    let mut best = low;

    sort_ranked(&mut pairs);
    pairs.truncate(cfg.beam_width);
    let mut frontier = pairs;

    for _level in 3..=cfg.max_depth {
        if frontier.is_empty() {
            break;
        }
        trace
            .frontiers
            .push(frontier.iter().map(|s| s.subspace.clone()).collect());
        let mut next: Vec<ScoredSubspace> = Vec::new();
        for parent in &frontier {
            for &a in &pool {
                let Some(cand) = parent.subspace.with(a) else {
                    continue;
                };
                if !visited.insert(cand.clone()) {
                    continue;
                }
                trace.expansions.push((parent.subspace.clone(), cand.clone()));
                let scored = score(cand, &mut trace)?;
                offer(&mut best, &scored, cfg.top_k);
                offer(&mut next, &scored, cfg.beam_width);
            }
        }
        sort_ranked(&mut next);
        frontier = next;
    }
    sort_ranked(&mut best);
    if let Some(tau) = cfg.tau {
        best.retain(|s| s.z < tau);
    }
    Ok((best, trace))
}

/// Ranked subspaces for one query record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query: usize,
    pub subspaces: Vec<ScoredSubspace>,
}

/// An estimator index plus statistics cache for mining one dataset.
pub struct Miner<'a> {
    ds: &'a Dataset,
    cfg: MinerConfig,
    estimator: Box<dyn DensityEstimator + 'a>,
    cache: Option<ScoreCache>,
    computed: AtomicU64,
    build_time: Duration,
}

impl<'a> Miner<'a> {
    pub fn new(ds: &'a Dataset, cfg: MinerConfig) -> Result<Self> {
        cfg.validate(ds.d())?;
        let start = Instant::now();
        let estimator = build_estimator(ds, cfg.estimator, cfg.block_size)?;
        let build_time = start.elapsed();
        Ok(Miner {
            ds,
            cache: cfg.use_cache.then(ScoreCache::new),
            cfg,
            estimator,
            computed: AtomicU64::new(0),
            build_time,
        })
    }

    pub fn config(&self) -> &MinerConfig {
        &self.cfg
    }

    pub fn estimator(&self) -> &dyn DensityEstimator {
        self.estimator.as_ref()
    }

    pub fn cache(&self) -> Option<&ScoreCache> {
        self.cache.as_ref()
    }

    /// Time spent building the estimator index.
    pub fn build_time(&self) -> Duration {
        self.build_time
    }

    /// Subspace statistics computed so far, over all queries.
    pub fn stats_computed(&self) -> u64 {
        self.computed.load(AtomicOrdering::Relaxed)
    }

    pub fn search_point_traced(&self, q: &[f64]) -> Result<(Vec<ScoredSubspace>, SearchTrace)> {
        if q.len() != self.ds.d() {
            return Err(Error::Config(format!(
                "query has {} values, the data has {} attributes",
                q.len(),
                self.ds.d()
            )));
        }
        let scorer = Scorer::new(self.estimator.as_ref(), self.cache.as_ref());
        let out = beam_search_traced(&scorer, q, &self.cfg);
        self.computed.fetch_add(scorer.computed(), AtomicOrdering::Relaxed);
        out
    }

    pub fn search_point(&self, q: &[f64]) -> Result<Vec<ScoredSubspace>> {
        self.search_point_traced(q).map(|(s, _)| s)
    }

    pub fn search_record(&self, id: usize) -> Result<Vec<ScoredSubspace>> {
        self.ds.check_record(id)?;
        self.search_point(&self.ds.row(id))
    }

    /// Mines every query record, on up to `jobs` threads. Output order
    /// follows `queries`.
    pub fn mine(&self, queries: &[usize], jobs: usize) -> Result<Vec<QueryResult>> {
        for &id in queries {
            self.ds.check_record(id)?;
        }
        let run = |&query: &usize| {
            self.search_record(query)
                .map(|subspaces| QueryResult { query, subspaces })
        };
        if jobs <= 1 {
            return queries.iter().map(run).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| queries.par_iter().map(run).collect())
    }
}

/// Mines every query record of `ds` with one shared estimator and cache.
pub fn mine_queries(ds: &Dataset, queries: &[usize], cfg: &MinerConfig) -> Result<Vec<QueryResult>> {
    Miner::new(ds, cfg.clone())?.mine(queries, 1)
}
