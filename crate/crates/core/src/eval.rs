//! Scoring mined subspaces against planted ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miner::QueryResult;
use crate::synth::GroundTruth;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryMatch {
    pub query: usize,
    pub truths: usize,
    pub exact: f64,
    pub matched: f64,
}

/// Match totals over a set of queries.
///
/// A query with `g` true subspaces earns `1/g` of exact credit for each one
/// returned verbatim, and `1/g` of match credit for each one returned
/// verbatim or as a strict subset or superset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub queries: usize,
    pub exact_matches: f64,
    pub matches: f64,
    pub per_query: Vec<QueryMatch>,
}

impl MatchReport {
    pub fn exact_rate(&self) -> f64 {
        if self.queries == 0 {
            0.0
        } else {
            self.exact_matches / self.queries as f64
        }
    }

    pub fn match_rate(&self) -> f64 {
        if self.queries == 0 {
            0.0
        } else {
            self.matches / self.queries as f64
        }
    }
}

pub fn score_matches(results: &[QueryResult], truth: &GroundTruth) -> Result<MatchReport> {
    let mut per_query = Vec::with_capacity(results.len());
    for result in results {
        let truths = truth
            .get(result.query)
            .ok_or(Error::UnknownQuery(result.query))?;
        let g = truths.len();
        let (mut exact, mut matched) = (0usize, 0usize);
        for t in truths {
            let mut is_exact = false;
            let mut is_near = false;
            for r in &result.subspaces {
                let s = &r.subspace;
                if s == t {
                    is_exact = true;
                } else if s.is_subset_of(t) || t.is_subset_of(s) {
                    is_near = true;
                }
            }
            exact += usize::from(is_exact);
            matched += usize::from(is_exact || is_near);
        }
        let credit = |count: usize| if g == 0 { 0.0 } else { count as f64 / g as f64 };
        per_query.push(QueryMatch {
            query: result.query,
            truths: g,
            exact: credit(exact),
            matched: credit(matched),
        });
    }
    Ok(MatchReport {
        queries: per_query.len(),
        exact_matches: per_query.iter().map(|q| q.exact).sum(),
        matches: per_query.iter().map(|q| q.matched).sum(),
        per_query,
    })
}
