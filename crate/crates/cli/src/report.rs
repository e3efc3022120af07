//! Machine-readable run reports and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sgrid_core::{MatchReport, MinerConfig, QueryResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Mine(MineReport),
    Eval(EvalReport),
    Synth(SynthReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub path: String,
    pub n: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub ingest_ms: f64,
    pub build_ms: f64,
    pub search_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheSummary {
    pub enabled: bool,
    pub hits: u64,
    pub misses: u64,
    pub stats_computed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MineReport {
    pub data: DataSummary,
    pub config: MinerConfig,
    pub jobs: usize,
    pub results: Vec<QueryResult>,
    pub cache: CacheSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub data: DataSummary,
    pub truth: String,
    pub config: MinerConfig,
    pub jobs: usize,
    pub exact_rate: f64,
    pub match_rate: f64,
    pub matches: MatchReport,
    pub cache: CacheSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub csv: String,
    pub truth: String,
    pub n: usize,
    pub d: usize,
    pub group_sizes: Vec<usize>,
    pub outliers: Vec<usize>,
    pub seed: u64,
}

impl Report {
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Mine(r) => {
                header(&mut out, &r.data, &r.config);
                for q in &r.results {
                    let _ = writeln!(out, "query {}", q.query);
                    for (rank, s) in q.subspaces.iter().enumerate() {
                        let _ = writeln!(out, "  {:>3}  {:<24} z = {:.6}", rank + 1, s.subspace.to_string(), s.z);
                    }
                }
                cache_and_timing(&mut out, &r.cache, r.timing.as_ref());
            }
            Report::Eval(r) => {
                header(&mut out, &r.data, &r.config);
                let _ = writeln!(out, "truth: {}", r.truth);
                let m = &r.matches;
                let _ = writeln!(out, "queries: {}", m.queries);
                let _ = writeln!(out, "exact matches: {} (rate {:.4})", m.exact_matches, r.exact_rate);
                let _ = writeln!(out, "any matches: {} (rate {:.4})", m.matches, r.match_rate);
                for q in &m.per_query {
                    let _ = writeln!(
                        out,
                        "  query {:>6}  truths {}  exact {:.3}  match {:.3}",
                        q.query, q.truths, q.exact, q.matched
                    );
                }
                cache_and_timing(&mut out, &r.cache, r.timing.as_ref());
            }
            Report::Synth(r) => {
                let _ = writeln!(out, "wrote {} ({} x {}) and {}", r.csv, r.n, r.d, r.truth);
                let _ = writeln!(out, "groups: {:?}  seed: {}", r.group_sizes, r.seed);
                let ids: Vec<String> = r.outliers.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "outliers: {}", ids.join(","));
            }
        }
        out
    }
}

fn header(out: &mut String, data: &DataSummary, cfg: &MinerConfig) {
    let _ = writeln!(out, "data: {} ({} records, {} attributes)", data.path, data.n, data.d);
    let tau = cfg.tau.map_or_else(|| "none".to_string(), |t| t.to_string());
    let _ = writeln!(
        out,
        "estimator: {}  depth: {}  beam width: {}  top-k: {}  tau: {}  block size: {}",
        cfg.estimator, cfg.max_depth, cfg.beam_width, cfg.top_k, tau, cfg.block_size
    );
}

fn cache_and_timing(out: &mut String, cache: &CacheSummary, timing: Option<&Timing>) {
    if cache.enabled {
        let _ = writeln!(
            out,
            "cache: {} hits, {} misses, {} statistics computed",
            cache.hits, cache.misses, cache.stats_computed
        );
    } else {
        let _ = writeln!(out, "cache: off, {} statistics computed", cache.stats_computed);
    }
    if let Some(t) = timing {
        let _ = writeln!(
            out,
            "time: ingest {:.3} ms, build {:.3} ms, search {:.3} ms",
            t.ingest_ms, t.build_ms, t.search_ms
        );
    }
}
