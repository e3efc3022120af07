//! Smoothed grid density estimation for outlying aspects mining.
//!
//! The smoothed grid (`sgrid`) estimator counts the records falling in the bin
//! of a point or in any adjacent bin, in every attribute of a subspace. With
//! per-attribute pseudo-bins precomputed, one estimate costs `k` bit-set
//! intersections. Converted to density Z-scores, these counts drive a beam
//! search for the subspaces in which a query record is most outlying.
//! An ordinary grid and a Gaussian product-kernel KDE are provided as
//! baselines behind the same [`DensityEstimator`] interface.
//!
//! ```
//! use sgrid_core::{Dataset, Miner, MinerConfig};
//!
//! let rows: Vec<Vec<f64>> = (0..200)
//!     .map(|i| {
//!         let t = (i % 20) as f64 / 20.0;
//!         vec![t, t, ((i * 7) % 20) as f64 / 20.0]
//!     })
//!     .chain(std::iter::once(vec![0.9, 0.1, 0.5]))
//!     .collect();
//! let ds = Dataset::from_rows(&rows).unwrap();
//! let cfg = MinerConfig { max_depth: 3, ..Default::default() };
//! let miner = Miner::new(&ds, cfg).unwrap();
//! let best = miner.search_record(200).unwrap();
//! assert_eq!(best[0].subspace.attrs(), &[0, 1]);
//! ```

pub mod bench;
pub mod bitset;
pub mod dataset;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod grid;
pub mod kde;
pub mod miner;
pub mod scoring;
pub mod subspace;
pub mod synth;

pub use bench::{bench_estimators, spread_queries, BenchRow};
pub use bitset::{BitSet, Block};
pub use dataset::{attribute_stats, AttributeStats, Dataset};
pub use error::{Error, Result};
pub use estimator::{build_estimator, DensityEstimator, EstimatorKind, GridEstimator, KdeEstimator};
pub use eval::{score_matches, MatchReport, QueryMatch};
pub use grid::{fd_bin_width, AttributeBins, BinGrid};
pub use kde::{bandwidth, kde_density, Bandwidths};
pub use miner::{beam_search, mine_queries, Miner, MinerConfig, QueryResult, ScoredSubspace, SearchTrace};
pub use scoring::{subspace_stats, z_score, ScoreCache, Scorer, SubspaceScoreStats};
pub use subspace::Subspace;
pub use synth::{generate, GroundTruth, SyntheticData, SyntheticSpec};
