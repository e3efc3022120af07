//! Base density estimators behind a common interface.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::Block;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::grid::BinGrid;
use crate::kde::{Bandwidths, SubspaceKernel};
use crate::subspace::Subspace;

pub const DEFAULT_BLOCK_SIZE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    /// Smoothed grid: bin plus all adjacent bins.
    Sgrid,
    /// Ordinary grid: the single covering bin.
    Grid,
    /// Gaussian product-kernel KDE.
    Kde,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 3] = [EstimatorKind::Sgrid, EstimatorKind::Grid, EstimatorKind::Kde];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Sgrid => "sgrid",
            EstimatorKind::Grid => "grid",
            EstimatorKind::Kde => "kde",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgrid" => Ok(EstimatorKind::Sgrid),
            "grid" => Ok(EstimatorKind::Grid),
            "kde" => Ok(EstimatorKind::Kde),
            other => Err(Error::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

/// A base score over subspaces of one dataset. Lower means sparser.
pub trait DensityEstimator: Send + Sync {
    fn kind(&self) -> EstimatorKind;

    /// Base score of `point` (indexed by attribute id) in `s`.
    fn score(&self, s: &Subspace, point: &[f64]) -> Result<f64>;

    /// Base score of every record of the dataset in `s`, in record order.
    fn score_all(&self, s: &Subspace) -> Result<Vec<f64>>;

    /// Attributes the search may use.
    fn attributes(&self) -> Vec<usize>;
}

/// Grid-count estimator, smoothed or ordinary.
pub struct GridEstimator<B: Block = u64> {
    grid: BinGrid<B>,
    smoothed: bool,
}

impl<B: Block> GridEstimator<B> {
    pub fn new(ds: &Dataset, smoothed: bool) -> Self {
        GridEstimator {
            grid: BinGrid::build(ds),
            smoothed,
        }
    }

    pub fn from_grid(grid: BinGrid<B>, smoothed: bool) -> Self {
        GridEstimator { grid, smoothed }
    }

    pub fn grid(&self) -> &BinGrid<B> {
        &self.grid
    }
}

impl<B: Block> DensityEstimator for GridEstimator<B> {
    fn kind(&self) -> EstimatorKind {
        if self.smoothed {
            EstimatorKind::Sgrid
        } else {
            EstimatorKind::Grid
        }
    }

    fn score(&self, s: &Subspace, point: &[f64]) -> Result<f64> {
        let c = if self.smoothed {
            self.grid.neighborhood_count(s, point)
        } else {
            self.grid.ordinary_count(s, point)
        };
        Ok(c as f64)
    }

    fn score_all(&self, s: &Subspace) -> Result<Vec<f64>> {
        Ok(self
            .grid
            .counts_for_all(s, self.smoothed)
            .into_iter()
            .map(|c| c as f64)
            .collect())
    }

    fn attributes(&self) -> Vec<usize> {
        (0..self.grid.d()).collect()
    }
}

/// KDE estimator over a borrowed dataset.
pub struct KdeEstimator<'a> {
    ds: &'a Dataset,
    bandwidths: Bandwidths,
}

impl<'a> KdeEstimator<'a> {
    pub fn new(ds: &'a Dataset) -> Self {
        KdeEstimator {
            ds,
            bandwidths: Bandwidths::for_dataset(ds),
        }
    }

    pub fn bandwidths(&self) -> &Bandwidths {
        &self.bandwidths
    }
}

impl DensityEstimator for KdeEstimator<'_> {
    fn kind(&self) -> EstimatorKind {
        EstimatorKind::Kde
    }

    fn score(&self, s: &Subspace, point: &[f64]) -> Result<f64> {
        Ok(SubspaceKernel::new(self.ds, &self.bandwidths, s)?.density(point))
    }

    fn score_all(&self, s: &Subspace) -> Result<Vec<f64>> {
        let kernel = SubspaceKernel::new(self.ds, &self.bandwidths, s)?;
        let mut row = vec![0.0; self.ds.d()];
        Ok((0..self.ds.n())
            .map(|i| {
                for &a in s.attrs() {
                    row[a] = self.ds.value(i, a);
                }
                kernel.density(&row)
            })
            .collect())
    }

    /// Constant attributes have no bandwidth and are left out.
    fn attributes(&self) -> Vec<usize> {
        self.bandwidths.usable()
    }
}

/// Builds the estimator of `kind` over `ds`. `block_size` selects the bit-set
/// word width of the grid estimators: 8, 16, 32, 64 or 128.
pub fn build_estimator<'a>(
    ds: &'a Dataset,
    kind: EstimatorKind,
    block_size: usize,
) -> Result<Box<dyn DensityEstimator + 'a>> {
    let smoothed = match kind {
        EstimatorKind::Kde => return Ok(Box::new(KdeEstimator::new(ds))),
        EstimatorKind::Sgrid => true,
        EstimatorKind::Grid => false,
    };
    Ok(match block_size {
        8 => Box::new(GridEstimator::<u8>::new(ds, smoothed)),
        16 => Box::new(GridEstimator::<u16>::new(ds, smoothed)),
        32 => Box::new(GridEstimator::<u32>::new(ds, smoothed)),
        64 => Box::new(GridEstimator::<u64>::new(ds, smoothed)),
        128 => Box::new(GridEstimator::<u128>::new(ds, smoothed)),
        w => {
            return Err(Error::Config(format!(
                "block size must be one of 8, 16, 32, 64, 128 (got {w})"
            )))
        }
    })
}
