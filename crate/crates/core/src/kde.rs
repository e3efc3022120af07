//! Gaussian product-kernel density estimation, the comparison baseline.

use std::f64::consts::PI;

use crate::dataset::{AttributeStats, Dataset};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// `1 / sqrt(2π)`
const GAUSS_NORM: f64 = 0.398_942_280_401_432_7;

/// Rule-of-thumb bandwidth `1.06·min(σ, IQR/1.34)·n^(-1/5)`.
///
/// When the robust spread `min(σ, IQR/1.34)` is zero but σ is not, σ alone
/// is used. Returns `None` for a constant attribute.
pub fn bandwidth(stats: &AttributeStats, n: usize) -> Option<f64> {
    if stats.stddev <= 0.0 {
        return None;
    }
    let spread = stats.stddev.min(stats.iqr / 1.34);
    let spread = if spread > 0.0 { spread } else { stats.stddev };
    Some(1.06 * spread * (n as f64).powf(-0.2))
}

/// Per-attribute bandwidths; constant attributes have none.
#[derive(Debug, Clone, PartialEq)]
pub struct Bandwidths(Vec<Option<f64>>);

impl Bandwidths {
    pub fn for_dataset(ds: &Dataset) -> Self {
        Bandwidths((0..ds.d()).map(|a| bandwidth(ds.stats(a), ds.n())).collect())
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Bandwidths(values.into_iter().map(|h| (h > 0.0).then_some(h)).collect())
    }

    pub fn get(&self, attr: usize) -> Result<f64> {
        self.0[attr].ok_or(Error::DegenerateBandwidth { attr })
    }

    /// Attributes with a usable bandwidth.
    pub fn usable(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&a| self.0[a].is_some()).collect()
    }
}

/// Standard Gaussian kernel.
pub fn gaussian(u: f64) -> f64 {
    GAUSS_NORM * (-0.5 * u * u).exp()
}

/// Scaled columns and normalizer for one subspace, reusable across queries.
#[derive(Debug, Clone)]
pub struct SubspaceKernel<'a> {
    ds: &'a Dataset,
    attrs: Vec<usize>,
    inv_h: Vec<f64>,
    norm: f64,
}

impl<'a> SubspaceKernel<'a> {
    pub fn new(ds: &'a Dataset, hs: &Bandwidths, s: &Subspace) -> Result<Self> {
        let mut inv_h = Vec::with_capacity(s.k());
        let mut prod_h = 1.0;
        for &a in s.attrs() {
            let h = hs.get(a)?;
            inv_h.push(h.recip());
            prod_h *= h;
        }
        let k = s.k() as i32;
        let norm = (2.0 * PI).powi(k).sqrt().recip() / (ds.n() as f64 * prod_h);
        Ok(SubspaceKernel {
            ds,
            attrs: s.attrs().to_vec(),
            inv_h,
            norm,
        })
    }

    /// Density at `q`, indexed by attribute id.
    pub fn density(&self, q: &[f64]) -> f64 {
        let cols: Vec<(&[f64], f64, f64)> = self
            .attrs
            .iter()
            .zip(&self.inv_h)
            .map(|(&a, &ih)| (self.ds.column(a), q[a], ih))
            .collect();
        let mut sum = 0.0;
        for i in 0..self.ds.n() {
            let mut sq = 0.0;
            for &(col, qa, ih) in &cols {
                let u = (qa - col[i]) * ih;
                sq += u * u;
            }
            sum += (-0.5 * sq).exp();
        }
        sum * self.norm
    }
}

/// Product-kernel density of `q` in subspace `s`.
pub fn kde_density(ds: &Dataset, hs: &Bandwidths, s: &Subspace, q: &[f64]) -> Result<f64> {
    Ok(SubspaceKernel::new(ds, hs, s)?.density(q))
}
