//! Equal-width bin index with bit-set membership.
//!
//! Each attribute is cut into `b` equal-width bins starting at the attribute
//! minimum. Every bin owns a bit set over record indices, and every bin also
//! owns a pseudo-bin: the union of itself and its immediate neighbours. The
//! smoothed neighbourhood count of a point in a `k`-attribute subspace is then
//! the popcount of `k` intersected pseudo-bins, the same cost as an ordinary
//! grid cell lookup.

use std::collections::HashMap;

use crate::bitset::{intersection_count, intersection_count_with_ops, BitSet, Block};
use crate::dataset::{AttributeStats, Dataset};
use crate::subspace::Subspace;

/// Freedman–Diaconis bin width `2·IQR·n^(-1/3)`.
///
/// Falls back to `3.49·σ·n^(-1/3)` when the IQR is zero, and returns 0 when
/// the attribute is constant (a single bin).
pub fn fd_bin_width(stats: &AttributeStats, n: usize) -> f64 {
    let scale = (n.max(1) as f64).cbrt().recip();
    if stats.iqr > 0.0 {
        2.0 * stats.iqr * scale
    } else if stats.stddev > 0.0 {
        3.49 * stats.stddev * scale
    } else {
        0.0
    }
}

/// Bins of one attribute.
#[derive(Debug, Clone)]
pub struct AttributeBins<B: Block = u64> {
    origin: f64,
    width: f64,
    bins: Vec<BitSet<B>>,
    pseudo_bins: Vec<BitSet<B>>,
    /// Raw bin of each record.
    assignment: Vec<u32>,
}

impl<B: Block> AttributeBins<B> {
    /// Bins `values` with the given origin and width. A non-positive width
    /// yields a single bin.
    pub fn with_width(values: &[f64], origin: f64, width: f64) -> Self {
        let n = values.len();
        let range = values.iter().fold(origin, |m, &v| m.max(v)) - origin;
        let bin_count = if width > 0.0 {
            ((range / width).ceil() as usize).max(1)
        } else {
            1
        };

        let mut this = AttributeBins {
            origin,
            width,
            bins: vec![BitSet::new(n); bin_count],
            pseudo_bins: Vec::with_capacity(bin_count),
            assignment: Vec::with_capacity(n),
        };
        for (i, &v) in values.iter().enumerate() {
            let b = this.bin_index(v);
            this.bins[b].insert(i);
            this.assignment.push(b as u32);
        }
        for i in 0..bin_count {
            let mut p = this.bins[i].clone();
            if i > 0 {
                p.union_with(&this.bins[i - 1]);
            }
            if i + 1 < bin_count {
                p.union_with(&this.bins[i + 1]);
            }
            this.pseudo_bins.push(p);
        }
        this
    }

    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Bin covering `v`; out-of-range values clamp to the edge bins.
    pub fn bin_index(&self, v: f64) -> usize {
        let last = self.bins.len() - 1;
        if self.width <= 0.0 || last == 0 {
            return 0;
        }
        let pos = ((v - self.origin) / self.width).floor();
        if pos <= 0.0 {
            0
        } else {
            (pos as usize).min(last)
        }
    }

    pub fn bin(&self, i: usize) -> &BitSet<B> {
        &self.bins[i]
    }

    pub fn pseudo_bin(&self, i: usize) -> &BitSet<B> {
        &self.pseudo_bins[i]
    }

    pub fn bins(&self) -> &[BitSet<B>] {
        &self.bins
    }

    pub fn pseudo_bins(&self) -> &[BitSet<B>] {
        &self.pseudo_bins
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }
}

/// Per-attribute bins for a whole dataset.
#[derive(Debug, Clone)]
pub struct BinGrid<B: Block = u64> {
    attributes: Vec<AttributeBins<B>>,
    n: usize,
}

impl<B: Block> BinGrid<B> {
    /// Bins every attribute with its Freedman–Diaconis width.
    pub fn build(ds: &Dataset) -> Self {
        let n = ds.n();
        let attributes = (0..ds.d())
            .map(|a| {
                let stats = ds.stats(a);
                AttributeBins::with_width(ds.column(a), stats.min, fd_bin_width(stats, n))
            })
            .collect();
        BinGrid { attributes, n }
    }

    /// Assembles a grid from prebuilt attribute bins over the same records.
    pub fn from_attributes(attributes: Vec<AttributeBins<B>>) -> Self {
        let n = attributes.first().map_or(0, |a| a.assignment.len());
        assert!(attributes.iter().all(|a| a.assignment.len() == n));
        BinGrid { attributes, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute(&self, attr: usize) -> &AttributeBins<B> {
        &self.attributes[attr]
    }

    /// Number of blocks in each bit set.
    pub fn blocks_per_set(&self) -> usize {
        self.n.div_ceil(B::BITS)
    }

    fn cell_sets<'a>(&'a self, s: &Subspace, point: &[f64], smoothed: bool) -> Vec<&'a BitSet<B>> {
        s.attrs()
            .iter()
            .map(|&a| {
                let bins = &self.attributes[a];
                let i = bins.bin_index(point[a]);
                if smoothed {
                    bins.pseudo_bin(i)
                } else {
                    bins.bin(i)
                }
            })
            .collect()
    }

    /// `|N_s(point)|`: records in the bin covering `point` or any adjacent
    /// bin, in every attribute of `s`. `point` is indexed by attribute id.
    pub fn neighborhood_count(&self, s: &Subspace, point: &[f64]) -> u64 {
        intersection_count(&self.cell_sets(s, point, true))
    }

    /// As [`Self::neighborhood_count`], also returning the number of blocks read.
    pub fn neighborhood_count_with_ops(&self, s: &Subspace, point: &[f64]) -> (u64, usize) {
        intersection_count_with_ops(&self.cell_sets(s, point, true))
    }

    /// Members of the smoothed neighbourhood of `point`.
    pub fn neighborhood_set(&self, s: &Subspace, point: &[f64]) -> BitSet<B> {
        let sets = self.cell_sets(s, point, true);
        let mut acc = sets[0].clone();
        for set in &sets[1..] {
            acc.intersect_with(set);
        }
        acc
    }

    /// Records sharing the single grid cell of `point`.
    pub fn ordinary_count(&self, s: &Subspace, point: &[f64]) -> u64 {
        intersection_count(&self.cell_sets(s, point, false))
    }

    /// Base counts of every record of the indexed dataset in `s`.
    ///
    /// Records sharing a grid cell share a count, so each distinct cell is
    /// intersected once.
    pub fn counts_for_all(&self, s: &Subspace, smoothed: bool) -> Vec<u64> {
        let attrs: Vec<&AttributeBins<B>> = s.attrs().iter().map(|&a| &self.attributes[a]).collect();
        let mut memo: HashMap<Vec<u32>, u64> = HashMap::new();
        let mut key = Vec::with_capacity(attrs.len());
        let mut sets = Vec::with_capacity(attrs.len());
        (0..self.n)
            .map(|i| {
                key.clear();
                key.extend(attrs.iter().map(|b| b.assignment[i]));
                if let Some(&c) = memo.get(&key) {
                    return c;
                }
                sets.clear();
                sets.extend(attrs.iter().zip(&key).map(|(b, &bin)| {
                    if smoothed {
                        b.pseudo_bin(bin as usize)
                    } else {
                        b.bin(bin as usize)
                    }
                }));
                let c = intersection_count(&sets);
                memo.insert(key.clone(), c);
                c
            })
            .collect()
    }
}
