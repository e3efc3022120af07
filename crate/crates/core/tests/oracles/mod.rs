//! Brute-force reference implementations used by the integration and
//! acceptance tests. Nothing here calls the optimized paths it checks.
#![allow(dead_code)]

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgrid_core::{BinGrid, BitSet, Dataset, DensityEstimator, Subspace};

/// `|N_s(point)|` by enumerating every combination of neighbouring raw bins
/// (up to `3^k` of them), intersecting the raw bins of each combination and
/// summing the disjoint cell populations.
pub fn neighborhood_by_enumeration(grid: &BinGrid, s: &Subspace, point: &[f64]) -> u64 {
    let cells = neighbor_cells(grid, s, point);
    cells
        .iter()
        .map(|cell| cell_members(grid, s, cell).count())
        .sum()
}

/// Union of the neighbouring raw-bin cells as an explicit set.
pub fn neighborhood_union(grid: &BinGrid, s: &Subspace, point: &[f64]) -> BitSet {
    let mut union = BitSet::new(grid.n());
    for cell in neighbor_cells(grid, s, point) {
        union.union_with(&cell_members(grid, s, &cell));
    }
    union
}

/// Number of raw bins enumerated for `point`.
pub fn neighbor_bin_count(grid: &BinGrid, s: &Subspace, point: &[f64]) -> usize {
    neighbor_cells(grid, s, point).len()
}

/// Records whose raw bin differs by at most one from the point's, in every
/// attribute of `s`, found by scanning records.
pub fn neighborhood_by_scan(grid: &BinGrid, s: &Subspace, point: &[f64]) -> u64 {
    let centre: Vec<i64> = s
        .attrs()
        .iter()
        .map(|&a| grid.attribute(a).bin_index(point[a]) as i64)
        .collect();
    (0..grid.n())
        .filter(|&i| {
            s.attrs().iter().zip(&centre).all(|(&a, &c)| {
                let b = grid.attribute(a).assignment()[i] as i64;
                (b - c).abs() <= 1
            })
        })
        .count() as u64
}

pub fn ordinary_by_scan(grid: &BinGrid, s: &Subspace, point: &[f64]) -> u64 {
    (0..grid.n())
        .filter(|&i| {
            s.attrs().iter().all(|&a| {
                let bins = grid.attribute(a);
                bins.assignment()[i] as usize == bins.bin_index(point[a])
            })
        })
        .count() as u64
}

fn neighbor_cells(grid: &BinGrid, s: &Subspace, point: &[f64]) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = vec![Vec::new()];
    for &a in s.attrs() {
        let bins = grid.attribute(a);
        let i = bins.bin_index(point[a]) as i64;
        let mut next = Vec::new();
        for cell in &cells {
            for off in -1i64..=1 {
                let j = i + off;
                if j >= 0 && (j as usize) < bins.bin_count() {
                    let mut c = cell.clone();
                    c.push(j as usize);
                    next.push(c);
                }
            }
        }
        cells = next;
    }
    cells
}

fn cell_members(grid: &BinGrid, s: &Subspace, cell: &[usize]) -> BitSet {
    let mut acc = BitSet::full(grid.n());
    for (&a, &b) in s.attrs().iter().zip(cell) {
        acc.intersect_with(grid.attribute(a).bin(b));
    }
    acc
}

/// Product-kernel density by a double loop over records and attributes,
/// with an explicit 1-D Gaussian factor per attribute.
pub fn kde_double_loop(ds: &Dataset, hs: &[f64], s: &Subspace, q: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..ds.n() {
        let mut prod = 1.0;
        for &a in s.attrs() {
            let u = (q[a] - ds.value(i, a)) / hs[a];
            prod *= (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        }
        total += prod;
    }
    let mut norm = ds.n() as f64;
    for &a in s.attrs() {
        norm *= hs[a];
    }
    total / norm
}

/// Mean and population standard deviation: corrected two-pass algorithm,
/// exact zero spread for identical values.
pub fn two_pass(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.windows(2).all(|w| w[0] == w[1]) {
        return (values[0], 0.0);
    }
    let mut mean = 0.0;
    for v in values {
        mean += v;
    }
    mean /= n;
    let mut residual = 0.0;
    for v in values {
        residual += v - mean;
    }
    mean += residual / n;
    let mut ss = 0.0;
    for v in values {
        ss += (v - mean).powi(2);
    }
    (mean, (ss / n).sqrt())
}

/// Every subspace of `attrs` of size `1..=max_k`, by bitmask enumeration.
pub fn every_subspace(attrs: &[usize], max_k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << attrs.len()) {
        if mask.count_ones() as usize > max_k {
            continue;
        }
        let chosen: Vec<usize> = (0..attrs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| attrs[i])
            .collect();
        out.push(Subspace::new(chosen).unwrap());
    }
    out
}

/// Z-score of `q` in every subspace up to `max_k`, ranked ascending with the
/// miner's tie order, truncated to `top_k`.
pub fn exhaustive_top_k(
    est: &dyn DensityEstimator,
    q: &[f64],
    max_k: usize,
    top_k: usize,
) -> Vec<(Subspace, f64)> {
    let mut all: Vec<(Subspace, f64)> = every_subspace(&est.attributes(), max_k)
        .into_iter()
        .map(|s| {
            let scores = est.score_all(&s).unwrap();
            let (mean, sd) = two_pass(&scores);
            let base = est.score(&s, q).unwrap();
            let z = if sd > 0.0 { (base - mean) / sd } else { 0.0 };
            (s, z)
        })
        .collect();
    all.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| a.0.k().cmp(&b.0.k()))
            .then_with(|| a.0.attrs().cmp(b.0.attrs()))
            .then(Ordering::Equal)
    });
    all.truncate(top_k);
    all
}

/// A random dataset mixing clustered, uniform, discrete and constant columns.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
    let columns = (0..d)
        .map(|_| match rng.random_range(0..6) {
            0 => (0..n).map(|_| rng.random::<f64>() * 10.0).collect(),
            1 => (0..n).map(|_| rng.random_range(0..4) as f64).collect(),
            2 => {
                let centre: f64 = rng.random_range(-5.0..5.0);
                (0..n)
                    .map(|_| centre + (rng.random::<f64>() - 0.5) * if rng.random_bool(0.9) { 1.0 } else { 20.0 })
                    .collect()
            }
            3 if rng.random_bool(0.3) => vec![rng.random::<f64>(); n],
            _ => (0..n)
                .map(|_| (rng.random::<f64>() * 3.0).exp())
                .collect(),
        })
        .collect();
    Dataset::from_columns(columns).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Record counts per raw-bin cell of one subspace, tallied from the per-record
/// bin assignments.
pub struct CellCounts {
    counts: std::collections::HashMap<Vec<usize>, u64>,
}

impl CellCounts {
    pub fn new(grid: &BinGrid, s: &Subspace) -> Self {
        let mut counts = std::collections::HashMap::new();
        for i in 0..grid.n() {
            let cell: Vec<usize> = s
                .attrs()
                .iter()
                .map(|&a| grid.attribute(a).assignment()[i] as usize)
                .collect();
            *counts.entry(cell).or_insert(0) += 1;
        }
        CellCounts { counts }
    }

    /// Sum of the populations of every neighbouring cell of `point`.
    pub fn neighborhood(&self, grid: &BinGrid, s: &Subspace, point: &[f64]) -> u64 {
        neighbor_cells(grid, s, point)
            .iter()
            .map(|c| self.counts.get(c).copied().unwrap_or(0))
            .sum()
    }
}
