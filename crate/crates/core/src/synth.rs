//! Synthetic data with planted subspace outliers.
//!
//! Attributes are split into consecutive groups. Inliers of a group come from
//! two spherical Gaussian clusters whose centres sit on a lattice of
//! well-separated levels, one distinct level per centre in every dimension.
//! An outlier takes, in each of its planted groups, a lattice point that is not
//! a centre: every coordinate is common on its own, yet the combination lies
//! in an empty region of the group subspace. Attributes outside every group
//! are uniform on `[0, 1]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Standard deviation of every cluster, per coordinate.
pub const CLUSTER_SD: f64 = 0.06;

/// Gaussian clusters per attribute group.
pub const CLUSTERS_PER_GROUP: usize = 2;

/// Inliers are truncated to this many cluster standard deviations from their
/// centre; outliers sit at least this far from every centre.
pub const EMPTY_RADIUS_SDS: f64 = 3.0;

const LEVEL_LOW: f64 = 0.15;
const LEVEL_HIGH: f64 = 0.85;

/// Probability that an outlier deviates in a second group.
const SECOND_GROUP_PROB: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    /// Sizes of the correlated attribute groups, each in `[2, 5]`.
    pub group_sizes: Vec<usize>,
    pub outlier_count: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::Config("data size and dimensionality must be positive".into()));
        }
        if let Some(g) = self.group_sizes.iter().find(|g| !(2..=5).contains(*g)) {
            return Err(Error::Config(format!("group size {g} is outside [2, 5]")));
        }
        let total: usize = self.group_sizes.iter().sum();
        if total > self.d {
            return Err(Error::Config(format!(
                "groups need {total} attributes but only {} are available",
                self.d
            )));
        }
        if self.outlier_count > self.n {
            return Err(Error::Config(format!(
                "{} outliers requested from {} records",
                self.outlier_count, self.n
            )));
        }
        if self.outlier_count > 0 && self.group_sizes.is_empty() {
            return Err(Error::Config("outliers need at least one attribute group".into()));
        }
        Ok(())
    }
}

/// True outlying subspaces of each outlier record.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth(BTreeMap<usize, Vec<Subspace>>);

impl GroundTruth {
    pub fn new(entries: BTreeMap<usize, Vec<Subspace>>) -> Self {
        GroundTruth(entries)
    }

    pub fn get(&self, record: usize) -> Option<&[Subspace]> {
        self.0.get(&record).map(Vec::as_slice)
    }

    pub fn records(&self) -> Vec<usize> {
        self.0.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Subspace])> {
        self.0.iter().map(|(&r, s)| (r, s.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One line per outlier: `record_id: {a,b};{c,d}`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (record, subspaces) in &self.0 {
            let _ = write!(out, "{record}: ");
            for (i, s) in subspaces.iter().enumerate() {
                if i > 0 {
                    out.push(';');
                }
                let _ = write!(out, "{s}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: &str| Error::Truth {
                line: line_no,
                message: message.to_owned(),
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (id, rest) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let id: usize = id.trim().parse().map_err(|_| err("bad record id"))?;
            let mut subspaces = Vec::new();
            for part in rest.split(';') {
                let body = part
                    .trim()
                    .strip_prefix('{')
                    .and_then(|p| p.strip_suffix('}'))
                    .ok_or_else(|| err("subspace must be written as {a,b,...}"))?;
                let attrs = body
                    .split(',')
                    .map(|a| a.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| err("bad attribute id"))?;
                subspaces.push(Subspace::new(attrs).map_err(|e| err(&e.to_string()))?);
            }
            if entries.insert(id, subspaces).is_some() {
                return Err(err("duplicate record id"));
            }
        }
        Ok(GroundTruth(entries))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    /// Checks every record and attribute id against `ds`.
    pub fn check_against(&self, ds: &Dataset) -> Result<()> {
        for (&record, subspaces) in &self.0 {
            ds.check_record(record)?;
            if let Some(s) = subspaces.iter().find(|s| s.max_attr() >= ds.d()) {
                return Err(Error::Config(format!(
                    "ground truth subspace {s} of record {record} exceeds {} attributes",
                    ds.d()
                )));
            }
        }
        Ok(())
    }
}

/// Cluster layout of one attribute group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupLayout {
    pub attrs: Subspace,
    /// Cluster centres, one coordinate per attribute of the group.
    pub centers: Vec<Vec<f64>>,
}

impl GroupLayout {
    /// Euclidean distance from `record` of `ds` to the nearest centre.
    pub fn nearest_center_distance(&self, ds: &Dataset, record: usize) -> f64 {
        self.centers
            .iter()
            .map(|c| {
                self.attrs
                    .attrs()
                    .iter()
                    .zip(c)
                    .map(|(&a, &m)| (ds.value(record, a) - m).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub dataset: Dataset,
    pub truth: GroundTruth,
    pub groups: Vec<GroupLayout>,
}

fn levels(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| LEVEL_LOW + (LEVEL_HIGH - LEVEL_LOW) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Offset from a centre, truncated to the inlier radius.
fn truncated_offset(rng: &mut ChaCha8Rng, dims: usize, noise: &Normal<f64>) -> Vec<f64> {
    let limit = EMPTY_RADIUS_SDS * CLUSTER_SD;
    loop {
        let v: Vec<f64> = (0..dims).map(|_| noise.sample(rng)).collect();
        if v.iter().map(|x| x * x).sum::<f64>().sqrt() < limit {
            return v;
        }
    }
}

/// Generates a dataset and its ground truth; a pure function of `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, CLUSTER_SD).expect("positive standard deviation");

    // group layouts: per dimension, the centres take a permutation of the levels
    let mut groups = Vec::with_capacity(spec.group_sizes.len());
    let mut level_index: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut next_attr = 0;
    for &size in &spec.group_sizes {
        let clusters = CLUSTERS_PER_GROUP;
        let lv = levels(clusters);
        let mut per_dim = Vec::with_capacity(size);
        for _ in 0..size {
            let mut perm: Vec<usize> = (0..clusters).collect();
            perm.shuffle(&mut rng);
            per_dim.push(perm);
        }
        // centre j has level per_dim[t][j] in dimension t
        let idx: Vec<Vec<usize>> = (0..clusters)
            .map(|j| per_dim.iter().map(|p| p[j]).collect())
            .collect();
        let centers = idx
            .iter()
            .map(|li| li.iter().map(|&l| lv[l]).collect())
            .collect();
        groups.push(GroupLayout {
            attrs: Subspace::new((next_attr..next_attr + size).collect())?,
            centers,
        });
        level_index.push(idx);
        next_attr += size;
    }

    let mut outliers: Vec<usize> = index::sample(&mut rng, spec.n, spec.outlier_count).into_vec();
    outliers.sort_unstable();
    let mut planted: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &record in &outliers {
        let first = rng.random_range(0..groups.len());
        let mut chosen = vec![first];
        if groups.len() > 1 && rng.random_bool(SECOND_GROUP_PROB) {
            let mut second = rng.random_range(0..groups.len() - 1);
            if second >= first {
                second += 1;
            }
            chosen.push(second);
        }
        chosen.sort_unstable();
        planted.insert(record, chosen);
    }

    let mut columns = vec![Vec::with_capacity(spec.n); spec.d];
    let mut values = vec![0.0; spec.d];
    let no_groups = Vec::new();
    for record in 0..spec.n {
        let deviating = planted.get(&record).unwrap_or(&no_groups);
        for (g, layout) in groups.iter().enumerate() {
            let size = layout.attrs.k();
            let clusters = layout.centers.len();
            let lv = levels(clusters);
            let anchor: Vec<f64> = if deviating.contains(&g) {
                // a lattice point that is not a centre
                loop {
                    let li: Vec<usize> = (0..size).map(|_| rng.random_range(0..clusters)).collect();
                    if !level_index[g].contains(&li) {
                        break li.iter().map(|&l| lv[l]).collect();
                    }
                }
            } else {
                layout.centers[rng.random_range(0..clusters)].clone()
            };
            let offset = truncated_offset(&mut rng, size, &noise);
            for ((&a, m), o) in layout.attrs.attrs().iter().zip(anchor).zip(offset) {
                values[a] = m + o;
            }
        }
        for v in values.iter_mut().skip(next_attr) {
            *v = rng.random::<f64>();
        }
        for (column, &v) in columns.iter_mut().zip(&values) {
            column.push(v);
        }
    }

    let truth = GroundTruth(
        planted
            .into_iter()
            .map(|(record, gs)| (record, gs.into_iter().map(|g| groups[g].attrs.clone()).collect()))
            .collect(),
    );
    Ok(SyntheticData {
        dataset: Dataset::from_columns(columns)?,
        truth,
        groups,
    })
}
