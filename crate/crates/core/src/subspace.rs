use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of attribute ids in canonical (strictly increasing) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subspace(Vec<usize>);

impl Subspace {
    /// Canonicalizes `attrs`. Fails on an empty or duplicated list.
    pub fn new(mut attrs: Vec<usize>) -> Result<Self> {
        attrs.sort_unstable();
        if attrs.is_empty() {
            return Err(Error::Config("empty subspace".into()));
        }
        if attrs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config(format!("duplicate attribute in {attrs:?}")));
        }
        Ok(Subspace(attrs))
    }

    pub fn single(attr: usize) -> Self {
        Subspace(vec![attr])
    }

    pub fn pair(a: usize, b: usize) -> Self {
        assert_ne!(a, b);
        Subspace(if a < b { vec![a, b] } else { vec![b, a] })
    }

    pub fn attrs(&self) -> &[usize] {
        &self.0
    }

    /// Number of attributes.
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, attr: usize) -> bool {
        self.0.binary_search(&attr).is_ok()
    }

    /// `self ∪ {attr}`, or `None` if `attr` is already present.
    pub fn with(&self, attr: usize) -> Option<Self> {
        let pos = self.0.binary_search(&attr).err()?;
        let mut attrs = self.0.clone();
        attrs.insert(pos, attr);
        Some(Subspace(attrs))
    }

    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        self.0.iter().all(|a| other.contains(*a))
    }

    pub fn max_attr(&self) -> usize {
        *self.0.last().expect("subspaces are non-empty")
    }

    /// Smaller subspaces first, then lexicographic attribute order.
    pub fn tie_order(&self, other: &Subspace) -> Ordering {
        self.k().cmp(&other.k()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Every subspace of `attrs` with between 1 and `max_k` attributes.
pub fn all_subspaces(attrs: &[usize], max_k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(attrs: &[usize], start: usize, max_k: usize, stack: &mut Vec<usize>, out: &mut Vec<Subspace>) {
        for i in start..attrs.len() {
            stack.push(attrs[i]);
            out.push(Subspace(stack.clone()));
            if stack.len() < max_k {
                rec(attrs, i + 1, max_k, stack, out);
            }
            stack.pop();
        }
    }
    let mut sorted = attrs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    rec(&sorted, 0, max_k, &mut stack, &mut out);
    out
}
