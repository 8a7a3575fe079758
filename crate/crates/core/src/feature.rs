//! Column features: how the entries of one column distribute over
//! orthogonal pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, UomError};
use crate::matrix::{Label, Uom};

/// Multiplicities of the two members of one orthogonal pair, smaller first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PairCount {
    pub low: u16,
    pub high: u16,
}

impl PairCount {
    pub fn new(a: u16, b: u16) -> Self {
        Self {
            low: a.min(b),
            high: a.max(b),
        }
    }

    pub fn size(self) -> usize {
        (self.low + self.high) as usize
    }

    /// Number of row pairs this orthogonal pair separates.
    pub fn product(self) -> usize {
        self.low as usize * self.high as usize
    }
}

/// The multiset of pair multiplicities of one column, in standard form
/// (pairs sorted ascending).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ColumnFeature {
    pairs: Vec<PairCount>,
}

impl ColumnFeature {
    pub fn new(mut pairs: Vec<PairCount>) -> Self {
        pairs.sort_unstable();
        Self { pairs }
    }

    pub fn pairs(&self) -> &[PairCount] {
        &self.pairs
    }

    /// Number of entries the feature accounts for.
    pub fn size(&self) -> usize {
        self.pairs.iter().map(|p| p.size()).sum()
    }

    /// Row pairs made orthogonal by a column with this feature.
    pub fn capacity(&self) -> usize {
        self.pairs.iter().map(|p| p.product()).sum()
    }

    /// No pair has an absent member.
    pub fn is_fully_paired(&self) -> bool {
        self.pairs.iter().all(|p| p.low > 0)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.pairs.iter().map(|p| p.high as usize).max().unwrap_or(0)
    }
}

/// Feature of column `col` as met in the column: one `(mult(s), mult(s+1))`
/// per odd `s` whose class occurs, ascending in `s`. An absent member counts 0.
pub fn raw_column_feature(u: &Uom, col: usize) -> Vec<(usize, usize)> {
    let mut counts: Vec<usize> = vec![0; u.max_label() as usize + 2];
    for v in u.column(col) {
        counts[v as usize] += 1;
    }
    (1..counts.len() - 1)
        .step_by(2)
        .map(|odd| (counts[odd], counts[odd + 1]))
        .filter(|&(a, b)| a + b > 0)
        .collect()
}

pub fn column_feature(u: &Uom, col: usize) -> ColumnFeature {
    ColumnFeature::new(
        raw_column_feature(u, col)
            .into_iter()
            .map(|(a, b)| PairCount::new(a as u16, b as u16))
            .collect(),
    )
}

/// Standard column features of every column, in column order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FeatureList(pub Vec<ColumnFeature>);

impl FeatureList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ColumnFeature> {
        self.0.iter()
    }

    /// The features as a sorted multiset.
    pub fn multiset(&self) -> Vec<ColumnFeature> {
        let mut v = self.0.clone();
        v.sort();
        v
    }
}

impl std::ops::Index<usize> for FeatureList {
    type Output = ColumnFeature;

    fn index(&self, i: usize) -> &ColumnFeature {
        &self.0[i]
    }
}

pub fn feature_list(u: &Uom) -> FeatureList {
    FeatureList((0..u.cols()).map(|c| column_feature(u, c)).collect())
}

/// Multiplicity of `label` in column `col`.
pub fn multiplicity(u: &Uom, col: usize, label: Label) -> usize {
    u.multiplicity(col, label)
}

/// Written like the bracket headers `[2:2,1:1,1:1]`: larger member first,
/// pairs in descending order.
impl fmt::Display for ColumnFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.pairs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", p.high, p.low)?;
        }
        f.write_str("]")
    }
}

impl FromStr for ColumnFeature {
    type Err = UomError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || UomError::BadFeature(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let pairs = inner
            .split(',')
            .map(|p| {
                let (a, b) = p.trim().split_once(':').ok_or_else(bad)?;
                let a: u16 = a.trim().parse().map_err(|_| bad())?;
                let b: u16 = b.trim().parse().map_err(|_| bad())?;
                Ok(PairCount::new(a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        if pairs.iter().any(|p| p.high == 0) {
            return Err(bad());
        }
        Ok(ColumnFeature::new(pairs))
    }
}

impl fmt::Display for FeatureList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
