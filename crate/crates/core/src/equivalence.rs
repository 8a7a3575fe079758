//! Equivalence of UOMs under row permutation, column permutation and
//! per-column relabeling that preserves orthogonal pairs.
//!
//! The fast path aligns the columns of `b` onto `a` by their standard
//! features, then builds for each input a list of fully ordered, renamed
//! matrices. Rows are placed one position at a time: the first position
//! takes a row whose column-0 label has least multiplicity, each later
//! position takes a row with the most entries from pair classes not yet
//! named. Every pair class first met at position `k` is named `2k + 1`
//! (partner `2k + 2`). All ties are branched. Two inputs are equivalent
//! iff the two lists share a matrix. [`crate::canon::canonical_form`] is
//! the independent oracle.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, rows_of};
use crate::error::{Result, UomError};
use crate::feature::{feature_list, FeatureList};
use crate::matrix::{pair_class, partner, Label, Uom};

/// Default bound on the number of partial placements explored per input.
pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;

/// `perm[j]` is the column of `b` placed at position `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ColumnAlignment(pub Vec<usize>);

/// Fully renamed matrices reachable from one input.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CandidateSet {
    pub members: BTreeSet<Uom>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &Uom) -> bool {
        self.members.contains(u)
    }

    /// Least common member, if any.
    pub fn first_common(&self, other: &CandidateSet) -> Option<Uom> {
        self.members.intersection(&other.members).next().cloned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapExceeded;

pub fn feature_multisets_equal(a: &Uom, b: &Uom) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(UomError::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    Ok(feature_list(a).multiset() == feature_list(b).multiset())
}

/// Every column permutation of `b` whose feature list equals that of `a`.
pub fn column_alignments(a: &Uom, b: &Uom) -> Vec<ColumnAlignment> {
    if a.shape() != b.shape() {
        return Vec::new();
    }
    let fa = feature_list(a);
    let fb = feature_list(b);
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(a.cols());
    let mut used = vec![false; b.cols()];
    align_rec(&fa, &fb, &mut perm, &mut used, &mut out);
    out
}

fn align_rec(
    fa: &FeatureList,
    fb: &FeatureList,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<ColumnAlignment>,
) {
    let j = perm.len();
    if j == fa.len() {
        out.push(ColumnAlignment(perm.clone()));
        return;
    }
    for k in 0..fb.len() {
        if !used[k] && fb[k] == fa[j] {
            used[k] = true;
            perm.push(k);
            align_rec(fa, fb, perm, used, out);
            perm.pop();
            used[k] = false;
        }
    }
}

/// Rows whose column-0 label has the least multiplicity in column 0.
pub fn anchor_rows_min_multiplicity(u: &Uom) -> Vec<usize> {
    let mults: Vec<usize> = (0..u.rows()).map(|r| u.multiplicity(0, u.get(r, 0))).collect();
    let least = mults.iter().copied().min().unwrap_or(0);
    (0..u.rows()).filter(|&r| mults[r] == least).collect()
}

/// Rows with the most entries `>= t`.
pub fn anchor_rows_threshold(u: &Uom, t: Label) -> Vec<usize> {
    let counts: Vec<usize> = u
        .row_iter()
        .map(|row| row.iter().filter(|&&v| v >= t).count())
        .collect();
    let most = counts.iter().copied().max().unwrap_or(0);
    (0..u.rows()).filter(|&r| counts[r] == most).collect()
}

#[derive(Clone)]
struct Placement {
    order: Vec<usize>,
    /// Per column: positional name of the odd member of each class (0 = unnamed).
    names: Vec<Vec<Label>>,
    remaining: u128,
}

impl Placement {
    fn name_of(&self, col: usize, v: Label) -> Option<Label> {
        let odd = self.names[col][pair_class(v) as usize];
        (odd != 0).then(|| if v % 2 == 1 { odd } else { partner(odd) })
    }

    fn unnamed_count(&self, u: &Uom, r: usize) -> usize {
        (0..u.cols())
            .filter(|&c| self.name_of(c, u.get(r, c)).is_none())
            .count()
    }

    fn place(&self, u: &Uom, r: usize) -> Placement {
        let mut p = self.clone();
        let s = 2 * self.order.len() as Label + 1;
        for c in 0..u.cols() {
            let v = u.get(r, c);
            let class = pair_class(v) as usize;
            if p.names[c][class] == 0 {
                p.names[c][class] = if v % 2 == 1 { s } else { s + 1 };
            }
        }
        p.order.push(r);
        p.remaining &= !(1u128 << r);
        p
    }

    fn named_row(&self, u: &Uom, r: usize) -> Vec<Label> {
        (0..u.cols())
            .map(|c| self.name_of(c, u.get(r, c)).expect("named"))
            .collect()
    }

    fn key(&self, u: &Uom) -> (Vec<Vec<Label>>, u128, Vec<Label>) {
        let prefix = self.order.iter().map(|&r| self.named_row(u, r)).collect();
        let mut rest = Vec::new();
        for r in rows_of(self.remaining) {
            rest.extend((0..u.cols()).map(|c| self.name_of(c, u.get(r, c)).unwrap_or(0)));
        }
        (prefix, self.remaining, rest)
    }

    /// Remaining rows hold only named classes: their labels are fixed, so
    /// sorting them completes the matrix without further branching.
    fn finish(&self, u: &Uom) -> Uom {
        let mut rows: Vec<Vec<Label>> = self.order.iter().map(|&r| self.named_row(u, r)).collect();
        let mut tail: Vec<Vec<Label>> = rows_of(self.remaining).map(|r| self.named_row(u, r)).collect();
        tail.sort();
        rows.extend(tail);
        Uom::from_rows(&rows).expect("same shape").rename_canonical()
    }
}

/// Candidate list of a column-aligned matrix. Fails once more than `cap`
/// partial placements have been explored.
pub fn candidate_set(u: &Uom, cap: usize) -> std::result::Result<CandidateSet, CapExceeded> {
    let classes = pair_class(u.max_label()) as usize + 1;
    let root = Placement {
        order: Vec::new(),
        names: vec![vec![0; classes]; u.cols()],
        remaining: if u.rows() == 128 {
            u128::MAX
        } else {
            (1u128 << u.rows()) - 1
        },
    };
    let mut frontier: Vec<Placement> = anchor_rows_min_multiplicity(u)
        .into_iter()
        .map(|r| root.place(u, r))
        .collect();
    let mut out = CandidateSet::default();
    let mut explored = frontier.len();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for p in &frontier {
            let counts: Vec<(usize, usize)> = rows_of(p.remaining)
                .map(|r| (r, p.unnamed_count(u, r)))
                .collect();
            let most = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
            if most == 0 {
                out.members.insert(p.finish(u));
                continue;
            }
            for &(r, c) in &counts {
                if c == most {
                    let child = p.place(u, r);
                    if seen.insert(child.key(u)) {
                        next.push(child);
                        explored += 1;
                        if explored > cap {
                            return Err(CapExceeded);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// How an equivalence verdict was reached.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Route {
    ShapeMismatch,
    FeatureFilter,
    CandidateLists,
    CanonicalForm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub equivalent: bool,
    /// A matrix both inputs reach by row/column permutation and renaming.
    pub witness: Option<Uom>,
    pub route: Route,
}

#[derive(Clone, Copy, Debug)]
pub struct EquivalenceOptions {
    pub candidate_cap: usize,
    /// Skip the candidate lists and compare canonical forms directly.
    pub force_oracle: bool,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        Self {
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            force_oracle: false,
        }
    }
}

pub fn are_equivalent(a: &Uom, b: &Uom) -> Verdict {
    are_equivalent_with(a, b, EquivalenceOptions::default())
}

pub fn are_equivalent_with(a: &Uom, b: &Uom, opts: EquivalenceOptions) -> Verdict {
    let not = |route| Verdict {
        equivalent: false,
        witness: None,
        route,
    };
    if a.shape() != b.shape() {
        return not(Route::ShapeMismatch);
    }
    if opts.force_oracle {
        return by_canonical_form(a, b);
    }
    if !feature_multisets_equal(a, b).expect("same shape") {
        return not(Route::FeatureFilter);
    }
    let Ok(ca) = candidate_set(a, opts.candidate_cap) else {
        return by_canonical_form(a, b);
    };
    for sigma in column_alignments(a, b) {
        let Ok(cb) = candidate_set(&b.permute_cols(&sigma.0), opts.candidate_cap) else {
            return by_canonical_form(a, b);
        };
        if let Some(w) = ca.first_common(&cb) {
            return Verdict {
                equivalent: true,
                witness: Some(w),
                route: Route::CandidateLists,
            };
        }
    }
    not(Route::CandidateLists)
}

fn by_canonical_form(a: &Uom, b: &Uom) -> Verdict {
    let ca = canonical_form(a);
    let equivalent = ca == canonical_form(b);
    Verdict {
        equivalent,
        witness: equivalent.then_some(ca),
        route: Route::CanonicalForm,
    }
}
