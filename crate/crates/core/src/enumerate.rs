//! Exhaustive search for all UOMs of one size, up to equivalence.
//!
//! Pipeline: every way a column can spread `m` entries over orthogonal
//! pairs, every multiset of `n` such column features whose pair capacity
//! can separate all `m(m-1)/2` row pairs, cheap necessary filters, then a
//! column-by-column assembly that tracks which row pairs are already
//! orthogonal. Complete matrices are verified and deduplicated by
//! canonical form.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::error::{Result, UomError};
use crate::extend::{is_uom, violating_sequence_masks};
use crate::feature::{feature_list, ColumnFeature, PairCount};
use crate::matrix::{partner, Label, Uom};

fn row_pairs(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// All multisets of pairs `(a, b)`, `1 <= a <= b`, with `sum(a + b) = m`.
pub fn pair_partitions(m: usize) -> Vec<ColumnFeature> {
    if m < 2 {
        return Vec::new();
    }
    let mut parts = Vec::new();
    for size in 2..=m {
        for low in 1..=size / 2 {
            parts.push(PairCount::new(low as u16, (size - low) as u16));
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut stack = Vec::new();
    partitions_rec(&parts, 0, m, &mut stack, &mut out);
    out.sort();
    out
}

fn partitions_rec(
    parts: &[PairCount],
    from: usize,
    left: usize,
    stack: &mut Vec<PairCount>,
    out: &mut Vec<ColumnFeature>,
) {
    if left == 0 {
        out.push(ColumnFeature::new(stack.clone()));
        return;
    }
    for (i, &p) in parts.iter().enumerate().skip(from) {
        if p.size() <= left {
            stack.push(p);
            partitions_rec(parts, i, left - p.size(), stack, out);
            stack.pop();
        }
    }
}

/// A proposed multiset of column features for an `m x n` matrix, sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FeatureCandidate {
    pub features: Vec<ColumnFeature>,
}

impl FeatureCandidate {
    pub fn new(mut features: Vec<ColumnFeature>) -> Self {
        features.sort();
        Self { features }
    }

    /// Row pairs the columns can separate in total, counted with repetition.
    pub fn capacity(&self) -> usize {
        self.features.iter().map(ColumnFeature::capacity).sum()
    }

    pub fn of_matrix(u: &Uom) -> Self {
        Self::new(feature_list(u).0)
    }
}

impl std::fmt::Display for FeatureCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // fewest pairs first, then largest pairs first
        let mut cols: Vec<&ColumnFeature> = self.features.iter().collect();
        cols.sort_by(|a, b| {
            let wide = |c: &ColumnFeature| c.pairs().iter().rev().copied().collect::<Vec<_>>();
            a.pairs().len().cmp(&b.pairs().len()).then_with(|| wide(b).cmp(&wide(a)))
        });
        for (i, c) in cols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Every multiset of `n` column features summing to `m` per column whose
/// capacity reaches `m(m-1)/2`, in ascending order.
pub fn feature_candidates(m: usize, n: usize) -> Vec<FeatureCandidate> {
    let mut out = Vec::new();
    for_each_candidate(m, n, |c| {
        out.push(c);
        true
    });
    out
}

/// Streams candidates; the callback returns `false` to stop.
pub fn for_each_candidate(m: usize, n: usize, mut f: impl FnMut(FeatureCandidate) -> bool) {
    if m < 2 || n == 0 {
        return;
    }
    let parts = pair_partitions(m);
    let caps: Vec<usize> = parts.iter().map(ColumnFeature::capacity).collect();
    let need = row_pairs(m);
    let mut idx = Vec::with_capacity(n);
    candidates_rec(&parts, &caps, n, need, 0, 0, &mut idx, &mut f);
}

#[allow(clippy::too_many_arguments)]
fn candidates_rec(
    parts: &[ColumnFeature],
    caps: &[usize],
    n: usize,
    need: usize,
    from: usize,
    cap: usize,
    idx: &mut Vec<usize>,
    f: &mut impl FnMut(FeatureCandidate) -> bool,
) -> bool {
    if idx.len() == n {
        if cap >= need {
            let c = FeatureCandidate::new(idx.iter().map(|&i| parts[i].clone()).collect());
            return f(c);
        }
        return true;
    }
    let slots = n - idx.len();
    let best = caps[from..].iter().copied().max().unwrap_or(0);
    if cap + slots * best < need {
        return true;
    }
    for i in from..parts.len() {
        idx.push(i);
        let go = candidates_rec(parts, caps, n, need, i, cap + caps[i], idx, f);
        idx.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Cheap necessary conditions on a candidate. Each rejects only candidates
/// no UOM can realize:
///
/// * capacity at least `m(m-1)/2`;
/// * `m >= n + 1`, since otherwise each row can be killed by its own column;
/// * no label multiplicity above `m - n`: killing that label first leaves
///   at most `n - 1` rows for `n - 1` columns;
/// * no single column separates every row pair (that needs `m <= 2`);
/// * the `x` rows sharing a label must be separated by the other columns,
///   each of which separates at most `min(capacity, floor(x^2 / 4))` of them.
pub fn preliminary_filter(c: &FeatureCandidate, m: usize, n: usize) -> bool {
    let need = row_pairs(m);
    if c.features.len() != n || c.capacity() < need || m < n + 1 {
        return false;
    }
    if c.features.iter().any(|f| f.max_multiplicity() > m - n) {
        return false;
    }
    if c.features.iter().any(|f| f.capacity() >= need) {
        return false;
    }
    for (j, f) in c.features.iter().enumerate() {
        for x in f.pairs().iter().flat_map(|p| [p.low as usize, p.high as usize]) {
            if x < 2 {
                continue;
            }
            let inner = x * x / 4;
            let reach: usize = c
                .features
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, g)| g.capacity().min(inner))
                .sum();
            if reach < row_pairs(x) {
                return false;
            }
        }
    }
    true
}

/// One concrete column: labels plus the row sets they induce.
#[derive(Clone, Debug)]
struct ColumnChoice {
    labels: Vec<Label>,
    /// `sep[r]`: rows orthogonal to row `r` in this column.
    sep: Vec<u128>,
    masks: Vec<(Label, u128)>,
}

impl ColumnChoice {
    fn new(labels: Vec<Label>) -> Self {
        let mut masks: Vec<(Label, u128)> = Vec::new();
        for (r, &v) in labels.iter().enumerate() {
            match masks.iter_mut().find(|(l, _)| *l == v) {
                Some((_, m)) => *m |= 1 << r,
                None => masks.push((v, 1 << r)),
            }
        }
        masks.sort_unstable();
        let sep = labels
            .iter()
            .map(|&v| {
                masks
                    .iter()
                    .find(|(l, _)| *l == partner(v))
                    .map_or(0, |&(_, m)| m)
            })
            .collect();
        Self { labels, sep, masks }
    }
}

/// The column that realizes `f` with pairs in descending order down the rows,
/// larger member first.
fn pinned_column(f: &ColumnFeature) -> ColumnChoice {
    let mut labels = Vec::with_capacity(f.size());
    for (k, p) in f.pairs().iter().rev().enumerate() {
        let odd = 2 * k as Label + 1;
        labels.extend(std::iter::repeat_n(odd, p.high as usize));
        labels.extend(std::iter::repeat_n(odd + 1, p.low as usize));
    }
    ColumnChoice::new(labels)
}

/// Every top-down-named column realizing `f`, in lexicographic order.
fn realizations(f: &ColumnFeature, m: usize) -> Vec<ColumnChoice> {
    let classes = f.pairs().len();
    let max_mult = f.max_multiplicity();
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(m);
    let mut counts = vec![0usize; 2 * classes + 2];
    realize_rec(f, m, classes, max_mult, &mut labels, &mut counts, 0, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn realize_rec(
    f: &ColumnFeature,
    m: usize,
    classes: usize,
    max_mult: usize,
    labels: &mut Vec<Label>,
    counts: &mut [usize],
    opened: usize,
    out: &mut Vec<ColumnChoice>,
) {
    if labels.len() == m {
        let got = ColumnFeature::new(
            (0..opened)
                .map(|k| PairCount::new(counts[2 * k + 1] as u16, counts[2 * k + 2] as u16))
                .collect(),
        );
        if got == *f {
            out.push(ColumnChoice::new(labels.clone()));
        }
        return;
    }
    // rows left must still be able to open the missing classes
    if classes - opened > m - labels.len() {
        return;
    }
    let limit = if opened < classes { opened + 1 } else { opened };
    for k in 0..limit {
        let odd = 2 * k + 1;
        let choices: &[usize] = if k == opened { &[odd] } else { &[odd, odd + 1] };
        for &v in choices {
            if counts[v] == max_mult {
                continue;
            }
            counts[v] += 1;
            labels.push(v as Label);
            realize_rec(
                f,
                m,
                classes,
                max_mult,
                labels,
                counts,
                opened.max(k + 1),
                out,
            );
            labels.pop();
            counts[v] -= 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Stop after this many assembly nodes.
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Apply [`preliminary_filter`]. Output must not depend on it.
    pub use_filter: bool,
    /// Drop partial assemblies whose every completion is extendible.
    pub prune_extendible: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            max_nodes: None,
            max_time: None,
            use_filter: true,
            prune_extendible: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Complete,
    /// A resource limit stopped the search; `classes` is a lower bound.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub candidates: u64,
    pub passed_filter: u64,
    pub nodes: u64,
    /// Complete pairwise-orthogonal matrices reached by assembly.
    pub assembled: u64,
    /// Of those, how many were unextendible.
    pub verified: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub m: usize,
    pub n: usize,
    pub status: Status,
    /// One canonical representative per class, ascending.
    pub classes: Vec<Uom>,
    pub stats: EnumerationStats,
}

impl EnumerationReport {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }
}

struct Limits {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    assembled: AtomicU64,
    aborted: AtomicBool,
    reason: Mutex<Option<String>>,
}

impl Limits {
    fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(max) = self.max_nodes {
            if n > max {
                self.abort(format!("node limit {max} reached"));
                return false;
            }
        }
        if n.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.abort("time limit reached".to_string());
                    return false;
                }
            }
        }
        true
    }

    fn abort(&self, reason: String) {
        if !self.aborted.swap(true, Ordering::Relaxed) {
            *self.reason.lock().unwrap() = Some(reason);
        }
    }
}

type RealizationCache = HashMap<ColumnFeature, Vec<ColumnChoice>>;

fn build_cache<'a>(cands: impl IntoIterator<Item = &'a FeatureCandidate>, m: usize) -> RealizationCache {
    let mut cache = RealizationCache::new();
    for c in cands {
        for f in &c.features {
            cache.entry(f.clone()).or_insert_with(|| realizations(f, m));
        }
    }
    cache
}

fn limits_for(opts: &EnumerationOptions) -> Limits {
    Limits {
        max_nodes: opts.max_nodes,
        deadline: opts.max_time.map(|d| Instant::now() + d),
        nodes: AtomicU64::new(0),
        assembled: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        reason: Mutex::new(None),
    }
}

/// Assembly plan of one candidate. Columns go widest feature first; the
/// first column is pinned, later columns of equal feature appear in
/// non-decreasing realization order.
struct Plan<'a> {
    m: usize,
    features: Vec<ColumnFeature>,
    first: ColumnChoice,
    choices: Vec<&'a [ColumnChoice]>,
    /// How many separations may repeat an already orthogonal row pair.
    slack: usize,
    prune_extendible: bool,
}

impl<'a> Plan<'a> {
    fn new(c: &FeatureCandidate, m: usize, cache: &'a RealizationCache, prune_extendible: bool) -> Option<Self> {
        if c.features.iter().any(|f| f.size() != m) {
            return None;
        }
        let slack = c.capacity().checked_sub(row_pairs(m))?;
        let mut features = c.features.clone();
        features.reverse();
        let first = pinned_column(&features[0]);
        let choices = features.iter().map(|f| cache[f].as_slice()).collect();
        Some(Plan {
            m,
            features,
            first,
            choices,
            slack,
            prune_extendible,
        })
    }

    fn n(&self) -> usize {
        self.features.len()
    }

    /// Runs the subtree whose second column is realization `second`
    /// (`None` when there is only one column).
    fn run_from(&self, second: Option<usize>, limits: &Limits, emit: &mut dyn FnMut(Uom)) {
        let mut cov = self.first.sep.clone();
        let mut cols = vec![&self.first];
        let mut picked = vec![0];
        match second {
            None => self.dfs(&mut picked, &mut cols, &mut cov, 0, limits, emit),
            Some(i) => {
                if let Some((mut cov2, overlap)) = self.try_push(&mut cols, &cov, 0, &self.choices[1][i]) {
                    picked.push(i);
                    self.dfs(&mut picked, &mut cols, &mut cov2, overlap, limits, emit);
                }
            }
        }
    }

    /// Pushes `choice` if it keeps the overlap within slack and the partial
    /// matrix can still become unextendible.
    fn try_push<'b>(
        &'b self,
        cols: &mut Vec<&'b ColumnChoice>,
        cov: &[u128],
        overlap: usize,
        choice: &'b ColumnChoice,
    ) -> Option<(Vec<u128>, usize)> {
        let extra = (0..self.m)
            .map(|r| (choice.sep[r] & cov[r]).count_ones() as usize)
            .sum::<usize>()
            / 2;
        if overlap + extra > self.slack {
            return None;
        }
        cols.push(choice);
        let k = cols.len();
        if self.prune_extendible && k < self.n() {
            let masks: Vec<&[(Label, u128)]> = cols.iter().map(|c| c.masks.as_slice()).collect();
            if violating_sequence_masks(&masks, self.m, self.n() - k).is_some() {
                cols.pop();
                return None;
            }
        }
        let next = cov.iter().zip(&choice.sep).map(|(a, b)| a | b).collect();
        Some((next, overlap + extra))
    }

    fn dfs<'b>(
        &'b self,
        picked: &mut Vec<usize>,
        cols: &mut Vec<&'b ColumnChoice>,
        cov: &mut [u128],
        overlap: usize,
        limits: &Limits,
        emit: &mut dyn FnMut(Uom),
    ) {
        if !limits.tick() {
            return;
        }
        let k = cols.len();
        if k == self.n() {
            limits.assembled.fetch_add(1, Ordering::Relaxed);
            let rows: Vec<Vec<Label>> = (0..self.m)
                .map(|r| cols.iter().map(|c| c.labels[r]).collect())
                .collect();
            emit(Uom::from_rows(&rows).expect("assembled shape"));
            return;
        }
        let start = if k >= 2 && self.features[k] == self.features[k - 1] {
            picked[k - 1]
        } else {
            0
        };
        for (i, choice) in self.choices[k].iter().enumerate().skip(start) {
            if let Some((mut cov2, overlap2)) = self.try_push(cols, cov, overlap, choice) {
                picked.push(i);
                self.dfs(picked, cols, &mut cov2, overlap2, limits, emit);
                picked.pop();
                cols.pop();
            }
            if limits.aborted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn tasks(&self) -> Vec<Option<usize>> {
        if self.n() == 1 {
            vec![None]
        } else {
            (0..self.choices[1].len()).map(Some).collect()
        }
    }
}

/// Every pairwise-orthogonal `m x n` matrix with the candidate's features
/// that survives the assembly's symmetry breaking and pruning, top-down
/// renamed. Complete matrices are not checked for unextendibility.
pub fn assemble(c: &FeatureCandidate, m: usize, n: usize, opts: &EnumerationOptions) -> Vec<Uom> {
    let mut out = Vec::new();
    if c.features.len() != n || n == 0 {
        return out;
    }
    let limits = limits_for(opts);
    let cache = build_cache([c], m);
    if let Some(plan) = Plan::new(c, m, &cache, opts.prune_extendible) {
        for t in plan.tasks() {
            plan.run_from(t, &limits, &mut |u| out.push(u.rename_canonical()));
        }
    }
    out
}

/// All UOMs of size `m x n` up to equivalence.
pub fn enumerate_uoms(m: usize, n: usize, opts: &EnumerationOptions) -> Result<EnumerationReport> {
    if m < 2 || n < 2 {
        return Err(UomError::Structured(format!(
            "enumeration needs m >= 2 and n >= 2, got {m} x {n}"
        )));
    }
    if n < 128 && (m as u128) >= (1u128 << n) {
        return Err(UomError::Structured(format!(
            "a {n}-qubit UOM has fewer than {} rows",
            1u128 << n
        )));
    }
    if m > crate::matrix::MAX_ROWS {
        return Err(UomError::TooManyRows(m));
    }
    let limits = limits_for(opts);
    let mut stats = EnumerationStats::default();
    let mut kept = Vec::new();
    for_each_candidate(m, n, |c| {
        stats.candidates += 1;
        if !opts.use_filter || preliminary_filter(&c, m, n) {
            kept.push(c);
        }
        true
    });
    stats.passed_filter = kept.len() as u64;
    let cache = build_cache(&kept, m);
    let plans: Vec<Plan<'_>> = kept
        .iter()
        .filter_map(|c| Plan::new(c, m, &cache, opts.prune_extendible))
        .collect();
    let tasks: Vec<(&Plan<'_>, Option<usize>)> = plans
        .iter()
        .flat_map(|p| p.tasks().into_iter().map(move |t| (p, t)))
        .collect();
    let verified = AtomicU64::new(0);
    let found: BTreeSet<Uom> = tasks
        .into_par_iter()
        .map(|(plan, t)| {
            let mut local = BTreeSet::new();
            plan.run_from(t, &limits, &mut |u: Uom| {
                if is_uom(&u) {
                    verified.fetch_add(1, Ordering::Relaxed);
                    local.insert(canonical_form(&u));
                }
            });
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    stats.nodes = limits.nodes.load(Ordering::Relaxed);
    stats.assembled = limits.assembled.load(Ordering::Relaxed);
    stats.verified = verified.load(Ordering::Relaxed);
    let status = match limits.reason.lock().unwrap().take() {
        Some(reason) => Status::Inconclusive { reason },
        None => Status::Complete,
    };
    Ok(EnumerationReport {
        m,
        n,
        status,
        classes: found.into_iter().collect(),
        stats,
    })
}
