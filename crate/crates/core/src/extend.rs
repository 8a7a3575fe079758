//! Unextendibility.
//!
//! A product vector orthogonal to every row picks, per column, at most one
//! label whose complement it carries; it is orthogonal to exactly the rows
//! holding that label. The set is unextendible iff no such choice covers
//! every row. [`find_extension`] searches for the choice directly and
//! [`check_sequences`] decides the same question through the kill-sequence
//! inequality `w_1 + ... + w_i <= m - n + i - 1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::matrix::{Label, Uom};

#[inline]
pub(crate) fn full_mask(rows: usize) -> u128 {
    if rows == 128 {
        u128::MAX
    } else {
        (1u128 << rows) - 1
    }
}

/// Distinct labels of each column with the rows that carry them.
fn label_masks(u: &Uom) -> Vec<Vec<(Label, u128)>> {
    (0..u.cols())
        .map(|c| {
            u.column_labels(c)
                .into_iter()
                .map(|l| (l, u.label_mask(c, l)))
                .collect()
        })
        .collect()
}

/// A product vector orthogonal to every row: `choices[j] = Some(v)` means
/// its j-th qubit is the complement of label `v`, `None` a fresh state.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExtensionWitness {
    pub choices: Vec<Option<Label>>,
    pub covered_rows: u128,
}

impl ExtensionWitness {
    /// Recomputes coverage against `u`.
    pub fn covers_all(&self, u: &Uom) -> bool {
        let covered = (0..u.rows()).all(|r| {
            self.choices
                .iter()
                .enumerate()
                .any(|(j, v)| *v == Some(u.get(r, j)))
        });
        covered && self.covered_rows == full_mask(u.rows())
    }
}

/// Searches for a product vector orthogonal to all rows.
pub fn find_extension(u: &Uom) -> Option<ExtensionWitness> {
    let masks = label_masks(u);
    let mut choices = vec![None; u.cols()];
    let mut failed = HashSet::new();
    let all = full_mask(u.rows());
    if extend_dfs(&masks, 0, 0, all, &mut choices, &mut failed) {
        Some(ExtensionWitness {
            choices,
            covered_rows: all,
        })
    } else {
        None
    }
}

fn extend_dfs(
    masks: &[Vec<(Label, u128)>],
    col: usize,
    covered: u128,
    all: u128,
    choices: &mut [Option<Label>],
    failed: &mut HashSet<(usize, u128)>,
) -> bool {
    if covered == all {
        return true;
    }
    if col == masks.len() || failed.contains(&(col, covered)) {
        return false;
    }
    let open = all & !covered;
    let reach: u32 = masks[col..]
        .iter()
        .map(|m| m.iter().map(|&(_, k)| (k & open).count_ones()).max().unwrap_or(0))
        .sum();
    if reach >= open.count_ones() {
        for &(label, mask) in &masks[col] {
            if mask & open == 0 {
                continue;
            }
            choices[col] = Some(label);
            if extend_dfs(masks, col + 1, covered | mask, all, choices, failed) {
                return true;
            }
        }
        choices[col] = None;
        if extend_dfs(masks, col + 1, covered, all, choices, failed) {
            return true;
        }
    }
    failed.insert((col, covered));
    false
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Pick {
    /// Column index in the original matrix.
    pub column: usize,
    pub label: Label,
    /// Rows still alive that carry `label` in `column`.
    pub w: usize,
}

/// Picks of the delete process, in order, with running sums.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct KillSequence {
    pub picks: Vec<Pick>,
}

impl KillSequence {
    pub fn prefix_sums(&self) -> Vec<usize> {
        self.picks
            .iter()
            .scan(0, |acc, p| {
                *acc += p.w;
                Some(*acc)
            })
            .collect()
    }

    /// First 1-based index `i` where the prefix sum exceeds `m - n + i - 1`.
    pub fn first_violation(&self, m: usize, n: usize) -> Option<usize> {
        self.prefix_sums()
            .into_iter()
            .enumerate()
            .map(|(k, s)| (k + 1, s))
            .find(|&(i, s)| s + n + 1 > m + i)
            .map(|(i, _)| i)
    }
}

/// True iff every kill sequence satisfies the prefix inequality.
pub fn check_sequences(u: &Uom) -> bool {
    violating_sequence(u, 0).is_none()
}

/// A kill sequence breaking the inequality, if one exists.
pub fn find_violating_sequence(u: &Uom) -> Option<KillSequence> {
    violating_sequence(u, 0)
}

/// Same process on a matrix that will receive `spare` further columns.
/// Returns a sequence showing the completed matrix cannot be unextendible
/// whatever those columns hold.
pub(crate) fn violating_sequence(u: &Uom, spare: usize) -> Option<KillSequence> {
    let masks = label_masks(u);
    let views: Vec<&[(Label, u128)]> = masks.iter().map(Vec::as_slice).collect();
    violating_sequence_masks(&views, u.rows(), spare)
}

/// Kill-sequence search over per-column `(label, rows)` lists.
pub(crate) fn violating_sequence_masks(
    masks: &[&[(Label, u128)]],
    rows: usize,
    spare: usize,
) -> Option<KillSequence> {
    let mut seq = KillSequence::default();
    let mut safe = HashSet::new();
    let mut search = SequenceSearch {
        masks,
        spare,
        seq: &mut seq,
        safe: &mut safe,
    };
    search.dfs(0, full_mask(rows)).then_some(seq)
}

struct SequenceSearch<'a> {
    masks: &'a [&'a [(Label, u128)]],
    spare: usize,
    seq: &'a mut KillSequence,
    safe: &'a mut HashSet<(usize, u128)>,
}

impl SequenceSearch<'_> {
    /// `alive` rows survive after the picks in columns `..col`. Returns true
    /// once a violation has been recorded in `seq`.
    fn dfs(&mut self, col: usize, alive: u128) -> bool {
        let cols_left = self.masks.len() - col + self.spare;
        // violated at the last pick: alive rows can each be killed by a distinct remaining column
        if col > 0 && (alive.count_ones() as usize) <= cols_left {
            return true;
        }
        if col == self.masks.len() || self.safe.contains(&(col, alive)) {
            return false;
        }
        if !self.can_reach(col, alive) {
            self.safe.insert((col, alive));
            return false;
        }
        for &(label, mask) in self.masks[col] {
            let hit = mask & alive;
            if hit == 0 {
                continue;
            }
            self.seq.picks.push(Pick {
                column: col,
                label,
                w: hit.count_ones() as usize,
            });
            if self.dfs(col + 1, alive & !hit) {
                return true;
            }
            self.seq.picks.pop();
        }
        self.safe.insert((col, alive));
        false
    }

    /// Best case: each later column kills its largest surviving block.
    fn can_reach(&self, col: usize, alive: u128) -> bool {
        let mut best: Vec<u32> = self.masks[col..]
            .iter()
            .map(|m| m.iter().map(|&(_, k)| (k & alive).count_ones()).max().unwrap_or(0))
            .collect();
        best.sort_unstable_by(|a, b| b.cmp(a));
        let mut rows = alive.count_ones() as usize;
        let mut cols_left = self.masks.len() - col + self.spare;
        for b in best {
            rows = rows.saturating_sub(b as usize);
            cols_left -= 1;
            if rows <= cols_left {
                return true;
            }
        }
        false
    }
}

/// `m < 2^n`, rows pairwise orthogonal, and no product vector extends them.
pub fn is_uom(u: &Uom) -> bool {
    let (m, n) = u.shape();
    let below_full = n >= 64 || (m as u128) < (1u128 << n);
    below_full && u.is_pairwise_orthogonal() && check_sequences(u)
}

/// True when every completion of `u` by `spare` more columns is
/// extendible.
pub fn doomed_with_spare(u: &Uom, spare: usize) -> bool {
    violating_sequence(u, spare).is_some()
}
