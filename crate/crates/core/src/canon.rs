//! Canonical form under row permutation, column permutation and per-column
//! pair-preserving relabeling.
//!
//! The form is the row-major minimum over all row and column orders of the
//! top-down renamed matrix. For a fixed row order the best column order is
//! the lexicographic sort of the renamed columns, so only row orders are
//! searched: rows are placed one at a time and only placements that keep
//! the column-sorted prefix minimal survive.

use std::collections::HashSet;

use crate::matrix::{pair_class, partner, Label, Uom};

#[derive(Clone)]
struct Partial {
    order: Vec<usize>,
    /// Per column: name of the odd member of each original pair class (0 = unnamed).
    names: Vec<Vec<Label>>,
    next: Vec<Label>,
    remaining: u128,
    /// Dense rank of each column's named prefix among all columns.
    group: Vec<u32>,
}

impl Partial {
    fn root(u: &Uom) -> Self {
        let classes = pair_class(u.max_label()) as usize + 1;
        Partial {
            order: Vec::with_capacity(u.rows()),
            names: vec![vec![0; classes]; u.cols()],
            next: vec![1; u.cols()],
            remaining: if u.rows() == 128 {
                u128::MAX
            } else {
                (1u128 << u.rows()) - 1
            },
            group: vec![0; u.cols()],
        }
    }

    fn name_of(&self, col: usize, v: Label) -> Option<Label> {
        let odd = self.names[col][pair_class(v) as usize];
        (odd != 0).then(|| if v % 2 == 1 { odd } else { partner(odd) })
    }

    /// Renamed entries row `r` would receive if placed next.
    fn preview(&self, u: &Uom, r: usize) -> Vec<Label> {
        (0..u.cols())
            .map(|c| self.name_of(c, u.get(r, c)).unwrap_or(self.next[c]))
            .collect()
    }

    fn place(&self, u: &Uom, r: usize, named: &[Label]) -> Partial {
        let mut p = self.clone();
        for c in 0..u.cols() {
            let v = u.get(r, c);
            let class = pair_class(v) as usize;
            if p.names[c][class] == 0 {
                p.names[c][class] = if v % 2 == 1 { p.next[c] } else { p.next[c] + 1 };
                p.next[c] += 2;
            }
        }
        p.order.push(r);
        p.remaining &= !(1u128 << r);
        p.group = refine(&self.group, named);
        p
    }

    fn key(&self, u: &Uom) -> (Vec<usize>, u128, Vec<Label>) {
        // future depends on the remaining rows and how they are already named
        let mut named = Vec::new();
        for r in rows_of(self.remaining) {
            for c in 0..u.cols() {
                named.push(self.name_of(c, u.get(r, c)).unwrap_or(0));
            }
        }
        let mut prefix: Vec<usize> = self.group.iter().map(|&g| g as usize).collect();
        prefix.push(self.order.len());
        (prefix, self.remaining, named)
    }
}

pub(crate) fn rows_of(mask: u128) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let r = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(r)
        }
    })
}

/// Sort key of a new row relative to the current column grouping.
fn row_key(group: &[u32], named: &[Label]) -> Vec<(u32, Label)> {
    let mut k: Vec<(u32, Label)> = group.iter().copied().zip(named.iter().copied()).collect();
    k.sort_unstable();
    k
}

fn refine(group: &[u32], named: &[Label]) -> Vec<u32> {
    let mut keys: Vec<(u32, Label)> = group.iter().copied().zip(named.iter().copied()).collect();
    let mut distinct = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    keys.iter_mut()
        .map(|k| distinct.binary_search(k).expect("present") as u32)
        .collect()
}

/// Row order achieving the canonical form (one of possibly several).
pub fn canonical_row_order(u: &Uom) -> Vec<usize> {
    let mut frontier = vec![Partial::root(u)];
    for _ in 0..u.rows() {
        let mut best: Option<Vec<(u32, Label)>> = None;
        let mut next: Vec<Partial> = Vec::new();
        let mut seen = HashSet::new();
        for state in &frontier {
            for r in rows_of(state.remaining) {
                let named = state.preview(u, r);
                let key = row_key(&state.group, &named);
                match best.as_ref().map(|b| key.cmp(b)) {
                    Some(std::cmp::Ordering::Greater) => continue,
                    Some(std::cmp::Ordering::Less) | None => {
                        best = Some(key);
                        next.clear();
                        seen.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let child = state.place(u, r, &named);
                if seen.insert(child.key(u)) {
                    next.push(child);
                }
            }
        }
        frontier = next;
    }
    frontier.swap_remove(0).order
}

/// Lexicographically least matrix equivalent to `u`.
pub fn canonical_form(u: &Uom) -> Uom {
    let order = canonical_row_order(u);
    sort_columns(&u.permute_rows(&order).rename_canonical())
}

/// Columns in ascending lexicographic order of their top-to-bottom vectors.
pub fn sort_columns(u: &Uom) -> Uom {
    let mut cols: Vec<(Vec<Label>, usize)> = (0..u.cols())
        .map(|c| (u.column(c).collect(), c))
        .collect();
    cols.sort();
    let order: Vec<usize> = cols.into_iter().map(|(_, c)| c).collect();
    u.permute_cols(&order)
}
