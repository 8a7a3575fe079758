#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use uom_core::{Label, Uom};

pub const SHIFT: &str = "1 1 1\n2 3 3\n3 2 4\n4 4 2\n";

/// The ten-row four-qubit example, top-down named.
pub const TEN_BY_FOUR: &str = "1 1 1 1\n1 1 1 2\n1 1 2 5\n1 1 2 6\n2 1 3 1\n\
                               3 2 2 3\n1 2 4 4\n4 2 3 1\n2 3 1 2\n2 4 4 4\n";

/// Its rows after row-wise sorting.
pub const TEN_BY_FOUR_SORTED: &str = "1 1 1 1\n1 1 1 2\n1 1 2 5\n1 1 2 6\n1 2 4 4\n\
                                      2 1 3 1\n2 3 1 2\n2 4 4 4\n3 2 2 3\n4 2 3 1\n";

/// Group headers of the 8x5 list, widest feature first.
pub const HEADERS_8X5: [&str; 13] = [
    "[2:2,2:2] [2:2,2:2] [1:1,1:1,1:1,1:1] [1:1,1:1,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,2:2] [2:2,2:2] [2:2,2:2] [1:1,1:1,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,2:2] [2:2,2:2] [2:2,1:1,1:1] [1:1,1:1,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,2:2] [2:2,2:2] [2:2,1:1,1:1] [2:2,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[3:1,3:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[3:1,3:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:2,1:1,1:1]",
    "[2:2,2:2] [2:1,2:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1]",
    "[2:2,2:2] [2:2,1:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,2:2] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1]",
    "[2:2,2:2] [2:2,1:1,1:1] [2:2,1:1,1:1] [1:1,1:1,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,2:2] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [1:1,1:1,1:1,1:1]",
    "[3:2,2:1] [2:2,1:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1] [1:1,1:1,1:1,1:1]",
    "[2:2,1:1,1:1] [2:2,1:1,1:1] [2:2,1:1,1:1] [2:1,2:1,1:1] [2:1,2:1,1:1]",
];

pub fn shift() -> Uom {
    Uom::parse(SHIFT).unwrap()
}

pub fn ten_by_four() -> Uom {
    Uom::parse(TEN_BY_FOUR).unwrap()
}

fn orth(a: Label, b: Label) -> bool {
    a.min(b) % 2 == 1 && a.max(b) == a.min(b) + 1
}

/// Tries every per-column choice (nothing, or one label present in the
/// column) and reports whether some choice meets every row.
pub fn naive_extendible(u: &Uom) -> bool {
    let (m, n) = u.shape();
    let cols: Vec<Vec<Label>> = (0..n)
        .map(|j| {
            let mut v: Vec<Label> = u.column(j).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut pick = vec![0usize; n];
    loop {
        let hit = (0..m).all(|r| {
            (0..n).any(|j| pick[j] > 0 && cols[j][pick[j] - 1] == u.get(r, j))
        });
        if hit {
            return true;
        }
        let mut j = 0;
        loop {
            if j == n {
                return false;
            }
            pick[j] += 1;
            if pick[j] <= cols[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

pub fn naive_orthogonal(u: &Uom) -> bool {
    let (m, n) = u.shape();
    (0..m).all(|r| (r + 1..m).all(|s| (0..n).any(|j| orth(u.get(r, j), u.get(s, j)))))
}

/// Top-down naming written out directly.
pub fn naive_rename(rows: &[Vec<Label>]) -> Vec<Vec<Label>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = rows.to_vec();
    for j in 0..n {
        let mut map = std::collections::HashMap::new();
        let mut next = 1;
        for r in 0..rows.len() {
            let v = rows[r][j];
            if !map.contains_key(&v) {
                let p = if v % 2 == 1 { v + 1 } else { v - 1 };
                map.insert(v, next);
                map.insert(p, next + 1);
                next += 2;
            }
            out[r][j] = map[&v];
        }
    }
    out
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum over every row and column order of the renamed matrix.
pub fn brute_canonical(u: &Uom) -> Vec<Vec<Label>> {
    let rows = u.to_rows();
    let rp = permutations(u.rows());
    let cp = permutations(u.cols());
    let mut best: Option<Vec<Vec<Label>>> = None;
    for p in &rp {
        for q in &cp {
            let m: Vec<Vec<Label>> = p.iter().map(|&r| q.iter().map(|&c| rows[r][c]).collect()).collect();
            let m = naive_rename(&m);
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        }
    }
    best.unwrap()
}

/// All `m x n` UOM classes, found by adding top-down named rows one at a
/// time, each orthogonal to those before, and deduplicating by brute-force
/// canonical form.
pub fn naive_census(m: usize, n: usize) -> BTreeSet<Vec<Vec<Label>>> {
    let mut out = BTreeSet::new();
    let mut rows: Vec<Vec<Label>> = vec![vec![1; n]];
    naive_rec(m, n, &mut rows, &mut out);
    out
}

fn naive_rec(m: usize, n: usize, rows: &mut Vec<Vec<Label>>, out: &mut BTreeSet<Vec<Vec<Label>>>) {
    if rows.len() == m {
        let u = Uom::from_rows(rows).unwrap();
        if !naive_extendible(&u) && (m as u64) < (1u64 << n) {
            out.insert(brute_canonical(&u));
        }
        return;
    }
    // labels allowed per column: any already used, or the next fresh odd one
    let opts: Vec<Vec<Label>> = (0..n)
        .map(|j| {
            let top = rows.iter().map(|r| r[j]).max().unwrap();
            let classes = top.div_ceil(2);
            (1..=2 * classes + 1).collect()
        })
        .collect();
    let mut cur = vec![0; n];
    row_rec(0, &opts, &mut cur, m, n, rows, out);
}

fn row_rec(
    j: usize,
    opts: &[Vec<Label>],
    cur: &mut Vec<Label>,
    m: usize,
    n: usize,
    rows: &mut Vec<Vec<Label>>,
    out: &mut BTreeSet<Vec<Vec<Label>>>,
) {
    if j == n {
        if rows.iter().all(|r| (0..n).any(|c| orth(r[c], cur[c]))) {
            rows.push(cur.clone());
            naive_rec(m, n, rows, out);
            rows.pop();
        }
        return;
    }
    for &v in &opts[j] {
        cur[j] = v;
        row_rec(j + 1, opts, cur, m, n, rows, out);
    }
}

/// A random pairwise-orthogonal matrix. Rows are split recursively: each
/// split puts a fresh pair into a column still free for the whole group,
/// one member on each side. Entries no split touched get a random label
/// among `1..=2 * classes` or those already in the column.
pub fn random_orthogonal<R: Rng>(rng: &mut R, m: usize, n: usize, classes: Label) -> Uom {
    assert!(m <= 1 << n, "{m} orthogonal rows do not fit in {n} columns");
    let mut grid: Vec<Vec<Label>> = vec![vec![0; n]; m];
    let mut next: Vec<Label> = vec![2 * classes + 1; n];
    let rows: Vec<usize> = (0..m).collect();
    split(rng, &mut grid, &mut next, rows, (0..n).collect());
    for j in 0..n {
        let used: Vec<Label> = (0..m).map(|r| grid[r][j]).filter(|&v| v > 0).collect();
        for row in grid.iter_mut() {
            if row[j] == 0 {
                row[j] = if !used.is_empty() && rng.gen_bool(0.5) {
                    *used.choose(rng).unwrap()
                } else {
                    rng.gen_range(1..=2 * classes)
                };
            }
        }
    }
    Uom::from_rows(&grid).unwrap().rename_canonical()
}

fn split<R: Rng>(rng: &mut R, grid: &mut [Vec<Label>], next: &mut [Label], mut rows: Vec<usize>, free: Vec<usize>) {
    let g = rows.len();
    if g < 2 {
        return;
    }
    let f = free.len();
    let cap = 1usize << (f - 1);
    let lo = g.saturating_sub(cap).max(1);
    let hi = (g - 1).min(cap);
    let a = rng.gen_range(lo..=hi);
    rows.shuffle(rng);
    let col = free[rng.gen_range(0..f)];
    let odd = next[col];
    next[col] += 2;
    let right = rows.split_off(a);
    for &r in &rows {
        grid[r][col] = odd;
    }
    for &r in &right {
        grid[r][col] = odd + 1;
    }
    let rest: Vec<usize> = free.into_iter().filter(|&c| c != col).collect();
    split(rng, grid, next, rows, rest.clone());
    split(rng, grid, next, right, rest);
}

/// A random row permutation, column permutation and per-column relabeling
/// that maps pairs to pairs.
pub fn random_transform<R: Rng>(rng: &mut R, u: &Uom) -> Uom {
    let mut ro: Vec<usize> = (0..u.rows()).collect();
    ro.shuffle(rng);
    let mut co: Vec<usize> = (0..u.cols()).collect();
    co.shuffle(rng);
    let classes = (u.max_label() as usize).div_ceil(2);
    let maps: Vec<(Vec<Label>, Vec<bool>)> = (0..u.cols())
        .map(|_| {
            let mut perm: Vec<Label> = (0..classes as Label).collect();
            perm.shuffle(rng);
            let flip = (0..classes).map(|_| rng.gen()).collect();
            (perm, flip)
        })
        .collect();
    u.permute_rows(&ro).permute_cols(&co).map_labels(|c, v| {
        let (perm, flip) = &maps[c];
        let class = ((v - 1) / 2) as usize;
        let odd = 2 * perm[class] + 1;
        if (v % 2 == 1) != flip[class] {
            odd
        } else {
            odd + 1
        }
    })
}
