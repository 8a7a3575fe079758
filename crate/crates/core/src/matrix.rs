//! The integer-matrix form of a set of multiqubit product vectors.
//!
//! Each row is one product vector, each column one qubit slot. Labels in a
//! column name qubit states; `2k - 1` and `2k` are an orthogonal pair and
//! any other two distinct labels are non-orthogonal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, UomError};

pub type Label = u16;

/// Row sets are carried as `u128` bitmasks throughout the crate.
pub const MAX_ROWS: usize = 128;
pub const MAX_COLS: usize = 64;

#[inline]
pub fn partner(v: Label) -> Label {
    if v % 2 == 1 {
        v + 1
    } else {
        v - 1
    }
}

/// True iff `{u, v} = {i, i + 1}` for some odd `i`.
#[inline]
pub fn are_orthogonal_labels(u: Label, v: Label) -> bool {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    lo % 2 == 1 && hi == lo + 1
}

/// Pair class of a label: labels `2k - 1` and `2k` share class `k`.
#[inline]
pub fn pair_class(v: Label) -> Label {
    v.div_ceil(2)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Uom {
    rows: usize,
    cols: usize,
    /// Row-major; the derived `Ord` is therefore row-major lexicographic for
    /// matrices of equal shape.
    entries: Vec<Label>,
}

impl Uom {
    pub fn new(rows: usize, cols: usize, entries: Vec<Label>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(UomError::Empty);
        }
        if rows > MAX_ROWS {
            return Err(UomError::TooManyRows(rows));
        }
        if cols > MAX_COLS {
            return Err(UomError::TooManyColumns(cols));
        }
        if entries.len() != rows * cols {
            return Err(UomError::Ragged {
                line: entries.len() / cols + 1,
                expected: cols,
                found: entries.len() % cols,
            });
        }
        if entries.contains(&0) {
            return Err(UomError::LabelOutOfRange(0));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[Label]>>(rows: &[R]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(UomError::Empty);
        };
        let cols = first.as_ref().len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(UomError::Ragged {
                    line: i + 1,
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, entries)
    }

    /// Parses the plain-text format: whitespace separated positive integers,
    /// one row per line. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<Label>> = Vec::new();
        let mut cols = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = parse_row(line, lineno + 1)?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(UomError::Ragged {
                        line: lineno + 1,
                        expected: c,
                        found: row.len(),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Label {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Label] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Label]> + '_ {
        self.entries.chunks(self.cols)
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = Label> + '_ {
        (0..self.rows).map(move |r| self.get(r, c))
    }

    pub fn entries(&self) -> &[Label] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Label>> {
        self.row_iter().map(<[Label]>::to_vec).collect()
    }

    pub fn max_label(&self) -> Label {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Bitmask of the rows whose entry in column `c` equals `label`.
    pub fn label_mask(&self, c: usize, label: Label) -> u128 {
        (0..self.rows)
            .filter(|&r| self.get(r, c) == label)
            .fold(0, |m, r| m | 1 << r)
    }

    /// Distinct labels of a column in ascending order.
    pub fn column_labels(&self, c: usize) -> Vec<Label> {
        let mut v: Vec<Label> = self.column(c).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn multiplicity(&self, c: usize, label: Label) -> usize {
        self.column(c).filter(|&v| v == label).count()
    }

    pub fn rows_orthogonal(&self, r: usize, s: usize) -> bool {
        self.row(r)
            .iter()
            .zip(self.row(s))
            .any(|(&a, &b)| are_orthogonal_labels(a, b))
    }

    /// Every pair of distinct rows is orthogonal in at least one column.
    pub fn is_pairwise_orthogonal(&self) -> bool {
        (0..self.rows).all(|r| (r + 1..self.rows).all(|s| self.rows_orthogonal(r, s)))
    }

    /// Per column, top to bottom: the first label of an unnamed pair class
    /// becomes the next unused odd number and its partner the following even.
    pub fn rename_canonical(&self) -> Uom {
        let mut out = self.clone();
        let mut names: Vec<Label> = Vec::new();
        for c in 0..self.cols {
            names.clear();
            let mut next: Label = 1;
            for r in 0..self.rows {
                let v = self.get(r, c);
                let class = pair_class(v) as usize;
                if names.len() <= class {
                    names.resize(class + 1, 0);
                }
                if names[class] == 0 {
                    // the odd name goes to whichever member is met first
                    names[class] = if v % 2 == 1 { next } else { next + 1 };
                    next += 2;
                }
                let odd_member_name = names[class];
                out.entries[r * self.cols + c] = if v % 2 == 1 {
                    odd_member_name
                } else {
                    partner(odd_member_name)
                };
            }
        }
        out
    }

    pub fn is_canonically_named(&self) -> bool {
        self.rename_canonical() == *self
    }

    /// Rows in ascending lexicographic order; labels are left untouched.
    pub fn row_wise_sort(&self) -> Uom {
        let mut rows = self.to_rows();
        rows.sort();
        Uom::from_rows(&rows).expect("same shape")
    }

    /// Row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Uom {
        debug_assert_eq!(order.len(), self.rows);
        let mut entries = Vec::with_capacity(self.entries.len());
        for &r in order {
            entries.extend_from_slice(self.row(r));
        }
        Uom {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Column `j` of the result is column `order[j]` of `self`.
    pub fn permute_cols(&self, order: &[usize]) -> Uom {
        debug_assert_eq!(order.len(), self.cols);
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..self.rows {
            entries.extend(order.iter().map(|&c| self.get(r, c)));
        }
        Uom {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: Label) {
        self.entries[r * self.cols + c] = v;
    }

    /// Applies `f(column, label)` to every entry.
    pub fn map_labels(&self, mut f: impl FnMut(usize, Label) -> Label) -> Uom {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, f(c, self.get(r, c)));
            }
        }
        out
    }

    pub fn without_row(&self, r: usize) -> Option<Uom> {
        if self.rows == 1 {
            return None;
        }
        let order: Vec<usize> = (0..self.rows).filter(|&x| x != r).collect();
        let mut entries = Vec::with_capacity((self.rows - 1) * self.cols);
        for x in order {
            entries.extend_from_slice(self.row(x));
        }
        Some(Uom {
            rows: self.rows - 1,
            cols: self.cols,
            entries,
        })
    }

    pub fn with_row(&self, row: &[Label]) -> Result<Uom> {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(row);
        Uom::new(self.rows + 1, self.cols, entries)
    }
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<Label>> {
    line.split_whitespace()
        .map(|tok| {
            let bad = || UomError::BadToken {
                line: lineno,
                token: tok.to_string(),
            };
            let v: u64 = tok.parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            Label::try_from(v).map_err(|_| UomError::LabelOutOfRange(v))
        })
        .collect()
}

impl FromStr for Uom {
    type Err = UomError;

    fn from_str(s: &str) -> Result<Self> {
        Uom::parse(s)
    }
}

impl fmt::Display for Uom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_iter() {
            let mut first = true;
            for v in row {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Uom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Uom{:?}", self.to_rows())
    }
}
