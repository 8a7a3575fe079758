//! Embedded matrices and existence tables.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Result, UomError};
use crate::format::{parse_blocks, parse_symbolic, Block};
use crate::matrix::Uom;

const UOMS_8X5: &str = include_str!("../data/uoms_8x5.txt");
const UOM_4X3: &str = include_str!("../data/uom_4x3.txt");
const UOM_10X4: &str = include_str!("../data/uom_10x4.txt");
const SYM_10X4: &str = include_str!("../data/uom_10x4.sym");
const SYM_14X7: &str = include_str!("../data/uom_14x7.sym");
const SYM_15X7: &str = include_str!("../data/uom_15x7.sym");
const TABLE_SMALL: &str = include_str!("../data/table_small.txt");
const TABLE_KNOWN: &str = include_str!("../data/table_known.txt");
const TABLE_OPEN: &str = include_str!("../data/table_open.txt");

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Existence {
    Exists,
    NotExists,
    Unknown,
}

impl std::fmt::Display for Existence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Existence::Exists => "exists",
            Existence::NotExists => "not-exists",
            Existence::Unknown => "unknown",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub m: usize,
    pub n: usize,
    pub status: Existence,
    pub representatives: Vec<Uom>,
    /// Which table or list the status comes from.
    pub source: String,
}

/// The 8x5 list with its `#` headers (features and origin of each matrix).
pub fn census_8x5() -> &'static [Block] {
    static BLOCKS: OnceLock<Vec<Block>> = OnceLock::new();
    BLOCKS.get_or_init(|| parse_blocks(UOMS_8X5).expect("embedded 8x5 list"))
}

/// The ten-row example as written with symbols, top-down named.
pub fn symbolic_10x4() -> Uom {
    parse_symbolic(SYM_10X4).expect("embedded 10x4 symbols")
}

/// Every embedded matrix of size `m x n`.
pub fn known_uoms(m: usize, n: usize) -> Vec<Uom> {
    match (m, n) {
        (8, 5) => census_8x5().iter().map(|b| b.matrix.clone()).collect(),
        (4, 3) => vec![Uom::parse(UOM_4X3).expect("embedded shift")],
        (10, 4) => vec![Uom::parse(UOM_10X4).expect("embedded 10x4")],
        (14, 7) => vec![parse_symbolic(SYM_14X7).expect("embedded 14x7")],
        (15, 7) => vec![parse_symbolic(SYM_15X7).expect("embedded 15x7")],
        _ => Vec::new(),
    }
}

/// Sizes with embedded matrices.
pub fn known_sizes() -> &'static [(usize, usize)] {
    &[(4, 3), (8, 5), (10, 4), (14, 7), (15, 7)]
}

/// `lo-hi`, `lo` or `lo'`.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: usize,
    hi: usize,
    primed: bool,
}

impl Span {
    fn parse(s: &str) -> Span {
        let (s, primed) = match s.strip_suffix('\'') {
            Some(t) => (t, true),
            None => (s, false),
        };
        let (lo, hi) = match s.split_once('-') {
            Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
            None => {
                let v = s.parse().unwrap();
                (v, v)
            }
        };
        Span { lo, hi, primed }
    }

    fn contains(&self, m: usize) -> bool {
        (self.lo..=self.hi).contains(&m)
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// `(rows, status for n = 3..=8)`.
fn small_table() -> &'static [(Span, [bool; 6])] {
    static T: OnceLock<Vec<(Span, [bool; 6])>> = OnceLock::new();
    T.get_or_init(|| {
        data_lines(TABLE_SMALL)
            .map(|l| {
                let mut it = l.split_whitespace();
                let span = Span::parse(it.next().unwrap());
                let mut cells = [false; 6];
                for c in &mut cells {
                    *c = it.next().unwrap() == "e";
                }
                (span, cells)
            })
            .collect()
    })
}

fn size_lists(text: &str) -> Vec<(usize, Vec<Span>)> {
    data_lines(text)
        .map(|l| {
            let (n, rest) = l.split_once(':').unwrap();
            let spans = rest.split(',').map(|s| Span::parse(s.trim())).collect();
            (n.trim().parse().unwrap(), spans)
        })
        .collect()
}

fn known_table() -> &'static [(usize, Vec<Span>)] {
    static T: OnceLock<Vec<(usize, Vec<Span>)>> = OnceLock::new();
    T.get_or_init(|| size_lists(TABLE_KNOWN))
}

fn open_table() -> &'static [(usize, Vec<Span>)] {
    static T: OnceLock<Vec<(usize, Vec<Span>)>> = OnceLock::new();
    T.get_or_init(|| size_lists(TABLE_OPEN))
}

fn lookup(m: usize, n: usize) -> (Existence, &'static str) {
    if (3..=8).contains(&n) {
        if let Some((_, cells)) = small_table().iter().find(|(s, _)| s.contains(m)) {
            let e = if cells[n - 3] {
                Existence::Exists
            } else {
                Existence::NotExists
            };
            return (e, "small-qubit table");
        }
    }
    // the known list wins where the two printed lists overlap
    let hit = |t: &'static [(usize, Vec<Span>)]| {
        t.iter()
            .find(|(k, _)| *k == n)
            .and_then(|(_, spans)| spans.iter().find(|s| s.contains(m)).copied())
    };
    if let Some(s) = hit(known_table()) {
        let e = if s.primed {
            Existence::NotExists
        } else {
            Existence::Exists
        };
        return (e, "known-size list");
    }
    if hit(open_table()).is_some() {
        return (Existence::Unknown, "open-size list");
    }
    (Existence::Unknown, "not tabulated")
}

/// Status of `m`-row UOMs on `n` qubits as tabulated. Cells outside the
/// tables are unknown.
pub fn existence(m: usize, n: usize) -> Existence {
    lookup(m, n).0
}

pub fn entry(m: usize, n: usize) -> CatalogEntry {
    let (status, source) = lookup(m, n);
    CatalogEntry {
        m,
        n,
        status,
        representatives: known_uoms(m, n),
        source: source.to_string(),
    }
}

/// Smallest number of rows of an `n`-qubit UOM.
pub fn min_size(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(UomError::Structured(format!(
            "no UOM exists on {n} qubits"
        )));
    }
    Ok(if n % 2 == 1 {
        n + 1
    } else if n == 4 || n % 4 == 2 {
        n + 2
    } else if n == 8 {
        n + 3
    } else {
        n + 4
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_size_values() {
        let want = [(3, 4), (4, 6), (5, 6), (6, 8), (7, 8), (8, 11), (9, 10), (10, 12), (12, 16)];
        for (n, f) in want {
            assert_eq!(min_size(n).unwrap(), f, "n = {n}");
        }
        assert!(min_size(2).is_err());
    }

    #[test]
    fn table_lookups() {
        assert_eq!(existence(11, 4), Existence::NotExists);
        assert_eq!(existence(4, 3), Existence::Exists);
        assert_eq!(existence(13, 9), Existence::Unknown);
        assert_eq!(existence(11, 9), Existence::NotExists);
        assert_eq!(existence(300, 9), Existence::Exists);
        assert_eq!(existence(1000, 14), Existence::Unknown);
        assert_eq!(existence(32, 12), Existence::Exists);
    }

    #[test]
    fn embedded_counts() {
        assert_eq!(known_uoms(8, 5).len(), 32);
        assert_eq!(known_uoms(14, 7).len(), 1);
        assert!(known_uoms(2, 2).is_empty());
        for &(m, n) in known_sizes() {
            for u in known_uoms(m, n) {
                assert_eq!(u.shape(), (m, n));
            }
        }
    }

    #[test]
    fn symbolic_example_names_like_integer_form() {
        let s = symbolic_10x4();
        let i = &known_uoms(10, 4)[0];
        // the printed integer form differs in one column; both name the same class
        assert_eq!(crate::canon::canonical_form(&s), crate::canon::canonical_form(i));
    }
}
